import numpy as np
import pytest

from homfour.errors import ConfigError, EquivarianceError
from homfour.gf import field_make
from homfour.gspace import (
    GSpace,
    TorusAction,
    build_A1,
    build_Gm,
    build_PV,
    build_V,
    build_V_dual,
    build_point,
    emap,
    incidence,
    map_diag,
    map_linear,
    map_mu,
    map_pr,
    map_rho,
    map_sigma,
    pairing,
    product,
    projective_points,
    transpose_matrix,
)

CELLS = ((2, 1, 1), (3, 1, 2), (2, 2, 2), (5, 1, 2), (3, 2, 2), (2, 1, 3))


def _proj_count(q, r):
    return (q**r - 1) // (q - 1)


@pytest.mark.parametrize("p,n,r", CELLS)
def test_homothety_orbit_decomposition(p, n, r):
    ctx = field_make(p, n)
    q = ctx.q
    orbits = build_V(ctx, r).orbits()
    assert orbits.num_classes == 1 + _proj_count(q, r)
    assert orbits.rep_point(0) == (0,) * r
    assert orbits.sizes[0] == 1 and orbits.stabs[0] == q - 1
    assert all(orbits.sizes[1:] == q - 1) and all(orbits.stabs[1:] == 1)
    assert int(orbits.sizes.sum()) == q**r


@pytest.mark.parametrize("p,n,r", CELLS)
def test_orbit_reps_are_normalized_projective_points(p, n, r):
    ctx = field_make(p, n)
    orbits = build_V(ctx, r).orbits()
    nonzero_reps = [orbits.rep_point(i) for i in range(1, orbits.num_classes)]
    assert nonzero_reps == projective_points(ctx, r)
    for pt in nonzero_reps:
        lead = next(c for c in pt if c)
        assert lead == 1


def test_scheme_and_torus_counts():
    ctx = field_make(3, 1)
    v = build_V(ctx, 2)
    assert v.group_order == 2
    assert v.group_elements == ((1,), (2,))
    sch = v.scheme()
    assert sch.orbits().num_classes == 9
    assert all(sch.orbits().sizes == 1)
    gm = build_Gm(ctx)
    assert gm.orbits().num_classes == 1
    assert gm.orbits().stabs[0] == 1
    bgm = build_point(ctx, torus_rank=1)
    assert bgm.orbits().num_classes == 1
    assert bgm.orbits().stabs[0] == 2


def test_point_codec_round_trip():
    ctx = field_make(3, 2)
    v = build_V(ctx, 2)
    for pt in [(0, 0), (1, 8), (4, 3)]:
        assert v.decode(v.encode(pt)) == pt
    assert v.position(v.encode((0, 1))) == 1
    with pytest.raises(KeyError):
        build_Gm(ctx).position(0)


def test_enc_order_is_lex_order():
    ctx = field_make(5, 1)
    v = build_V(ctx, 2)
    pts = list(v.points())
    assert pts == sorted(pts)


def test_closure_validation_rejects_open_subsets():
    ctx = field_make(5, 1)
    # {0, 1} is not closed under scaling by 2
    with pytest.raises(ValueError, match="not closed"):
        GSpace(ctx, 1, TorusAction(((1,),), 1), np.array([0, 1]), "broken")
    with pytest.raises(ValueError, match="duplicate"):
        GSpace(ctx, 1, TorusAction(((1,),), 1), np.array([0, 0]), "dup")


def test_product_space_layout():
    ctx = field_make(3, 1)
    w = build_V_dual(ctx, 2)
    v = build_V(ctx, 2)
    prod = product(w, v)
    assert prod.size == 81
    assert prod.k == 2
    assert prod.m == 4
    # first factor occupies the most significant coordinates
    pt = prod.decode(int(prod.enc[9 * 4 + 7]))
    assert pt == w.decode(4) + v.decode(7)
    orbits = prod.orbits()
    assert orbits.num_classes == 25  # (1 + 4)^2


def test_projective_space_and_incidence_regularity():
    ctx = field_make(3, 1)
    assert len(projective_points(ctx, 3)) == 13
    pv = build_PV(ctx, 3)
    assert pv.orbits().num_classes == 13
    inc = incidence(ctx, 3)
    per_w = {}
    for wi, vi in inc:
        per_w[wi] = per_w.get(wi, 0) + 1
    # each hyperplane section of P^2(F_3) is a line with 4 points
    assert set(per_w.values()) == {4}
    assert len(per_w) == 13


def test_pairing_is_bilinear_and_nondegenerate():
    ctx = field_make(2, 2)
    for w in [(1, 2), (3, 0)]:
        for u in [(2, 2), (0, 1)]:
            for v in [(1, 1), (3, 2)]:
                s = tuple(ctx.add(a, b) for a, b in zip(u, v))
                assert pairing(ctx, w, s) == ctx.add(pairing(ctx, w, u), pairing(ctx, w, v))
    for w in projective_points(ctx, 2):
        assert any(pairing(ctx, w, v) for v in projective_points(ctx, 2))
    with pytest.raises(ValueError):
        pairing(ctx, (1,), (1, 2))


def test_equivariance_violation_carries_a_witness():
    ctx = field_make(5, 1)
    v1 = build_V(ctx, 1)
    try:
        emap(v1, v1, lambda x: (ctx.mul(x[0], x[0]),), ((1,),), "square")
    except EquivarianceError as err:
        x, g = err.point, err.group_elem
        fx = ctx.mul(x[0], x[0])
        fgx = ctx.mul(ctx.mul(g[0], x[0]), ctx.mul(g[0], x[0]))
        assert fgx != ctx.mul(g[0], fx)
    else:
        pytest.fail("non-equivariant map was accepted")


def test_emap_rejects_image_outside_target():
    ctx = field_make(3, 1)
    gm = build_Gm(ctx)
    with pytest.raises(ValueError, match="not in"):
        emap(gm.scheme(), gm, lambda x: (0,), (), "bad")


def test_quotient_and_projection_maps():
    ctx = field_make(3, 1)
    r = 2
    rho = map_rho(ctx, r)
    assert rho.source.k == 0 and rho.target.k == 1
    orbits = rho.target.orbits()
    cls = rho.class_image(rho.source.orbits(), orbits)
    # scheme points of one orbit all land in that orbit's class
    assert cls[0] == 0
    assert orbits.class_of_point((2, 0)) == orbits.class_of_point((1, 0))

    prod = product(build_V_dual(ctx, r), build_V(ctx, r))
    pr_w = map_pr(prod, r, "w")
    pr_v = map_pr(prod, r, "v")
    mu = map_mu(prod, r)
    for idx in range(0, prod.size, 7):
        pt = prod.decode(int(prod.enc[idx]))
        assert pr_w.target.decode(int(pr_w.img_enc[idx])) == pt[:r]
        assert pr_v.target.decode(int(pr_v.img_enc[idx])) == pt[r:]
        assert mu.target.decode(int(mu.img_enc[idx])) == (pairing(ctx, pt[:r], pt[r:]),)


def test_sigma_and_diag():
    ctx = field_make(3, 1)
    sig = map_sigma(ctx)
    for idx in range(sig.source.size):
        x, y = sig.source.decode(int(sig.source.enc[idx]))
        assert sig.img_enc[idx] == ctx.add(x, ctx.neg(y))
    dg = map_diag(ctx, 2)
    assert dg.source.size == 9 and dg.target.size == 81
    cls = dg.cls_img
    assert len(set(int(c) for c in cls)) == dg.source.orbits().num_classes


def test_linear_map_and_transpose_adjunction():
    ctx = field_make(3, 1)
    mat = ((1, 2), (0, 1))
    f = map_linear(ctx, mat, name="f")
    tf = map_linear(ctx, transpose_matrix(mat), dual=True, name="tf")
    # <w, f(v)> = <tf(w), v> for all pairs
    for w in [(0, 1), (1, 2), (2, 2)]:
        for v in [(1, 0), (2, 1), (1, 1)]:
            fv = f.target.decode(int(f.img_enc[f.source.position(f.source.encode(v))]))
            tfw = tf.target.decode(int(tf.img_enc[tf.source.position(tf.source.encode(w))]))
            assert pairing(ctx, w, fv) == pairing(ctx, tfw, v)


def test_size_bound_is_enforced(monkeypatch):
    ctx = field_make(3, 2)
    with pytest.raises(ConfigError, match="exceeds"):
        build_V(ctx, 4)
    monkeypatch.setenv("HOMFOUR_SIZE_BOUND", "10000")
    assert build_V(ctx, 4).size == 6561
    monkeypatch.setenv("HOMFOUR_SIZE_BOUND", "not-a-number")
    with pytest.raises(ConfigError, match="integer"):
        build_V(ctx, 2)
