"""Exact function-level engine for the homogeneous Fourier transform on
[V/Gm] over finite fields, with a verification suite for the identities
that descend to trace functions."""

from homfour.cyclotomic import (
    CycRat,
    cyc_add,
    cyc_div_int,
    cyc_from_int,
    cyc_from_json,
    cyc_mul,
    cyc_neg,
    cyc_scale_q_pow,
    cyc_to_complex,
    cyc_to_json,
    zeta_pow,
)
from homfour.errors import ConfigError, EquivarianceError, HomfourError
from homfour.gf import FieldCtx, FieldElem, elements, fe_add, fe_inv, fe_mul, field_make, psi_q, trace_to_prime
from homfour.gspace import (
    EquivariantMap,
    GSpace,
    OrbitSet,
    TorusAction,
    build_A1,
    build_Gm,
    build_PV,
    build_V,
    build_V_dual,
    build_point,
    emap,
    incidence,
    orbit_set,
    pairing,
    product,
    projective_points,
)
from homfour.tracefn import (
    TraceFunction,
    builtin_Lpsi,
    builtin_Psi,
    builtin_Psi_prime,
    constant,
    delta,
    dump_function,
    function_from_json,
    function_to_json,
    load_function,
    pullback,
    pushforward_shriek,
    shift,
    tate_twist,
    tensor,
)
from homfour.transforms import (
    SIGN_MODES,
    HomSpace,
    four_deligne,
    four_hom,
    four_hom_bgm_definitional,
    four_hom_definitional,
    four_hom_definitional_dual,
    four_hom_dual,
    radon,
    radon_double,
    rho_pullback,
    rho_pullback_dual,
)
from homfour.verify import CHECKS, CheckResult, GridSpec, Report, run_suite

__version__ = "0.1.0"
