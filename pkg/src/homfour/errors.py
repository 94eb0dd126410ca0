"""Shared exception types with a stable meaning for CLI exit codes."""


class HomfourError(Exception):
    """Base class for package errors."""


class ConfigError(HomfourError):
    """Invalid parameters, bounds, or file contents (CLI exit code 2)."""


class EquivarianceError(HomfourError):
    """A candidate map fails equivariance; carries a witness (point, group element)."""

    def __init__(self, message: str, point=None, group_elem=None):
        super().__init__(message)
        self.point = point
        self.group_elem = group_elem
