"""Exception hierarchy.

Two families map onto the CLI exit codes:
- ConfigError (exit 2): bad experiment configuration or mismatched artifacts
- NumericError (exit 3): a numerical routine could not produce a valid result
"""


class SurrogateError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class ConfigError(SurrogateError, ValueError):
    """Invalid experiment configuration."""

    exit_code = 2


class HashMismatch(ConfigError):
    """Artifacts were produced from a different configuration."""


class NumericError(SurrogateError, ArithmeticError):
    """A numerical operation failed."""

    exit_code = 3


class NonPositiveJacobian(NumericError):
    """Deformation gradient with det(F) <= 0."""


class SingularC(NumericError):
    """Right Cauchy-Green tensor is (numerically) singular."""


class NotCoaxial(NumericError):
    """Stress is not diagonal in the eigenbasis of C."""


class KindMismatch(NumericError):
    """Coefficient vector and generator basis belong to different material kinds."""


class DimensionMismatch(NumericError):
    """Array shapes do not match the mapping kind."""


class DegenerateCloud(NumericError):
    """Point cloud is coplanar, no 3-D hull exists."""


class Unphysical(NumericError):
    """Invariant triple does not correspond to a real deformation."""


class InitializationFailure(NumericError):
    """Rejection sampling could not place the initial annealing points."""


class NoConvergence(NumericError):
    """Iterative solver exhausted its budget."""


class IllConditioned(NumericError):
    """Correlation matrix could not be factorized even at the largest nugget."""


class DuplicateInputs(NumericError):
    """Training inputs closer than the allowed minimum distance."""
