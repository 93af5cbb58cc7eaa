"""Independent numerical checks of the closed-form solution."""

from .discretized import DiscretizedReservoir, solve_discretized
from .volterra import OracleError, solve_volterra
from .wigner import DeformedFockSpace, TruncationTooSmallError, WignerReport, check_wigner_algebra

__all__ = [
    "OracleError",
    "solve_volterra",
    "DiscretizedReservoir",
    "solve_discretized",
    "DeformedFockSpace",
    "TruncationTooSmallError",
    "WignerReport",
    "check_wigner_algebra",
]
