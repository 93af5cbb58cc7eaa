"""Closed-form single-excitation dynamics of the charger (A) and battery (B).

All the time dependence is carried by the survival amplitude ``p(t)``: the
subradiant combination ``r2 c1 - r1 c2`` is frozen and the superradiant
combination ``r1 c1 + r2 c2`` is multiplied by ``p(t)``.

Two-qubit states use the ordered basis ``{|ee>, |eg>, |ge>, |gg>}`` with the
charger as the first factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import partial_trace_first
from .model import DerivedConstants, SystemParams, derive_constants

__all__ = [
    "UnnormalizedStateError",
    "GridError",
    "AmplitudePair",
    "CHARGER_FULL",
    "TimeGrid",
    "Trajectory",
    "survival_amplitude",
    "amplitudes_at",
    "steady_state_amplitudes",
    "steady_state_horizon",
    "density_matrix",
    "reduce_to_battery",
    "evolve",
]

INIT_NORM_TOL = 1e-10
TAYLOR_SWITCH = 1e-6


class UnnormalizedStateError(ValueError):
    pass


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class AmplitudePair:
    """Excitation amplitudes of charger (``c1``) and battery (``c2``) at time ``t``.

    ``c1``/``c2`` may be arrays when the pair describes a whole time series.
    """

    c1: complex
    c2: complex
    t: float = 0.0

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "AmplitudePair":
        """``c1 = cos(theta/2)``, ``c2 = exp(i phi) sin(theta/2)``."""
        return cls(complex(np.cos(theta / 2)), complex(np.exp(1j * phi) * np.sin(theta / 2)))

    @property
    def population(self):
        return np.abs(self.c1) ** 2 + np.abs(self.c2) ** 2

    def check_normalized(self, tol: float = INIT_NORM_TOL) -> "AmplitudePair":
        if abs(self.population - 1.0) > tol:
            raise UnnormalizedStateError(
                f"|c1|^2 + |c2|^2 = {self.population:.15g}, expected 1"
            )
        return self


# Default start: charger full, battery empty.
CHARGER_FULL = AmplitudePair(1.0 + 0j, 0.0 + 0j)


@dataclass(frozen=True)
class TimeGrid:
    t_end: float
    n_points: int
    t_start: float = 0.0

    def __post_init__(self):
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise GridError(f"n_points must be an integer >= 2, got {self.n_points}")
        if not np.isfinite(self.t_end) or not self.t_end > self.t_start:
            raise GridError(
                f"degenerate grid: t_end={self.t_end} must exceed t_start={self.t_start}"
            )
        if self.t_start < 0:
            raise GridError("t_start must be >= 0")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, int(self.n_points))

    @property
    def step(self) -> float:
        return (self.t_end - self.t_start) / (self.n_points - 1)

    def refined(self, factor: int = 2) -> "TimeGrid":
        """Grid containing every point of this one plus ``factor - 1`` points per step."""
        return TimeGrid(self.t_end, factor * (self.n_points - 1) + 1, self.t_start)


@dataclass
class Trajectory:
    """Amplitudes sampled on a uniform time grid.

    ``source`` records which solver produced the data: ``"closed-form"``,
    ``"volterra"`` or ``"discretized"``. Solver-specific series (for example
    the total norm of a discretized run) live in ``extra``.
    """

    params: SystemParams
    grid: TimeGrid
    c1: np.ndarray
    c2: np.ndarray
    source: str = "closed-form"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.c1 = np.asarray(self.c1, dtype=complex)
        self.c2 = np.asarray(self.c2, dtype=complex)
        n = self.grid.n_points
        if self.c1.shape != (n,) or self.c2.shape != (n,):
            raise GridError("amplitude series must have one entry per grid point")

    def __len__(self):
        return self.grid.n_points

    @property
    def times(self) -> np.ndarray:
        return self.grid.times

    @property
    def init(self) -> AmplitudePair:
        return AmplitudePair(complex(self.c1[0]), complex(self.c2[0]), float(self.times[0]))

    @property
    def amplitudes(self) -> list[AmplitudePair]:
        return [AmplitudePair(complex(a), complex(b), float(t))
                for a, b, t in zip(self.c1, self.c2, self.times)]

    @property
    def pop_charger(self) -> np.ndarray:
        return np.abs(self.c1) ** 2

    @property
    def pop_battery(self) -> np.ndarray:
        return np.abs(self.c2) ** 2

    def density_matrices(self) -> np.ndarray:
        """Stack of two-qubit states, shape ``(n_points, 4, 4)``."""
        return density_matrix(AmplitudePair(self.c1, self.c2))


def survival_amplitude(consts: DerivedConstants, t):
    """``p(t) = exp(-lambda' t/2) [cosh(beta t/2) + (lambda'/beta) sinh(beta t/2)]``.

    Evaluated without overflow for long times and through its Taylor limit
    when ``|beta t|`` is tiny. Even in ``beta``, so the branch of the square
    root does not matter.
    """
    t = np.asarray(t, dtype=float)
    lam = consts.lambda_prime
    beta = consts.beta
    x = 0.5 * beta * t
    ax = np.abs(x)
    out = np.empty(t.shape, dtype=complex)

    small = ax < 0.5 * TAYLOR_SWITCH
    mid = (~small) & (ax < 1.0)
    big = ax >= 1.0

    if np.any(small):
        xs = x[small]
        ts = t[small]
        x2 = xs * xs
        out[small] = np.exp(-0.5 * lam * ts) * (
            1.0 + 0.5 * x2 + 0.5 * lam * ts * (1.0 + x2 / 6.0)
        )
    if np.any(mid):
        xm = x[mid]
        tm = t[mid]
        out[mid] = np.exp(-0.5 * lam * tm) * (
            np.cosh(xm) + 0.5 * lam * tm * np.sinh(xm) / xm
        )
    if np.any(big):
        tb = t[big]
        ratio = lam / beta
        out[big] = 0.5 * (1.0 + ratio) * np.exp(0.5 * (beta - lam) * tb) + 0.5 * (
            1.0 - ratio
        ) * np.exp(-0.5 * (beta + lam) * tb)
    return out if out.ndim else complex(out)


def _propagate(params: SystemParams, c1_0: complex, c2_0: complex, p):
    r1, r2 = params.r1, params.r2
    sub = r2 * c1_0 - r1 * c2_0
    sup = r1 * c1_0 + r2 * c2_0
    return r2 * sub + r1 * sup * p, -r1 * sub + r2 * sup * p


def amplitudes_at(params: SystemParams, init: AmplitudePair, t) -> AmplitudePair:
    """Charger and battery amplitudes at time(s) ``t`` from a normalised start."""
    init.check_normalized()
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("t must be >= 0")
    p = survival_amplitude(derive_constants(params), t_arr)
    c1, c2 = _propagate(params, complex(init.c1), complex(init.c2), p)
    # p(0) = 1 exactly, but the two-mode recombination rounds; pin t = 0 to the input
    c1 = np.where(t_arr == 0, complex(init.c1), c1)
    c2 = np.where(t_arr == 0, complex(init.c2), c2)
    if t_arr.ndim == 0:
        return AmplitudePair(complex(c1), complex(c2), float(t_arr))
    return AmplitudePair(c1, c2, t_arr)


def steady_state_amplitudes(params: SystemParams, init: AmplitudePair) -> AmplitudePair:
    """Long-time amplitudes; only the subradiant part of the initial state survives.

    Without reservoir coupling (``R = 0``) nothing decays and the initial
    amplitudes are returned.
    """
    init.check_normalized()
    if params.calR == 0.0:
        return AmplitudePair(complex(init.c1), complex(init.c2), np.inf)
    c1, c2 = _propagate(params, complex(init.c1), complex(init.c2), 0.0)
    return AmplitudePair(complex(c1), complex(c2), np.inf)


def steady_state_horizon(consts: DerivedConstants, n_decay: float = 50.0) -> float:
    """Time after which ``|p(t)|`` has dropped below ``exp(-n_decay / 2)``."""
    if abs(consts.beta.imag) <= 1e-12 * max(abs(consts.beta), 1.0) and consts.beta.real > 0:
        rate = (consts.lambda_prime - consts.beta).real
    else:
        rate = consts.lambda_prime.real
    if rate <= 0:
        return np.inf
    return n_decay / rate


def density_matrix(amps: AmplitudePair) -> np.ndarray:
    """Two-qubit X state built from the single-excitation amplitudes."""
    c1 = np.asarray(amps.c1, dtype=complex)
    c2 = np.asarray(amps.c2, dtype=complex)
    rho = np.zeros(c1.shape + (4, 4), dtype=complex)
    p1 = np.abs(c1) ** 2
    p2 = np.abs(c2) ** 2
    rho[..., 1, 1] = p1
    rho[..., 2, 2] = p2
    rho[..., 1, 2] = c1 * np.conj(c2)
    rho[..., 2, 1] = np.conj(c1) * c2
    rho[..., 3, 3] = 1.0 - p1 - p2
    return rho


def reduce_to_battery(state) -> np.ndarray:
    """Battery state ``tr_A rho_AB`` in the ``{|e>, |g>}`` basis."""
    state = np.asarray(state)
    if state.ndim == 3:
        return np.stack([partial_trace_first(s) for s in state])
    return partial_trace_first(state)


def evolve(params: SystemParams, init: AmplitudePair, grid: TimeGrid) -> Trajectory:
    amps = amplitudes_at(params, init, grid.times)
    return Trajectory(params, grid, amps.c1, amps.c2, source="closed-form")
