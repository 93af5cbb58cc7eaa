"""Stored energy, ergotropy and efficiency of the battery qubit."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import Trajectory
from .linalg import InvalidStateError, check_density_matrix

__all__ = [
    "QubitHamiltonian",
    "EnergeticsReport",
    "stored_energy",
    "ergotropy_general",
    "ergotropy_qubit_diagonal",
    "efficiency",
    "energetics_along",
]

EFFICIENCY_FLOOR = 1e-9


@dataclass(frozen=True)
class QubitHamiltonian:
    """``H_B = (omega0 / 2) sigma_z`` in the ``{|e>, |g>}`` basis."""

    omega0: float

    def __post_init__(self):
        if not self.omega0 > 0:
            raise ValueError(f"omega0 must be positive, got {self.omega0}")

    @property
    def matrix(self) -> np.ndarray:
        return np.diag([0.5 * self.omega0, -0.5 * self.omega0]).astype(complex)

    @property
    def levels(self) -> np.ndarray:
        """Ascending eigenvalues ``(eps_g, eps_e)``."""
        return np.array([-0.5 * self.omega0, 0.5 * self.omega0])


def _as_matrix(h) -> np.ndarray:
    return h.matrix if isinstance(h, QubitHamiltonian) else np.asarray(h, dtype=complex)


def stored_energy(rho_b_t, rho_b_0, h: QubitHamiltonian) -> float:
    """Energy ``Tr[rho(t) H] - Tr[rho(0) H]`` deposited in the battery."""
    H = _as_matrix(h)
    rho_t = check_density_matrix(rho_b_t)
    rho_0 = check_density_matrix(rho_b_0)
    return float(np.real(np.trace(rho_t @ H) - np.trace(rho_0 @ H)))


def ergotropy_general(rho, h) -> float:
    """Maximal work extractable from ``rho`` by a cyclic unitary.

    Uses the spectral form: with energies ``eps_i`` ascending and state
    eigenvalues ``r_j`` descending,
    ``W = sum_ij r_j eps_i (|<r_j|eps_i>|**2 - delta_ij)``.
    Degenerate eigenvalues are ordered by index (``numpy.linalg.eigh``), which
    leaves the sum unchanged.
    """
    H = _as_matrix(h)
    rho = check_density_matrix(rho)
    if H.shape != rho.shape:
        raise ValueError(f"dimension mismatch: state {rho.shape} vs Hamiltonian {H.shape}")
    if np.max(np.abs(H - H.conj().T)) > 1e-12:
        raise ValueError("Hamiltonian is not Hermitian")
    eps, E = np.linalg.eigh(H)
    r, V = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    r, V = r[::-1], V[:, ::-1]
    overlap = np.abs(E.conj().T @ V) ** 2  # [i, j] = |<eps_i|r_j>|^2
    w = float(np.sum(eps[:, None] * r[None, :] * (overlap - np.eye(len(eps)))))
    # exactly passive states: suppress rounding below zero
    return max(w, 0.0) if w > -1e-12 else w


def ergotropy_qubit_diagonal(p_e: float, omega0: float) -> float:
    """Ergotropy of ``diag(p_e, 1 - p_e)``: ``omega0 * max(0, 2 p_e - 1)``."""
    if not 0.0 <= p_e <= 1.0:
        raise ValueError(f"excited population must lie in [0, 1], got {p_e}")
    return omega0 * max(0.0, 2.0 * p_e - 1.0)


def efficiency(ergotropy: float, stored: float, floor: float = EFFICIENCY_FLOOR) -> float:
    """``ergotropy / stored``; NaN marks the undefined case ``stored <= floor``.

    ``floor`` is absolute; pass ``1e-9 * omega0`` for energies in physical units.
    """
    if not stored > floor:
        return float("nan")
    return ergotropy / stored


@dataclass
class EnergeticsReport:
    """Per-time-point figures of merit. ``efficiency`` holds NaN where undefined."""

    times: np.ndarray
    stored_energy: np.ndarray
    ergotropy: np.ndarray
    efficiency: np.ndarray
    omega0: float

    @property
    def ergotropy_normalized(self) -> np.ndarray:
        # the qubit maximum omega0 is taken as the normalising work
        return self.ergotropy / self.omega0


def energetics_along(trajectory: Trajectory, h: QubitHamiltonian) -> EnergeticsReport:
    """Energetics along a trajectory, relative to its first point.

    The battery state of the single-excitation family is diagonal, so the
    qubit fast path is used; each point is also checked for validity.
    """
    pe = np.abs(trajectory.c2) ** 2
    pop = pe + np.abs(trajectory.c1) ** 2
    if np.any(pop > 1.0 + 1e-10) or not np.all(np.isfinite(pop)):
        raise InvalidStateError("trajectory leaves the physical single-excitation sector")
    pe = np.clip(pe, 0.0, 1.0)
    w0 = h.omega0
    stored = w0 * (pe - pe[0])
    ergo = np.array([ergotropy_qubit_diagonal(float(x), w0) for x in pe])
    floor = EFFICIENCY_FLOOR * w0
    eff = np.array([efficiency(float(a), float(b), floor) for a, b in zip(ergo, stored)])
    return EnergeticsReport(trajectory.times, stored, ergo, eff, w0)
