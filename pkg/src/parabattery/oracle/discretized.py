"""Finite set of reservoir modes sampled from the Lorentzian.

Restricted to one excitation, the deformed modes behave as two-level
systems with frequency ``(2 nu + 1) omega_k`` and coupling
``sqrt(2 nu + 1) r_i g_k``; the amplitudes then obey a linear ODE of size
``N + 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..dynamics import AmplitudePair, TimeGrid, Trajectory
from ..model import SystemParams, spectral_density
from .volterra import ATOL, RTOL, integrate

MIN_MODES = 500
MIN_CUTOFF = 10.0


@dataclass(frozen=True)
class DiscretizedReservoir:
    """Uniform midpoint sampling of ``J`` on ``[omega_c - K lambda, omega_c + K lambda]``.

    ``omega_c = omega0 - Delta`` is the Lorentzian centre and
    ``g_k**2 = J(omega_k) * d_omega``.
    """

    omega: np.ndarray
    couplings: np.ndarray
    d_omega: float
    cutoff: float
    params: SystemParams

    @classmethod
    def build(cls, params: SystemParams, n_modes: int = 4000, cutoff: float = 20.0):
        if n_modes < MIN_MODES:
            raise ValueError(f"need at least {MIN_MODES} modes, got {n_modes}")
        if cutoff < MIN_CUTOFF:
            raise ValueError(f"cutoff must be >= {MIN_CUTOFF}, got {cutoff}")
        centre = params.omega0 - params.delta
        half = cutoff * params.lambda_width
        edges = np.linspace(centre - half, centre + half, n_modes + 1)
        omega = 0.5 * (edges[1:] + edges[:-1])
        d_omega = float(edges[1] - edges[0])
        g = np.sqrt(spectral_density(params, omega) * d_omega)
        return cls(omega, g, d_omega, float(cutoff), params)

    @property
    def n_modes(self) -> int:
        return self.omega.size

    @property
    def coverage(self) -> float:
        """Fraction of the Lorentzian weight inside the sampled window."""
        return 2.0 / math.pi * math.atan(self.cutoff)

    @property
    def detunings(self) -> np.ndarray:
        """Rotating-frame phases ``-omega0 + (2 nu + 1) omega_k``."""
        p = self.params
        return -p.omega0 + p.deformation_factor * self.omega

    def kernel(self, tau):
        """Discrete memory kernel ``sum_k g_k**2 exp(-i phase_k tau)``."""
        tau = np.atleast_1d(np.asarray(tau, dtype=float))
        return np.exp(-1j * np.outer(tau, self.detunings)) @ self.couplings**2


def solve_discretized(
    params: SystemParams,
    init: AmplitudePair,
    reservoir: DiscretizedReservoir,
    grid: TimeGrid,
    frame: str = "interaction",
    rtol: float = RTOL,
    atol: float = ATOL,
) -> Trajectory:
    """Integrate charger, battery and all mode amplitudes.

    ``frame="interaction"`` uses the time-dependent phases of the standard
    interaction picture; ``frame="static"`` absorbs them into the mode
    amplitudes, giving a constant Hermitian generator. Both give identical
    populations. The total norm per grid point is returned in
    ``extra["norm"]``.
    """
    init.check_normalized()
    a = params.deformation_factor
    g = math.sqrt(a) * reservoir.couplings
    r1, r2 = params.r1, params.r2
    phase = reservoir.detunings

    if frame == "interaction":
        def rhs(t, y):
            ck = y[2:]
            rot = np.exp(-1j * phase * t)
            s = np.dot(g * rot, ck)
            out = np.empty_like(y)
            out[0] = -1j * r1 * s
            out[1] = -1j * r2 * s
            out[2:] = -1j * g * np.conj(rot) * (r1 * y[0] + r2 * y[1])
            return out
    elif frame == "static":
        def rhs(_t, y):
            bk = y[2:]
            s = np.dot(g, bk)
            out = np.empty_like(y)
            out[0] = -1j * r1 * s
            out[1] = -1j * r2 * s
            out[2:] = -1j * (phase * bk + g * (r1 * y[0] + r2 * y[1]))
            return out
    else:
        raise ValueError(f"unknown frame {frame!r}")

    y0 = np.zeros(reservoir.n_modes + 2, dtype=complex)
    y0[0], y0[1] = init.c1, init.c2
    sol = integrate(rhs, y0, grid, rtol, atol)
    norm = np.sum(np.abs(sol.y) ** 2, axis=0)
    return Trajectory(
        params, grid, sol.y[0], sol.y[1], source="discretized",
        extra={"norm": norm, "frame": frame, "nfev": sol.nfev},
    )
