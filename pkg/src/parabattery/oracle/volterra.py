"""Direct integration of the memory-kernel equations for the amplitudes.

The exponential kernel turns the integro-differential system into a linear
ODE by carrying the memory integral
``u(t) = int_0^t exp(-lambda' (t - s)) (r1 c1 + r2 c2)(s) ds``
as a third variable.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import solve_ivp

from ..dynamics import AmplitudePair, GridError, TimeGrid, Trajectory
from ..model import SystemParams, derive_constants

RTOL = 1e-10
ATOL = 1e-12


class OracleError(RuntimeError):
    """Integrator failed to meet its tolerance (or the step size underflowed)."""


def check_resolution(params: SystemParams, grid: TimeGrid, per_scale: int = 20) -> None:
    """Require ``per_scale`` output points per memory time and per Rabi period."""
    consts = derive_constants(params)
    scales = [1.0 / consts.lambda_prime.real]
    if params.calR > 0:
        scales.append(1.0 / (params.calR * math.sqrt(params.deformation_factor)))
    if grid.step > min(scales) / per_scale:
        raise GridError(
            f"grid step {grid.step:.3g} does not resolve the time scale {min(scales):.3g} "
            f"with {per_scale} points"
        )


def integrate(rhs, y0, grid: TimeGrid, rtol=RTOL, atol=ATOL, method="DOP853"):
    """Adaptive Runge-Kutta run sampled on ``grid`` through the method's dense output."""
    t = grid.times
    sol = solve_ivp(rhs, (t[0], t[-1]), y0, method=method, t_eval=t, rtol=rtol, atol=atol)
    if sol.status != 0:
        raise OracleError(f"integration failed: {sol.message}")
    return sol


def solve_volterra(
    params: SystemParams,
    init: AmplitudePair,
    grid: TimeGrid,
    rtol: float = RTOL,
    atol: float = ATOL,
    check_grid: bool = True,
) -> Trajectory:
    init.check_normalized()
    if check_grid:
        check_resolution(params, grid)
    consts = derive_constants(params)
    lam = consts.lambda_prime
    r1, r2 = params.r1, params.r2
    g2 = consts.deformation_factor * params.calR**2

    def rhs(_t, y):
        c1, c2, u = y
        return np.array([-g2 * r1 * u, -g2 * r2 * u, -lam * u + r1 * c1 + r2 * c2])

    y0 = np.array([init.c1, init.c2, 0.0], dtype=complex)
    sol = integrate(rhs, y0, grid, rtol, atol)
    return Trajectory(
        params, grid, sol.y[0], sol.y[1], source="volterra",
        extra={"memory": sol.y[2], "nfev": sol.nfev},
    )
