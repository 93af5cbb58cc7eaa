"""Self-check suite: oracle cross-checks and algebraic invariants.

``run_checks("fast")`` finishes in seconds; ``"full"`` adds the discretized
reservoir convergence study and the BLP endpoints (minutes).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import dynamics
from .dynamics import CHARGER_FULL, AmplitudePair, TimeGrid
from .energetics import QubitHamiltonian, energetics_along
from .model import SystemParams
from .oracle import DiscretizedReservoir, check_wigner_algebra, solve_discretized, solve_volterra

__all__ = ["CheckResult", "run_checks", "format_report"]


@dataclass
class CheckResult:
    name: str
    observed: float
    tolerance: float
    passed: bool
    relation: str = "<="
    seconds: float = 0.0


def _check(name, observed, tol, relation="<="):
    if relation == "<=":
        ok = observed <= tol
    elif relation == ">":
        ok = observed > tol
    else:
        raise ValueError(relation)
    return CheckResult(name, float(observed), float(tol), bool(ok and math.isfinite(observed)), relation)


def _sup_diff(a, b) -> float:
    return float(max(np.max(np.abs(a.c1 - b.c1)), np.max(np.abs(a.c2 - b.c2))))


def volterra_grid(params: SystemParams, t_end: float = 20.0) -> TimeGrid:
    scale = min(1.0 / (params.deformation_factor * params.lambda_width),
                1.0 / max(params.calR * math.sqrt(params.deformation_factor), 1e-300))
    n = int(math.ceil(25 * t_end / scale)) + 1
    return TimeGrid(t_end, max(n, 2001))


def check_volterra(nu: float, R: float) -> CheckResult:
    p = SystemParams.compensated(nu, R)
    grid = volterra_grid(p)
    err = _sup_diff(dynamics.evolve(p, CHARGER_FULL, grid), solve_volterra(p, CHARGER_FULL, grid))
    return _check(f"volterra vs closed form (nu={nu:g}, R={R:g})", err, 1e-6)


def check_discretized(nu: float, R: float, n_modes: int = 4000, cutoff: float = 20.0):
    p = SystemParams.compensated(nu, R)
    grid = TimeGrid(20.0, 401)
    res = DiscretizedReservoir.build(p, n_modes, cutoff)
    disc = solve_discretized(p, CHARGER_FULL, res, grid)
    err = _sup_diff(dynamics.evolve(p, CHARGER_FULL, grid), disc)
    drift = float(np.max(np.abs(disc.extra["norm"] - 1.0)))
    return [
        _check(f"discretized vs closed form (nu={nu:g}, R={R:g}, N={n_modes})", err, 1e-2),
        _check(f"discretized norm drift (nu={nu:g}, R={R:g})", drift, 1e-8),
    ]


def check_wigner(nu: float, M: int = 12) -> CheckResult:
    rep = check_wigner_algebra(nu, M)
    return _check(f"Wigner algebra relations (nu={nu:g}, M={M})", rep.max_violation, 1e-12)


def check_steady_state(nu: float) -> CheckResult:
    # evaluated at 50 decay times of the slowest mode, not at a fixed lambda t
    p = SystemParams.compensated(nu, 0.4)
    t_inf = dynamics.steady_state_horizon(dynamics.derive_constants(p))
    a = dynamics.amplitudes_at(p, CHARGER_FULL, t_inf)
    return _check(f"stored energy at the steady-state horizon is 0.25 omega0 (nu={nu:g})",
                  abs(abs(a.c2) ** 2 - 0.25), 1e-6)


def check_combinations(seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    sub_err = sup_err = psd_err = 0.0
    for _ in range(20):
        nu = rng.uniform(-0.45, 2.0)
        R = 10 ** rng.uniform(-1, 2)
        r1 = rng.uniform(0, 1)
        p = SystemParams.compensated(nu, R, r1=r1)
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        v /= np.linalg.norm(v)
        init = AmplitudePair(complex(v[0]), complex(v[1]))
        grid = TimeGrid(10.0, 501)
        tr = dynamics.evolve(p, init, grid)
        pt = dynamics.survival_amplitude(dynamics.derive_constants(p), grid.times)
        sub0 = p.r2 * init.c1 - p.r1 * init.c2
        sup0 = p.r1 * init.c1 + p.r2 * init.c2
        sub_err = max(sub_err, np.max(np.abs(p.r2 * tr.c1 - p.r1 * tr.c2 - sub0)))
        sup_err = max(sup_err, np.max(np.abs(p.r1 * tr.c1 + p.r2 * tr.c2 - pt * sup0)))
        rho = tr.density_matrices()
        ev = np.linalg.eigvalsh(rho)
        tr_err = np.max(np.abs(np.trace(rho, axis1=1, axis2=2) - 1.0))
        psd_err = max(psd_err, max(-ev.min(), 0.0), tr_err)
    return [
        _check("subradiant combination conserved", sub_err, 1e-12),
        _check("superradiant combination scales with p(t)", sup_err, 1e-12),
        _check("density matrices PSD with unit trace", psd_err, 1e-10),
    ]


def check_full_charge() -> list[CheckResult]:
    p = SystemParams.compensated(-0.3, 50.0)
    grid = TimeGrid(1.0, 100001)
    rep = energetics_along(dynamics.evolve(p, CHARGER_FULL, grid), QubitHamiltonian(p.omega0))
    k = int(np.argmax(rep.stored_energy))
    return [
        _check("strong coupling peak stored energy / omega0", rep.stored_energy[k] / p.omega0,
               0.95, ">"),
        _check("strong coupling peak time offset |lambda t - 0.099|",
               abs(grid.times[k] - 0.099), 0.01),
    ]


def check_blp() -> list[CheckResult]:
    from .nonmarkovianity import blp_measure

    n0 = blp_measure(SystemParams.compensated(0.0, 0.4)).value
    n35 = blp_measure(SystemParams.compensated(-0.35, 0.4)).value
    n45 = blp_measure(SystemParams.compensated(-0.45, 0.4)).value
    return [
        _check("BLP at nu=0, R=0.4", n0, 1e-6),
        _check("BLP at nu=-0.45, R=0.4", n45, 0.0, ">"),
        _check("BLP(nu=-0.45) - BLP(nu=-0.35)", n45 - n35, 0.0, ">"),
    ]


def run_checks(level: str = "fast") -> list[CheckResult]:
    if level not in ("fast", "full"):
        raise ValueError(f"unknown validation level {level!r}")
    tasks = [lambda nu=nu: check_wigner(nu) for nu in (-0.4, 0.0, 0.5, 2.0)]
    points = [(0.0, 0.4), (-0.3, 2.0), (-0.4, 50.0)]
    if level == "full":
        points = [(nu, R) for nu in (-0.4, 0.0, 1.0) for R in (0.4, 2.0, 50.0)]
    tasks += [lambda nu=nu, R=R: check_volterra(nu, R) for nu, R in points]
    tasks += [lambda nu=nu: check_steady_state(nu) for nu in (0.0, -0.3)]
    tasks += [check_combinations, check_full_charge]
    if level == "full":
        tasks += [lambda nu=nu, R=R: check_discretized(nu, R) for nu, R in ((0.0, 0.4), (-0.3, 0.4))]
        tasks += [check_blp]
    results = []
    for task in tasks:
        t0 = time.perf_counter()
        out = task()
        out = out if isinstance(out, list) else [out]
        dt = time.perf_counter() - t0
        for r in out:
            r.seconds = dt / len(out)
        results.extend(out)
    return results


def format_report(results) -> str:
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status}  {r.name}: observed {r.observed:.3e} "
                     f"(required {r.relation} {r.tolerance:.1e})")
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    return "\n".join(lines)
