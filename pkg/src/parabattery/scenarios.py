"""Tables behind the command-line subcommands and the figure presets.

Every function returns ``(header, rows)`` with rows in a deterministic
order; writing and plotting happen in :mod:`parabattery.cli`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .config import ConfigError, ScenarioConfig
from .dynamics import CHARGER_FULL, TimeGrid, evolve, survival_amplitude
from .energetics import QubitHamiltonian, energetics_along
from .model import SystemParams, derive_constants
from .nonmarkovianity import SearchSpec, nonmarkovianity_vs_nu

__all__ = [
    "DYNAMICS_COLUMNS",
    "ENERGETICS_COLUMNS",
    "NONMARKOV_COLUMNS",
    "REVIVAL_COLUMNS",
    "dynamics_table",
    "energetics_table",
    "nonmarkov_tables",
    "sweep_tables",
    "Preset",
    "PRESETS",
    "PRESET_NUS",
]

DYNAMICS_COLUMNS = ["lambda_t", "re_c1", "im_c1", "re_c2", "im_c2",
                    "pop_charger", "pop_battery", "stored_energy", "p_re", "p_im"]
ENERGETICS_COLUMNS = ["lambda_t", "stored_energy", "ergotropy",
                      "ergotropy_normalized", "efficiency"]
NONMARKOV_COLUMNS = ["nu", "blp_value", "n_revivals", "theta1", "phi1", "theta2", "phi2"]
REVIVAL_COLUMNS = ["nu", "interval", "lambda_t_start", "lambda_t_end", "d_start", "d_end"]
SWEEP_OBSERVABLES = ["lambda_t", "pop_battery", "stored_energy", "ergotropy", "efficiency"]
SUMMARY_OBSERVABLES = ["max_stored_energy", "argmax_lambda_t", "final_stored_energy",
                       "max_ergotropy"]

# Curve set for the multi-curve panels: a representative choice of deformations.
PRESET_NUS = (0.0, -0.1, -0.2, -0.3, -0.4)


def dynamics_table(params: SystemParams, init, grid: TimeGrid):
    tr = evolve(params, init, grid)
    h = QubitHamiltonian(params.omega0)
    rep = energetics_along(tr, h)
    p = survival_amplitude(derive_constants(params), grid.times)
    lt = params.lambda_width * grid.times
    rows = zip(lt, tr.c1.real, tr.c1.imag, tr.c2.real, tr.c2.imag, tr.pop_charger,
               tr.pop_battery, rep.stored_energy, p.real, p.imag)
    return DYNAMICS_COLUMNS, [list(r) for r in rows]


def energetics_table(params: SystemParams, init, grid: TimeGrid):
    tr = evolve(params, init, grid)
    rep = energetics_along(tr, QubitHamiltonian(params.omega0))
    lt = params.lambda_width * grid.times
    rows = zip(lt, rep.stored_energy, rep.ergotropy, rep.ergotropy_normalized, rep.efficiency)
    return ENERGETICS_COLUMNS, [list(r) for r in rows]


def nonmarkov_tables(template: SystemParams, nus, grid=None, search=None, executor=None):
    """BLP table, revival-interval listing and the raw per-nu rows (for convergence flags)."""
    scan = nonmarkovianity_vs_nu(template, nus, grid, search, executor)
    table, revivals = [], []
    for row in scan:
        table.append([row.nu, row.value, row.n_revivals, *row.pair.angles])
        lw = template.lambda_width
        for k, iv in enumerate(row.revival_intervals):
            revivals.append([row.nu, k, lw * iv.t_start, lw * iv.t_end, iv.d_start, iv.d_end])
    return NONMARKOV_COLUMNS, table, REVIVAL_COLUMNS, revivals, scan


def _sweep_point(args):
    cfg, assignment, grid = args
    params = cfg.params(**assignment)
    tr = evolve(params, cfg.init(), grid)
    rep = energetics_along(tr, QubitHamiltonian(params.omega0))
    lt = params.lambda_width * grid.times
    k = int(np.argmax(rep.stored_energy))
    long_rows = [list(r) for r in zip(lt, tr.pop_battery, rep.stored_energy,
                                      rep.ergotropy, rep.efficiency)]
    summary = [float(rep.stored_energy[k]), float(lt[k]), float(rep.stored_energy[-1]),
               float(rep.ergotropy.max())]
    return long_rows, summary


def sweep_tables(cfg: ScenarioConfig, executor=None):
    """Long-format sweep over the config's ranges, lexicographic in the sweep variables.

    Returns ``(long_header, long_rows, summary_header, summary_rows)``.
    """
    ranges = cfg.sweep_ranges()
    if not ranges:
        raise ConfigError("sweep: no ranges given (use e.g. --sweep r1=0:1:101)")
    names = list(ranges)
    points = [dict(zip(names, map(float, vals)))
              for vals in product(*(ranges[n].values for n in names))]
    grid = cfg.grid()
    for pt in points:
        cfg.params(**pt)  # fail fast on invalid combinations
    jobs = [(cfg, pt, grid) for pt in points]
    results = list(executor.map(_sweep_point, jobs)) if executor else [_sweep_point(j) for j in jobs]
    long_rows, summary_rows = [], []
    for pt, (rows, summary) in zip(points, results):
        prefix = [pt[n] for n in names]
        long_rows.extend(prefix + r for r in rows)
        summary_rows.append(prefix + summary)
    return (names + SWEEP_OBSERVABLES, long_rows, names + SUMMARY_OBSERVABLES, summary_rows)


@dataclass(frozen=True)
class Preset:
    """Built-in parameterisation of one figure panel."""

    figure: str
    kind: str  # "energy", "blp", "r1-map", "ergotropy" or "efficiency"
    rabi_ratio: float
    t_end: float
    n_points: int
    nus: tuple = PRESET_NUS
    r1_values: tuple = field(default=())
    description: str = ""

    def grid(self) -> TimeGrid:
        return TimeGrid(self.t_end, self.n_points)

    def params(self, nu: float, r1: float = 1.0 / math.sqrt(2.0)) -> SystemParams:
        return SystemParams.compensated(nu, self.rabi_ratio, r1=r1)


_R1 = tuple(np.round(np.linspace(0.0, 1.0, 101), 10))
_NU_SCAN = tuple(np.round(np.linspace(-0.45, 0.0, 10), 10))

PRESETS = {
    "fig2a": Preset("fig2a", "energy", 0.4, 30.0, 3001,
                    description="stored energy, weak coupling R=0.4"),
    "fig2b": Preset("fig2b", "energy", 50.0, 5.0, 20001,
                    description="stored energy, strong coupling R=50"),
    "fig3": Preset("fig3", "blp", 0.4, 30.0, 6000, nus=_NU_SCAN,
                   description="BLP non-Markovianity versus nu, R=0.4"),
    "fig4a": Preset("fig4a", "r1-map", 0.4, 30.0, 601, nus=(-0.3,), r1_values=_R1,
                    description="stored energy versus r1 and time, nu=-0.3, R=0.4"),
    "fig4b": Preset("fig4b", "r1-map", 50.0, 1.0, 2001, nus=(-0.3,), r1_values=_R1,
                    description="stored energy versus r1 and time, nu=-0.3, R=50"),
    "fig5a": Preset("fig5a", "ergotropy", 0.4, 30.0, 3001,
                    description="normalised ergotropy, R=0.4"),
    "fig5b": Preset("fig5b", "ergotropy", 50.0, 5.0, 20001,
                    description="normalised ergotropy, R=50"),
    "fig6a": Preset("fig6a", "efficiency", 0.4, 30.0, 3001,
                    description="efficiency, R=0.4"),
    "fig6b": Preset("fig6b", "efficiency", 50.0, 5.0, 20001,
                    description="efficiency, R=50"),
}


def preset_curves(preset: Preset):
    """Long table ``nu, lambda_t, pop_battery, stored_energy, ergotropy_normalized, efficiency``."""
    header = ["nu", "lambda_t", "pop_battery", "stored_energy", "ergotropy_normalized",
              "efficiency"]
    rows = []
    grid = preset.grid()
    for nu in preset.nus:
        p = preset.params(nu)
        tr = evolve(p, CHARGER_FULL, grid)
        rep = energetics_along(tr, QubitHamiltonian(p.omega0))
        lt = p.lambda_width * grid.times
        rows.extend([nu, *r] for r in zip(lt, tr.pop_battery, rep.stored_energy,
                                           rep.ergotropy_normalized, rep.efficiency))
    return header, rows


def preset_r1_map(preset: Preset):
    header = ["r1", "lambda_t", "pop_battery", "stored_energy"]
    rows = []
    grid = preset.grid()
    nu = preset.nus[0]
    for r1 in preset.r1_values:
        p = preset.params(nu, r1=float(r1))
        tr = evolve(p, CHARGER_FULL, grid)
        stored = p.omega0 * (tr.pop_battery - tr.pop_battery[0])
        lt = p.lambda_width * grid.times
        rows.extend([float(r1), *r] for r in zip(lt, tr.pop_battery, stored))
    return header, rows


def preset_blp(preset: Preset, executor=None):
    template = preset.params(0.0)
    search = SearchSpec()
    return nonmarkov_tables(template, preset.nus, preset.grid(), search, executor)
