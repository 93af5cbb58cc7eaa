"""Command-line front end.

    parabattery dynamics   [--config FILE] [--out DIR] [parameter flags]
    parabattery energetics ...
    parabattery nonmarkov  [--nu-list -0.45,-0.3,0] [--strict]
    parabattery sweep      --sweep r1=0:1:101
    parabattery reproduce  fig2a|fig2b|fig3|fig4a|fig4b|fig5a|fig5b|fig6a|fig6b
    parabattery validate   [--level fast|full]

Exit status: 0 success, 1 usage or configuration error, 2 numerical
tolerance failure (``--strict`` runs and failed validation).
"""

from __future__ import annotations

import argparse
import contextlib
import datetime as _dt
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from . import scenarios
from .config import ConfigError, RunRecord, ScenarioConfig, parse_range
from .io import save_svg, sha256_file, write_csv
from .nonmarkovianity import SearchSpec

log = logging.getLogger("parabattery")

EXIT_OK, EXIT_USAGE, EXIT_TOLERANCE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global")
    g.add_argument("--config", type=Path, help="JSON scenario file (flags override it)")
    g.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    g.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps and scans")
    g.add_argument("--seed", type=int, help="seed recorded with the run")
    g.add_argument("--strict", action="store_true",
                   help="exit with status 2 on numerical-tolerance warnings")
    g.add_argument("--no-plot", action="store_true", help="skip SVG output")
    s = p.add_argument_group("scenario")
    s.add_argument("--nu", type=float)
    s.add_argument("--omega0", type=float)
    s.add_argument("--lambda-width", type=float)
    s.add_argument("--delta", type=float, help="detuning (default: omega0-compensating)")
    s.add_argument("--R", "--rabi-ratio", dest="rabi_ratio", type=float)
    s.add_argument("--r1", type=float)
    s.add_argument("--r2", type=float)
    s.add_argument("--c1-abs", type=float)
    s.add_argument("--c1-phase", type=float)
    s.add_argument("--c2-abs", type=float)
    s.add_argument("--c2-phase", type=float)
    s.add_argument("--t-end", type=float)
    s.add_argument("--n-points", type=int)
    s.add_argument("--outputs", help="comma-separated list of outputs")
    s.add_argument("--nu-list", help="comma-separated nu values for nonmarkov")
    s.add_argument("--sweep", action="append", metavar="NAME=START:STOP:COUNT")
    s.add_argument("--n-theta", type=int)
    s.add_argument("--n-phi", type=int)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="parabattery", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("dynamics", parents=[common], help="amplitudes and stored energy")
    sub.add_parser("energetics", parents=[common], help="stored energy, ergotropy, efficiency")
    sub.add_parser("nonmarkov", parents=[common], help="BLP non-Markovianity")
    sub.add_parser("sweep", parents=[common], help="long-format parameter sweep")
    rp = sub.add_parser("reproduce", parents=[common], help="figure presets")
    rp.add_argument("figure", choices=sorted(scenarios.PRESETS))
    vp = sub.add_parser("validate", parents=[common], help="oracle cross-checks")
    vp.add_argument("--level", choices=("fast", "full"), default="fast")
    return parser


def load_config(args) -> ScenarioConfig:
    cfg = ScenarioConfig.load(args.config) if args.config else ScenarioConfig()
    sweep = None
    if args.sweep:
        sweep = dict(cfg.sweep)
        for item in args.sweep:
            name, sep, rng = item.partition("=")
            if not sep:
                raise ConfigError(f"--sweep: expected NAME=START:STOP:COUNT, got {item!r}")
            sweep[name.strip()] = parse_range(rng).to_list()
    return cfg.override(
        nu=args.nu, omega0=args.omega0, lambda_width=args.lambda_width, delta=args.delta,
        rabi_ratio=args.rabi_ratio, r1=args.r1, r2=args.r2,
        c1_abs=args.c1_abs, c1_phase=args.c1_phase, c2_abs=args.c2_abs, c2_phase=args.c2_phase,
        t_end=args.t_end, n_points=args.n_points, outputs=args.outputs, seed=args.seed,
        nu_list=args.nu_list, sweep=sweep, n_theta=args.n_theta, n_phi=args.n_phi,
    )


class Run:
    """Collects emitted files and writes the run manifest."""

    def __init__(self, command: str, cfg: ScenarioConfig | None, out: Path, plot: bool):
        self.command = command
        self.cfg = cfg
        self.out = out
        self.plot = plot
        self.files: list[Path] = []
        self.notes: list[str] = []
        self.status = "ok"
        self.t0 = time.perf_counter()
        self.started = _dt.datetime.now(_dt.timezone.utc).isoformat()

    def csv(self, name, header, rows):
        self.files.append(write_csv(self.out / name, header, rows))

    def svg(self, name, make):
        if not self.plot:
            return
        plt, fig = make()
        try:
            self.files.append(save_svg(fig, self.out / name))
        finally:
            plt.close(fig)

    def finish(self) -> Path:
        rec = RunRecord(
            command=self.command,
            config=self.cfg.to_dict() if self.cfg else {},
            engine_version=__version__,
            wall_time=time.perf_counter() - self.t0,
            started=self.started,
            outputs=[{"path": str(p), "sha256": sha256_file(p)} for p in self.files],
            status=self.status,
            notes=self.notes,
        )
        path = self.out / "run_manifest.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(rec.to_json())
        return path


@contextlib.contextmanager
def _executor(jobs: int):
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            yield ex
    else:
        yield None


def cmd_dynamics(cfg: ScenarioConfig, run: Run) -> int:
    from .plotting import line_panel

    header, rows = scenarios.dynamics_table(cfg.params(), cfg.init(), cfg.grid())
    run.csv("dynamics.csv", header, rows)
    run.svg("dynamics.svg", lambda: line_panel(header, rows, "lambda_t", "pop_battery",
                                               ylabel="battery population"))
    return EXIT_OK


def cmd_energetics(cfg: ScenarioConfig, run: Run) -> int:
    from .plotting import line_panel

    header, rows = scenarios.energetics_table(cfg.params(), cfg.init(), cfg.grid())
    run.csv("energetics.csv", header, rows)
    run.svg("energetics.svg", lambda: line_panel(header, rows, "lambda_t", "ergotropy"))
    return EXIT_OK


def cmd_nonmarkov(cfg: ScenarioConfig, run: Run, jobs: int, strict: bool) -> int:
    from .plotting import scatter_panel

    nus = cfg.nu_list if cfg.nu_list is not None else [cfg.nu]
    template = cfg.params(nu=0.0) if cfg.delta is None else cfg.params()
    grid = cfg.grid() if (cfg.t_end is not None or cfg.n_points is not None) else None
    search = SearchSpec(n_theta=cfg.n_theta, n_phi=cfg.n_phi)
    with _executor(jobs) as ex:
        header, rows, rheader, rrows, scan = scenarios.nonmarkov_tables(
            template, nus, grid, search, ex)
    run.csv("nonmarkov.csv", header, rows)
    run.csv("nonmarkov_revivals.csv", rheader, rrows)
    if len(rows) > 1:
        run.svg("nonmarkov.svg", lambda: scatter_panel(header, rows, "nu", "blp_value"))
    coarse = [r.nu for r in scan if not r.grid_converged]
    if coarse:
        run.notes.append(f"grid too coarse for nu in {coarse}")
        log.warning("grid too coarse for nu in %s", coarse)
        if strict:
            run.status = "tolerance"
            return EXIT_TOLERANCE
    return EXIT_OK


def cmd_sweep(cfg: ScenarioConfig, run: Run, jobs: int) -> int:
    from .plotting import line_panel

    with _executor(jobs) as ex:
        header, rows, sheader, srows = scenarios.sweep_tables(cfg, ex)
    run.csv("sweep.csv", header, rows)
    run.csv("sweep_summary.csv", sheader, srows)
    first = sheader[0]
    if len(srows) > 1:
        run.svg("sweep_summary.svg",
                lambda: line_panel(sheader, srows, first, "max_stored_energy"))
    return EXIT_OK


def cmd_reproduce(figure: str, run: Run, jobs: int, strict: bool) -> int:
    from .plotting import line_panel, map_panel, scatter_panel

    preset = scenarios.PRESETS[figure]
    run.notes.append(f"{figure}: {preset.description}; nu curves {list(preset.nus)} are a preset choice")
    if preset.kind == "blp":
        with _executor(jobs) as ex:
            header, rows, rheader, rrows, scan = scenarios.preset_blp(preset, ex)
        run.csv(f"{figure}.csv", header, rows)
        run.csv(f"{figure}_revivals.csv", rheader, rrows)
        run.svg(f"{figure}.svg", lambda: scatter_panel(header, rows, "nu", "blp_value",
                                                       title=preset.description))
        if strict and not all(r.grid_converged for r in scan):
            run.status = "tolerance"
            return EXIT_TOLERANCE
        return EXIT_OK
    if preset.kind == "r1-map":
        header, rows = scenarios.preset_r1_map(preset)
        run.csv(f"{figure}.csv", header, rows)
        run.svg(f"{figure}.svg", lambda: map_panel(header, rows, "lambda_t", "r1",
                                                   "stored_energy", title=preset.description))
        return EXIT_OK
    header, rows = scenarios.preset_curves(preset)
    column = {"energy": "stored_energy", "ergotropy": "ergotropy_normalized",
              "efficiency": "efficiency"}[preset.kind]
    run.csv(f"{figure}.csv", header, rows)
    run.svg(f"{figure}.svg", lambda: line_panel(header, rows, "lambda_t", column, group="nu",
                                                title=preset.description))
    return EXIT_OK


def cmd_validate(level: str, run: Run) -> int:
    from .validate import format_report, run_checks

    results = run_checks(level)
    print(format_report(results))
    header = ["check", "observed", "relation", "tolerance", "passed", "seconds"]
    rows = [[r.name, r.observed, r.relation, r.tolerance, str(r.passed).lower(), r.seconds]
            for r in results]
    run.csv("validate.csv", header, rows)
    if all(r.passed for r in results):
        return EXIT_OK
    run.status = "failed"
    return EXIT_TOLERANCE


def _glue_lists(argv):
    # "--nu-list -0.45,0" would otherwise be read as an unknown option
    out, it = [], iter(argv)
    for tok in it:
        if tok == "--nu-list":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    argv = _glue_lists(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    try:
        cfg = load_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.jobs < 1:
        print("--jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE

    run = Run(args.command, cfg, args.out, plot=not args.no_plot)
    try:
        if args.command == "dynamics":
            code = cmd_dynamics(cfg, run)
        elif args.command == "energetics":
            code = cmd_energetics(cfg, run)
        elif args.command == "nonmarkov":
            code = cmd_nonmarkov(cfg, run, args.jobs, args.strict)
        elif args.command == "sweep":
            code = cmd_sweep(cfg, run, args.jobs)
        elif args.command == "reproduce":
            code = cmd_reproduce(args.figure, run, args.jobs, args.strict)
        else:
            code = cmd_validate(args.level, run)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    manifest = run.finish()
    log.info("wrote %d file(s); manifest %s", len(run.files), manifest)
    return code


if __name__ == "__main__":
    sys.exit(main())
