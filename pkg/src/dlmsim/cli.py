"""Command line interface: run an experiment, dump oracle tables, re-analyze station files.

Usage examples::

    dlmsim mzi --seed 1 --out mzi.csv
    dlmsim eprb --config runs.json --out eprb.csv --events-dir events/
    dlmsim analyze events/station1.csv events/station2.csv --windows 2 50 --out s.csv
    dlmsim oracle mzi

The config file is JSON with one object per subcommand, for example
``{"mzi": {"gamma": 0.98}, "eprb": {"windows_ns": [2, 50]}}``.  Angles are
in degrees.  Every run with ``--out`` also writes ``<out>.manifest.json``.

Exit codes: 0 success, 2 configuration error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import oracle
from .analysis import AmplitudeFit, fourier_component
from .experiments.base import ConfigError
from .experiments.delayed_choice import DelayedChoiceConfig, run_delayed_choice
from .experiments.eprb import EPRBConfig, analyze_windows, run_eprb
from .experiments.mzi import MZIConfig, run_mzi
from .experiments.neutron import NeutronBellConfig, NeutronMZIConfig, run_neutron_bell, run_neutron_mzi
from .experiments.two_beam import TwoBeamConfig, run_two_beam
from .io import (
    ResultTable,
    RunManifest,
    Stopwatch,
    delayed_choice_table,
    eprb_table,
    mzi_table,
    neutron_bell_table,
    neutron_mzi_table,
    read_table,
    station_from_table,
    station_table,
    table_to_csv,
    table_to_json,
    two_beam_table,
    write_table,
)

log = logging.getLogger("dlmsim")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# each experiment: config class, field that --events overrides
EXPERIMENTS = {
    "two-beam": (TwoBeamConfig, "events"),
    "mzi": (MZIConfig, "events_per_point"),
    "delayed-choice": (DelayedChoiceConfig, "events_per_point"),
    "neutron-mzi": (NeutronMZIConfig, "events_per_point"),
    "eprb": (EPRBConfig, "pairs"),
    "neutron-bell": (NeutronBellConfig, "events_per_count"),
}

ORACLE_TABLES = ("malus", "two-beam", "mzi", "neutron-mzi", "neutron-bell", "singlet")


def load_config(name: str, path, events: int | None):
    cls, events_field = EXPERIMENTS[name]
    section = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text())
        except OSError as exc:
            raise CliError(f"cannot read config {path}: {exc}", EXIT_CONFIG) from exc
        except json.JSONDecodeError as exc:
            raise CliError(f"config {path} is not valid JSON: {exc}", EXIT_CONFIG) from exc
        if not isinstance(data, dict):
            raise CliError("config file must hold a JSON object", EXIT_CONFIG)
        unknown = sorted(set(data) - set(EXPERIMENTS))
        if unknown:
            raise CliError(f"unknown config sections: {', '.join(unknown)}", EXIT_CONFIG)
        section = dict(data.get(name, {}))
    if events is not None:
        section[events_field] = events
    try:
        return cls.from_dict(section)
    except ConfigError as exc:
        raise CliError(str(exc), EXIT_CONFIG) from exc


# -- per-experiment runners: config, seed -> (table, summary, extra outputs) ---------


def _two_beam(config, seed, args):
    result = run_two_beam(config, seed)
    theta = np.radians(result.theta_deg)
    fit = AmplitudeFit(oracle.two_beam_intensity).fit(theta, result.clicks)
    summary = {
        "detected_fraction": result.detected_fraction,
        "amplitude": fit.amplitude_,
        "r2": fit.score(theta, result.clicks),
        "fringe_component": fourier_component(np.sin(theta), result.clicks, 2 * math.pi * config.d),
    }
    return two_beam_table(result), summary


def _mzi(config, seed, args):
    result = run_mzi(config, seed)
    target = np.sin(np.radians(result.phi_deg) / 2) ** 2
    rms = float(np.sqrt(np.mean((result.n2_fraction - target) ** 2)))
    return mzi_table(result), {"rms_vs_oracle": rms}


def _delayed_choice(config, seed, args):
    result = run_delayed_choice(config, seed)
    summary = {"visibility": result.visibility(), "distinguishability": result.distinguishability()}
    return delayed_choice_table(result), summary


def _neutron_mzi(config, seed, args):
    result = run_neutron_mzi(config, seed)
    probs = np.array([oracle.neutron_mzi_probabilities(math.radians(c), config.reflectivity) for c in result.chi_deg])
    n = result.events_per_point
    resid = np.concatenate([result.n_h / n - probs[:, 0], result.n_o / n - probs[:, 1]])
    return neutron_mzi_table(result), {"rms_vs_oracle": float(np.sqrt(np.mean(resid**2)))}


def _eprb(config, seed, args):
    s1, s2 = run_eprb(config, seed)
    if args.events_dir is not None:
        out = Path(args.events_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_table(station_table(s1), out / "station1.csv")
        write_table(station_table(s2), out / "station2.csv")
    summaries = analyze_windows(s1, s2, config)
    return eprb_table(summaries), {f"S(W={s.window:g})": s.S for s in summaries}


def _neutron_bell(config, seed, args):
    result = run_neutron_bell(config, seed)
    summary = {}
    if len(result.alpha_deg) >= 2 and len(result.chi_deg) >= 2:
        a, ap = result.alpha_deg[:2]
        c, cp = result.chi_deg[:2]
        summary["S"] = result.chsh(a, c, ap, cp)
    return neutron_bell_table(result), summary


RUNNERS = {
    "two-beam": _two_beam,
    "mzi": _mzi,
    "delayed-choice": _delayed_choice,
    "neutron-mzi": _neutron_mzi,
    "eprb": _eprb,
    "neutron-bell": _neutron_bell,
}


# -- oracle tables ---------------------------------------------------------------------


def oracle_table(name: str, reflectivity: float = 0.2) -> ResultTable:
    if name == "malus":
        rows = [(float(a), *oracle.malus_intensity(math.radians(a), 0.0)) for a in range(0, 181, 5)]
        return ResultTable(("angle_deg", "I_o", "I_e"), rows)
    if name == "two-beam":
        rows = [(float(t), float(oracle.two_beam_intensity(math.radians(t)))) for t in range(-90, 91)]
        return ResultTable(("theta_deg", "intensity"), rows)
    if name == "mzi":
        rows = [(float(p), math.sin(math.radians(p) / 2) ** 2, math.cos(math.radians(p) / 2) ** 2) for p in range(0, 361, 10)]
        return ResultTable(("phi_deg", "P2", "P3"), rows)
    if name == "neutron-mzi":
        rows = [(float(c), *oracle.neutron_mzi_probabilities(math.radians(c), reflectivity)[::-1]) for c in range(0, 361, 30)]
        return ResultTable(("chi_deg", "pO", "pH"), rows)
    if name == "neutron-bell":
        rows = [
            (float(a), float(c), oracle.neutron_bell_E(math.radians(a), math.radians(c)))
            for a in range(0, 360, 45)
            for c in range(0, 360, 45)
        ]
        return ResultTable(("alpha_deg", "chi_deg", "E"), rows)
    if name == "singlet":
        rows = [(float(d), *oracle.singlet_correlation(0.0, math.radians(d))) for d in range(0, 181, 10)]
        return ResultTable(("delta_deg", "E1", "E2", "E"), rows)
    raise CliError(f"unknown oracle table {name!r}", EXIT_CONFIG)


# -- plumbing -------------------------------------------------------------------------


def _emit(table: ResultTable, out, fmt: str) -> list:
    if out is None:
        sys.stdout.write(table_to_csv(table) if fmt == "csv" else table_to_json(table))
        return []
    try:
        write_table(table, out, fmt)
    except OSError as exc:
        raise CliError(f"cannot write {out}: {exc}", EXIT_RUNTIME) from exc
    return [str(out)]


def _manifest(out, manifest: RunManifest) -> None:
    if out is None:
        return
    try:
        manifest.write(f"{out}.manifest.json")
    except OSError as exc:
        raise CliError(f"cannot write manifest: {exc}", EXIT_RUNTIME) from exc


def _run_experiment(args) -> None:
    config = load_config(args.command, args.config, args.events)
    with Stopwatch() as watch:
        try:
            table, summary = RUNNERS[args.command](config, args.seed, args)
        except (ValueError, ArithmeticError) as exc:
            raise CliError(f"{args.command} failed: {exc}", EXIT_RUNTIME) from exc
    outputs = _emit(table, args.out, args.format)
    if getattr(args, "events_dir", None) is not None:
        outputs += [str(Path(args.events_dir) / "station1.csv"), str(Path(args.events_dir) / "station2.csv")]
    for key, value in summary.items():
        log.info("%s = %s", key, value)
    _manifest(
        args.out,
        RunManifest(args.command, config.digest(), args.seed, outputs=outputs, duration_s=watch.elapsed, config=config.to_dict(), summary=summary),
    )


def _run_analyze(args) -> None:
    try:
        s1 = station_from_table(read_table(args.station1))
        s2 = station_from_table(read_table(args.station2))
    except (OSError, ValueError, KeyError) as exc:
        raise CliError(f"cannot read station files: {exc}", EXIT_CONFIG) from exc
    try:
        config = EPRBConfig.from_dict(
            {"windows_ns": args.windows, "angles1_deg": sorted(set(s1.theta.tolist())), "angles2_deg": sorted(set(s2.theta.tolist()))}
        )
    except ConfigError as exc:
        raise CliError(str(exc), EXIT_CONFIG) from exc
    offset = args.offset
    if offset == "auto":
        from .analysis import delta_g_estimate

        offset = delta_g_estimate(s1, s2).offset
    with Stopwatch() as watch:
        summaries = analyze_windows(s1, s2, config, offset=float(offset))
    table = eprb_table(summaries)
    outputs = _emit(table, args.out, args.format)
    digest = config.digest()
    _manifest(args.out, RunManifest("analyze", digest, 0, outputs=outputs, duration_s=watch.elapsed, config=config.to_dict(), summary={"offset": float(offset)}))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dlmsim", description="Event-by-event simulation of interference and Bell-test experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="output file (stdout when omitted)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("-v", "--verbose", action="store_true", help="log summary values to stderr")

    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", help="JSON config file with a section per experiment")
        p.add_argument("--seed", type=int, default=0, help="root seed (unsigned 64-bit)")
        p.add_argument("--events", type=int, help="override the number of events")
        common(p)
        if name == "eprb":
            p.add_argument("--events-dir", help="also write station1.csv and station2.csv here")

    p = sub.add_parser("oracle", help="tabulate a closed-form prediction")
    p.add_argument("table", choices=ORACLE_TABLES)
    p.add_argument("--reflectivity", type=float, default=0.2, help="splitter reflectivity for neutron tables")
    common(p)

    p = sub.add_parser("analyze", help="coincidence analysis of saved station files")
    p.add_argument("station1")
    p.add_argument("station2")
    p.add_argument("--windows", type=float, nargs="+", default=[2.0, 50.0, 200.0], help="coincidence windows in ns")
    p.add_argument("--offset", default="0", help="clock offset in ns added to station 1, or 'auto'")
    common(p)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.command in EXPERIMENTS:
            if not 0 <= args.seed < 2**64:
                raise CliError("seed must be an unsigned 64-bit integer", EXIT_CONFIG)
            _run_experiment(args)
        elif args.command == "oracle":
            table = oracle_table(args.table, args.reflectivity)
            _emit(table, args.out, args.format)
        else:
            _run_analyze(args)
    except CliError as exc:
        print(f"dlmsim: error: {exc}", file=sys.stderr)
        return exc.code
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
