"""Command line entry point ``bishop-discs``.

Exit codes: 0 when every enabled invariant passes, 1 on an invariant
failure, 2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import runner
from .config import OUTPUT_ENV, ConfigError, ScenarioConfig, load_config, parse_config
from .errors import InvalidInput

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("bishop_discs")


def _common(p: argparse.ArgumentParser):
    p.add_argument("--grid-n", type=int, help="circle grid size N (even, >= 8)")
    p.add_argument("--seed", type=int, help="RNG seed")
    p.add_argument("--out", help=f"output directory (default: ${OUTPUT_ENV} or ./bishop_out)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for grid points")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bishop-discs", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="sweep a scenario and write report.json + discs.csv")
    p.add_argument("config", help="scenario JSON file")
    _common(p)

    p = sub.add_parser("verify", help="run one invariant suite")
    p.add_argument("suite", choices=runner.SUITES)
    p.add_argument("--config", help="scenario JSON file (defaults apply otherwise)")
    _common(p)

    p = sub.add_parser("flat", help="emit the closed-form flat family")
    p.add_argument("--config", help="scenario JSON file (defaults apply otherwise)")
    _common(p)

    p = sub.add_parser("export-plots", help="write Hopf tables (1-|zeta|, |rho(H)|, dist) as CSV")
    p.add_argument("config", help="scenario JSON file with a 'domain' entry")
    _common(p)
    return ap


def _load(args) -> ScenarioConfig:
    path = getattr(args, "config", None)
    cfg = load_config(path) if path else parse_config({})
    if args.grid_n is not None:
        if args.grid_n < 8 or args.grid_n % 2:
            raise ConfigError("--grid-n must be an even integer >= 8")
        cfg.grid_n = args.grid_n
    if args.seed is not None:
        cfg.seed = args.seed
    if args.out is not None:
        cfg.output = args.out
    if args.jobs < 1:
        raise ConfigError("--jobs must be >= 1")
    return cfg


def _summarize(report) -> None:
    for inv in report.invariants:
        status = "PASS" if inv["passed"] else "FAIL"
        print(f"{status} {inv['name']}: value={inv['value']!r} threshold={inv['threshold']!r}")
    if report.records:
        acc = sum(r["status"] == "accepted" for r in report.records)
        print(f"{acc}/{len(report.records)} grid points accepted")


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _load(args)
    except (ConfigError, OSError) as exc:
        print(f"bishop-discs: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    extra = {}
    try:
        if args.command == "run":
            report, elapsed = runner.timed(runner.run, cfg, args.jobs)
        elif args.command == "verify":
            report, elapsed = runner.timed(runner.verify, args.suite, cfg, args.jobs)
        elif args.command == "flat":
            report, elapsed = runner.timed(runner.flat_family, cfg)
        else:
            (report, table), elapsed = runner.timed(runner.export_plots, cfg, args.jobs)
            extra["hopf_table.csv"] = table
    except InvalidInput as exc:
        print(f"bishop-discs: {exc}", file=sys.stderr)
        return EXIT_USAGE

    out = Path(cfg.output_dir())
    paths = runner.write_outputs(report, out, elapsed=elapsed, argv=argv, jobs=args.jobs,
                                 export_traces=cfg.export_traces or args.command == "flat",
                                 extra=extra)
    _summarize(report)
    for p in paths:
        log.info("wrote %s", p)
    return EXIT_OK if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
