"""Command-line front end: ``risscatter <workflow> --config FILE``.

Exit codes: 0 success, 1 unexpected failure or red self-test, 2 configuration
error, 3 numerical error (instability or inadmissible pattern).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .config import WORKFLOWS, ConfigError, load_config, validate
from .errors import ConfigurationError, DomainError, InadmissiblePatternError, InstabilityError
from .results import emit, make_metadata

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", required=True, type=Path, help="scenario JSON file")
    p.add_argument("--out", type=Path, help="output directory (default: config output.dir or .)")
    p.add_argument("--format", choices=("csv", "json"), help="table format (default: csv)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    p.add_argument("--seed", type=int, help="override the config seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="risscatter", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for wf in WORKFLOWS:
        _add_run_flags(sub.add_parser(wf, help=f"run the {wf} workflow"))
    _add_run_flags(sub.add_parser("run", help="run the workflow named in the config"))
    st = sub.add_parser("selftest", help="run the acceptance checks")
    st.add_argument("--only", type=int, nargs="*", help="criterion numbers to run")
    return parser


def _echo_config(cfg: dict) -> None:
    print("offending configuration:", file=sys.stderr)
    print(json.dumps(cfg, indent=2, sort_keys=True), file=sys.stderr)


def run_scenario(args) -> int:
    from .workflows import run_workflow

    workflow = None if args.command == "run" else args.command
    try:
        cfg = load_config(args.config, workflow)
        if args.seed is not None:
            cfg = validate({**cfg, "seed": args.seed}, workflow)
        if args.jobs < 1:
            raise ConfigError(f"--jobs must be >= 1, got {args.jobs}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out_cfg = cfg.get("output", {})
    out_dir = args.out or Path(out_cfg.get("dir", "."))
    fmt = args.format or out_cfg.get("format", "csv")
    prefix = out_cfg.get("prefix", cfg["workflow"])

    try:
        tables = run_workflow(cfg, args.jobs)
    except (InstabilityError, InadmissiblePatternError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        _echo_config(cfg)
        return EXIT_NUMERIC
    except (ConfigurationError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    # outputs are only written once every table is computed
    meta = make_metadata(cfg, cfg.get("seed", 0))
    out_dir.mkdir(parents=True, exist_ok=True)
    for t in tables:
        t.metadata = meta
        path = emit(t, out_dir / f"{prefix}_{t.name}.{fmt}", fmt)
        print(path)
    if fmt == "csv":
        side = out_dir / f"{prefix}_metadata.json"
        side.write_text(json.dumps(meta, indent=1, sort_keys=True) + "\n")
    return EXIT_OK


def run_selftest(args) -> int:
    from .acceptance import run_all

    results = run_all(args.only)
    for r in results:
        print(r.line(), flush=True)
    n_ok = sum(r.passed for r in results)
    print(f"{n_ok}/{len(results)} criteria passed")
    return EXIT_OK if n_ok == len(results) else EXIT_FAIL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "selftest":
        return run_selftest(args)
    return run_scenario(args)


if __name__ == "__main__":
    sys.exit(main())
