"""Command-line interface.

    decolab run <config> [--verify] [--out DIR] [--format FMT]
    decolab compare-regimes <config>
    decolab selftest

Exit status is zero only when every file was written and every enabled
verification check passed.
"""

import argparse
import sys
import warnings

from .config import load_config
from .core import ConfigError, RegimeBreakdownError
from .output import FORMATS
from .runner import compare_regimes, run
from .selftest import run_selftest


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decolab",
        description="Closed-form decoherence models with built-in numerical verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="evaluate a config and write its outputs")
    p_run.add_argument("config", help="path to a run configuration file")
    p_run.add_argument("--verify", action="store_true", default=None,
                       help="enable the oracle cross-checks for this run")
    p_run.add_argument("--out", default=None, metavar="DIR",
                       help="override the configured output directory")
    p_run.add_argument("--format", default=None, choices=FORMATS, dest="fmt",
                       help="override the configured data-file format")

    p_cmp = sub.add_parser("compare-regimes",
                           help="tabulate entangled vs decoupled high-T decay side by side")
    p_cmp.add_argument("config", help="path to a free-cat configuration file")

    sub.add_parser("selftest", help="run the numerical oracle battery")
    return parser


def _cmd_run(args) -> int:
    config = load_config(args.config).with_overrides(
        verify=args.verify, output_dir=args.out, fmt=args.fmt
    )
    report = run(config)
    print(f"wrote {len(report.files)} file(s) + report.txt to {report.output_dir}")
    for text in report.warnings:
        print(f"warning: {text}", file=sys.stderr)
    if report.verification is not None:
        for check in report.verification:
            status = "PASS" if check.passed else "FAIL"
            print(f"verify {check.name}: {status} "
                  f"(deviation {check.deviation:.3e}, tolerance {check.tolerance:.3e})")
    return report.exit_code()


def _cmd_compare(args) -> int:
    config = load_config(args.config)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        path = compare_regimes(config)
    seen = []
    for w in caught:
        text = str(w.message)
        if text not in seen:
            seen.append(text)
            print(f"warning: {text}", file=sys.stderr)
    print(f"wrote {path}")
    return 0


def _cmd_selftest() -> int:
    results = run_selftest()
    failed = 0
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        if not res.passed:
            failed += 1
        print(f"selftest {res.name}: {status} "
              f"(deviation {res.deviation:.3e}, tolerance {res.tolerance:.3e})")
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "compare-regimes":
            return _cmd_compare(args)
        return _cmd_selftest()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (RegimeBreakdownError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_entry() -> None:
    sys.exit(main())
