"""Command-line entry point: ``epsverify check <config.json> [options]``."""

import argparse
import sys

from .config import load_config, override
from .errors import ConfigError
from .suite import emit_report, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _epsilon(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"epsilon must be +1 or -1, got {text!r}") from None
    if value not in (1, -1):
        raise argparse.ArgumentTypeError(f"epsilon must be +1 or -1, got {text!r}")
    return value


def build_parser():
    parser = argparse.ArgumentParser(prog="epsverify", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    check = sub.add_parser("check", help="run the verification suite")
    check.add_argument("config", nargs="?", help="JSON config file (optional with --model)")
    check.add_argument("--model", help="built-in model name (overrides the config)")
    check.add_argument("--epsilon", type=_epsilon, help="+1 or -1")
    check.add_argument("--points", type=int, help="number of sample points")
    check.add_argument("--seed", type=int, help="sampling seed")
    check.add_argument("--tol-predicate", type=float, help="tolerance for condition predicates")
    check.add_argument("--checks", help="comma-separated condition names")
    check.add_argument("--report", choices=("text", "json"), default="text")
    check.add_argument("--out", help="write the report here instead of standard output")
    check.add_argument("--jobs", type=int, default=1, help="evaluate points on this many threads")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_PASS
    try:
        if args.config is not None:
            config = load_config(args.config)
        elif args.model is not None:
            config = load_config({"model": args.model})
        else:
            raise ConfigError("need a config file or --model")
        checks = None
        if args.checks is not None:
            checks = [c.strip() for c in args.checks.split(",") if c.strip()]
        config = override(
            config,
            model=args.model,
            epsilon=args.epsilon,
            points=args.points,
            seed=args.seed,
            tol_predicate=args.tol_predicate,
            checks=checks,
        )
        report = run_suite(config, workers=args.jobs)
        emit_report(report, args.report, args.out)
    except ConfigError as exc:
        print(f"epsverify: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
