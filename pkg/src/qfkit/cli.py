"""Command-line entry point.

Subcommands `portfolio`, `price`, `risk`, and `qml` run one case each and
write its CSV report plus JSON manifest. Exit codes: 0 success, 2 config
error, 3 data error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

from .harness import ConfigError, DataError, NumericalError, RunConfig, run_case, write_report

EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qfkit", description=__doc__)
    parser.add_argument("--config", help="JSON config file (flat object; unknown keys are errors)")
    parser.add_argument("--data-dir", help="directory of snapshot CSVs (synthesised when missing)")
    parser.add_argument("--seed", type=int, help="run seed")
    parser.add_argument("--out", default="reports", help="output directory (default: reports)")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("portfolio", "price", "risk"):
        sub.add_parser(name, help=f"run the {name} case")
    qml_parser = sub.add_parser("qml", help="run a classification case")
    qml_parser.add_argument("--variant", choices=("a", "b"), default="a", help="case variant (default a)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    case = args.command if args.command != "qml" else f"qml-{args.variant}"
    try:
        if args.config:
            cfg = RunConfig.from_json(args.config)
            if cfg.case != case:
                raise ConfigError(f"config names case {cfg.case!r} but the command asked for {case!r}")
        else:
            cfg = RunConfig(case=case)
        if args.seed is not None:
            cfg = RunConfig(case=cfg.case, seed=args.seed, data_dir=cfg.data_dir, params=cfg.params)
        if args.data_dir is not None:
            cfg = RunConfig(case=cfg.case, seed=cfg.seed, data_dir=args.data_dir, params=cfg.params)
        bundle = run_case(cfg)
        for path in write_report(bundle, args.out):
            print(path)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (NumericalError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
