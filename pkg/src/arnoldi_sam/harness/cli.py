"""Command-line entry point: ``python -m arnoldi_sam <subcommand>``."""
from __future__ import annotations

import argparse
import logging
import sys

from . import output
from .config import ConfigError, config_from_dict, load_config, validate
from .experiments import run_experiment

SUBCOMMANDS = {
    "eig-study": "eig_study",
    "variants": "variant_compare",
    "benchmark": "benchmark",
    "run": "single_run",
}

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    # usage errors are configuration errors; argparse would otherwise exit 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="arnoldi_sam", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "eig-study": "eigenvalue accuracy of Arnoldi sampling under gradient noise",
        "variants": "single-step comparison of the step-average and directional models",
        "benchmark": "SAM vs BFGS vs Nelder-Mead on the weighted Rosenbrock problem",
        "run": "one optimizer run with a per-iteration trace",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", help="YAML config file (defaults apply for missing keys)")
        p.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
        p.add_argument("--runs", type=int, help="replications per cell")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), help="output format")
        p.add_argument("--quiet", action="store_true", help="suppress progress messages")
    return parser


def _load(args, kind):
    cfg = load_config(args.config) if args.config else config_from_dict({"experiment": kind})
    if cfg.experiment != kind:
        raise ConfigError(f"config is for {cfg.experiment!r}, but subcommand runs {kind!r}")
    if args.seed is not None:
        cfg.seed = args.seed
    if args.runs is not None:
        cfg.runs = args.runs
    if args.out is not None:
        cfg.output.path = args.out
    if args.format is not None:
        cfg.output.format = args.format
    validate(cfg)
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = _load(args, SUBCOMMANDS[args.command])
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        result = run_experiment(cfg)
        text = output.render(result, cfg.output.format)
        if cfg.output.path:
            with open(cfg.output.path, "w", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except Exception as exc:  # noqa: BLE001 - any failure maps to the runtime exit code
        logging.getLogger(__name__).exception("run failed")
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    if not args.quiet:
        for row in result.summary:
            st = row.stats
            idx = "" if row.index is None else f"[{row.index}]"
            print(f"{row.cell:<50s} {row.quantity}{idx:<5s} median={st.median:.4e} "
                  f"q025={st.quantile_025:.4e} q975={st.quantile_975:.4e} n={st.count}", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
