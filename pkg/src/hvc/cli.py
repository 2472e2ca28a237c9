"""Command line entry point: ``hvc gen|run|eval|bench|report``."""

from __future__ import annotations

import argparse
import logging
import sys

from . import experiment

COMMANDS = {
    "gen": experiment.cmd_gen,
    "run": experiment.cmd_run,
    "eval": experiment.cmd_eval,
    "bench": experiment.cmd_bench,
    "report": experiment.cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hvc",
        description="Hypervolume contribution approximation experiments.",
    )
    parser.add_argument("command", choices=sorted(COMMANDS), help="pipeline stage to run")
    parser.add_argument("--config", help="experiment config (JSON); desk-scale defaults if omitted")
    parser.add_argument("--seed", type=int, help="override the master seed (unsigned 64-bit)")
    parser.add_argument("--out", help="override the output directory")
    parser.add_argument("--paper-scale", action="store_true", help="use the full published grid")
    parser.add_argument("--workers", type=int, help="process pool size for 'run'")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = experiment.load_config(args.config, seed=args.seed, out=args.out,
                                     paper_scale=args.paper_scale, workers=args.workers)
        COMMANDS[args.command](cfg)
    except experiment.PipelineError as exc:
        print(f"hvc {args.command}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"hvc {args.command}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
