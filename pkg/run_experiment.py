#!/usr/bin/env python3
"""
Sub-center speaker embedding experiments - CLI.
Usage:
  python run_experiment.py generate --config cfg.json
  python run_experiment.py train --config cfg.json --variant sub8
  python run_experiment.py evaluate --checkpoint runs/x/checkpoint.json --corpus corpus_eval.csv --trials 10000 --seed 0
  python run_experiment.py experiment --config cfg.json

Exit codes: 0 success, 1 validation error, 2 runtime failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

# Ensure project root is on path
ROOT = Path(__file__).resolve().parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from loguru import logger

from experiment import cmd_evaluate, cmd_experiment, cmd_generate, cmd_train, render_table

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Sub-center AAM-Softmax embedding experiments")
    parser.add_argument("--verbose", "-v", action="store_true", help="Verbose (debug) logging")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="Generate the synthetic corpus and its speaker split")
    gen.add_argument("--config", default=None, help="Experiment config (JSON/YAML); default config/settings.yaml")

    tr = sub.add_parser("train", help="Train one loss variant")
    tr.add_argument("--config", default=None, help="Experiment config (JSON/YAML)")
    tr.add_argument("--variant", required=True, help="Variant name from the config")
    tr.add_argument("--seed", type=int, default=None, help="Run seed (default: first of `seeds`)")

    ev = sub.add_parser("evaluate", help="Evaluate a checkpoint on unseen speakers")
    ev.add_argument("--checkpoint", required=True)
    ev.add_argument("--corpus", required=True, help="Evaluation corpus CSV")
    ev.add_argument("--trials", type=int, required=True)
    ev.add_argument("--seed", type=int, required=True)
    ev.add_argument("--train-corpus", default=None, help="Training corpus CSV, enables sub-center utilization")
    ev.add_argument("--output", default=None, help="Report path (default: metrics.json beside the checkpoint)")

    ex = sub.add_parser("experiment", help="Run the variant x seed grid and write the summary table")
    ex.add_argument("--config", default=None, help="Experiment config (JSON/YAML)")
    return parser


def run(args: argparse.Namespace) -> int:
    if args.command == "generate":
        cmd_generate(args.config)
        return EXIT_OK
    if args.command == "train":
        cmd_train(args.config, args.variant, args.seed)
        return EXIT_OK
    if args.command == "evaluate":
        cmd_evaluate(args.checkpoint, args.corpus, args.trials, args.seed, args.train_corpus, args.output)
        return EXIT_OK
    summary = cmd_experiment(args.config)
    print(render_table(summary.rows), end="")
    return EXIT_RUNTIME if summary.failed else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad usage; that is a validation error here
        return EXIT_VALIDATION if e.code else EXIT_OK
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if args.verbose else "INFO")
    try:
        return run(args)
    except ValueError as e:
        logger.error(str(e))
        return EXIT_VALIDATION
    except (RuntimeError, OSError) as e:
        logger.error(str(e))
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
