"""Command line entry for benchmark runs."""

import argparse
import os
import sys
from pathlib import Path
from typing import List, Optional
from dotenv import load_dotenv
from pydantic import ValidationError
from app.models.config_models import CopyMode, QueryMode, SelectionRule, UpdateMode
from app.models.experiment_models import (
    Algorithm, ExperimentSpec, StreamOrder, StreamSource, SynthSpec
)
from app.services.evaluation import summarize_metrics
from app.services.experiment_runner import run_experiment
from app.utils.errors import SlidingKError
from app.utils.logger_config import get_logger

logger = get_logger(__name__)


def _default_seed() -> int:
    value = os.getenv("SLIDINGK_SEED", "0")
    try:
        return int(value)
    except ValueError:
        logger.warning(f"Ignoring non-integer SLIDINGK_SEED={value!r}")
        return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Sliding-window k-clustering benchmark: sketch vs. sampling vs. batch"
    )
    origin = parser.add_mutually_exclusive_group(required=True)
    origin.add_argument("--input", help="CSV stream, one point per row")
    origin.add_argument("--synth", help="Synthetic blobs as k:n:d:sep")

    parser.add_argument("--window", type=int, required=True, help="Window size w")
    parser.add_argument("--k", type=int, required=True, help="Number of centers")
    parser.add_argument("--p", type=float, default=2.0, help="Objective exponent (1 median, 2 means)")
    parser.add_argument("--delta", type=float, default=0.2, help="λ grid ratio minus one")
    parser.add_argument("--epsilon", type=float, default=0.05, help="Histogram and shell accuracy")
    parser.add_argument("--gamma", type=float, default=0.1, help="Failure probability")
    parser.add_argument("--seed", type=int, default=None, help="Master seed (default: $SLIDINGK_SEED or 0)")
    parser.add_argument(
        "--algos", default="sketch,sampling,batch",
        help="Comma-separated subset of sketch,sampling,batch"
    )
    parser.add_argument("--query-every", type=int, default=100, help="Query cadence in points")
    parser.add_argument("--bounds-samples", type=int, default=10, help="Windows sampled for bounds")
    parser.add_argument("--copies", choices=[c.value for c in CopyMode], default=CopyMode.SINGLE.value)
    parser.add_argument("--out", default="results/metrics.csv", help="Metrics CSV path")

    update = parser.add_mutually_exclusive_group()
    update.add_argument("--lazy", dest="update_mode", action="store_const", const=UpdateMode.LAZY.value)
    update.add_argument("--exact", dest="update_mode", action="store_const", const=UpdateMode.EXACT.value)
    query = parser.add_mutually_exclusive_group()
    query.add_argument("--best-effort", dest="query_mode", action="store_const", const=QueryMode.BEST_EFFORT.value)
    query.add_argument("--strict", dest="query_mode", action="store_const", const=QueryMode.STRICT.value)
    parser.set_defaults(update_mode=UpdateMode.LAZY.value, query_mode=QueryMode.BEST_EFFORT.value)

    parser.add_argument("--order", choices=[o.value for o in StreamOrder], default=StreamOrder.NATURAL.value)
    parser.add_argument("--label-column", type=int, default=None, help="Index of the label column")
    parser.add_argument("--no-standardize", action="store_true", help="Keep raw coordinates")
    parser.add_argument("--bounded", action="store_true", help="Restart sketches every w points")
    parser.add_argument("--no-replacements", action="store_true", help="Keep expired centers in suffix sketches")
    parser.add_argument(
        "--selection-rule", choices=[r.value for r in SelectionRule],
        default=SelectionRule.PSEUDOCODE.value
    )
    return parser


def spec_from_args(args: argparse.Namespace) -> ExperimentSpec:
    """Translate parsed flags into an ExperimentSpec."""
    source = StreamSource(
        path=args.input,
        synth=SynthSpec.parse(args.synth) if args.synth else None,
        order=args.order,
        label_column=args.label_column,
        standardize=not args.no_standardize,
    )
    algos = [Algorithm(name.strip()) for name in args.algos.split(",") if name.strip()]
    return ExperimentSpec(
        source=source,
        window=args.window,
        k=args.k,
        p=args.p,
        epsilon=args.epsilon,
        delta=args.delta,
        gamma=args.gamma,
        copies=args.copies,
        update_mode=args.update_mode,
        query_mode=args.query_mode,
        selection_rule=args.selection_rule,
        use_replacements=not args.no_replacements,
        bounded=args.bounded,
        algos=algos,
        query_every=args.query_every,
        bounds_samples=args.bounds_samples,
        seed=args.seed if args.seed is not None else _default_seed(),
        out=args.out,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Run one experiment; returns the process exit code."""
    if Path(".env").exists():
        load_dotenv()
    args = build_parser().parse_args(argv)
    try:
        spec = spec_from_args(args)
        rows = run_experiment(spec)
    except (SlidingKError, ValidationError, ValueError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return 1

    for algo, stats in summarize_metrics(rows, spec.window).items():
        print(
            f"{algo}: median cost {stats['median_cost']:.6g}, "
            f"max stored {stats['max_points_stored']}, "
            f"distance evals {stats['distance_evals']}"
        )
    print(f"Metrics written to {spec.out}")
    return 0
