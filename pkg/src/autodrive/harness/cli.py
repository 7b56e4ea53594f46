"""Command-line entry point.

Exit codes: 0 on success, 1 for runtime failures (bad files, invalid configs),
2 for usage errors (argparse's convention for unknown commands and flags).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from ..env import Environment
from ..neat.config import NeatConfig
from ..neat.genome_io import load_genome
from ..qlearn import QConfig, evaluate, load_qtable
from .csvio import write_episode_csv
from .experiment import (
    DEFAULT_MAP_SEED,
    ExperimentConfig,
    build_env_config,
    compare_runs,
    default_output_dir,
    load_experiment_config,
    resolve_track,
    rollout_genome,
    run_experiment,
    write_default_maps,
)
from .plots import PLOT_KINDS, render_plot

# short flag-friendly aliases alongside the canonical kind names
_PLOT_ALIASES = {
    "reward-avg100": "RewardPerEpisodeAvg100",
    "reward": "RewardPerEpisode",
    "best-fitness": "BestFitness",
    "best-mean-fitness": "BestMeanFitness",
    "mean-fitness": "MeanFitness",
    "species-fitness": "SpeciesFitness",
    "species-diversity": "SpeciesDiversity",
}


def _experiment_config(args: argparse.Namespace, algorithm: str) -> ExperimentConfig:
    if args.config:
        cfg = load_experiment_config(args.config)
    else:
        cfg = ExperimentConfig(algorithm=algorithm)
    replacements: dict = {"algorithm": algorithm}
    if args.map:
        replacements["map"] = args.map
    if args.seed:
        replacements["seeds"] = list(args.seed)
    cfg = dataclasses.replace(cfg, **replacements)
    return cfg


def _cmd_gen_maps(args: argparse.Namespace) -> int:
    out = Path(args.out) if args.out else default_output_dir(None) / "maps"
    written = write_default_maps(out, seed=args.seed)
    for p in written:
        print(p)
    return 0


def _cmd_train(args: argparse.Namespace, algorithm: str) -> int:
    cfg = _experiment_config(args, algorithm)
    summary = run_experiment(cfg, out_dir=args.out)
    print(summary)
    return 0


def _cmd_eval_q(args: argparse.Namespace) -> int:
    cfg = load_experiment_config(args.config) if args.config else ExperimentConfig()
    track = resolve_track(args.map or cfg.map, cfg.map_seed)
    qcfg = QConfig(**{**cfg.q, "seed": args.seed[0] if args.seed else 0})
    env_cfg = build_env_config(cfg.env)
    table = load_qtable(args.table)
    records = evaluate(table, track, qcfg, env_cfg)
    out = default_output_dir(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_episode_csv(records, out / "eval_metrics.csv")
    mean_reward = sum(r.total_reward for r in records) / len(records)
    lap_rate = sum(r.laps >= 1 for r in records) / len(records)
    print(f"episodes {len(records)}  mean reward {mean_reward:.2f}  lap rate {lap_rate:.3f}")
    print(out / "eval_metrics.csv")
    return 0


def _cmd_eval_genome(args: argparse.Namespace) -> int:
    cfg = load_experiment_config(args.config) if args.config else ExperimentConfig()
    track = resolve_track(args.map or cfg.map, cfg.map_seed)
    env_cfg = build_env_config(cfg.env)
    lap_limit = NeatConfig(**cfg.neat).lap_limit
    genome = load_genome(args.genome)
    result = rollout_genome(genome, Environment(track, env_cfg), lap_limit)
    print(
        f"fitness {result['fitness']:.6f}  laps {result['laps']}  "
        f"distance {result['distance']:.1f}  steps {result['steps']}  "
        f"{'crashed' if result['crashed'] else 'survived'}"
    )
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "genome_eval.json").write_text(
            json.dumps(result, indent=2, sort_keys=True) + "\n"
        )
        print(out / "genome_eval.json")
    return 0


def _cmd_plot(args: argparse.Namespace) -> int:
    kind = _PLOT_ALIASES.get(args.kind, args.kind)
    render_plot(kind, args.csv, args.out)
    print(args.out)
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    out = default_output_dir(args.out)
    text = compare_runs(args.q, args.neat, out)
    print(text, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="autodrive",
        description="Train and compare tabular Q-learning and neuroevolved "
        "drivers on 2D occupancy-grid tracks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-maps", help="write the four track archetypes to disk")
    p.add_argument("--out", default=None, help="output directory")
    p.add_argument("--seed", type=int, default=DEFAULT_MAP_SEED)
    p.set_defaults(func=_cmd_gen_maps)

    for name, algo in (("train-q", "q"), ("train-neat", "neat")):
        p = sub.add_parser(name, help=f"run {algo} training across seeds")
        p.add_argument("--map", default=None, help="archetype name or track file path")
        p.add_argument("--config", default=None, help="experiment config JSON")
        p.add_argument("--seed", type=int, action="append", default=None)
        p.add_argument("--out", default=None, help="output root directory")
        p.set_defaults(func=lambda a, algo=algo: _cmd_train(a, algo))

    p = sub.add_parser("eval-q", help="evaluate a saved Q-table")
    p.add_argument("--map", default=None)
    p.add_argument("--table", required=True, help="saved Q-table file")
    p.add_argument("--config", default=None)
    p.add_argument("--seed", type=int, action="append", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_eval_q)

    p = sub.add_parser("eval-genome", help="roll out a saved genome once")
    p.add_argument("--map", default=None)
    p.add_argument("--genome", required=True, help="saved genome JSON")
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_eval_genome)

    p = sub.add_parser("plot", help="render a metric CSV to SVG")
    p.add_argument(
        "--kind",
        required=True,
        choices=sorted(_PLOT_ALIASES) + list(PLOT_KINDS),
        metavar="KIND",
        help=f"one of {', '.join(sorted(_PLOT_ALIASES))}",
    )
    p.add_argument("--csv", required=True, help="input CSV path")
    p.add_argument("--out", required=True, help="output SVG path")
    p.set_defaults(func=_cmd_plot)

    p = sub.add_parser("compare", help="tabulate q vs neat runs on matching maps")
    p.add_argument("--q", action="append", required=True, help="q summary.json (repeatable)")
    p.add_argument(
        "--neat", action="append", required=True, help="neat summary.json (repeatable)"
    )
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_compare)
    return parser


def cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli())
