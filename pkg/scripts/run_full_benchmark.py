"""Run the whole campaign: both algorithms on all four tracks, then report.

Full scale uses the library defaults (30000 training episodes for the tabular
learner, population 200 for 100 generations for the evolved one) and takes a
couple of hours on one core.  --quick drops to desk-scale budgets and finishes
in minutes; outputs land under --out in the same layout either way.
"""

import argparse
import sys
import time
from pathlib import Path

from autodrive.car import EnvConfig
from autodrive.harness.experiment import (
    DEFAULT_MAP_SEED,
    compare_runs,
    run_neat_experiment,
    run_q_experiment,
)
from autodrive.harness.plots import render_plot
from autodrive.mapgen import Archetype, generate_map
from autodrive.neat.config import NeatConfig
from autodrive.qlearn import QConfig

# (kind, csv name, svg name) per algorithm directory.
_Q_PLOTS = (
    ("RewardPerEpisodeAvg100", "train_avg100.csv", "reward_avg100.svg"),
    ("RewardPerEpisode", "train_metrics.csv", "reward.svg"),
)
_NEAT_PLOTS = (
    ("BestFitness", "generations.csv", "best_fitness.svg"),
    ("BestMeanFitness", "generations.csv", "best_mean_fitness.svg"),
    ("MeanFitness", "generations.csv", "mean_fitness.svg"),
    ("SpeciesFitness", "species.csv", "species_fitness.svg"),
    ("SpeciesDiversity", "generations.csv", "species_diversity.svg"),
)


def _plot_seed_dirs(summary: Path, plots) -> None:
    for seed_dir in sorted(summary.parent.glob("seed*")):
        for kind, csv_name, svg_name in plots:
            csv_path = seed_dir / csv_name
            if csv_path.exists():
                render_plot(kind, csv_path, seed_dir / svg_name)


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="out", help="output root (default: out)")
    ap.add_argument(
        "--seeds", type=int, nargs="+", default=[0, 1, 2], help="training seeds"
    )
    ap.add_argument("--map-seed", type=int, default=DEFAULT_MAP_SEED)
    ap.add_argument(
        "--maps",
        nargs="+",
        default=[a.value for a in Archetype],
        choices=[a.value for a in Archetype],
    )
    ap.add_argument(
        "--quick",
        action="store_true",
        help="desk-scale budgets for a smoke run",
    )
    args = ap.parse_args(argv)

    if args.quick:
        qcfg = QConfig(episodes_train=2500, episodes_eval=50)
        ncfg = NeatConfig(population=48, generations=12)
    else:
        qcfg = QConfig()
        ncfg = NeatConfig()
    env_cfg = EnvConfig()
    out_root = Path(args.out)

    q_summaries: list[Path] = []
    neat_summaries: list[Path] = []
    for name in args.maps:
        track = generate_map(name, seed=args.map_seed)
        t0 = time.perf_counter()
        summary = run_q_experiment(track, qcfg, env_cfg, args.seeds, out_root)
        print(f"{name}: q done in {time.perf_counter() - t0:.0f}s", flush=True)
        _plot_seed_dirs(summary, _Q_PLOTS)
        q_summaries.append(summary)

        t0 = time.perf_counter()
        summary = run_neat_experiment(track, ncfg, env_cfg, args.seeds, out_root)
        print(f"{name}: neat done in {time.perf_counter() - t0:.0f}s", flush=True)
        _plot_seed_dirs(summary, _NEAT_PLOTS)
        neat_summaries.append(summary)

    report = compare_runs(q_summaries, neat_summaries, out_root / "report")
    print(report)
    return 0


if __name__ == "__main__":
    sys.exit(main())
