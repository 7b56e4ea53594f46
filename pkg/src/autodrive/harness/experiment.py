"""Experiment orchestration: config files, output layout, run drivers, comparison.

Output layout for one run:

    <out>/<map name>/<algorithm>/seed<N>/   per-seed CSVs and artifacts
    <out>/<map name>/<algorithm>/summary.json
    <out>/<map name>/<algorithm>/timing.json

summary.json and every CSV are pure functions of config and seed; wall-clock
numbers live only in timing.json so reruns stay byte-identical elsewhere.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from ..car import EnvConfig
from ..env import Environment
from ..mapgen import Archetype, generate_map
from ..neat.config import NeatConfig
from ..neat.evolution import run_neat
from ..neat.genome_io import save_genome
from ..neat.genes import Genome
from ..neat.network import action_from_outputs, build_phenotype
from ..qlearn import QConfig, evaluate, save_qtable, train
from ..track import TrackError, TrackMap, load_track, save_track
from .csvio import (
    block_averages,
    write_avg100_csv,
    write_episode_csv,
    write_generation_csv,
    write_species_csv,
)

DEFAULT_MAP_SEED = 7
OUT_ENV_VAR = "AUTODRIVE_OUT"

_ARCHETYPE_VALUES = tuple(a.value for a in Archetype)


@dataclass
class ExperimentConfig:
    map: str = "simple_loop"
    algorithm: str = "q"
    seeds: list[int] = field(default_factory=lambda: [0, 1, 2])
    output_dir: str | None = None
    map_seed: int = DEFAULT_MAP_SEED
    env: dict = field(default_factory=dict)
    q: dict = field(default_factory=dict)
    neat: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.algorithm not in ("q", "neat"):
            raise ValueError(f"algorithm must be 'q' or 'neat', got {self.algorithm!r}")
        if not self.seeds:
            raise ValueError("seeds must be non-empty")
        _check_keys(self.env, EnvConfig, "env")
        _check_keys(self.q, QConfig, "q")
        _check_keys(self.neat, NeatConfig, "neat")


def _check_keys(overrides: dict, cls: type, section: str) -> None:
    allowed = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(overrides) - allowed)
    if unknown:
        raise ValueError(f"unknown {section} config keys: {', '.join(unknown)}")


def load_experiment_config(path: str | Path) -> ExperimentConfig:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid config file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError(f"invalid config file {path}: expected a JSON object")
    allowed = {f.name for f in dataclasses.fields(ExperimentConfig)}
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(unknown)}")
    return ExperimentConfig(**data)


def default_output_dir(explicit: str | None = None) -> Path:
    if explicit:
        return Path(explicit)
    return Path(os.environ.get(OUT_ENV_VAR, "out"))


def build_env_config(overrides: dict) -> EnvConfig:
    kwargs = dict(overrides)
    if "car_half_extents" in kwargs:
        kwargs["car_half_extents"] = tuple(kwargs["car_half_extents"])
    return EnvConfig(**kwargs)


def resolve_track(spec: str, map_seed: int = DEFAULT_MAP_SEED) -> TrackMap:
    """Accept either an archetype name (regenerated from map_seed) or a path to
    a saved .pgm/.json pair."""
    if spec in _ARCHETYPE_VALUES:
        return generate_map(spec, seed=map_seed)
    p = Path(spec)
    if p.suffix == ".pgm":
        mask, meta = p, p.with_suffix(".json")
    elif p.suffix == ".json":
        mask, meta = p.with_suffix(".pgm"), p
    else:
        mask, meta = p.with_suffix(".pgm"), p.with_suffix(".json")
    if mask.exists() and meta.exists():
        return load_track(mask, meta)
    raise TrackError(
        f"unknown map {spec!r}: not an archetype ({', '.join(_ARCHETYPE_VALUES)}) "
        f"and no track files at {mask}"
    )


def write_default_maps(out_dir: str | Path, seed: int = DEFAULT_MAP_SEED) -> list[Path]:
    """Generate all four archetypes into out_dir; returns the meta paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for arch in Archetype:
        track = generate_map(arch, seed=seed)
        mask = out / f"{track.name}.pgm"
        meta = out / f"{track.name}.json"
        save_track(track, mask, meta)
        written.append(meta)
    return written


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def run_q_experiment(
    track: TrackMap,
    base_cfg: QConfig,
    env_cfg: EnvConfig,
    seeds: Sequence[int],
    out_root: str | Path,
) -> Path:
    """Train and evaluate one Q-learning configuration per seed; returns the
    summary.json path."""
    algo_dir = Path(out_root) / track.name / "q"
    per_seed = []
    timings = []
    for seed in seeds:
        cfg = dataclasses.replace(base_cfg, seed=seed)
        seed_dir = algo_dir / f"seed{seed}"
        seed_dir.mkdir(parents=True, exist_ok=True)
        t0 = time.perf_counter()
        table, train_records = train(track, cfg, env_cfg)
        t1 = time.perf_counter()
        eval_records = evaluate(table, track, cfg, env_cfg)
        t2 = time.perf_counter()
        write_episode_csv(train_records, seed_dir / "train_metrics.csv")
        write_avg100_csv(train_records, seed_dir / "train_avg100.csv")
        write_episode_csv(eval_records, seed_dir / "eval_metrics.csv")
        save_qtable(table, seed_dir / "qtable.bin")
        n_eval = len(eval_records)
        ncp = len(track.checkpoints)
        blocks = block_averages([r.total_reward for r in train_records])
        per_seed.append(
            {
                "seed": seed,
                "eval_mean_reward": sum(r.total_reward for r in eval_records) / n_eval,
                "eval_lap_rate": sum(r.laps >= 1 for r in eval_records) / n_eval,
                "eval_checkpoint_rate": sum(
                    r.checkpoints_hit >= ncp for r in eval_records
                )
                / n_eval,
                "train_final_avg100": blocks[-1] if blocks else None,
            }
        )
        timings.append(
            {"seed": seed, "train_seconds": t1 - t0, "eval_seconds": t2 - t1}
        )
    cfg_dict = dataclasses.asdict(base_cfg)
    cfg_dict.pop("seed")
    aggregate = {
        "eval_mean_reward": sum(r["eval_mean_reward"] for r in per_seed) / len(per_seed),
        "eval_lap_rate": sum(r["eval_lap_rate"] for r in per_seed) / len(per_seed),
        "eval_checkpoint_rate": sum(r["eval_checkpoint_rate"] for r in per_seed)
        / len(per_seed),
    }
    _write_json(
        algo_dir / "summary.json",
        {
            "algorithm": "q",
            "map": track.name,
            "config": {"env": dataclasses.asdict(env_cfg), "q": cfg_dict},
            "seeds": list(seeds),
            "per_seed": per_seed,
            "aggregate": aggregate,
        },
    )
    _write_json(
        algo_dir / "timing.json",
        {
            "per_seed": timings,
            "total_seconds": sum(t["train_seconds"] + t["eval_seconds"] for t in timings),
        },
    )
    return algo_dir / "summary.json"


def rollout_genome(
    genome: Genome, env: Environment, lap_limit: int = 3
) -> dict:
    """One deterministic episode; mirrors fitness scoring while also reporting
    laps, distance, steps, and how the episode ended."""
    phenotype = build_phenotype(genome)
    radar, car = env.reset()
    inv = 1.0 / env.cfg.radar_max
    speed_sum = 0.0
    steps = 0
    crashed = False
    while True:
        outputs = phenotype.activate(tuple(d * inv for d in radar))
        radar, car, events = env.step(action_from_outputs(outputs))
        speed_sum += car.speed
        steps += 1
        if events.crashed or events.truncated:
            crashed = events.crashed
            break
        if lap_limit and car.laps_completed >= lap_limit:
            break
    return {
        "fitness": car.distance * (speed_sum / steps) * 1e-6,
        "laps": car.laps_completed,
        "distance": car.distance,
        "steps": steps,
        "crashed": crashed,
    }


def run_neat_experiment(
    track: TrackMap,
    base_cfg: NeatConfig,
    env_cfg: EnvConfig,
    seeds: Sequence[int],
    out_root: str | Path,
) -> Path:
    """Evolve one population per seed; returns the summary.json path."""
    algo_dir = Path(out_root) / track.name / "neat"
    per_seed = []
    timings = []
    env = Environment(track, env_cfg)
    for seed in seeds:
        cfg = dataclasses.replace(base_cfg, seed=seed)
        seed_dir = algo_dir / f"seed{seed}"
        seed_dir.mkdir(parents=True, exist_ok=True)
        t0 = time.perf_counter()
        best, history = run_neat(track, cfg, env_cfg)
        t1 = time.perf_counter()
        write_generation_csv(history, seed_dir / "generations.csv")
        write_species_csv(history, seed_dir / "species.csv")
        save_genome(best, seed_dir / "best_genome.json")
        probe = rollout_genome(best, env, cfg.lap_limit)
        per_seed.append(
            {
                "seed": seed,
                "best_fitness": best.fitness,
                "best_laps": probe["laps"],
                "best_distance": probe["distance"],
                "generations": len(history),
            }
        )
        timings.append({"seed": seed, "train_seconds": t1 - t0})
    cfg_dict = dataclasses.asdict(base_cfg)
    cfg_dict.pop("seed")
    aggregate = {
        "best_fitness": max(r["best_fitness"] for r in per_seed),
        "lap_completion_rate": sum(r["best_laps"] >= 1 for r in per_seed)
        / len(per_seed),
    }
    _write_json(
        algo_dir / "summary.json",
        {
            "algorithm": "neat",
            "map": track.name,
            "config": {"env": dataclasses.asdict(env_cfg), "neat": cfg_dict},
            "seeds": list(seeds),
            "per_seed": per_seed,
            "aggregate": aggregate,
        },
    )
    _write_json(
        algo_dir / "timing.json",
        {
            "per_seed": timings,
            "total_seconds": sum(t["train_seconds"] for t in timings),
        },
    )
    return algo_dir / "summary.json"


def run_experiment(cfg: ExperimentConfig, out_dir: str | Path | None = None) -> Path:
    """Resolve the track and dispatch on algorithm; returns summary.json path."""
    track = resolve_track(cfg.map, cfg.map_seed)
    out_root = Path(out_dir) if out_dir is not None else default_output_dir(cfg.output_dir)
    env_cfg = build_env_config(cfg.env)
    if cfg.algorithm == "q":
        qcfg = QConfig(**cfg.q)
        return run_q_experiment(track, qcfg, env_cfg, cfg.seeds, out_root)
    ncfg = NeatConfig(**cfg.neat)
    return run_neat_experiment(track, ncfg, env_cfg, cfg.seeds, out_root)


def _load_summary(path: str | Path) -> dict:
    data = json.loads(Path(path).read_text())
    for key in ("algorithm", "map", "per_seed", "aggregate"):
        if key not in data:
            raise ValueError(f"{path}: not a run summary (missing {key!r})")
    return data


def _load_timing(summary_path: str | Path) -> dict | None:
    p = Path(summary_path).with_name("timing.json")
    if not p.exists():
        return None
    return json.loads(p.read_text())


def compare_runs(
    q_summaries: Sequence[str | Path],
    neat_summaries: Sequence[str | Path],
    out_dir: str | Path,
) -> str:
    """Side-by-side report over matching maps; writes report.csv and report.txt,
    returns the text."""
    q_runs = [(_load_summary(p), _load_timing(p)) for p in q_summaries]
    n_runs = [(_load_summary(p), _load_timing(p)) for p in neat_summaries]
    for data, _ in q_runs:
        if data["algorithm"] != "q":
            raise ValueError(f"expected a q summary, got {data['algorithm']!r}")
    for data, _ in n_runs:
        if data["algorithm"] != "neat":
            raise ValueError(f"expected a neat summary, got {data['algorithm']!r}")
    q_maps = {d["map"] for d, _ in q_runs}
    n_maps = {d["map"] for d, _ in n_runs}
    if q_maps != n_maps:
        raise ValueError(
            f"map sets differ: q covers {sorted(q_maps)}, neat covers {sorted(n_maps)}"
        )

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    lines = []
    for map_name in sorted(q_maps):
        qd, qt = next((d, t) for d, t in q_runs if d["map"] == map_name)
        nd, nt = next((d, t) for d, t in n_runs if d["map"] == map_name)
        q_time = qt["total_seconds"] if qt else ""
        n_time = nt["total_seconds"] if nt else ""
        lines.append(f"map: {map_name}")
        lines.append(
            f"  q     mean eval reward {qd['aggregate']['eval_mean_reward']:.2f}, "
            f"lap rate {qd['aggregate']['eval_lap_rate']:.3f}"
            + (f", wall clock {q_time:.1f}s" if qt else "")
        )
        lines.append(
            f"  neat  best fitness {nd['aggregate']['best_fitness']:.4f}, "
            f"lap completion {nd['aggregate']['lap_completion_rate']:.3f}"
            + (f", wall clock {n_time:.1f}s" if nt else "")
        )
        q_seed_time = {t["seed"]: t for t in (qt or {}).get("per_seed", [])}
        n_seed_time = {t["seed"]: t for t in (nt or {}).get("per_seed", [])}
        for r in qd["per_seed"]:
            st = q_seed_time.get(r["seed"], {})
            secs = st.get("train_seconds", 0.0) + st.get("eval_seconds", 0.0)
            rows.append(
                [
                    map_name,
                    "q",
                    r["seed"],
                    repr(r["eval_mean_reward"]),
                    repr(r["eval_lap_rate"]),
                    "",
                    "",
                    f"{secs:.3f}" if st else "",
                ]
            )
            lines.append(
                f"    q seed {r['seed']}: mean reward {r['eval_mean_reward']:.2f}, "
                f"lap rate {r['eval_lap_rate']:.3f}"
            )
        for r in nd["per_seed"]:
            st = n_seed_time.get(r["seed"], {})
            rows.append(
                [
                    map_name,
                    "neat",
                    r["seed"],
                    "",
                    "",
                    repr(r["best_fitness"]),
                    r["best_laps"],
                    f"{st.get('train_seconds', 0.0):.3f}" if st else "",
                ]
            )
            lines.append(
                f"    neat seed {r['seed']}: best fitness {r['best_fitness']:.4f}, "
                f"laps {r['best_laps']}"
            )
        rows.append(
            [
                map_name,
                "q",
                "all",
                repr(qd["aggregate"]["eval_mean_reward"]),
                repr(qd["aggregate"]["eval_lap_rate"]),
                "",
                "",
                f"{q_time:.3f}" if qt else "",
            ]
        )
        rows.append(
            [
                map_name,
                "neat",
                "all",
                "",
                "",
                repr(nd["aggregate"]["best_fitness"]),
                repr(nd["aggregate"]["lap_completion_rate"]),
                f"{n_time:.3f}" if nt else "",
            ]
        )
    with open(out / "report.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "map",
                "algorithm",
                "seed",
                "mean_reward",
                "lap_rate",
                "best_fitness",
                "laps",
                "wall_clock_seconds",
            ]
        )
        writer.writerows(rows)
    text = "\n".join(lines) + "\n"
    (out / "report.txt").write_text(text)
    return text
