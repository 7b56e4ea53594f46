"""CSV reading and writing for training metrics.

Floats are written with repr so files round-trip exactly and reruns with the
same seed produce byte-identical output.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Sequence

from ..neat.evolution import GenerationStats
from ..qlearn import EpisodeRecord

EPISODE_FIELDS = (
    "episode",
    "total_reward",
    "steps",
    "distance",
    "checkpoints_hit",
    "laps",
    "epsilon",
    "lr",
    "terminal",
)


def _fmt(value: float | int | str) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_episode_csv(records: Sequence[EpisodeRecord], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(EPISODE_FIELDS)
        for r in records:
            writer.writerow(
                [
                    r.episode,
                    _fmt(r.total_reward),
                    r.steps,
                    _fmt(r.distance),
                    r.checkpoints_hit,
                    r.laps,
                    _fmt(r.epsilon),
                    _fmt(r.lr),
                    r.terminal,
                ]
            )


def block_averages(values: Sequence[float], block: int = 100) -> list[float]:
    """Means of consecutive non-overlapping complete blocks; the tail remainder
    is dropped."""
    if block < 1:
        raise ValueError("block must be >= 1")
    out = []
    for start in range(0, len(values) - block + 1, block):
        chunk = values[start : start + block]
        out.append(sum(chunk) / block)
    return out


def write_avg100_csv(
    records: Sequence[EpisodeRecord], path: str | Path, block: int = 100
) -> None:
    """One row per complete block: the block's last episode number and its
    mean total reward."""
    means = block_averages([r.total_reward for r in records], block)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["episode", "avg_reward"])
        for i, mean in enumerate(means):
            writer.writerow([records[(i + 1) * block - 1].episode, _fmt(mean)])


def write_generation_csv(history: Sequence[GenerationStats], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["generation", "best_fitness", "mean_fitness", "species_count"])
        for g in history:
            writer.writerow(
                [g.generation, _fmt(g.best_fitness), _fmt(g.mean_fitness), g.species_count]
            )


def write_species_csv(history: Sequence[GenerationStats], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["generation", "species_id", "size", "best_fitness", "stagnation"])
        for g in history:
            for s in g.species:
                writer.writerow(
                    [g.generation, s.species_id, s.size, _fmt(s.best_fitness), s.stagnation]
                )


def read_csv_columns(
    path: str | Path, required: Sequence[str]
) -> dict[str, list[str]]:
    """Load a CSV into columns, insisting every required column exists and the
    file has at least one data row."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty CSV") from None
        rows = list(reader)
    for name in required:
        if name not in header:
            raise ValueError(f"{path}: missing required column {name!r}")
    if not rows:
        raise ValueError(f"{path}: no data rows")
    columns: dict[str, list[str]] = {name: [] for name in header}
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"{path}: row width {len(row)} != header width {len(header)}")
        for name, cell in zip(header, row):
            columns[name].append(cell)
    return columns
