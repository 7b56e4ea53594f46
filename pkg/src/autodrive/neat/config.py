"""Evolution hyperparameters and their strict JSON round-trip."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path


@dataclass
class NeatConfig:
    population: int = 200
    generations: int = 100
    num_inputs: int = 5
    num_outputs: int = 4
    activation: str = "tanh"
    activation_mutate_rate: float = 0.02
    node_add_prob: float = 0.2
    node_delete_prob: float = 0.2
    conn_add_prob: float = 0.5
    conn_delete_prob: float = 0.5
    weight_mutate_rate: float = 0.8
    weight_perturb_power: float = 0.5
    compat_threshold: float = 3.0
    compat_coeff_disjoint: float = 1.0
    compat_coeff_weight: float = 0.5
    max_stagnation: int = 10
    species_elitism: int = 1
    population_elitism: int = 2
    fitness_criterion: str = "max"
    species_fitness_criterion: str = "max"
    parent_fraction: float = 0.2
    lap_limit: int = 3
    seed: int = 0

    def __post_init__(self) -> None:
        if self.population < 1:
            raise ValueError("population must be positive")
        if self.generations < 0:
            raise ValueError("generations must be non-negative")
        if self.num_inputs < 1 or self.num_outputs < 1:
            raise ValueError("network must have inputs and outputs")
        for name in (
            "activation_mutate_rate",
            "node_add_prob",
            "node_delete_prob",
            "conn_add_prob",
            "conn_delete_prob",
            "weight_mutate_rate",
            "parent_fraction",
        ):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.fitness_criterion != "max" or self.species_fitness_criterion != "max":
            raise ValueError("only the max fitness criterion is supported")
        if self.population_elitism >= self.population:
            raise ValueError("population_elitism must leave room for offspring")
        if self.species_elitism < 1:
            raise ValueError("species_elitism must be at least 1")


def load_neat_config(path: str | Path) -> NeatConfig:
    """Parse a JSON config; unknown fields are an error, not a warning."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ValueError(f"malformed config: {e}") from None
    if not isinstance(data, dict):
        raise ValueError("config must be a JSON object")
    known = {f.name for f in dataclasses.fields(NeatConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ValueError(f"unknown config fields: {', '.join(unknown)}")
    return NeatConfig(**data)


def save_neat_config(cfg: NeatConfig, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(dataclasses.asdict(cfg), indent=2, sort_keys=True) + "\n"
    )
