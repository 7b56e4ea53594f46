"""Population lifecycle: evaluation, stagnation, reproduction, generation stats."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Iterator

from ..car import EnvConfig
from ..env import Environment
from ..track import TrackMap
from .config import NeatConfig
from .genes import ConnectionGene, Genome, InnovationRegistry, NodeGene
from .network import action_from_outputs, build_phenotype
from .reproduction import crossover, mutate
from .species import Species, speciate


@dataclass
class SpeciesStats:
    species_id: int
    size: int
    best_fitness: float
    stagnation: int


@dataclass
class GenerationStats:
    generation: int
    best_fitness: float
    mean_fitness: float
    species_count: int
    species: list[SpeciesStats] = field(default_factory=list)


def init_population(
    cfg: NeatConfig, rng: random.Random, registry: InnovationRegistry
) -> list[Genome]:
    """Minimal starting genomes: inputs wired straight to outputs, no hidden nodes.

    Every genome carries the full input-output bipartite graph with weights
    drawn uniformly from [-1, 1]; the shared registry makes the initial
    connections agree on innovation numbers across the population.
    """
    population = []
    input_keys = range(cfg.num_inputs)
    output_keys = range(cfg.num_inputs, cfg.num_inputs + cfg.num_outputs)
    for _ in range(cfg.population):
        nodes: dict[int, NodeGene] = {}
        for k in input_keys:
            nodes[k] = NodeGene(k, "input", 0.0, cfg.activation)
        for k in output_keys:
            nodes[k] = NodeGene(k, "output", 0.0, cfg.activation)
        connections: dict[int, ConnectionGene] = {}
        for i in input_keys:
            for o in output_keys:
                innov = registry.connection_innovation(i, o)
                connections[innov] = ConnectionGene(i, o, rng.uniform(-1.0, 1.0), True, innov)
        population.append(
            Genome(key=registry.new_genome_key(), nodes=nodes, connections=connections)
        )
    return population


def evaluate_genome(
    genome: Genome,
    track: TrackMap,
    env_cfg: EnvConfig | None = None,
    lap_limit: int = 3,
    env: Environment | None = None,
) -> float:
    """Drive one deterministic episode and score it.

    Radar distances normalized by the radar range feed the phenotype; argmax
    over its outputs picks the action.  The episode ends on crash, on reaching
    the lap limit, or at the step cap.  Fitness is
    total_distance * mean_speed * 1e-6, where mean speed averages the post-step
    speeds.
    """
    if env is None:
        env = Environment(track, env_cfg or EnvConfig())
    phenotype = build_phenotype(genome)
    radar, car = env.reset()
    inv = 1.0 / env.cfg.radar_max
    speed_sum = 0.0
    steps = 0
    while True:
        outputs = phenotype.activate(tuple(d * inv for d in radar))
        action = action_from_outputs(outputs)
        radar, car, events = env.step(action)
        speed_sum += car.speed
        steps += 1
        if events.crashed or events.truncated:
            break
        if lap_limit and car.laps_completed >= lap_limit:
            break
    fitness = car.distance * (speed_sum / steps) * 1e-6
    genome.fitness = fitness
    return fitness


def _allocate_offspring(
    survivors: list[Species],
    means: dict[int, float],
    ranked_ids: list[int],
    quota: int,
) -> dict[int, int]:
    """Integer offspring counts proportional to species mean fitness.

    Every surviving species gets at least one slot when the quota allows;
    leftovers go to the largest fractional remainders (ties to lower ids).
    """
    if not survivors:
        return {}
    if quota <= len(survivors):
        counts = {sp.id: 0 for sp in survivors}
        for sid in ranked_ids[:quota]:
            counts[sid] = 1
        return counts
    counts = {sp.id: 1 for sp in survivors}
    remainder = quota - len(survivors)
    total_mean = sum(max(means[sp.id], 0.0) for sp in survivors)
    if total_mean <= 0.0:
        for i in range(remainder):
            counts[survivors[i % len(survivors)].id] += 1
        return counts
    shares = {
        sp.id: remainder * max(means[sp.id], 0.0) / total_mean for sp in survivors
    }
    floors = {sid: int(math.floor(v)) for sid, v in shares.items()}
    for sid, c in floors.items():
        counts[sid] += c
    leftover = remainder - sum(floors.values())
    order = sorted(shares, key=lambda sid: (-(shares[sid] - floors[sid]), sid))
    for sid in order[:leftover]:
        counts[sid] += 1
    return counts


def advance_generation(
    population: list[Genome],
    species: list[Species],
    cfg: NeatConfig,
    rng: random.Random,
    registry: InnovationRegistry,
    generation: int,
) -> tuple[list[Genome], list[Species], GenerationStats]:
    """Produce the next population from an evaluated, speciated one.

    Order of business: update stagnation bookkeeping and record stats, drop
    species stagnant for max_stagnation generations (the top species by
    fitness always survive), copy the overall elite genomes through unchanged,
    split the remaining quota across species by mean fitness, breed from each
    species' top parents, then re-speciate and clear the registry's
    per-generation caches.
    """
    if any(g.fitness is None for g in population):
        raise ValueError("population must be evaluated before advancing")
    by_key = {g.key: g for g in population}

    current_fitness: dict[int, float] = {}
    means: dict[int, float] = {}
    for sp in species:
        fits = [by_key[k].fitness for k in sp.members]
        current_fitness[sp.id] = max(fits)
        means[sp.id] = sum(fits) / len(fits)
        if current_fitness[sp.id] > sp.best_fitness_ever:
            sp.best_fitness_ever = current_fitness[sp.id]
            sp.last_improved = generation

    ranked_pop = sorted(population, key=lambda g: (-g.fitness, g.key))
    stats = GenerationStats(
        generation=generation,
        best_fitness=ranked_pop[0].fitness,
        mean_fitness=sum(g.fitness for g in population) / len(population),
        species_count=len(species),
        species=[
            SpeciesStats(
                species_id=sp.id,
                size=len(sp.members),
                best_fitness=current_fitness[sp.id],
                stagnation=generation - sp.last_improved,
            )
            for sp in sorted(species, key=lambda sp: sp.id)
        ],
    )

    ranked_species = sorted(species, key=lambda sp: (-current_fitness[sp.id], sp.id))
    protected = {sp.id for sp in ranked_species[: cfg.species_elitism]}
    survivors = [
        sp
        for sp in species
        if sp.id in protected or generation - sp.last_improved < cfg.max_stagnation
    ]
    if not survivors:
        raise RuntimeError("all species eliminated; species elitism should prevent this")

    elites = [
        g.copy(new_key=registry.new_genome_key())
        for g in ranked_pop[: cfg.population_elitism]
    ]
    quota = cfg.population - len(elites)
    ranked_ids = [sp.id for sp in ranked_species if sp in survivors]
    counts = _allocate_offspring(survivors, means, ranked_ids, quota)

    offspring: list[Genome] = []
    for sp in sorted(survivors, key=lambda sp: sp.id):
        members = sorted(sp.members, key=lambda k: (-by_key[k].fitness, k))
        if len(members) == 1:
            pool = [by_key[members[0]]]
        else:
            cut = max(2, math.ceil(cfg.parent_fraction * len(members)))
            pool = [by_key[k] for k in members[:cut]]
        for _ in range(counts.get(sp.id, 0)):
            if len(pool) == 1:
                child = pool[0].copy(new_key=registry.new_genome_key())
                child.fitness = None
            else:
                p1 = rng.choice(pool)
                p2 = rng.choice(pool)
                if p2.fitness > p1.fitness:
                    p1, p2 = p2, p1
                child = crossover(p1, p2, rng, registry)
            mutate(child, cfg, rng, registry)
            offspring.append(child)

    next_population = elites + offspring
    if len(next_population) != cfg.population:
        raise RuntimeError(
            f"population accounting error: {len(next_population)} != {cfg.population}"
        )

    fresh: Iterator[int] = iter(registry.new_species_id, None)
    next_species = speciate(next_population, survivors, cfg, fresh_ids=fresh)
    registry.reset_generation_cache()
    return next_population, next_species, stats


def run_neat(
    track: TrackMap,
    cfg: NeatConfig,
    env_cfg: EnvConfig | None = None,
) -> tuple[Genome, list[GenerationStats]]:
    """Evolve a driver on one track; returns the best genome ever evaluated.

    Deterministic for a given config: one seeded RNG drives initialization and
    reproduction, and evaluation itself has no randomness.  Stats carry one
    entry per evaluated generation.
    """
    rng = random.Random(cfg.seed)
    registry = InnovationRegistry(cfg.num_inputs, cfg.num_outputs)
    env = Environment(track, env_cfg or EnvConfig())
    population = init_population(cfg, rng, registry)
    fresh: Iterator[int] = iter(registry.new_species_id, None)
    species = speciate(population, [], cfg, fresh_ids=fresh)

    best: Genome | None = None
    history: list[GenerationStats] = []

    def evaluate_all() -> None:
        nonlocal best
        for g in sorted(population, key=lambda g: g.key):
            evaluate_genome(g, track, lap_limit=cfg.lap_limit, env=env)
            if best is None or g.fitness > best.fitness:
                best = g.copy()

    for generation in range(cfg.generations):
        evaluate_all()
        population, species, stats = advance_generation(
            population, species, cfg, rng, registry, generation
        )
        history.append(stats)
    if cfg.generations == 0:
        evaluate_all()
    assert best is not None
    return best, history
