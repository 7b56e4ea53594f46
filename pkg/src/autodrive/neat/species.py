"""Genomic distance and speciation."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Iterator

from .genes import Genome

if TYPE_CHECKING:
    from .config import NeatConfig


@dataclass
class Species:
    id: int
    representative: Genome
    members: list[int] = field(default_factory=list)  # genome keys
    best_fitness_ever: float = float("-inf")
    last_improved: int = 0


def genomic_distance(a: Genome, b: Genome, cfg: "NeatConfig") -> float:
    """Structural mismatch plus matching-gene parameter drift.

    The mismatch term counts node keys and connection innovations present in
    exactly one genome, normalized by the larger total gene count; the drift
    term averages absolute weight differences over matching connections and
    absolute bias differences over matching nodes.
    """
    nodes_a = a.nodes.keys()
    nodes_b = b.nodes.keys()
    conns_a = a.connections.keys()
    conns_b = b.connections.keys()
    mismatch = len(nodes_a ^ nodes_b) + len(conns_a ^ conns_b)
    n = max(a.gene_count, b.gene_count, 1)
    d = cfg.compat_coeff_disjoint * mismatch / n

    common_conns = conns_a & conns_b
    if common_conns:
        drift = sum(
            abs(a.connections[i].weight - b.connections[i].weight) for i in common_conns
        )
        d += cfg.compat_coeff_weight * drift / len(common_conns)
    common_nodes = nodes_a & nodes_b
    if common_nodes:
        drift = sum(abs(a.nodes[k].bias - b.nodes[k].bias) for k in common_nodes)
        d += cfg.compat_coeff_weight * drift / len(common_nodes)
    return d


def speciate(
    population: Iterable[Genome],
    previous_species: Iterable[Species],
    cfg: "NeatConfig",
    fresh_ids: Iterator[int] | None = None,
) -> list[Species]:
    """Partition the population by distance to species representatives.

    Genomes join the first species (in id order) whose representative lies
    within the compatibility threshold, else found a new one.  Species left
    empty disappear; survivors refresh their representative to the member
    closest to the old one.  Stagnation bookkeeping carries over untouched.
    """
    species = [
        Species(
            id=sp.id,
            representative=sp.representative,
            members=[],
            best_fitness_ever=sp.best_fitness_ever,
            last_improved=sp.last_improved,
        )
        for sp in previous_species
    ]
    if fresh_ids is None:
        start = max((sp.id for sp in species), default=0) + 1
        fresh_ids = itertools.count(start)

    genomes = sorted(population, key=lambda g: g.key)
    by_key = {g.key: g for g in genomes}
    for g in genomes:
        for sp in species:
            if genomic_distance(g, sp.representative, cfg) < cfg.compat_threshold:
                sp.members.append(g.key)
                break
        else:
            species.append(Species(id=next(fresh_ids), representative=g, members=[g.key]))

    species = [sp for sp in species if sp.members]
    for sp in species:
        closest = min(
            sp.members,
            key=lambda k: (genomic_distance(by_key[k], sp.representative, cfg), k),
        )
        sp.representative = by_key[closest]
    return species
