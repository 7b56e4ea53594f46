"""Genome encoding: node and connection genes with historical markings.

Innovation numbers are handed out by a registry shared across the population.
Within one generation, structurally identical mutations receive identical
numbers; the per-generation signature caches are cleared when a generation
ends, while the counters only ever grow.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable


@dataclass
class NodeGene:
    key: int
    kind: str  # "input", "hidden" or "output"
    bias: float = 0.0
    activation: str = "tanh"

    def copy(self) -> "NodeGene":
        return NodeGene(self.key, self.kind, self.bias, self.activation)


@dataclass
class ConnectionGene:
    in_node: int
    out_node: int
    weight: float
    enabled: bool = True
    innovation: int = 0

    def copy(self) -> "ConnectionGene":
        return ConnectionGene(
            self.in_node, self.out_node, self.weight, self.enabled, self.innovation
        )


@dataclass
class Genome:
    key: int
    nodes: dict[int, NodeGene] = field(default_factory=dict)
    connections: dict[int, ConnectionGene] = field(default_factory=dict)
    fitness: float | None = None

    @property
    def gene_count(self) -> int:
        return len(self.nodes) + len(self.connections)

    def input_keys(self) -> list[int]:
        return sorted(k for k, n in self.nodes.items() if n.kind == "input")

    def output_keys(self) -> list[int]:
        return sorted(k for k, n in self.nodes.items() if n.kind == "output")

    def hidden_keys(self) -> list[int]:
        return sorted(k for k, n in self.nodes.items() if n.kind == "hidden")

    def edges(self) -> set[tuple[int, int]]:
        return {(c.in_node, c.out_node) for c in self.connections.values()}

    def copy(self, new_key: int | None = None) -> "Genome":
        return Genome(
            key=self.key if new_key is None else new_key,
            nodes={k: n.copy() for k, n in self.nodes.items()},
            connections={i: c.copy() for i, c in self.connections.items()},
            fitness=self.fitness,
        )


def creates_cycle(connections: Iterable[ConnectionGene], u: int, v: int) -> bool:
    """Would adding edge u -> v close a directed cycle?

    The walk covers every connection gene, enabled or not, so the full gene
    graph stays acyclic and re-enabling a dormant gene can never break the
    feed-forward property.
    """
    if u == v:
        return True
    out: dict[int, list[int]] = {}
    for c in connections:
        out.setdefault(c.in_node, []).append(c.out_node)
    seen = {v}
    frontier = [v]
    while frontier:
        node = frontier.pop()
        for nxt in out.get(node, ()):
            if nxt == u:
                return True
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return False


class InnovationRegistry:
    """Run-wide id authority: innovations, node keys, genome and species keys."""

    def __init__(self, num_inputs: int = 5, num_outputs: int = 4):
        self.num_inputs = num_inputs
        self.num_outputs = num_outputs
        self.next_node_key = num_inputs + num_outputs
        self.next_innovation = 0
        self.next_genome_key = 0
        self.next_species_id = 1
        self._conn_cache: dict[tuple[int, int], int] = {}
        self._split_cache: dict[int, tuple[int, int, int]] = {}

    def connection_innovation(self, u: int, v: int) -> int:
        """Innovation number for edge u -> v, shared within the generation."""
        key = (u, v)
        got = self._conn_cache.get(key)
        if got is not None:
            return got
        innov = self.next_innovation
        self.next_innovation += 1
        self._conn_cache[key] = innov
        return innov

    def split_innovations(self, conn_innovation: int, u: int, v: int) -> tuple[int, int, int]:
        """(new node key, u->node innovation, node->v innovation) for splitting a
        connection; two genomes splitting the same gene in one generation agree."""
        got = self._split_cache.get(conn_innovation)
        if got is not None:
            return got
        node_key = self.next_node_key
        self.next_node_key += 1
        entry = (
            node_key,
            self.connection_innovation(u, node_key),
            self.connection_innovation(node_key, v),
        )
        self._split_cache[conn_innovation] = entry
        return entry

    def new_genome_key(self) -> int:
        key = self.next_genome_key
        self.next_genome_key += 1
        return key

    def new_species_id(self) -> int:
        sid = self.next_species_id
        self.next_species_id += 1
        return sid

    def reset_generation_cache(self) -> None:
        self._conn_cache.clear()
        self._split_cache.clear()
