"""Crossover and mutation operators.

All operators draw from a caller-supplied random.Random and iterate genes in
sorted key order, so a fixed seed reproduces a run exactly.
"""

from __future__ import annotations

import random
from typing import TYPE_CHECKING

from .genes import ConnectionGene, Genome, InnovationRegistry, NodeGene, creates_cycle

if TYPE_CHECKING:
    from .config import NeatConfig

# Chance that a gene disabled in either parent stays disabled in the child.
DISABLE_INHERIT_PROB = 0.75

# Fraction of weight mutations that redraw instead of perturbing.
REDRAW_FRACTION = 0.1

ADD_CONNECTION_ATTEMPTS = 20

_ACTIVATION_CHOICES = ("tanh",)


def crossover(
    fitter: Genome, other: Genome, rng: random.Random, registry: InnovationRegistry
) -> Genome:
    """Recombine two parents, favouring the fitter one's structure.

    Matching connection genes come verbatim from a uniformly chosen parent;
    disjoint and excess genes come from the fitter parent only, so the child
    shares its (acyclic) topology.  Any gene disabled in a parent that carries
    it is re-enabled in the child with probability 1 - DISABLE_INHERIT_PROB.
    """
    child_nodes: dict[int, NodeGene] = {}
    for key in sorted(fitter.nodes):
        fn = fitter.nodes[key]
        on = other.nodes.get(key)
        if on is not None and rng.random() < 0.5:
            child_nodes[key] = on.copy()
        else:
            child_nodes[key] = fn.copy()

    child_conns: dict[int, ConnectionGene] = {}
    for innov in sorted(fitter.connections):
        fc = fitter.connections[innov]
        oc = other.connections.get(innov)
        if oc is not None:
            gene = (oc if rng.random() < 0.5 else fc).copy()
            disabled_somewhere = not (fc.enabled and oc.enabled)
        else:
            gene = fc.copy()
            disabled_somewhere = not fc.enabled
        if disabled_somewhere:
            gene.enabled = rng.random() >= DISABLE_INHERIT_PROB
        else:
            gene.enabled = True
        child_conns[innov] = gene

    return Genome(key=registry.new_genome_key(), nodes=child_nodes, connections=child_conns)


def mutate_add_node(genome: Genome, rng: random.Random, registry: InnovationRegistry) -> None:
    """Split a random enabled connection: disable it, bridge through a new node.

    The inbound bridge gets weight 1.0 and the outbound bridge inherits the old
    weight, so the function computed barely moves at small activations.
    """
    enabled = sorted(i for i, c in genome.connections.items() if c.enabled)
    if not enabled:
        return
    innov = rng.choice(enabled)
    conn = genome.connections[innov]
    conn.enabled = False
    node_key, in_innov, out_innov = registry.split_innovations(
        innov, conn.in_node, conn.out_node
    )
    genome.nodes[node_key] = NodeGene(node_key, "hidden", 0.0, "tanh")
    genome.connections[in_innov] = ConnectionGene(
        conn.in_node, node_key, 1.0, True, in_innov
    )
    genome.connections[out_innov] = ConnectionGene(
        node_key, conn.out_node, conn.weight, True, out_innov
    )


def mutate_delete_node(genome: Genome, rng: random.Random) -> None:
    """Remove a random hidden node along with every incident connection."""
    hidden = genome.hidden_keys()
    if not hidden:
        return
    key = rng.choice(hidden)
    del genome.nodes[key]
    doomed = [
        i
        for i, c in genome.connections.items()
        if c.in_node == key or c.out_node == key
    ]
    for i in doomed:
        del genome.connections[i]


def mutate_add_connection(
    genome: Genome,
    rng: random.Random,
    registry: InnovationRegistry,
    max_attempts: int = ADD_CONNECTION_ATTEMPTS,
) -> None:
    """Add a random feed-forward edge; give up quietly after max_attempts tries.

    Targets are never input nodes, duplicates are rejected, and any pair that
    would close a cycle over the full gene graph is rejected.
    """
    sources = sorted(genome.nodes)
    targets = sorted(k for k, n in genome.nodes.items() if n.kind != "input")
    if not sources or not targets:
        return
    existing = genome.edges()
    for _ in range(max_attempts):
        u = rng.choice(sources)
        v = rng.choice(targets)
        if u == v or (u, v) in existing:
            continue
        if creates_cycle(genome.connections.values(), u, v):
            continue
        innov = registry.connection_innovation(u, v)
        genome.connections[innov] = ConnectionGene(u, v, rng.uniform(-1.0, 1.0), True, innov)
        return


def mutate_delete_connection(genome: Genome, rng: random.Random) -> None:
    if not genome.connections:
        return
    innov = rng.choice(sorted(genome.connections))
    del genome.connections[innov]


def mutate_weights_and_activation(
    genome: Genome, cfg: "NeatConfig", rng: random.Random
) -> None:
    """Per-gene weight/bias jitter plus a rare activation resample.

    Mutated weights are usually perturbed by a gaussian of the configured
    power; a small fraction redraws uniformly from [-1, 1].  Biases follow the
    same scheme on non-input nodes.
    """
    for innov in sorted(genome.connections):
        if rng.random() < cfg.weight_mutate_rate:
            c = genome.connections[innov]
            if rng.random() < REDRAW_FRACTION:
                c.weight = rng.uniform(-1.0, 1.0)
            else:
                c.weight += rng.gauss(0.0, cfg.weight_perturb_power)
    for key in sorted(genome.nodes):
        node = genome.nodes[key]
        if node.kind == "input":
            continue
        if rng.random() < cfg.weight_mutate_rate:
            if rng.random() < REDRAW_FRACTION:
                node.bias = rng.uniform(-1.0, 1.0)
            else:
                node.bias += rng.gauss(0.0, cfg.weight_perturb_power)
        if rng.random() < cfg.activation_mutate_rate:
            node.activation = rng.choice(_ACTIVATION_CHOICES)


def mutate(
    genome: Genome, cfg: "NeatConfig", rng: random.Random, registry: InnovationRegistry
) -> None:
    """Apply each structural mutation with its configured probability, then jitter."""
    if rng.random() < cfg.node_add_prob:
        mutate_add_node(genome, rng, registry)
    if rng.random() < cfg.node_delete_prob:
        mutate_delete_node(genome, rng)
    if rng.random() < cfg.conn_add_prob:
        mutate_add_connection(genome, rng, registry)
    if rng.random() < cfg.conn_delete_prob:
        mutate_delete_connection(genome, rng)
    mutate_weights_and_activation(genome, cfg, rng)
