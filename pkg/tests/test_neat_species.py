"""Genomic distance and population partitioning."""

import itertools
import random

import pytest

from autodrive.neat.config import NeatConfig
from autodrive.neat.genes import ConnectionGene, Genome, NodeGene
from autodrive.neat.species import Species, genomic_distance, speciate


def _genome(key: int, weights: dict[int, float], biases: dict[int, float] | None = None) -> Genome:
    """Fixed five-input, four-output scaffold with the given connections.

    weights maps innovation -> weight on edge (innovation % 5) -> 5.
    """
    g = Genome(key=key)
    for k in range(5):
        g.nodes[k] = NodeGene(k, "input")
    for k in range(5, 9):
        g.nodes[k] = NodeGene(k, "output")
    if biases:
        for k, b in biases.items():
            g.nodes[k].bias = b
    for innov, w in weights.items():
        g.connections[innov] = ConnectionGene(innov % 5, 5, w, True, innov)
    return g


def test_distance_weight_drift_only():
    cfg = NeatConfig(compat_coeff_disjoint=1.0, compat_coeff_weight=0.5)
    a = _genome(0, {0: 1.0})
    b = _genome(1, {0: 0.6})
    # Same structure, one matching connection differing by 0.4.
    assert genomic_distance(a, b, cfg) == pytest.approx(0.2, abs=1e-12)
    assert genomic_distance(a, a, cfg) == 0.0
    assert genomic_distance(b, a, cfg) == genomic_distance(a, b, cfg)


def test_distance_mismatch_normalized_by_larger_genome():
    cfg = NeatConfig(compat_coeff_disjoint=1.0, compat_coeff_weight=0.5)
    base = {i: 0.5 for i in range(11)}
    a = _genome(0, base)             # 9 nodes + 11 connections = 20 genes
    extra = dict(base)
    extra[11] = 0.5
    extra[12] = 0.5
    b = _genome(1, extra)            # 22 genes, two unmatched innovations
    assert genomic_distance(a, b, cfg) == pytest.approx(2.0 / 22.0, abs=1e-12)


def test_distance_counts_node_mismatch():
    cfg = NeatConfig(compat_coeff_disjoint=1.0, compat_coeff_weight=0.0)
    a = _genome(0, {0: 1.0})
    b = _genome(1, {0: 1.0})
    b.nodes[9] = NodeGene(9, "hidden")
    # One extra node against max gene count 11.
    assert genomic_distance(a, b, cfg) == pytest.approx(1.0 / 11.0, abs=1e-12)


def test_distance_bias_drift():
    cfg = NeatConfig(compat_coeff_disjoint=1.0, compat_coeff_weight=0.5)
    a = _genome(0, {}, biases={5: 0.0})
    b = _genome(1, {}, biases={5: 0.9})
    # Nine matching nodes, total bias drift 0.9.
    assert genomic_distance(a, b, cfg) == pytest.approx(0.5 * 0.9 / 9.0, abs=1e-12)


def test_speciate_partitions_population():
    cfg = NeatConfig(compat_threshold=0.05, compat_coeff_disjoint=1.0, compat_coeff_weight=0.5)
    rng = random.Random(0)
    pop = []
    for key in range(20):
        center = 0.0 if key % 2 == 0 else 3.0
        pop.append(_genome(key, {0: center + rng.uniform(-0.01, 0.01)}))
    species = speciate(pop, [], cfg)
    assert len(species) == 2
    seen: list[int] = []
    for sp in species:
        assert sp.members, "no empty species survive"
        assert sp.representative.key in sp.members
        seen.extend(sp.members)
    assert sorted(seen) == list(range(20))


def test_speciate_threshold_extremes():
    cfg_wide = NeatConfig(compat_threshold=1e9)
    cfg_tight = NeatConfig(compat_threshold=1e-9)
    pop = [_genome(k, {0: 0.1 * k}) for k in range(6)]
    assert len(speciate(pop, [], cfg_wide)) == 1
    tight = speciate(pop, [], cfg_tight)
    assert len(tight) == 6
    ids = [sp.id for sp in tight]
    assert ids == sorted(ids)
    assert len(set(ids)) == 6


def test_speciate_carries_stagnation_and_refreshes_representative():
    cfg = NeatConfig(compat_threshold=0.5, compat_coeff_disjoint=1.0, compat_coeff_weight=0.5)
    old_rep = _genome(100, {0: 0.0})
    prev = [Species(id=4, representative=old_rep, members=[100],
                    best_fitness_ever=12.5, last_improved=3)]
    pop = [_genome(0, {0: 0.02}), _genome(1, {0: 0.4})]
    species = speciate(pop, prev, cfg)
    assert len(species) == 1
    sp = species[0]
    assert sp.id == 4
    assert sp.best_fitness_ever == 12.5
    assert sp.last_improved == 3
    assert sorted(sp.members) == [0, 1]
    # New representative is the member closest to the outgoing one.
    assert sp.representative.key == 0


def test_speciate_new_ids_continue_after_existing():
    cfg = NeatConfig(compat_threshold=0.01, compat_coeff_disjoint=1.0, compat_coeff_weight=0.5)
    rep = _genome(50, {0: 0.0})
    prev = [Species(id=7, representative=rep, members=[50])]
    pop = [_genome(0, {0: 0.0}), _genome(1, {0: 5.0})]
    species = speciate(pop, prev, cfg)
    assert [sp.id for sp in species] == [7, 8]


def test_speciate_respects_fresh_id_iterator():
    cfg = NeatConfig(compat_threshold=1e-9)
    pop = [_genome(0, {0: 0.0}), _genome(1, {0: 9.0})]
    species = speciate(pop, [], cfg, fresh_ids=itertools.count(31))
    assert [sp.id for sp in species] == [31, 32]


def test_speciate_drops_emptied_species():
    cfg = NeatConfig(compat_threshold=0.2, compat_coeff_disjoint=1.0, compat_coeff_weight=0.5)
    rep = _genome(99, {0: 40.0})
    prev = [Species(id=2, representative=rep, members=[99])]
    pop = [_genome(0, {0: 0.0})]
    species = speciate(pop, prev, cfg)
    assert [sp.id for sp in species] != [2]
    assert len(species) == 1
    assert species[0].members == [0]
