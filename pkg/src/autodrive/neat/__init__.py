"""Neuroevolution of augmenting topologies for the driving task."""

from .genes import ConnectionGene, Genome, InnovationRegistry, NodeGene, creates_cycle
from .network import NEAT_ACTIONS, Phenotype, action_from_outputs, build_phenotype
from .species import Species, genomic_distance, speciate
from .reproduction import (
    crossover,
    mutate,
    mutate_add_connection,
    mutate_add_node,
    mutate_delete_connection,
    mutate_delete_node,
    mutate_weights_and_activation,
)
from .config import NeatConfig, load_neat_config, save_neat_config
from .evolution import (
    GenerationStats,
    SpeciesStats,
    advance_generation,
    evaluate_genome,
    init_population,
    run_neat,
)
from .genome_io import load_genome, save_genome

__all__ = [
    "ConnectionGene",
    "GenerationStats",
    "Genome",
    "InnovationRegistry",
    "NEAT_ACTIONS",
    "NeatConfig",
    "NodeGene",
    "Phenotype",
    "Species",
    "SpeciesStats",
    "action_from_outputs",
    "advance_generation",
    "build_phenotype",
    "creates_cycle",
    "crossover",
    "evaluate_genome",
    "genomic_distance",
    "init_population",
    "load_genome",
    "load_neat_config",
    "mutate",
    "mutate_add_connection",
    "mutate_add_node",
    "mutate_delete_connection",
    "mutate_delete_node",
    "mutate_weights_and_activation",
    "run_neat",
    "save_genome",
    "save_neat_config",
    "speciate",
]
