"""Genome persistence as JSON with exact float round-tripping."""

from __future__ import annotations

import json
from pathlib import Path

from .genes import ConnectionGene, Genome, NodeGene


def genome_to_dict(genome: Genome) -> dict:
    return {
        "key": genome.key,
        "fitness": genome.fitness,
        "nodes": [
            {"key": n.key, "kind": n.kind, "bias": n.bias, "activation": n.activation}
            for n in sorted(genome.nodes.values(), key=lambda n: n.key)
        ],
        "connections": [
            {
                "in": c.in_node,
                "out": c.out_node,
                "weight": c.weight,
                "enabled": c.enabled,
                "innovation": c.innovation,
            }
            for c in sorted(genome.connections.values(), key=lambda c: c.innovation)
        ],
    }


def genome_from_dict(data: dict) -> Genome:
    try:
        nodes = {
            n["key"]: NodeGene(n["key"], n["kind"], n["bias"], n["activation"])
            for n in data["nodes"]
        }
        connections = {
            c["innovation"]: ConnectionGene(
                c["in"], c["out"], c["weight"], c["enabled"], c["innovation"]
            )
            for c in data["connections"]
        }
        genome = Genome(
            key=data["key"], nodes=nodes, connections=connections, fitness=data["fitness"]
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed genome data: {exc}") from exc
    for conn in genome.connections.values():
        if conn.in_node not in nodes or conn.out_node not in nodes:
            raise ValueError(
                f"connection {conn.in_node}->{conn.out_node} references a missing node"
            )
    return genome


def save_genome(genome: Genome, path: str | Path) -> None:
    # json round-trips Python floats exactly (repr-based), so save/load is lossless
    Path(path).write_text(json.dumps(genome_to_dict(genome), indent=2, sort_keys=True) + "\n")


def load_genome(path: str | Path) -> Genome:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid genome file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError(f"invalid genome file {path}: expected a JSON object")
    return genome_from_dict(data)
