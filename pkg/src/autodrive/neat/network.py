"""Feed-forward phenotype compilation and the output-to-action mapping."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..car import Action
from .genes import Genome

# Output slots in order; argmax picks the action, ties go to the lowest slot.
NEAT_ACTIONS = (Action.TURN_LEFT, Action.TURN_RIGHT, Action.SPEED_UP, Action.SLOW_DOWN)

_ACTIVATIONS = {"tanh": math.tanh}


@dataclass
class Phenotype:
    """Topologically ordered evaluation plan compiled from enabled connections."""

    plan: tuple[tuple[int, tuple[tuple[int, float], ...], float, str], ...]
    input_keys: tuple[int, ...]
    output_keys: tuple[int, ...]

    def activate(self, inputs: tuple[float, ...]) -> tuple[float, ...]:
        if len(inputs) != len(self.input_keys):
            raise ValueError(
                f"expected {len(self.input_keys)} inputs, got {len(inputs)}"
            )
        values: dict[int, float] = dict(zip(self.input_keys, inputs))
        for key, incoming, bias, activation in self.plan:
            total = bias
            for src, w in incoming:
                total += w * values[src]
            values[key] = _ACTIVATIONS[activation](total)
        return tuple(values[k] for k in self.output_keys)


def build_phenotype(genome: Genome) -> Phenotype:
    """Compile the enabled subgraph into an evaluation plan.

    Only nodes that can influence an output are scheduled; inputs pass their
    values through untouched.  A cycle among enabled connections means the
    genome was corrupted upstream and raises.
    """
    input_keys = tuple(genome.input_keys())
    output_keys = tuple(genome.output_keys())
    enabled = [c for c in genome.connections.values() if c.enabled]

    incoming: dict[int, list[tuple[int, float]]] = {}
    for c in enabled:
        incoming.setdefault(c.out_node, []).append((c.in_node, c.weight))

    # Keep nodes from which an output is reachable (walking edges backward).
    keep = set(output_keys)
    frontier = list(output_keys)
    while frontier:
        node = frontier.pop()
        for src, _w in incoming.get(node, ()):
            if src not in keep:
                keep.add(src)
                frontier.append(src)

    inputs = set(input_keys)
    to_schedule = {k for k in keep if k not in inputs}
    deps: dict[int, set[int]] = {
        k: {src for src, _w in incoming.get(k, ()) if src in to_schedule}
        for k in to_schedule
    }
    plan = []
    ready = sorted(k for k, d in deps.items() if not d)
    pending = {k: d for k, d in deps.items() if d}
    while ready:
        key = ready.pop(0)
        node = genome.nodes[key]
        links = tuple(
            (src, w) for src, w in sorted(incoming.get(key, [])) if src in keep
        )
        plan.append((key, links, node.bias, node.activation))
        newly = []
        for k, d in pending.items():
            d.discard(key)
            if not d:
                newly.append(k)
        for k in sorted(newly):
            del pending[k]
            ready.append(k)
        ready.sort()
    if pending:
        raise ValueError("cycle detected among enabled connections")
    return Phenotype(plan=tuple(plan), input_keys=input_keys, output_keys=output_keys)


def action_from_outputs(outputs: tuple[float, ...]) -> Action:
    """Highest output wins; ties break toward the lowest slot."""
    if len(outputs) != len(NEAT_ACTIONS):
        raise ValueError(f"expected {len(NEAT_ACTIONS)} outputs, got {len(outputs)}")
    best = 0
    for i in range(1, len(outputs)):
        if outputs[i] > outputs[best]:
            best = i
    return NEAT_ACTIONS[best]
