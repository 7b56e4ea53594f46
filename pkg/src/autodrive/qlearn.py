"""Tabular Q-learning over bucketized radar states.

States are the five radar distances discretized into equal-width buckets; the
table is a dense float64 array of shape (buckets,)*5 + (action_count,).  The
training loop is generic over any episodic task that speaks state tuples and
action indices, which keeps the update rule testable against exact dynamic
programming on toy MDPs.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import numpy as np

from .car import Action, EnvConfig
from .env import Environment, StepEvents
from .track import TrackMap

StateIndex = tuple[int, int, int, int, int]

# Index-ordered action sets.  "six" is the full control vocabulary; "three"
# is the reduced steering set whose table has only three columns.
ACTION_SETS: dict[str, tuple[Action, ...]] = {
    "six": (
        Action.SPEED_UP,
        Action.TURN_LEFT,
        Action.TURN_RIGHT,
        Action.SLOW_DOWN,
        Action.LEFT_SPEED_UP,
        Action.RIGHT_SPEED_UP,
    ),
    "three": (Action.TURN_LEFT, Action.TURN_RIGHT, Action.SPEED_UP),
}

# Evaluation keeps a sliver of randomness rather than acting fully greedily.
EVAL_EPSILON = 0.01


@dataclass
class QConfig:
    episodes_train: int = 30000
    episodes_eval: int = 100
    max_steps: int = 2000
    epsilon0: float = 0.8
    epsilon_min: float = 0.001
    epsilon_decay: float = 0.9995
    lr0: float = 0.8
    lr_min: float = 0.4
    lr_decay: float = 0.99985
    gamma: float = 0.99
    buckets: int = 11
    action_set: str = "six"  # "six" or "three"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.action_set not in ACTION_SETS:
            raise ValueError(f"unknown action set {self.action_set!r}")
        if self.buckets < 1:
            raise ValueError("buckets must be positive")
        if not 0.0 <= self.epsilon0 <= 1.0:
            raise ValueError("epsilon0 must lie in [0, 1]")

    @property
    def actions(self) -> tuple[Action, ...]:
        return ACTION_SETS[self.action_set]


@dataclass
class QTable:
    values: np.ndarray
    seed: int = 0

    def __post_init__(self) -> None:
        if self.values.ndim != 6:
            raise ValueError("Q-table must be 6-dimensional")
        head = set(self.values.shape[:5])
        if len(head) != 1:
            raise ValueError("the five state dimensions must agree")

    @classmethod
    def zeros(cls, buckets: int, action_count: int, seed: int = 0) -> "QTable":
        shape = (buckets,) * 5 + (action_count,)
        return cls(np.zeros(shape, dtype=np.float64), seed=seed)

    @property
    def buckets(self) -> int:
        return self.values.shape[0]

    @property
    def action_count(self) -> int:
        return self.values.shape[-1]


@dataclass
class EpisodeRecord:
    episode: int
    total_reward: float
    steps: int
    distance: float
    checkpoints_hit: int
    laps: int
    epsilon: float
    lr: float
    terminal: str  # "crashed" or "truncated"


def discretize(radar: tuple[float, ...], r_max: float, buckets: int) -> StateIndex:
    """Map radar distances to bucket indices: floor(d / r_max * buckets), top-clamped."""
    out = []
    for d in radar:
        if not math.isfinite(d) or d < 0.0:
            raise ValueError(f"radar distance must be finite and non-negative, got {d!r}")
        out.append(min(int(d / r_max * buckets), buckets - 1))
    return tuple(out)  # type: ignore[return-value]


def select_action(q: QTable, s: StateIndex, epsilon: float, rng: random.Random) -> int:
    """Epsilon-greedy action index; greedy ties break toward the lowest index.

    With epsilon 0 no randomness is consumed, so the choice is a pure function
    of the table row.
    """
    if epsilon > 0.0 and rng.random() < epsilon:
        return rng.randrange(q.action_count)
    return int(np.argmax(q.values[s]))


def update_q(
    q: QTable,
    s: StateIndex,
    a: int,
    r: float,
    s_next: StateIndex,
    alpha: float,
    gamma: float,
    terminal: bool,
) -> None:
    """Standard one-step backup; terminal transitions bootstrap from zero.

    At alpha 1 this reduces to overwriting with r + gamma * max_a' Q(s', a').
    """
    if not math.isfinite(r):
        raise ValueError("reward must be finite")
    v = q.values
    idx = s + (a,)
    bootstrap = 0.0 if terminal else float(v[s_next].max())
    v[idx] += alpha * (r + gamma * bootstrap - v[idx])


def step_reward(events: StepEvents, car_distance: float) -> float:
    """Reward for one step: +10 per checkpoint, +50 more on a finished lap,
    and on a crash a terminal -1000 + distance/10 added to anything else earned."""
    r = 0.0
    if events.crossed_checkpoint:
        r += 10.0
    if events.crossed_finish:
        r += 50.0
    if events.crashed:
        r += -1000.0 + car_distance / 10.0
    return r


def decay(value: float, factor: float, floor: float) -> float:
    """One multiplicative decay step clamped at the floor."""
    return max(value * factor, floor)


class EpisodicTask(Protocol):
    """Minimal episodic interface the training loop needs."""

    def reset(self) -> StateIndex: ...

    def step(self, action_index: int) -> tuple[StateIndex, float, bool, bool]:
        """Returns (next_state, reward, ended, terminal)."""

    def stats(self) -> dict: ...


class DrivingTask:
    """Adapts the driving environment to the episodic-task protocol."""

    def __init__(self, track: TrackMap, qcfg: QConfig, env_cfg: EnvConfig | None = None):
        if env_cfg is None:
            env_cfg = EnvConfig(max_steps=qcfg.max_steps)
        self.env = Environment(track, env_cfg)
        self.actions = qcfg.actions
        self.buckets = qcfg.buckets
        self.r_max = env_cfg.radar_max
        self._checkpoints = 0
        self._terminal = "truncated"

    def reset(self) -> StateIndex:
        radar, _car = self.env.reset()
        self._checkpoints = 0
        self._terminal = "truncated"
        return discretize(radar, self.r_max, self.buckets)

    def step(self, action_index: int) -> tuple[StateIndex, float, bool, bool]:
        radar, car, events = self.env.step(self.actions[action_index])
        r = step_reward(events, car.distance)
        if events.crossed_checkpoint:
            self._checkpoints += 1
        ended = events.crashed or events.truncated
        if ended:
            self._terminal = "crashed" if events.crashed else "truncated"
        return discretize(radar, self.r_max, self.buckets), r, ended, events.crashed

    def stats(self) -> dict:
        car = self.env.car
        return {
            "steps": car.steps,
            "distance": car.distance,
            "checkpoints": self._checkpoints,
            "laps": car.laps_completed,
            "terminal": self._terminal,
        }


def train_task(task: EpisodicTask, cfg: QConfig) -> tuple[QTable, list[EpisodeRecord]]:
    """Run the per-episode training loop on any episodic task.

    Epsilon and the learning rate decay once per episode, after it finishes;
    records report the values that were in force during the episode.
    """
    q = QTable.zeros(cfg.buckets, len(cfg.actions), seed=cfg.seed)
    rng = random.Random(cfg.seed)
    eps = cfg.epsilon0
    lr = cfg.lr0
    records: list[EpisodeRecord] = []
    for ep in range(cfg.episodes_train):
        s = task.reset()
        total = 0.0
        for _ in range(cfg.max_steps):
            a = select_action(q, s, eps, rng)
            s2, r, ended, terminal = task.step(a)
            update_q(q, s, a, r, s2, lr, cfg.gamma, terminal)
            total += r
            s = s2
            if ended:
                break
        st = task.stats()
        records.append(
            EpisodeRecord(
                episode=ep,
                total_reward=total,
                steps=st["steps"],
                distance=st["distance"],
                checkpoints_hit=st["checkpoints"],
                laps=st["laps"],
                epsilon=eps,
                lr=lr,
                terminal=st["terminal"],
            )
        )
        eps = decay(eps, cfg.epsilon_decay, cfg.epsilon_min)
        lr = decay(lr, cfg.lr_decay, cfg.lr_min)
    return q, records


def train(
    track: TrackMap, cfg: QConfig, env_cfg: EnvConfig | None = None
) -> tuple[QTable, list[EpisodeRecord]]:
    """Train a fresh table on one track; deterministic for a given seed."""
    return train_task(DrivingTask(track, cfg, env_cfg), cfg)


def evaluate(
    q: QTable, track: TrackMap, cfg: QConfig, env_cfg: EnvConfig | None = None
) -> list[EpisodeRecord]:
    """Greedy rollouts with a fixed 1% exploration rate and no table updates."""
    task = DrivingTask(track, cfg, env_cfg)
    rng = random.Random(cfg.seed)
    records: list[EpisodeRecord] = []
    for ep in range(cfg.episodes_eval):
        s = task.reset()
        total = 0.0
        for _ in range(cfg.max_steps):
            a = select_action(q, s, EVAL_EPSILON, rng)
            s2, r, ended, _terminal = task.step(a)
            total += r
            s = s2
            if ended:
                break
        st = task.stats()
        records.append(
            EpisodeRecord(
                episode=ep,
                total_reward=total,
                steps=st["steps"],
                distance=st["distance"],
                checkpoints_hit=st["checkpoints"],
                laps=st["laps"],
                epsilon=EVAL_EPSILON,
                lr=0.0,
                terminal=st["terminal"],
            )
        )
    return records


_MAGIC = "QTBL1"


def save_qtable(q: QTable, path: str | Path) -> None:
    """Binary dump: one JSON header line, then row-major float64 values."""
    header = json.dumps(
        {"buckets": q.buckets, "action_count": q.action_count, "seed": q.seed},
        sort_keys=True,
    )
    with open(path, "wb") as f:
        f.write(f"{_MAGIC} {header}\n".encode("ascii"))
        f.write(np.ascontiguousarray(q.values, dtype="<f8").tobytes())


def load_qtable(path: str | Path) -> QTable:
    raw = Path(path).read_bytes()
    nl = raw.find(b"\n")
    if nl < 0 or not raw.startswith(_MAGIC.encode("ascii") + b" "):
        raise ValueError("not a Q-table file")
    try:
        header = json.loads(raw[len(_MAGIC) + 1 : nl].decode("ascii"))
        buckets = int(header["buckets"])
        action_count = int(header["action_count"])
        seed = int(header["seed"])
    except (json.JSONDecodeError, KeyError, TypeError, ValueError):
        raise ValueError("malformed Q-table header") from None
    body = raw[nl + 1 :]
    expected = buckets**5 * action_count * 8
    if len(body) != expected:
        raise ValueError(
            f"Q-table payload is {len(body)} bytes, header implies {expected}"
        )
    values = np.frombuffer(body, dtype="<f8").reshape((buckets,) * 5 + (action_count,))
    return QTable(values.copy(), seed=seed)
