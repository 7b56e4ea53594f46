"""Driving environment: radar sensing, collision, checkpoint and lap accounting.

The radar model walks rays outward in 1-pixel increments and reports the
distance at which the first non-drivable cell appears, capped at the radar
range.  The Environment class precomputes per-heading ray offset tables so a
step costs a handful of vectorized lookups; the scalar helpers below define
the reference semantics and the two paths agree bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .car import Action, CarState, EnvConfig, Pose, apply_action, heading_vector
from .track import TrackMap

# Radar ray directions relative to the heading, left to right.
RADAR_OFFSETS = (-90.0, -45.0, 0.0, 45.0, 90.0)

RadarReading = tuple[float, float, float, float, float]


class EpisodeDone(RuntimeError):
    """Raised when step() is called on a crashed or truncated episode."""


@dataclass(frozen=True)
class StepEvents:
    crossed_checkpoint: bool = False
    crossed_finish: bool = False
    crashed: bool = False
    truncated: bool = False


def cast_ray(
    track: TrackMap, origin: tuple[float, float], angle_deg: float, r_max: float
) -> float:
    """Distance along a ray to the first non-drivable cell, capped at r_max.

    Returns 0 when the origin itself is not drivable.
    """
    grid = track.grid
    x0, y0 = origin
    if not grid.is_drivable(x0, y0):
        return 0.0
    a = math.radians(360.0 - (angle_deg % 360.0))
    ux, uy = math.sin(a), math.cos(a)
    limit = int(math.floor(r_max))
    for d in range(1, limit + 1):
        if not grid.is_drivable(x0 + ux * d, y0 + uy * d):
            return float(d)
    return float(r_max)


def sense(track: TrackMap, car: CarState, cfg: EnvConfig) -> RadarReading:
    """Five radar distances from the car center at the fixed heading offsets."""
    x, y = car.pose.x, car.pose.y
    angle = car.pose.angle
    return tuple(
        cast_ray(track, (x, y), (angle + off) % 360.0, cfg.radar_max)
        for off in RADAR_OFFSETS
    )  # type: ignore[return-value]


def collided(track: TrackMap, car: CarState, cfg: EnvConfig) -> bool:
    """True when any corner of the car's rotated rectangle leaves the drivable area."""
    hl, hw = cfg.car_half_extents
    ux, uy = heading_vector(car.pose.angle)
    vx, vy = uy, -ux  # lateral axis
    x, y = car.pose.x, car.pose.y
    grid = track.grid
    for sl, sw in ((1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)):
        if not grid.is_drivable(x + sl * hl * ux + sw * hw * vx, y + sl * hl * uy + sw * hw * vy):
            return True
    return False


def _orient(ax: float, ay: float, bx: float, by: float, cx: float, cy: float) -> float:
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _on_segment(ax: float, ay: float, bx: float, by: float, px: float, py: float) -> bool:
    return min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by)


def segments_intersect(
    p: tuple[float, float],
    q: tuple[float, float],
    a: tuple[float, float],
    b: tuple[float, float],
) -> bool:
    """Closed-segment intersection test; touching endpoints count."""
    if p == q:
        return False
    d1 = _orient(*a, *b, *p)
    d2 = _orient(*a, *b, *q)
    d3 = _orient(*p, *q, *a)
    d4 = _orient(*p, *q, *b)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and (
        (d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)
    ):
        return True
    if d1 == 0 and _on_segment(*a, *b, *p):
        return True
    if d2 == 0 and _on_segment(*a, *b, *q):
        return True
    if d3 == 0 and _on_segment(*p, *q, *a):
        return True
    if d4 == 0 and _on_segment(*p, *q, *b):
        return True
    return False


class Environment:
    """Stateful episode driver over one track.

    reset() places the car on the start pose at minimum speed; step() applies
    one action and reports radar, the new car state, and the step's events.
    Stepping a crashed or truncated episode raises EpisodeDone.
    """

    def __init__(self, track: TrackMap, cfg: EnvConfig | None = None):
        self.track = track
        self.cfg = cfg or EnvConfig()
        self.car: CarState | None = None
        self._build_ray_tables()

    def _build_ray_tables(self) -> None:
        cfg = self.cfg
        grid = self.track.grid
        limit = int(math.floor(cfg.radar_max))
        pad = limit + 1
        padded = np.zeros((grid.height + 2 * pad, grid.width + 2 * pad), dtype=bool)
        padded[pad : pad + grid.height, pad : pad + grid.width] = grid.drivable
        self._pad = pad
        self._padw = padded.shape[1]
        self._padflat = padded.ravel()
        steps = int(round(360.0 / cfg.turn_step))
        dvec = np.arange(1, limit + 1, dtype=np.float64)
        fx = np.empty((steps, len(RADAR_OFFSETS), limit), dtype=np.float64)
        fy = np.empty_like(fx)
        for k in range(steps):
            heading = k * cfg.turn_step
            for i, off in enumerate(RADAR_OFFSETS):
                a = math.radians(360.0 - ((heading + off) % 360.0))
                fx[k, i] = math.sin(a) * dvec
                fy[k, i] = math.cos(a) * dvec
        self._fx = fx
        self._fy = fy
        self._angle_steps = steps

    def _radar(self, car: CarState) -> RadarReading:
        grid = self.track.grid
        x, y = car.pose.x, car.pose.y
        if not grid.is_drivable(x, y):
            return (0.0,) * 5  # type: ignore[return-value]
        k = int(car.pose.angle / self.cfg.turn_step) % self._angle_steps
        xs = np.floor(x + self._fx[k]).astype(np.int64) + self._pad
        ys = np.floor(y + self._fy[k]).astype(np.int64) + self._pad
        blocked = ~self._padflat[ys * self._padw + xs]
        any_hit = blocked.any(axis=1)
        first = blocked.argmax(axis=1)
        out = np.where(any_hit, first + 1.0, self.cfg.radar_max)
        return tuple(float(v) for v in out)  # type: ignore[return-value]

    def reset(self) -> tuple[RadarReading, CarState]:
        start = self.track.start
        self.car = CarState(
            pose=Pose(start.x, start.y, start.angle),
            speed=self.cfg.speed_min,
            distance=0.0,
            alive=True,
            next_checkpoint=0,
            laps_completed=0,
            steps=0,
        )
        return self._radar(self.car), self.car

    def step(self, action: Action) -> tuple[RadarReading, CarState, StepEvents]:
        car = self.car
        if car is None:
            raise EpisodeDone("reset() must be called before step()")
        if not car.alive:
            raise EpisodeDone("episode already crashed")
        if car.steps >= self.cfg.max_steps:
            raise EpisodeDone("episode already truncated")

        grid = self.track.grid
        old = (car.pose.x, car.pose.y)
        new = apply_action(car, action, self.cfg, bounds=(grid.width, grid.height))

        crashed = collided(self.track, new, self.cfg)
        crossed_cp = False
        crossed_fin = False
        cps = self.track.checkpoints
        if cps and new.next_checkpoint < len(cps):
            cp = cps[new.next_checkpoint]
            dx = new.pose.x - cp.x
            dy = new.pose.y - cp.y
            if dx * dx + dy * dy <= cp.radius * cp.radius:
                crossed_cp = True
                new.next_checkpoint += 1
        if new.next_checkpoint == len(cps) and segments_intersect(
            old, (new.pose.x, new.pose.y), self.track.finish[0], self.track.finish[1]
        ):
            crossed_fin = True
            new.laps_completed += 1
            new.next_checkpoint = 0

        if crashed:
            new.alive = False
        truncated = not crashed and new.steps >= self.cfg.max_steps
        events = StepEvents(
            crossed_checkpoint=crossed_cp,
            crossed_finish=crossed_fin,
            crashed=crashed,
            truncated=truncated,
        )
        self.car = new
        return self._radar(new), new, events
