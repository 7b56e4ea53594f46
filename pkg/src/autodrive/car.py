"""Car kinematics: discrete heading and speed updates on a raster plane.

The plane uses screen coordinates (x right, y down).  Headings are degrees in
[0, 360) and always multiples of the turn step; displacement for a heading is
computed through the reflected angle, so heading 0 moves along +y and heading
90 along -x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum


class Action(IntEnum):
    """Discrete controls.  Values double as indices into the full action set."""

    SPEED_UP = 0
    TURN_LEFT = 1
    TURN_RIGHT = 2
    SLOW_DOWN = 3
    LEFT_SPEED_UP = 4
    RIGHT_SPEED_UP = 5


# Pure rotations: the car pivots in place and covers no distance.
TURN_ONLY = (Action.TURN_LEFT, Action.TURN_RIGHT)

_LEFT = (Action.TURN_LEFT, Action.LEFT_SPEED_UP)
_RIGHT = (Action.TURN_RIGHT, Action.RIGHT_SPEED_UP)
_FASTER = (Action.SPEED_UP, Action.LEFT_SPEED_UP, Action.RIGHT_SPEED_UP)


@dataclass
class EnvConfig:
    """Simulation constants shared by the environment and both learners."""

    max_steps: int = 2000
    turn_step: float = 15.0
    speed_step: float = 2.0
    speed_min: float = 10.0
    speed_max: float = 20.0
    radar_max: float = 300.0
    car_half_extents: tuple[float, float] = (15.0, 10.0)  # (length/2, width/2)

    def __post_init__(self) -> None:
        if self.speed_min >= self.speed_max:
            raise ValueError("speed_min must be below speed_max")
        if self.turn_step <= 0 or self.speed_step <= 0:
            raise ValueError("turn_step and speed_step must be positive")
        if self.max_steps <= 0:
            raise ValueError("max_steps must be positive")
        if self.radar_max <= 0:
            raise ValueError("radar_max must be positive")


@dataclass
class Pose:
    x: float
    y: float
    angle: float  # degrees in [0, 360), multiple of the turn step


@dataclass
class CarState:
    pose: Pose
    speed: float
    distance: float = 0.0
    alive: bool = True
    next_checkpoint: int = 0
    laps_completed: int = 0
    steps: int = 0


def heading_vector(angle_deg: float) -> tuple[float, float]:
    """Unit displacement (dx, dy) for a heading under the screen convention."""
    a = math.radians(360.0 - angle_deg)
    return math.sin(a), math.cos(a)


def apply_action(
    car: CarState,
    action: Action,
    cfg: EnvConfig,
    bounds: tuple[int, int] | None = None,
) -> CarState:
    """One control tick: steer/speed update first, then displacement at the new speed.

    Speed-ups add the speed step capped at ``speed_max``; slow-down subtracts it
    but never drops below ``speed_min``.  Pure turns rotate in place.  Every
    moving action advances the odometer by the post-update speed.  ``bounds``
    (grid width, height) clamps the position; without it the plane is unbounded.
    """
    angle = car.pose.angle
    speed = car.speed
    if action in _LEFT:
        angle = (angle + cfg.turn_step) % 360.0
    elif action in _RIGHT:
        angle = (angle - cfg.turn_step) % 360.0
    if action in _FASTER:
        speed = min(speed + cfg.speed_step, cfg.speed_max)
    elif action is Action.SLOW_DOWN:
        speed = max(speed - cfg.speed_step, cfg.speed_min)

    x, y = car.pose.x, car.pose.y
    distance = car.distance
    if action not in TURN_ONLY:
        ux, uy = heading_vector(angle)
        x += ux * speed
        y += uy * speed
        if bounds is not None:
            w, h = bounds
            x = min(max(x, 0.0), w - 1.0)
            y = min(max(y, 0.0), h - 1.0)
        distance += speed

    return CarState(
        pose=Pose(x, y, angle),
        speed=speed,
        distance=distance,
        alive=car.alive,
        next_checkpoint=car.next_checkpoint,
        laps_completed=car.laps_completed,
        steps=car.steps + 1,
    )
