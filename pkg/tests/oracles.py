"""Independent reference implementations the test suite checks the package against.

Everything here is written from the ground up with the dumbest possible
algorithm: per-pixel walking loops, explicit case-by-case kinematics, full
dynamic-programming sweeps.  None of it imports the corresponding package
internals beyond plain data types.
"""

from __future__ import annotations

import math

from autodrive.car import Action, CarState, EnvConfig
from autodrive.track import TrackMap


def naive_cast_ray(
    track: TrackMap, origin: tuple[float, float], angle_deg: float, r_max: float
) -> float:
    """Walk outward one pixel at a time; stop at the first blocked sample."""
    x0, y0 = origin
    grid = track.grid
    w, h = grid.width, grid.height

    def blocked(px: float, py: float) -> bool:
        ix, iy = math.floor(px), math.floor(py)
        if ix < 0 or iy < 0 or ix >= w or iy >= h:
            return True
        return not bool(grid.drivable[iy, ix])

    if blocked(x0, y0):
        return 0.0
    rad = math.radians(360.0 - (angle_deg % 360.0))
    dx, dy = math.sin(rad), math.cos(rad)
    d = 1
    while d <= r_max:
        if blocked(x0 + dx * d, y0 + dy * d):
            return float(d)
        d += 1
    return float(r_max)


def expected_kinematics(
    x: float, y: float, angle: float, speed: float, action: Action, cfg: EnvConfig
) -> tuple[float, float, float, float, float]:
    """Re-derive one tick by hand: returns (x, y, angle, speed, distance gained)."""
    if action in (Action.TURN_LEFT, Action.LEFT_SPEED_UP):
        angle = (angle + cfg.turn_step) % 360.0
    if action in (Action.TURN_RIGHT, Action.RIGHT_SPEED_UP):
        angle = (angle - cfg.turn_step) % 360.0
    if action in (Action.SPEED_UP, Action.LEFT_SPEED_UP, Action.RIGHT_SPEED_UP):
        speed = speed + cfg.speed_step
        if speed > cfg.speed_max:
            speed = cfg.speed_max
    if action is Action.SLOW_DOWN:
        speed = speed - cfg.speed_step
        if speed < cfg.speed_min:
            speed = cfg.speed_min
    gained = 0.0
    if action not in (Action.TURN_LEFT, Action.TURN_RIGHT):
        rad = math.radians(360.0 - angle)
        x = x + math.sin(rad) * speed
        y = y + math.cos(rad) * speed
        gained = speed
    return x, y, angle, speed, gained


def graph_is_acyclic(edges: set[tuple[int, int]]) -> bool:
    """Depth-first search with colors over the given directed edge set."""
    adjacency: dict[int, list[int]] = {}
    nodes = set()
    for u, v in edges:
        adjacency.setdefault(u, []).append(v)
        nodes.add(u)
        nodes.add(v)
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {n: WHITE for n in nodes}

    def visit(n: int) -> bool:
        color[n] = GRAY
        for m in adjacency.get(n, ()):
            if color[m] == GRAY:
                return False
            if color[m] == WHITE and not visit(m):
                return False
        color[n] = BLACK
        return True

    for n in sorted(nodes):
        if color[n] == WHITE and not visit(n):
            return False
    return True


def corner_positions(car: CarState, cfg: EnvConfig) -> list[tuple[float, float]]:
    """The four rectangle corners, computed with an explicit rotation matrix."""
    hl, hw = cfg.car_half_extents
    rad = math.radians(360.0 - car.pose.angle)
    ux, uy = math.sin(rad), math.cos(rad)
    vx, vy = uy, -ux
    x, y = car.pose.x, car.pose.y
    return [
        (x + a * hl * ux + b * hw * vx, y + a * hl * uy + b * hw * vy)
        for a in (1.0, -1.0)
        for b in (1.0, -1.0)
    ]
