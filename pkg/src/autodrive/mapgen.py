"""Procedural generation of closed-loop corridor tracks.

Four archetypes of increasing handling difficulty share one recipe: build a
closed centerline as a radially modulated ellipse, rasterize the corridor as
every cell within half a track width of the centerline, then drop checkpoints
at equal arc-length intervals along the lap direction.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import ndimage

from .car import Pose
from .track import Checkpoint, OccupancyGrid, TrackError, TrackMap


class Archetype(str, Enum):
    SIMPLE_LOOP = "simple_loop"
    CURVED_LOOP = "curved_loop"
    SHARP_TURNS = "sharp_turns"
    CONSTANT_TWISTS = "constant_twists"


_DEFAULT_WIDTH = {
    Archetype.SIMPLE_LOOP: 140.0,
    Archetype.CURVED_LOOP: 120.0,
    Archetype.SHARP_TURNS: 110.0,
    Archetype.CONSTANT_TWISTS: 95.0,
}

_DEFAULT_CHECKPOINTS = {
    Archetype.SIMPLE_LOOP: 4,
    Archetype.CURVED_LOOP: 8,
    Archetype.SHARP_TURNS: 8,
    Archetype.CONSTANT_TWISTS: 8,
}

_EDGE_MARGIN = 30.0  # clearance between corridor edge and grid border
_SAMPLES = 4096  # centerline samples; roughly 1 px apart on default grids


@dataclass
class MapParams:
    width: int = 1920
    height: int = 1080
    track_width: float | None = None  # None: per-archetype default
    checkpoints: int | None = None  # None: per-archetype default
    sharpness: float = 1.0
    car_width: float = 20.0
    checkpoint_radius: float | None = None  # None: half the track width


def _radial_profile(
    archetype: Archetype, sharpness: float, rng: random.Random, theta: np.ndarray
) -> np.ndarray:
    """Multiplicative radius modulation; this is what tells the archetypes apart."""
    phase = rng.uniform(0.0, 2.0 * math.pi)
    if archetype is Archetype.SIMPLE_LOOP:
        return np.ones_like(theta)
    if archetype is Archetype.CURVED_LOOP:
        return 1.0 + 0.10 * sharpness * np.sin(3.0 * theta + phase)
    if archetype is Archetype.SHARP_TURNS:
        # Rounded pentagon: straight edges meeting at distinct corners.
        k = 5
        t = np.mod(theta + phase, 2.0 * math.pi / k) - math.pi / k
        poly = math.cos(math.pi / k) / np.cos(t)
        blend = min(1.0, 0.9 * sharpness)
        return (1.0 - blend) + blend * poly
    if archetype is Archetype.CONSTANT_TWISTS:
        return 1.0 + 0.11 * sharpness * np.sin(9.0 * theta + phase)
    raise TrackError(f"unknown archetype: {archetype!r}")


def generate_map(
    archetype: Archetype | str, params: MapParams | None = None, seed: int = 0
) -> TrackMap:
    """Deterministically build a closed corridor track for one archetype.

    The same (archetype, params, seed) triple always yields an identical map.
    Rejects corridors narrower than three car widths and checkpoint counts
    below one.
    """
    params = params or MapParams()
    arch = Archetype(archetype)
    tw = params.track_width if params.track_width is not None else _DEFAULT_WIDTH[arch]
    ncp = params.checkpoints if params.checkpoints is not None else _DEFAULT_CHECKPOINTS[arch]
    if ncp < 1:
        raise TrackError("at least one checkpoint is required")
    if tw < 3.0 * params.car_width:
        raise TrackError(
            f"track width {tw:g} too narrow: need at least 3x the car width {params.car_width:g}"
        )

    rng = random.Random(seed)
    w, h = params.width, params.height
    theta = np.linspace(0.0, 2.0 * math.pi, _SAMPLES, endpoint=False)
    profile = _radial_profile(arch, params.sharpness, rng, theta)
    smax = float(profile.max())
    half = tw / 2.0
    rx = (w / 2.0 - half - _EDGE_MARGIN) / smax
    ry = (h / 2.0 - half - _EDGE_MARGIN) / smax
    if min(rx, ry) <= tw:
        raise TrackError("grid too small for the requested track width")

    px = w / 2.0 + rx * profile * np.cos(theta)
    py = h / 2.0 + ry * profile * np.sin(theta)

    # Closed-loop arc length per segment (last segment returns to sample 0).
    seg = np.hypot(np.roll(px, -1) - px, np.roll(py, -1) - py)
    cum = np.concatenate(([0.0], np.cumsum(seg)))
    total = float(cum[-1])

    def point_at(s: float) -> tuple[float, float]:
        j = int(np.searchsorted(cum, s, side="right")) - 1
        j = min(j, _SAMPLES - 1)
        t = (s - cum[j]) / seg[j]
        x1, y1 = px[(j + 1) % _SAMPLES], py[(j + 1) % _SAMPLES]
        return float(px[j] + t * (x1 - px[j])), float(py[j] + t * (y1 - py[j]))

    cp_radius = params.checkpoint_radius if params.checkpoint_radius is not None else half
    checkpoints = [
        Checkpoint(*point_at((i + 0.5) * total / ncp), cp_radius, i) for i in range(ncp)
    ]

    # Start pose sits on the centerline at arc 0, heading along the lap
    # direction quantized to the turn step; checkpoint 0 lies half an interval
    # ahead.
    tx = float(px[1] - px[0])
    ty = float(py[1] - py[0])
    norm = math.hypot(tx, ty)
    tx, ty = tx / norm, ty / norm
    angle = (360.0 - math.degrees(math.atan2(tx, ty))) % 360.0
    angle = (round(angle / 15.0) * 15.0) % 360.0
    start = Pose(float(px[0]), float(py[0]), angle)

    # Finish line: perpendicular to the lap direction at the start, spanning
    # the corridor.
    nx, ny = -ty, tx
    finish = (
        (float(px[0] + nx * half), float(py[0] + ny * half)),
        (float(px[0] - nx * half), float(py[0] - ny * half)),
    )

    center = np.zeros((h, w), dtype=bool)
    xi = np.clip(np.floor(px).astype(int), 0, w - 1)
    yi = np.clip(np.floor(py).astype(int), 0, h - 1)
    center[yi, xi] = True
    dist = ndimage.distance_transform_edt(~center)
    drivable = dist <= half
    drivable[0, :] = drivable[-1, :] = False
    drivable[:, 0] = drivable[:, -1] = False

    return TrackMap(
        grid=OccupancyGrid(drivable),
        start=start,
        checkpoints=checkpoints,
        finish=finish,
        name=f"{arch.value}-s{seed}",
    )
