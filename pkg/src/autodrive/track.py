"""Track representation and its on-disk format (binary PGM mask + JSON metadata)."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .car import Pose


class TrackError(ValueError):
    """Raised for malformed or internally inconsistent track data."""


class OccupancyGrid:
    """Boolean raster of drivable cells, row-major, y down."""

    def __init__(self, drivable: np.ndarray):
        drivable = np.asarray(drivable, dtype=bool)
        if drivable.ndim != 2:
            raise TrackError("drivable mask must be 2-D")
        if not drivable.any():
            raise TrackError("mask has no drivable cell")
        self.drivable = drivable
        self.height, self.width = drivable.shape

    def is_drivable(self, x: float, y: float) -> bool:
        xi = math.floor(x)
        yi = math.floor(y)
        if xi < 0 or yi < 0 or xi >= self.width or yi >= self.height:
            return False
        return bool(self.drivable[yi, xi])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, OccupancyGrid)
            and self.width == other.width
            and self.height == other.height
            and bool(np.array_equal(self.drivable, other.drivable))
        )

    def __repr__(self) -> str:
        return f"OccupancyGrid({self.width}x{self.height})"


@dataclass
class Checkpoint:
    x: float
    y: float
    radius: float
    index: int


@dataclass
class TrackMap:
    grid: OccupancyGrid
    start: Pose
    checkpoints: list[Checkpoint] = field(default_factory=list)
    finish: tuple[tuple[float, float], tuple[float, float]] = ((0.0, 0.0), (0.0, 0.0))
    name: str = "track"

    def __post_init__(self) -> None:
        validate(self)


def validate(track: TrackMap) -> None:
    """Check the structural invariants; raise TrackError on the first breach."""
    g = track.grid
    if not g.is_drivable(track.start.x, track.start.y):
        raise TrackError("start position is off-track")
    for fx, fy in track.finish:
        if not (0 <= fx < g.width and 0 <= fy < g.height):
            raise TrackError("finish endpoint outside grid")
    for i, cp in enumerate(track.checkpoints):
        if cp.index != i:
            raise TrackError("checkpoint indices must be contiguous from 0")
        if cp.radius <= 0:
            raise TrackError(f"checkpoint {i} radius must be positive")
        if not g.is_drivable(cp.x, cp.y):
            raise TrackError(f"checkpoint {i} center is off-track")


def save_track(track: TrackMap, mask_path: str | Path, meta_path: str | Path) -> None:
    """Write the mask as binary PGM (255 = drivable, 0 = wall) plus a JSON sidecar."""
    g = track.grid
    data = np.where(g.drivable, 255, 0).astype(np.uint8)
    with open(mask_path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (g.width, g.height))
        f.write(data.tobytes())
    (fx1, fy1), (fx2, fy2) = track.finish
    meta = {
        "name": track.name,
        "width": g.width,
        "height": g.height,
        "start": {"x": track.start.x, "y": track.start.y, "angle": track.start.angle},
        "checkpoints": [{"x": c.x, "y": c.y, "radius": c.radius} for c in track.checkpoints],
        "finish": {"x1": fx1, "y1": fy1, "x2": fx2, "y2": fy2},
    }
    Path(meta_path).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def _read_pgm(path: str | Path) -> np.ndarray:
    raw = Path(path).read_bytes()
    fields: list[bytes] = []
    i = 0
    # Header: magic, width, height, maxval; '#' starts a comment to end of line.
    while len(fields) < 4:
        if i >= len(raw):
            raise TrackError("truncated PGM header")
        c = raw[i : i + 1]
        if c == b"#":
            while i < len(raw) and raw[i : i + 1] != b"\n":
                i += 1
        elif c.isspace():
            i += 1
        else:
            j = i
            while j < len(raw) and not raw[j : j + 1].isspace():
                j += 1
            fields.append(raw[i:j])
            i = j
    i += 1  # single whitespace separating maxval from the raster
    magic, w_raw, h_raw, maxval = fields
    if magic != b"P5":
        raise TrackError("not a binary PGM (P5) file")
    try:
        w, h = int(w_raw), int(h_raw)
        int(maxval)
    except ValueError:
        raise TrackError("non-numeric PGM header field") from None
    data = raw[i : i + w * h]
    if len(data) != w * h:
        raise TrackError("PGM raster size disagrees with header")
    return np.frombuffer(data, dtype=np.uint8).reshape(h, w)


def load_track(mask_path: str | Path, meta_path: str | Path) -> TrackMap:
    """Read a mask/metadata pair back into a validated TrackMap."""
    raster = _read_pgm(mask_path)
    try:
        meta = json.loads(Path(meta_path).read_text())
    except json.JSONDecodeError as e:
        raise TrackError(f"malformed track metadata: {e}") from None
    try:
        width = int(meta["width"])
        height = int(meta["height"])
        start = Pose(
            float(meta["start"]["x"]),
            float(meta["start"]["y"]),
            float(meta["start"]["angle"]),
        )
        cps = [
            Checkpoint(float(c["x"]), float(c["y"]), float(c["radius"]), i)
            for i, c in enumerate(meta["checkpoints"])
        ]
        fin = meta["finish"]
        finish = (
            (float(fin["x1"]), float(fin["y1"])),
            (float(fin["x2"]), float(fin["y2"])),
        )
        name = str(meta["name"])
    except (KeyError, TypeError, ValueError) as e:
        raise TrackError(f"malformed track metadata: {e!r}") from None
    if raster.shape != (height, width):
        raise TrackError("mask dimensions disagree with metadata")
    grid = OccupancyGrid(raster != 0)
    return TrackMap(grid=grid, start=start, checkpoints=cps, finish=finish, name=name)
