import numpy as np
import pytest

from autodrive.car import Pose
from autodrive.mapgen import Archetype, generate_map
from autodrive.track import Checkpoint, OccupancyGrid, TrackMap


def make_corridor(
    width: int = 400,
    height: int = 120,
    wall: int = 20,
    start_x: float = 30.0,
    angle: float = 270.0,
    checkpoints: tuple[tuple[float, float], ...] = (),
    finish: tuple[tuple[float, float], tuple[float, float]] = ((0.0, 0.0), (0.0, 0.0)),
    name: str = "corridor",
) -> TrackMap:
    """Straight horizontal corridor; angle 270 drives toward +x down its middle."""
    drivable = np.zeros((height, width), dtype=bool)
    drivable[wall : height - wall, :] = True
    cy = height / 2.0
    cps = [Checkpoint(x, cy, r, i) for i, (x, r) in enumerate(checkpoints)]
    return TrackMap(OccupancyGrid(drivable), Pose(start_x, cy, angle), cps, finish, name)


@pytest.fixture(scope="session")
def simple_track() -> TrackMap:
    return generate_map(Archetype.SIMPLE_LOOP, seed=7)


@pytest.fixture(scope="session")
def all_tracks() -> list[TrackMap]:
    return [generate_map(arch, seed=7) for arch in Archetype]


# Populated by test_acceptance.py; one row per criterion.
ACCEPTANCE_RESULTS: list[tuple[int, bool, str]] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, detail in sorted(ACCEPTANCE_RESULTS):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[criterion {num:02d}] {status} {detail}")
