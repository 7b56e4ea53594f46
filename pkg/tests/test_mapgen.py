import numpy as np
import pytest

from autodrive.env import cast_ray
from autodrive.mapgen import Archetype, MapParams, generate_map
from autodrive.track import TrackError

EXPECTED_CHECKPOINTS = {
    Archetype.SIMPLE_LOOP: 4,
    Archetype.CURVED_LOOP: 8,
    Archetype.SHARP_TURNS: 8,
    Archetype.CONSTANT_TWISTS: 8,
}


@pytest.mark.parametrize("arch", list(Archetype))
def test_archetype_basics(arch):
    track = generate_map(arch, seed=3)
    assert track.grid.width == 1920 and track.grid.height == 1080
    assert track.name == f"{arch.value}-s3"
    assert len(track.checkpoints) == EXPECTED_CHECKPOINTS[arch]
    assert track.grid.is_drivable(track.start.x, track.start.y)
    assert track.start.angle % 15.0 == 0.0
    for cp in track.checkpoints:
        assert track.grid.is_drivable(cp.x, cp.y)
        assert cp.radius > 0.0
    (x1, y1), (x2, y2) = track.finish
    assert 0 <= x1 < 1920 and 0 <= x2 < 1920
    assert 0 <= y1 < 1080 and 0 <= y2 < 1080


def test_generation_is_deterministic():
    a = generate_map("curved_loop", seed=11)
    b = generate_map("curved_loop", seed=11)
    assert np.array_equal(a.grid.drivable, b.grid.drivable)
    assert a.start == b.start
    assert a.checkpoints == b.checkpoints
    assert a.finish == b.finish


def test_seed_changes_shaped_archetypes():
    a = generate_map("curved_loop", seed=1)
    b = generate_map("curved_loop", seed=2)
    assert not np.array_equal(a.grid.drivable, b.grid.drivable)
    assert a.name != b.name


def test_archetypes_differ_from_each_other():
    grids = [generate_map(arch, seed=5).grid.drivable for arch in Archetype]
    for i in range(len(grids)):
        for j in range(i + 1, len(grids)):
            assert not np.array_equal(grids[i], grids[j])


def test_string_and_enum_forms_agree():
    a = generate_map("sharp_turns", seed=4)
    b = generate_map(Archetype.SHARP_TURNS, seed=4)
    assert np.array_equal(a.grid.drivable, b.grid.drivable)


def test_corridor_width_at_start():
    # Every cell within half a track width of the centerline is drivable, so
    # any ray from the start clears at least that much.  On the plain ellipse
    # the lateral rays also terminate right at the wall.
    widths = {
        Archetype.SIMPLE_LOOP: 140.0,
        Archetype.CURVED_LOOP: 120.0,
        Archetype.SHARP_TURNS: 110.0,
        Archetype.CONSTANT_TWISTS: 95.0,
    }
    for arch, tw in widths.items():
        track = generate_map(arch, seed=7)
        origin = (track.start.x, track.start.y)
        for side in (-90.0, 90.0):
            d = cast_ray(track, origin, (track.start.angle + side) % 360.0, 300.0)
            assert d >= tw / 2.0 - 2.0, (arch, side, d)
    simple = generate_map(Archetype.SIMPLE_LOOP, seed=7)
    origin = (simple.start.x, simple.start.y)
    for side in (-90.0, 90.0):
        d = cast_ray(simple, origin, (simple.start.angle + side) % 360.0, 300.0)
        assert abs(d - 70.0) <= 4.0, (side, d)


def test_borders_are_walls():
    track = generate_map("simple_loop", seed=9)
    g = track.grid.drivable
    assert not g[0, :].any() and not g[-1, :].any()
    assert not g[:, 0].any() and not g[:, -1].any()


def test_custom_params():
    params = MapParams(width=960, height=540, track_width=80.0, checkpoints=3)
    track = generate_map("simple_loop", params, seed=0)
    assert track.grid.width == 960 and track.grid.height == 540
    assert len(track.checkpoints) == 3
    for cp in track.checkpoints:
        assert cp.radius == 40.0


def test_checkpoint_radius_override():
    params = MapParams(checkpoint_radius=25.0)
    track = generate_map("simple_loop", params, seed=0)
    assert all(cp.radius == 25.0 for cp in track.checkpoints)


def test_rejects_narrow_corridor():
    with pytest.raises(TrackError):
        generate_map("simple_loop", MapParams(track_width=59.0), seed=0)


def test_rejects_zero_checkpoints():
    with pytest.raises(TrackError):
        generate_map("simple_loop", MapParams(checkpoints=0), seed=0)


def test_rejects_unknown_archetype():
    with pytest.raises(ValueError):
        generate_map("figure_eight", seed=0)


def test_drivable_fraction_is_sane():
    for arch in Archetype:
        g = generate_map(arch, seed=7).grid.drivable
        frac = g.mean()
        assert 0.05 < frac < 0.5, (arch, frac)
