"""Headless 2D driving benchmark: tabular Q-learning vs NEAT on procedural tracks."""

from .car import Action, CarState, EnvConfig, Pose, apply_action
from .track import Checkpoint, OccupancyGrid, TrackError, TrackMap, load_track, save_track
from .mapgen import Archetype, MapParams, generate_map
from .env import Environment, EpisodeDone, StepEvents, cast_ray, collided, sense

__version__ = "0.1.0"

__all__ = [
    "Action",
    "Archetype",
    "CarState",
    "Checkpoint",
    "EnvConfig",
    "Environment",
    "EpisodeDone",
    "MapParams",
    "OccupancyGrid",
    "Pose",
    "StepEvents",
    "TrackError",
    "TrackMap",
    "apply_action",
    "cast_ray",
    "collided",
    "generate_map",
    "load_track",
    "save_track",
    "sense",
]
