"""Experiment runner: CLI, config, metrics files, and SVG plots."""

from .csvio import (
    block_averages,
    read_csv_columns,
    write_avg100_csv,
    write_episode_csv,
    write_generation_csv,
    write_species_csv,
)
from .experiment import (
    ExperimentConfig,
    compare_runs,
    load_experiment_config,
    resolve_track,
    run_neat_experiment,
    run_q_experiment,
    write_default_maps,
)
from .plots import PLOT_KINDS, PlotError, render_plot

__all__ = [
    "ExperimentConfig",
    "PLOT_KINDS",
    "PlotError",
    "block_averages",
    "compare_runs",
    "load_experiment_config",
    "read_csv_columns",
    "render_plot",
    "resolve_track",
    "run_neat_experiment",
    "run_q_experiment",
    "write_avg100_csv",
    "write_episode_csv",
    "write_generation_csv",
    "write_species_csv",
]
