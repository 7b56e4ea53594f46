"""Deterministic SVG line plots for training metrics.

The SVG is assembled by hand from fixed-format strings: no timestamps, no
generated ids, so the same CSV always yields byte-identical output.
"""

from __future__ import annotations

import math
from pathlib import Path

from .csvio import read_csv_columns


class PlotError(ValueError):
    pass


_WIDTH = 800.0
_HEIGHT = 500.0
_MARGIN_LEFT = 70.0
_MARGIN_RIGHT = 24.0
_MARGIN_TOP = 42.0
_MARGIN_BOTTOM = 52.0

_PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#e377c2",
    "#17becf",
    "#bcbd22",
    "#7f7f7f",
)

# kind -> (x column, y column(s) or grouping mode, axis labels)
PLOT_KINDS = (
    "RewardPerEpisodeAvg100",
    "RewardPerEpisode",
    "BestFitness",
    "BestMeanFitness",
    "MeanFitness",
    "SpeciesFitness",
    "SpeciesDiversity",
)


def _parse_float(cell: str, column: str) -> float:
    try:
        return float(cell)
    except ValueError:
        raise PlotError(f"column {column!r} holds non-numeric value {cell!r}") from None


def _series_for(kind: str, path: str | Path) -> tuple[str, str, list[tuple[str, list[tuple[float, float]]]]]:
    """Returns (x label, y label, [(series name, points)])."""
    if kind == "RewardPerEpisodeAvg100":
        cols = read_csv_columns(path, ["episode", "avg_reward"])
        pts = [
            (_parse_float(x, "episode"), _parse_float(y, "avg_reward"))
            for x, y in zip(cols["episode"], cols["avg_reward"])
        ]
        return "episode", "avg reward (100-episode blocks)", [("avg_reward", pts)]
    if kind == "RewardPerEpisode":
        cols = read_csv_columns(path, ["episode", "total_reward"])
        pts = [
            (_parse_float(x, "episode"), _parse_float(y, "total_reward"))
            for x, y in zip(cols["episode"], cols["total_reward"])
        ]
        return "episode", "total reward", [("total_reward", pts)]
    if kind == "BestFitness":
        cols = read_csv_columns(path, ["generation", "best_fitness"])
        pts = [
            (_parse_float(x, "generation"), _parse_float(y, "best_fitness"))
            for x, y in zip(cols["generation"], cols["best_fitness"])
        ]
        return "generation", "best fitness", [("best_fitness", pts)]
    if kind == "MeanFitness":
        cols = read_csv_columns(path, ["generation", "mean_fitness"])
        pts = [
            (_parse_float(x, "generation"), _parse_float(y, "mean_fitness"))
            for x, y in zip(cols["generation"], cols["mean_fitness"])
        ]
        return "generation", "mean fitness", [("mean_fitness", pts)]
    if kind == "BestMeanFitness":
        cols = read_csv_columns(path, ["generation", "best_fitness", "mean_fitness"])
        gens = [_parse_float(x, "generation") for x in cols["generation"]]
        best = [
            (g, _parse_float(y, "best_fitness")) for g, y in zip(gens, cols["best_fitness"])
        ]
        mean = [
            (g, _parse_float(y, "mean_fitness")) for g, y in zip(gens, cols["mean_fitness"])
        ]
        return "generation", "fitness", [("best_fitness", best), ("mean_fitness", mean)]
    if kind == "SpeciesFitness":
        cols = read_csv_columns(path, ["generation", "species_id", "best_fitness"])
        grouped: dict[int, list[tuple[float, float]]] = {}
        for g, sid, y in zip(cols["generation"], cols["species_id"], cols["best_fitness"]):
            grouped.setdefault(int(sid), []).append(
                (_parse_float(g, "generation"), _parse_float(y, "best_fitness"))
            )
        series = [(f"species {sid}", grouped[sid]) for sid in sorted(grouped)]
        return "generation", "species best fitness", series
    if kind == "SpeciesDiversity":
        cols = read_csv_columns(path, ["generation", "species_count"])
        pts = [
            (_parse_float(x, "generation"), _parse_float(y, "species_count"))
            for x, y in zip(cols["generation"], cols["species_count"])
        ]
        return "generation", "species count", [("species_count", pts)]
    raise PlotError(f"unknown plot kind {kind!r}")


def _nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    if lo == hi:
        pad = 1.0 if lo == 0 else abs(lo) * 0.5
        lo, hi = lo - pad, hi + pad
    span = hi - lo
    raw = span / max(target, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        step = mult * mag
        if span / step <= target:
            break
    ticks = []
    t = math.ceil(lo / step) * step
    while t <= hi + step * 1e-9:
        ticks.append(0.0 if t == 0 else t)
        t += step
    return ticks


def _bounds(series: list[tuple[str, list[tuple[float, float]]]]) -> tuple[float, float, float, float]:
    xs = [p[0] for _, pts in series for p in pts]
    ys = [p[1] for _, pts in series for p in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x0 == x1:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y0 == y1:
        pad = 1.0 if y0 == 0 else abs(y0) * 0.1
        y0, y1 = y0 - pad, y1 + pad
    return x0, x1, y0, y1


def _fmt_num(v: float) -> str:
    return f"{v:g}"


def render_plot(kind: str, csv_path: str | Path, out_path: str | Path) -> None:
    x_label, y_label, series = _series_for(kind, csv_path)
    x0, x1, y0, y1 = _bounds(series)
    plot_w = _WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = _HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM

    def sx(x: float) -> float:
        return _MARGIN_LEFT + (x - x0) / (x1 - x0) * plot_w

    def sy(y: float) -> float:
        return _MARGIN_TOP + (y1 - y) / (y1 - y0) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH:g}" height="{_HEIGHT:g}" '
        f'viewBox="0 0 {_WIDTH:g} {_HEIGHT:g}">',
        f'<rect width="{_WIDTH:g}" height="{_HEIGHT:g}" fill="#ffffff"/>',
        f'<text x="{_WIDTH / 2:.2f}" y="24" font-family="sans-serif" font-size="16" '
        f'text-anchor="middle">{kind}</text>',
    ]
    for t in _nice_ticks(x0, x1):
        px = sx(t)
        parts.append(
            f'<line x1="{px:.2f}" y1="{_MARGIN_TOP:.2f}" x2="{px:.2f}" '
            f'y2="{_MARGIN_TOP + plot_h:.2f}" stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{px:.2f}" y="{_MARGIN_TOP + plot_h + 18:.2f}" font-family="sans-serif" '
            f'font-size="11" text-anchor="middle">{_fmt_num(t)}</text>'
        )
    for t in _nice_ticks(y0, y1):
        py = sy(t)
        parts.append(
            f'<line x1="{_MARGIN_LEFT:.2f}" y1="{py:.2f}" x2="{_MARGIN_LEFT + plot_w:.2f}" '
            f'y2="{py:.2f}" stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_MARGIN_LEFT - 8:.2f}" y="{py + 4:.2f}" font-family="sans-serif" '
            f'font-size="11" text-anchor="end">{_fmt_num(t)}</text>'
        )
    parts.append(
        f'<rect x="{_MARGIN_LEFT:.2f}" y="{_MARGIN_TOP:.2f}" width="{plot_w:.2f}" '
        f'height="{plot_h:.2f}" fill="none" stroke="#000000" stroke-width="1"/>'
    )
    parts.append(
        f'<text x="{_MARGIN_LEFT + plot_w / 2:.2f}" y="{_HEIGHT - 12:.2f}" '
        f'font-family="sans-serif" font-size="13" text-anchor="middle">{x_label}</text>'
    )
    parts.append(
        f'<text x="18" y="{_MARGIN_TOP + plot_h / 2:.2f}" font-family="sans-serif" '
        f'font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 18 {_MARGIN_TOP + plot_h / 2:.2f})">{y_label}</text>'
    )
    for i, (name, pts) in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        if len(pts) == 1:
            x, y = pts[0]
            parts.append(
                f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="2.5" fill="{color}"/>'
            )
        else:
            coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
            parts.append(
                f'<polyline points="{coords}" fill="none" stroke="{color}" '
                f'stroke-width="1.5"/>'
            )
    if len(series) > 1:
        lx = _MARGIN_LEFT + plot_w - 150
        ly = _MARGIN_TOP + 10
        for i, (name, _) in enumerate(series):
            color = _PALETTE[i % len(_PALETTE)]
            yy = ly + i * 16
            parts.append(
                f'<line x1="{lx:.2f}" y1="{yy:.2f}" x2="{lx + 22:.2f}" y2="{yy:.2f}" '
                f'stroke="{color}" stroke-width="2"/>'
            )
            parts.append(
                f'<text x="{lx + 28:.2f}" y="{yy + 4:.2f}" font-family="sans-serif" '
                f'font-size="11">{name}</text>'
            )
    parts.append("</svg>")
    Path(out_path).write_text("\n".join(parts) + "\n")
