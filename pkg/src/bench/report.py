"""Experiment reports: CSV tables and minimal SVG line plots"""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from xml.sax.saxutils import escape

import pandas as pd

from ..dicod.stats import InterferenceStats
from ..dicod.worker import UpdateRecord
from ..solvers.trace import SolveTrace
from .bounds import theoretical_speedup_bound, transition_workers
from .generation import GenerationSpec

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ["solver", "updates", "seconds", "cost"]
SPEEDUP_COLUMNS = ["M", "run", "seconds", "speedup", "run_speedup", "bound", "warm_seconds"]
CSV_FLOAT_FORMAT = "%.17g"

_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"]


@dataclass
class SolverSummary:
    """One solver run and the configuration that produced it"""

    solver: str
    config: dict
    trace: SolveTrace
    stats: InterferenceStats | None = None
    log: list[UpdateRecord] = field(default_factory=list)

    @property
    def final_cost(self) -> float:
        return self.trace.final_cost

    @property
    def converged(self) -> bool:
        return self.trace.converged


@dataclass
class SpeedupRow:
    M: int
    run: int
    seconds: float
    speedup: float  # median time at M = 1 over median time at M
    run_speedup: float  # median time at M = 1 over this run's time
    bound: float
    warm_seconds: float


@dataclass
class ExperimentReport:
    spec: GenerationSpec
    reg: float
    summaries: list[SolverSummary] = field(default_factory=list)
    speedups: list[SpeedupRow] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    reference_cost: float | None = None

    def summary(self, solver: str) -> SolverSummary:
        for s in self.summaries:
            if s.solver == solver:
                return s
        raise KeyError(solver)

    def trajectory_frame(self) -> pd.DataFrame:
        rows = [
            (s.solver, updates, seconds, value)
            for s in self.summaries
            for updates, seconds, value in s.trace.trajectory
        ]
        return pd.DataFrame(rows, columns=TRACE_COLUMNS)

    def speedup_frame(self) -> pd.DataFrame:
        rows = [
            (r.M, r.run, r.seconds, r.speedup, r.run_speedup, r.bound, r.warm_seconds)
            for r in self.speedups
        ]
        return pd.DataFrame(rows, columns=SPEEDUP_COLUMNS)

    def median_speedup(self, n_workers: int) -> float:
        """Median time at M = 1 over median time at ``n_workers``"""
        for r in self.speedups:
            if r.M == n_workers:
                return r.speedup
        return math.nan


def write_csv(frame: pd.DataFrame, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
    logger.info("Wrote %d rows to %s", len(frame), path)


def trace_frame(solver: str, trace: SolveTrace) -> pd.DataFrame:
    return pd.DataFrame(
        [(solver, u, s, c) for u, s, c in trace.trajectory], columns=TRACE_COLUMNS
    )


def render_svg(
    series: dict[str, list[tuple[float, float]]],
    title: str,
    xlabel: str,
    ylabel: str,
    log_y: bool = False,
    markers: list[tuple[float, str]] | None = None,
    width: int = 640,
    height: int = 420,
) -> str:
    """Line plot with axes, a legend and one polyline per series.

    ``markers`` draws labelled vertical lines at the given x positions.
    """
    margin_left, margin_right, margin_top, margin_bottom = 70, 150, 40, 50
    plot_w = width - margin_left - margin_right
    plot_h = height - margin_top - margin_bottom

    def ty(y: float) -> float:
        return math.log10(y) if log_y else y

    points = [
        (x, ty(y)) for pts in series.values() for x, y in pts if not log_y or y > 0
    ]
    if not points:
        points = [(0.0, 0.0), (1.0, 1.0)]
    x_lo, x_hi = min(p[0] for p in points), max(p[0] for p in points)
    y_lo, y_hi = min(p[1] for p in points), max(p[1] for p in points)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    def sx(x: float) -> float:
        return margin_left + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y: float) -> float:
        return margin_top + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        'font-family="sans-serif" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="14">'
        f"{escape(title)}</text>",
        f'<line x1="{margin_left}" y1="{margin_top + plot_h}" x2="{margin_left + plot_w}" '
        f'y2="{margin_top + plot_h}" stroke="black"/>',
        f'<line x1="{margin_left}" y1="{margin_top}" x2="{margin_left}" '
        f'y2="{margin_top + plot_h}" stroke="black"/>',
    ]
    for i in range(5):
        fx = x_lo + (x_hi - x_lo) * i / 4
        fy = y_lo + (y_hi - y_lo) * i / 4
        label_y = f"1e{fy:.2g}" if log_y else f"{fy:.4g}"
        parts.append(
            f'<text x="{sx(fx):.1f}" y="{margin_top + plot_h + 16}" '
            f'text-anchor="middle">{fx:.4g}</text>'
        )
        parts.append(
            f'<text x="{margin_left - 6}" y="{sy(fy) + 4:.1f}" text-anchor="end">'
            f"{label_y}</text>"
        )
    parts.append(
        f'<text x="{margin_left + plot_w / 2:.1f}" y="{height - 10}" '
        f'text-anchor="middle">{escape(xlabel)}</text>'
    )
    parts.append(
        f'<text x="16" y="{margin_top + plot_h / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {margin_top + plot_h / 2:.1f})">{escape(ylabel)}</text>'
    )

    for i, (name, pts) in enumerate(series.items()):
        color = _PALETTE[i % len(_PALETTE)]
        coords = " ".join(
            f"{sx(x):.2f},{sy(ty(y)):.2f}" for x, y in pts if not log_y or y > 0
        )
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        ly = margin_top + 14 * i
        lx = margin_left + plot_w + 10
        parts.append(
            f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" '
            'stroke-width="2"/>'
        )
        parts.append(f'<text x="{lx + 25}" y="{ly + 4}">{escape(name)}</text>')

    for x, label in markers or []:
        if x_lo <= x <= x_hi:
            parts.append(
                f'<line x1="{sx(x):.2f}" y1="{margin_top}" x2="{sx(x):.2f}" '
                f'y2="{margin_top + plot_h}" stroke="gray" stroke-dasharray="4 3"/>'
            )
            parts.append(
                f'<text x="{sx(x) + 3:.2f}" y="{margin_top + 12}" fill="gray">'
                f"{escape(label)}</text>"
            )
    parts.append("</svg>")
    return "\n".join(parts)


def write_svg(svg: str, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(svg)
    logger.info("Wrote plot to %s", path)


def comparison_svg(report: ExperimentReport, by: str = "updates") -> str:
    """Cost minus the best final cost, against updates or seconds"""
    column = 0 if by == "updates" else 1
    best = min(s.final_cost for s in report.summaries)
    series = {
        s.solver: [(row[column], row[2] - best + 1e-12) for row in s.trace.trajectory]
        for s in report.summaries
    }
    return render_svg(series, "Cost over the run", by, "cost - best cost", log_y=True)


def speedup_svg(report: ExperimentReport) -> str:
    ms = sorted({r.M for r in report.speedups})
    measured = [(float(m), report.median_speedup(m)) for m in ms]
    bound = [
        (float(m), max(theoretical_speedup_bound(m, report.spec.alpha).value, 1e-3))
        for m in ms
    ]
    return render_svg(
        {"measured": measured, "bound": bound},
        "DICOD speedup",
        "M",
        "speedup",
        log_y=True,
        markers=[(transition_workers(report.spec.alpha), "alpha M = 1/2")],
    )
