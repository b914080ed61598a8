"""Reproduction runs for the two hedge-ratio experiments.

(A) ATM call, T = 1, K = 1, t = 0.01 .. 0.99, spot fixed at 1 for every t.
(B) t = 0, T = 0.5, K = 0.51 .. 1.50.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .assumptions import AssumptionReport, check_all
from .hedging import xi_at_strikes
from .model import HalfVariance, MarketState, Martingale, ModelSpec
from .pricing import TransformGrid

log = logging.getLogger(__name__)

COLORS = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e")


class AssumptionFailure(RuntimeError):
    def __init__(self, M, failures, report):
        super().__init__(f"hard assumption failure for M = {M:g}: {', '.join(failures)}")
        self.report = report


@dataclass(frozen=True)
class ExperimentSpec:
    kind: str
    model_id: int
    M_values: tuple[float, ...] = (4.0, 16.0)
    C: float = 1.0
    H: float = 0.5
    spot: float = 1.0

    def __post_init__(self):
        if self.kind not in ("A", "B"):
            raise ValueError(f"experiment kind must be 'A' or 'B', got {self.kind!r}")
        if self.model_id not in (1, 2):
            raise ValueError(f"model id must be 1 or 2, got {self.model_id!r}")
        if not self.M_values:
            raise ValueError("need at least one M value")

    @property
    def T(self) -> float:
        return 1.0 if self.kind == "A" else 0.5

    @property
    def axis(self) -> np.ndarray:
        # integer index times 0.01, no accumulated rounding
        if self.kind == "A":
            return np.arange(1, 100) / 100.0
        return np.arange(51, 151) / 100.0

    def model(self, M: float) -> ModelSpec:
        drift = Martingale() if self.model_id == 1 else HalfVariance()
        return ModelSpec.symmetric(M, self.T, drift, C=self.C, H=self.H)

    @property
    def name(self) -> str:
        return f"{self.kind}{self.model_id}"


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    axis: np.ndarray
    curves: dict[float, np.ndarray]
    reports: dict[float, AssumptionReport]
    warnings: list[str] = field(default_factory=list)
    files: list[Path] = field(default_factory=list)


def _curve(spec: ExperimentSpec, M: float, grid: TransformGrid) -> np.ndarray:
    model = spec.model(M)
    if spec.kind == "B":
        state = MarketState(0.0, spec.spot)
        return xi_at_strikes(model, state, spec.T, spec.axis, grid)
    # spot is reset to 1 at every t, strike stays 1
    out = np.empty(spec.axis.size)
    for i, t in enumerate(spec.axis):
        out[i] = xi_at_strikes(model, MarketState(float(t), spec.spot), spec.T, [1.0], grid)[0]
    return out


def compute(spec: ExperimentSpec, grid: TransformGrid = TransformGrid(), workers: int = 1,
            t_grid_size: int = 999) -> ExperimentResult:
    reports, warns = {}, []
    for M in spec.M_values:
        report = check_all(spec.model(M), grid.R, t_grid_size)
        hard = report.hard_failures()
        if hard:
            raise AssumptionFailure(M, hard, report)
        for w in report.warnings():
            warns.append(f"[{spec.name}, M={M:g}] {w}")
            log.warning("[%s, M=%g] %s", spec.name, M, w)
        reports[M] = report
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            values = list(pool.map(lambda M: _curve(spec, M, grid), spec.M_values))
    else:
        values = [_curve(spec, M, grid) for M in spec.M_values]
    return ExperimentResult(spec, spec.axis, dict(zip(spec.M_values, values)), reports, warns)


def csv_text(result: ExperimentResult) -> str:
    header = ["t_or_K"] + [f"xi_M{M:g}" for M in result.spec.M_values]
    rows = [",".join(header)]
    for i, x in enumerate(result.axis):
        vals = [f"{x:.12g}"] + [f"{result.curves[M][i]:.12g}" for M in result.spec.M_values]
        rows.append(",".join(vals))
    return "\n".join(rows) + "\n"


def svg_text(result: ExperimentResult, width: int = 700, height: int = 500) -> str:
    """Static line plot, one curve per M; first M red, second blue."""
    spec = result.spec
    left, right, top, bottom = 70, 30, 40, 60
    pw, ph = width - left - right, height - top - bottom
    x = result.axis
    ys = np.concatenate([result.curves[M] for M in spec.M_values])
    y_lo = min(0.0, float(np.floor(ys.min() * 10) / 10))
    y_hi = max(1.0, float(np.ceil(ys.max() * 10) / 10))
    x_lo, x_hi = float(x[0]), float(x[-1])

    def px(v):
        return left + (v - x_lo) / (x_hi - x_lo) * pw

    def py(v):
        return top + (y_hi - v) / (y_hi - y_lo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" font-size="16">'
        f'Experiment ({spec.kind}) for Model ({spec.model_id})</text>',
    ]
    for v in np.linspace(y_lo, y_hi, 6):
        out.append(f'<line x1="{left - 5}" y1="{py(v):.2f}" x2="{left}" y2="{py(v):.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{py(v) + 4:.2f}" text-anchor="end" font-size="12">{v:.2f}</text>')
    for v in np.linspace(x_lo, x_hi, 5):
        out.append(f'<line x1="{px(v):.2f}" y1="{top + ph}" x2="{px(v):.2f}" y2="{top + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{px(v):.2f}" y="{top + ph + 20}" text-anchor="middle" font-size="12">{v:.2f}</text>')
    xlabel = "t" if spec.kind == "A" else "K"
    out.append(f'<text x="{left + pw / 2:.1f}" y="{height - 15}" text-anchor="middle" font-size="14">{xlabel}</text>')
    out.append(f'<text x="18" y="{top + ph / 2:.1f}" text-anchor="middle" font-size="14" '
               f'transform="rotate(-90 18 {top + ph / 2:.1f})">xi</text>')
    for n, M in enumerate(spec.M_values):
        color = COLORS[n % len(COLORS)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, result.curves[M]))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{pts}"/>')
        ly = top + 20 + 18 * n
        out.append(f'<line x1="{left + pw - 90}" y1="{ly}" x2="{left + pw - 65}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw - 60}" y="{ly + 4}" font-size="12">M = {M:g}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def run_experiment(spec: ExperimentSpec, grid: TransformGrid = TransformGrid(), out_dir=".",
                   svg: bool = True, workers: int = 1, t_grid_size: int = 999) -> ExperimentResult:
    """Compute one panel and write ``<name>.csv``, ``<name>_report.txt`` and
    optionally ``<name>.svg`` into ``out_dir``."""
    result = compute(spec, grid, workers, t_grid_size)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"experiment_{spec.name}.csv"
    csv_path.write_bytes(csv_text(result).encode())
    result.files.append(csv_path)
    report_path = out / f"experiment_{spec.name}_report.txt"
    lines = []
    for M, report in result.reports.items():
        lines.append(f"[M = {M:g}, T = {spec.T:g}, R = {grid.R:g}]")
        lines.append(report.to_text())
    lines.extend(f"warning: {w}" for w in result.warnings)
    report_path.write_bytes(("\n".join(lines) + "\n").encode())
    result.files.append(report_path)
    if svg:
        svg_path = out / f"experiment_{spec.name}.svg"
        svg_path.write_bytes(svg_text(result).encode())
        result.files.append(svg_path)
    return result
