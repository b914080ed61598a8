"""Verification of the model assumptions behind the hedging formula.

Verdicts are data, not exceptions.  ``a3_strict`` failing is surfaced as a
warning only: square-integrability needs just the ``e^{2x}`` moment
(``a3_weak``) and the transform needs the damping margin.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .model import HalfVariance, Martingale, ModelSpec, StripError, big_sigma, drift_rate, q


class Verdict(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    BY_CONSTRUCTION = "holds-by-construction"

    def __str__(self):
        return self.value

    @property
    def ok(self) -> bool:
        return self is not Verdict.FAILS


@dataclass(frozen=True)
class Check:
    verdict: Verdict
    margin: float | tuple[float, float]
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.verdict.ok


@dataclass(frozen=True)
class AssumptionReport:
    a1: Check
    a2: Check
    a3_strict: Check
    a3_weak: Check
    a4: Check
    a5: Check
    a6: Check
    damping: Check

    HARD = ("a3_weak", "a4", "a5", "damping")

    def items(self):
        for name in ("a1", "a2", "a3_strict", "a3_weak", "a4", "a5", "a6", "damping"):
            yield name, getattr(self, name)

    def hard_failures(self) -> list[str]:
        return [name for name, c in self.items() if name in self.HARD and not c.ok]

    def warnings(self) -> list[str]:
        out = []
        if not self.a3_strict.ok:
            out.append(
                f"a3_strict fails (margin {self.a3_strict.margin:.6g}); proceeding on the "
                "weakened e^(2x) moment and the damping margin"
            )
        return out

    def to_dict(self) -> dict:
        return {name: {"verdict": str(c.verdict), "margin": c.margin, "note": c.note}
                for name, c in self.items()}

    def to_text(self) -> str:
        lines = []
        for name, c in self.items():
            if isinstance(c.margin, tuple):
                margin = "(" + ", ".join(f"{m:.12g}" for m in c.margin) + ")"
            else:
                margin = f"{c.margin:.12g}"
            line = f"{name}: {c.verdict} / {margin}"
            if c.note:
                line += f"  # {c.note}"
            lines.append(line)
        return "\n".join(lines)


def _tail_scale(model: ModelSpec) -> float:
    return model.params.M * model.T ** (-model.params.H)


def check_a4(model: ModelSpec, grid_size: int = 999) -> Check:
    """-q_t(1) >= rho'_t > q_t(1) - q_t(2) on a uniform grid of (0, T]."""
    ts = model.T * np.arange(1, grid_size + 1) / grid_size
    left, right, bad = [], [], 0
    for t in ts:
        try:
            q1 = float(np.real(q(model, t, 1.0)))
            q2 = float(np.real(q(model, t, 2.0)))
        except StripError:
            bad += 1
            continue
        rho = float(drift_rate(model, t))
        left.append(-q1 - rho)
        right.append(rho - (q1 - q2))
    note = f"sampled on {grid_size} points of (0, T]"
    if not left:
        return Check(Verdict.FAILS, (float("nan"), float("nan")), note + "; Sigma_t undefined everywhere")
    margin = (float(min(left)), float(min(right)))
    ok = bad == 0 and margin[0] >= 0.0 and margin[1] > 0.0
    if bad:
        note += f"; Sigma_t undefined at {bad} points"
    return Check(Verdict.HOLDS if ok else Verdict.FAILS, margin, note)


def _left_tail_mass_rate(model: ModelSpec, s):
    # int_{x<-1} pi(s, x) dx
    p = model.params
    return p.C * p.H * s ** (-1.0 - p.H) * np.exp(-p.G * s ** (-p.H))


def check_a5(model: ModelSpec) -> Check:
    """Sufficient condition int int_{x<-1} log(1 + mu/Sigma)^2 dnu < inf."""
    p = model.params
    # nu-bar([0, T] x (-inf, -1)) in closed form
    left_mass = p.C / p.G * np.exp(-p.G * model.T ** (-p.H))
    if isinstance(model.drift, Martingale):
        return Check(Verdict.BY_CONSTRUCTION, 0.0, "theta = 0")
    if isinstance(model.drift, HalfVariance):
        # 1 - theta = (1 + e^x)/2 in (1/2, 1) for x < 0, so |log(1 - theta)| <= log 2
        return Check(Verdict.BY_CONSTRUCTION, float(np.log(2.0) ** 2 * left_mass),
                     "mu/Sigma = -1/2; value is the cond-A5 integral")

    def integrand(s):
        ratio = 1.0 + (float(drift_rate(model, s)) + float(np.real(q(model, s, 1.0)))) / float(
            big_sigma(model, s))
        if ratio <= 0:
            return np.inf
        return np.log(ratio) ** 2 * _left_tail_mass_rate(model, s)

    try:
        val, _ = integrate.quad(integrand, 0.0, model.T, limit=200)
    except (StripError, ValueError) as exc:
        return Check(Verdict.FAILS, float("nan"), f"numeric check failed: {exc}")
    if not np.isfinite(val):
        return Check(Verdict.FAILS, float("inf"), "1 + mu/Sigma <= 0 somewhere")
    return Check(Verdict.HOLDS, float(val), "numeric sufficient condition")


def check_all(model: ModelSpec, R: float = 1.75, t_grid_size: int = 999) -> AssumptionReport:
    """Evaluate every assumption for ``model`` with damping exponent ``R``."""
    if not 1 < R <= 2:
        raise ValueError(f"damping R must lie in (1, 2], got {R}")
    if t_grid_size < 1:
        raise ValueError("t_grid_size must be positive")
    p = model.params
    scale = _tail_scale(model)

    def margin_check(margin, note):
        return Check(Verdict.HOLDS if margin > 0 else Verdict.FAILS, float(margin), note)

    a6_bound = p.C * (1.0 / p.M + 1.0 / p.G) * model.T**p.H
    return AssumptionReport(
        a1=Check(Verdict.BY_CONSTRUCTION, 0.0, "differentiable drift"),
        a2=Check(Verdict.BY_CONSTRUCTION, 0.0, "Levy density pi(t, x)"),
        a3_strict=margin_check(scale - 4.0, "M T^-H - 4"),
        a3_weak=margin_check(scale - 2.0, "M T^-H - 2"),
        a4=check_a4(model, t_grid_size),
        a5=check_a5(model),
        a6=Check(Verdict.HOLDS, float(a6_bound), "bound C (1/M + 1/G) T^H"),
        damping=margin_check(scale - (R + 1.0), f"M T^-H - (R + 1), R = {R:g}"),
    )
