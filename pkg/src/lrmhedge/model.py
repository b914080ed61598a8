"""VGSSD model family: Levy density, cumulant rates and derived drift quantities.

The log-price is an additive process without Gaussian part whose jump
compensator has density ``pi(t, x)``.  Everything downstream is expressed
through the drift-free jump cumulant rate

    q_t(z) = int (e^{zx} - 1) pi(t, x) dx

and the cumulant rate ``l_t(z) = z rho'_t + q_t(z)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from scipy import integrate

ArrayLike = Union[float, complex, np.ndarray]


class StripError(ValueError):
    """A cumulant argument fell outside the pole-free strip."""


@dataclass(frozen=True)
class VGSSDParams:
    C: float
    G: float
    M: float
    H: float

    def __post_init__(self):
        for name in ("C", "G", "M", "H"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be a positive real, got {value!r}")


class Martingale:
    """rho'_t = -q_t(1): the asset price is a martingale and P* = P."""

    kind = "martingale"

    def rate(self, model: "ModelSpec", t):
        return -np.real(q(model, t, 1.0))

    def integrated(self, model: "ModelSpec", t0, t1):
        return -np.real(q_integrated(model, t0, t1, 1.0))

    def __repr__(self):
        return "Martingale()"


class HalfVariance:
    """rho'_t = -q_t(2)/2, which pins mu^S_t / Sigma_t at -1/2."""

    kind = "half-variance"

    def rate(self, model: "ModelSpec", t):
        return -0.5 * np.real(q(model, t, 2.0))

    def integrated(self, model: "ModelSpec", t0, t1):
        return -0.5 * np.real(q_integrated(model, t0, t1, 2.0))

    def __repr__(self):
        return "HalfVariance()"


class Tabulated:
    """Drift rate rho'_t given on a time grid, linearly interpolated.

    Evaluation outside ``[times[0], times[-1]]`` raises; there is no flat
    extrapolation.
    """

    kind = "tabulated"

    def __init__(self, times: Sequence[float], rates: Sequence[float]):
        times = np.asarray(times, dtype=float)
        rates = np.asarray(rates, dtype=float)
        if times.ndim != 1 or times.shape != rates.shape or times.size < 2:
            raise ValueError("need matching 1-d arrays with at least two points")
        if np.any(np.diff(times) <= 0):
            raise ValueError("tabulated drift times must be strictly increasing")
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(rates))):
            raise ValueError("tabulated drift must be finite")
        self.times = times
        self.rates = rates
        # cumulative integral at the knots (exact for piecewise linear)
        self._cum = np.concatenate(
            [[0.0], np.cumsum(0.5 * np.diff(times) * (rates[1:] + rates[:-1]))]
        )

    def _check(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < self.times[0]) or np.any(t > self.times[-1]):
            raise ValueError(
                f"time {t} outside tabulated drift grid "
                f"[{self.times[0]}, {self.times[-1]}]"
            )
        return t

    def rate(self, model, t):
        t = self._check(t)
        return np.interp(t, self.times, self.rates)

    def _antiderivative(self, t):
        t = self._check(t)
        i = np.clip(np.searchsorted(self.times, t, side="right") - 1, 0, self.times.size - 2)
        r0 = self.rates[i]
        slope = (self.rates[i + 1] - r0) / (self.times[i + 1] - self.times[i])
        dt = t - self.times[i]
        return self._cum[i] + r0 * dt + 0.5 * slope * dt * dt

    def integrated(self, model, t0, t1):
        return self._antiderivative(t1) - self._antiderivative(t0)

    def covers(self, T: float) -> bool:
        return self.times[0] <= 0.0 and self.times[-1] >= T

    def __repr__(self):
        return f"Tabulated({self.times.size} knots on [{self.times[0]}, {self.times[-1]}])"


DriftSpec = Union[Martingale, HalfVariance, Tabulated]


@dataclass(frozen=True)
class ModelSpec:
    params: VGSSDParams
    drift: DriftSpec = field(default_factory=Martingale)
    T: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.T) or self.T <= 0:
            raise ValueError(f"horizon T must be positive, got {self.T!r}")
        if isinstance(self.drift, Tabulated) and not self.drift.covers(self.T):
            raise ValueError("tabulated drift grid must cover [0, T]")

    @classmethod
    def symmetric(cls, M: float, T: float, drift: DriftSpec | None = None, C: float = 1.0,
                  H: float = 0.5) -> "ModelSpec":
        """The experiment family: G = M."""
        return cls(VGSSDParams(C=C, G=M, M=M, H=H), drift or Martingale(), T)

    @property
    def closed_form_time_integral(self) -> bool:
        p = self.params
        return p.C == 1.0 and p.G == p.M and p.H == 0.5

    def strip(self, t: float) -> tuple[float, float]:
        """Open interval of admissible Re(z) at time t."""
        scale = t ** (-self.params.H)
        return -self.params.G * scale, self.params.M * scale


@dataclass(frozen=True)
class MarketState:
    t: float
    spot: float

    def __post_init__(self):
        if not self.spot > 0:
            raise ValueError(f"spot must be positive, got {self.spot!r}")
        if not self.t >= 0:
            raise ValueError(f"t must be non-negative, got {self.t!r}")


@dataclass(frozen=True)
class OptionSpec:
    strike: float
    maturity: float

    def __post_init__(self):
        if not self.strike > 0:
            raise ValueError(f"strike must be positive, got {self.strike!r}")
        if not self.maturity > 0:
            raise ValueError(f"maturity must be positive, got {self.maturity!r}")


def check_state(model: ModelSpec, state: MarketState, option: OptionSpec | None = None):
    if not state.t < model.T:
        raise ValueError(f"evaluation time {state.t} must be < T = {model.T}")
    if option is not None and not np.isclose(option.maturity, model.T, rtol=0, atol=1e-14):
        raise ValueError(f"option maturity {option.maturity} must equal model horizon {model.T}")


def _check_strip(model: ModelSpec, t, z):
    lo, hi = model.strip(np.max(t))
    re = np.real(z)
    if np.any(re <= lo) or np.any(re >= hi):
        raise StripError(
            f"Re(z) in [{np.min(re):.6g}, {np.max(re):.6g}] outside strip "
            f"({lo:.6g}, {hi:.6g}) at t = {np.max(t):.6g}"
        )


def _check_time(t):
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("time must be > 0 (the Levy density is singular at t = 0)")
    return t


def levy_density(model: ModelSpec, t, x):
    """pi(t, x) = C H t^{-1-H} (M e^{-M t^{-H} x} 1{x>0} + G e^{G t^{-H} x} 1{x<0})."""
    t = _check_time(t)
    x = np.asarray(x, dtype=float)
    if np.any(x == 0):
        raise ValueError("x = 0 is excluded from the jump domain")
    p = model.params
    scale = t ** (-p.H)
    pos = p.M * np.exp(-p.M * scale * np.abs(x))
    neg = p.G * np.exp(-p.G * scale * np.abs(x))
    out = p.C * p.H * t ** (-1.0 - p.H) * np.where(x > 0, pos, neg)
    return out if out.ndim else float(out)


def q(model: ModelSpec, t, z):
    """Jump cumulant rate q_t(z) = int (e^{zx}-1) pi(t,x) dx in closed form."""
    t = _check_time(t)
    _check_strip(model, t, z)
    p = model.params
    z = np.asarray(z, dtype=complex)
    w = t ** p.H
    return p.C * p.H * t ** (-1.0 + p.H) * z * (p.G - p.M + 2.0 * z * w) / (
        (p.M - z * w) * (p.G + z * w)
    )


def _q_time_integral_closed(model: ModelSpec, t0, t1, z):
    # In w = s^H the rate becomes C z [1/(M - z w) - 1/(G + z w)] dw, so each
    # log argument keeps a positive real part inside the strip.
    p = model.params
    w0, w1 = t0 ** p.H, t1 ** p.H
    return p.C * (
        np.log(p.M - z * w0) - np.log(p.M - z * w1)
        + np.log(p.G + z * w0) - np.log(p.G + z * w1)
    )


def _q_time_integral_quad(model: ModelSpec, t0, t1, z):
    p = model.params
    inv_h = 1.0 / p.H

    def integrand(w, part):
        s = w**inv_h
        val = q(model, s, z) * inv_h * s / w
        return val.real if part == 0 else val.imag

    w0, w1 = t0**p.H, t1**p.H
    re = integrate.quad(integrand, w0, w1, args=(0,), epsabs=1e-14, epsrel=1e-13, limit=500)[0]
    im = integrate.quad(integrand, w0, w1, args=(1,), epsabs=1e-14, epsrel=1e-13, limit=500)[0]
    return complex(re, im)


def q_integrated(model: ModelSpec, t0: float, t1: float, z, method: str = "closed"):
    """int_{t0}^{t1} q_s(z) ds.

    ``method="quad"`` integrates the rate numerically in ``w = s^H``, which
    removes the ``s^{H-1}`` endpoint singularity at ``s = 0``.
    """
    if not 0 <= t0 <= t1:
        raise ValueError(f"need 0 <= t0 <= t1, got ({t0}, {t1})")
    z = np.asarray(z, dtype=complex)
    if t0 == t1:
        return np.zeros_like(z)
    _check_strip(model, t1, z)
    if method == "closed":
        return _q_time_integral_closed(model, t0, t1, z)
    if method == "quad":
        if z.ndim:
            return np.array([_q_time_integral_quad(model, t0, t1, zz) for zz in z.ravel()]).reshape(z.shape)
        return _q_time_integral_quad(model, t0, t1, complex(z))
    raise ValueError(f"unknown method {method!r}")


def drift_rate(model: ModelSpec, t):
    """rho'_t for the model's drift specification."""
    return model.drift.rate(model, t)


def l(model: ModelSpec, t, z):
    """Cumulant rate l_t(z) = z rho'_t + q_t(z)."""
    z = np.asarray(z, dtype=complex)
    return z * drift_rate(model, t) + q(model, t, z)


def mu_s(model: ModelSpec, t):
    """Drift rate of S, mu^S_t = l_t(1)."""
    return np.real(l(model, t, 1.0))


def big_sigma(model: ModelSpec, t):
    """Sigma_t = int (e^x - 1)^2 pi(t, x) dx = q_t(2) - 2 q_t(1)."""
    return np.real(q(model, t, 2.0) - 2.0 * q(model, t, 1.0))


def sharpe_ratio(model: ModelSpec, t):
    """mu^S_t / Sigma_t; constant for the two built-in drifts."""
    if isinstance(model.drift, Martingale):
        return np.zeros_like(np.asarray(t, dtype=float))
    return mu_s(model, t) / big_sigma(model, t)


def theta(model: ModelSpec, t, x):
    """Girsanov kernel mu^S_t (e^x - 1) / Sigma_t."""
    x = np.asarray(x, dtype=float)
    if np.any(x == 0):
        raise ValueError("x = 0 is excluded from the jump domain")
    return mu_s(model, t) * np.expm1(x) / big_sigma(model, t)


def lambda_t(model: ModelSpec, state: MarketState):
    """lambda_t = mu^S_t / (S_{t-} Sigma_t)."""
    return mu_s(model, state.t) / (state.spot * big_sigma(model, state.t))


def cumulant(model: ModelSpec, t: float, z):
    """kappa_t(z) = z rho_t + int_0^t q_s(z) ds."""
    z = np.asarray(z, dtype=complex)
    if t == 0:
        return np.zeros_like(z)
    return z * model.drift.integrated(model, 0.0, t) + q_integrated(model, 0.0, t, z)
