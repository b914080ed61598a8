"""Locally risk-minimizing hedge ratio for a European call.

The transform route evaluates

    xi = 1 / (pi Sigma_t) Re sum_j w_j exp((1 - a_j) m) I_t(a_j) phi*(z_j) / ((a_j - 1) a_j)

with ``I_t(a) = q_t(a + 1) - q_t(a) - q_t(1)`` the inner jump integral and
``m = log(K / S)``.  The direct route integrates price differences
``e^x f(e^{-x} K) - f(K)`` against ``(e^x - 1) pi(t, x)`` numerically.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .model import MarketState, ModelSpec, OptionSpec, big_sigma, check_state, mu_s, q
from .pricing import (
    TAIL_RATIO_MAX,
    CoverageWarning,
    TransformGrid,
    select_window,
    damped_terms,
    fft_sum,
)

# Instantaneous quantities (Sigma_t, inner integral) are evaluated at
# max(t, T_FLOOR); the characteristic function still runs from t itself.
T_FLOOR = 1e-6


@dataclass
class HedgeResult:
    xi: float
    price: float
    sigma_t: float
    mu_s_t: float
    method: str
    t_eval: float
    imag_residue: float = np.nan
    tail_ratio: float = np.nan
    extra: dict = field(default_factory=dict)

    @property
    def coverage_ok(self) -> bool:
        return bool(self.tail_ratio < TAIL_RATIO_MAX) if np.isfinite(self.tail_ratio) else True


def inner_integral(model: ModelSpec, t: float, z):
    """int (e^{zx} - 1)(e^x - 1) pi(t, x) dx = q_t(z+1) - q_t(z) - q_t(1).

    Drift terms of ``l`` cancel, so only the jump part enters.
    """
    z = np.asarray(z, dtype=complex)
    return q(model, t, z + 1.0) - q(model, t, z) - q(model, t, 1.0)


def _instant_time(t: float) -> float:
    return max(t, T_FLOOR)


class _HedgeSums:
    """Shared transform coefficients for price and hedge at one (t, T)."""

    def __init__(self, model, t, T, grid, generic=False, mirror=True):
        self.t_eval = _instant_time(t)
        self.sigma = float(big_sigma(model, self.t_eval))
        self.mu = float(mu_s(model, self.t_eval))
        self.grid = grid
        te = self.t_eval
        self.price_terms = damped_terms(model, t, T, grid, generic=generic, mirror=mirror)
        self.xi_terms = damped_terms(model, t, T, grid, extra=lambda a: inner_integral(model, te, a),
                                     generic=generic, mirror=mirror)

    def xi(self, m):
        return np.real(self.xi_terms.value(m)) / (np.pi * self.sigma)

    def price(self, m, spot):
        return spot * np.real(self.price_terms.value(m)) / np.pi


def xi_fft(model: ModelSpec, state: MarketState, option: OptionSpec,
           grid: TransformGrid = TransformGrid(), generic: bool = False) -> HedgeResult:
    """Hedge ratio from the damped-transform sum at a single strike."""
    check_state(model, state, option)
    sums = _HedgeSums(model, state.t, option.maturity, grid, generic=generic)
    m = np.log(option.strike / state.spot)
    xi = float(sums.xi(m))
    residue = float(sums.xi_terms.imag_residue(m, grid.eta)) / sums.sigma
    ratio = float(sums.xi_terms.tail_ratio(m))
    if ratio >= TAIL_RATIO_MAX:
        warnings.warn(f"hedge sum tail ratio {ratio:.2e}; frequency grid may be short",
                      CoverageWarning, stacklevel=2)
    return HedgeResult(xi=xi, price=float(sums.price(m, state.spot)), sigma_t=sums.sigma,
                       mu_s_t=sums.mu, method="fft", t_eval=sums.t_eval,
                       imag_residue=residue, tail_ratio=ratio)


def xi_at_strikes(model: ModelSpec, state: MarketState, maturity: float, strikes,
                  grid: TransformGrid = TransformGrid(), generic: bool = False) -> np.ndarray:
    """``xi_fft`` evaluated strike by strike, sharing one set of coefficients."""
    check_state(model, state, None)
    sums = _HedgeSums(model, state.t, maturity, grid, generic=generic, mirror=False)
    m = np.log(np.asarray(strikes, dtype=float) / state.spot)
    return sums.xi(m)


def xi_curve_fft(model: ModelSpec, state: MarketState, maturity: float,
                 grid: TransformGrid = TransformGrid(), strike_window=(0.5, 1.5),
                 generic: bool = False) -> list[tuple[float, float]]:
    """Hedge ratios at every log-strike lattice node inside ``strike_window``."""
    check_state(model, state, None)
    sums = _HedgeSums(model, state.t, maturity, grid, generic=generic, mirror=False)
    ks, raw = fft_sum(sums.xi_terms, state.spot, grid)
    sel = select_window(ks, strike_window)
    xi = np.real(raw[sel]) / (np.pi * sums.sigma)
    return list(zip(np.exp(ks[sel]).tolist(), xi.tolist()))


def xi_quad_direct(model: ModelSpec, state: MarketState, option: OptionSpec,
                   grid: TransformGrid = TransformGrid(), epsabs: float = 1e-11,
                   epsrel: float = 1e-10) -> HedgeResult:
    """Hedge ratio by outer x-quadrature of price differences.

    ``f`` is the single-strike transform price; the x-integral runs in the
    scaled variable ``y = t^{-H} x`` over each half-line with QUADPACK.
    """
    check_state(model, state, option)
    t_eval = _instant_time(state.t)
    terms = damped_terms(model, state.t, option.maturity, grid, mirror=False)
    S, K = state.spot, option.strike
    m_K = np.log(K / S)

    def f(m):
        return S * float(np.real(terms.value(m))) / np.pi

    f_K = f(m_K)
    p = model.params
    w = t_eval**p.H
    sigma = float(big_sigma(model, t_eval))

    def integrand(y, side):
        x = w * y
        dens = p.M * np.exp(-p.M * y) if side > 0 else p.G * np.exp(p.G * y)
        diff = np.exp(x) * f(m_K - x) - f_K
        return diff * np.expm1(x) * dens

    # |integrand| ~ e^{2x} pi(t, x) on the right
    y_right = 40.0 / (p.M - 2.0 * w)
    y_left = 40.0 / p.G
    pieces = []
    # the inner price carries ~1e-12 round-off; QUADPACK may report it
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        for side, a, b in ((1, 0.0, y_right), (-1, -y_left, 0.0)):
            val, err = integrate.quad(integrand, a, b, args=(side,), epsabs=epsabs,
                                      epsrel=epsrel, limit=400)
            pieces.append((val, err))
    roundoff = any(issubclass(w.category, integrate.IntegrationWarning) for w in caught)
    total = sum(v for v, _ in pieces) * p.C * p.H / t_eval
    xi = total / (S * sigma)
    return HedgeResult(xi=float(xi), price=f_K, sigma_t=sigma, mu_s_t=float(mu_s(model, t_eval)),
                       method="quad-direct", t_eval=t_eval,
                       extra={"quad_error": sum(e for _, e in pieces) * p.C * p.H / t_eval / (S * sigma),
                              "quad_roundoff": roundoff})
