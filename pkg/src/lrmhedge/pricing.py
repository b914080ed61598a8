"""European call prices under the minimal martingale measure.

With ``a_j = i z_j = i u_j + R`` and log-moneyness ``m = log(K / S)`` the
damped representation reads

    C(K) = (S / pi) Re sum_j w_j exp((1 - a_j) m) phi*(z_j) / ((a_j - 1) a_j)

which is what every transform-based routine here evaluates, either strike by
strike or with one FFT over a log-strike lattice.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .charfn import CharFnContext, log_phi_star, log_phi_star_generic
from .model import MarketState, ModelSpec, OptionSpec, check_state

WEIGHT_RULES = ("trapezoid", "rectangle", "simpson")
TAIL_RATIO_MAX = 1e-10


class CoverageWarning(UserWarning):
    """The frequency grid is too short for the integrand to have decayed."""


@dataclass(frozen=True)
class TransformGrid:
    """Frequency nodes ``z_j = eta j - iR`` for ``j = 0 .. N-1``.

    ``weights="trapezoid"`` is the full-line rectangle rule folded onto
    ``u >= 0`` (half weight at ``u = 0``).  ``"rectangle"`` gives the node at
    ``u = 0`` full weight, ``"simpson"`` is the usual Carr-Madan weighting.
    """

    N: int = 2**14
    eta: float = 0.25
    R: float = 1.75
    weights: str = "trapezoid"

    def __post_init__(self):
        if self.N < 2 or self.N & (self.N - 1):
            raise ValueError(f"N must be a power of two >= 2, got {self.N}")
        if not self.eta > 0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        if not 1 < self.R <= 2:
            raise ValueError(f"damping R must lie in (1, 2], got {self.R}")
        if self.weights not in WEIGHT_RULES:
            raise ValueError(f"weights must be one of {WEIGHT_RULES}")

    @property
    def u(self) -> np.ndarray:
        return self.eta * np.arange(self.N)

    @property
    def z(self) -> np.ndarray:
        return self.u - 1j * self.R

    @property
    def quad_weights(self) -> np.ndarray:
        w = np.full(self.N, self.eta)
        if self.weights == "trapezoid":
            w[0] *= 0.5
        elif self.weights == "simpson":
            j = np.arange(self.N)
            w = self.eta / 3.0 * (3.0 + (-1.0) ** (j + 1))
            w[0] = self.eta / 3.0
        return w

    @property
    def log_strike_spacing(self) -> float:
        return 2.0 * np.pi / (self.N * self.eta)


@dataclass
class TransformSum:
    """Coefficients of ``Re sum_j coef_j exp((1 - a_j) m)`` plus what is
    needed for the mirrored (negative-frequency) half."""

    a: np.ndarray
    coef: np.ndarray
    raw: np.ndarray  # integrand without quadrature weights
    coef_neg: np.ndarray | None  # unweighted integrand at -u_j

    def value(self, m):
        m = np.asarray(m, dtype=float)
        phase = np.exp(np.multiply.outer(m, 1.0 - self.a))
        return phase @ self.coef

    def imag_residue(self, m, eta: float):
        """Imaginary part of the full-line sum (should vanish)."""
        if self.coef_neg is None:
            return np.nan
        m = np.asarray(m, dtype=float)
        pos = np.exp(np.multiply.outer(m, 1.0 - self.a))
        neg = np.exp(np.multiply.outer(m, 1.0 - np.conj(self.a)))
        g_pos = pos * self.raw
        g_neg = neg * self.coef_neg
        total = g_pos[..., 0] + (g_pos[..., 1:] + g_neg[..., 1:]).sum(axis=-1)
        return np.imag(total) * eta / (2.0 * np.pi)

    def tail_ratio(self, m):
        m = np.asarray(m, dtype=float)
        phase = np.exp(np.multiply.outer(m, 1.0 - self.a))
        terms = phase * self.coef
        total = np.abs(terms.sum(axis=-1))
        return np.abs(terms[..., -1]) / np.maximum(total, 1e-300)


def damped_terms(model: ModelSpec, t: float, T: float, grid: TransformGrid, extra=None,
                 generic: bool = False, mirror: bool = True) -> TransformSum:
    """Build ``coef_j = w_j phi*(z_j) extra_j / ((a_j - 1) a_j)``.

    ``extra`` is an optional callable of ``a`` (the hedge multiplies in the
    inner jump integral).  With ``mirror`` the integrand is also evaluated at
    negative frequencies for the imaginary-residue diagnostic.
    """
    ctx = CharFnContext(model, t, T)
    logphi = log_phi_star_generic if generic else log_phi_star
    z = grid.z
    a = 1j * z
    base = np.exp(logphi(ctx, z)) / ((a - 1.0) * a)
    if extra is not None:
        base = base * extra(a)
    coef_neg = None
    if mirror:
        zn = -grid.u - 1j * grid.R
        an = 1j * zn
        neg = np.exp(logphi(ctx, zn)) / ((an - 1.0) * an)
        if extra is not None:
            neg = neg * extra(an)
        coef_neg = neg
    return TransformSum(a=a, coef=grid.quad_weights * base, raw=base, coef_neg=coef_neg)


@dataclass
class PriceResult:
    price: float
    strike: float
    imag_residue: float
    tail_ratio: float
    method: str
    raw: float = np.nan

    @property
    def coverage_ok(self) -> bool:
        return bool(self.tail_ratio < TAIL_RATIO_MAX)

    def __float__(self):
        return float(self.price)


def _warn_coverage(ratio):
    if np.any(ratio >= TAIL_RATIO_MAX):
        warnings.warn(
            f"last frequency summand is {np.max(ratio):.2e} of the sum; "
            "increase N * eta for full accuracy",
            CoverageWarning,
            stacklevel=3,
        )


def price_call_quad(model: ModelSpec, state: MarketState, option: OptionSpec,
                    grid: TransformGrid = TransformGrid(), generic: bool = False) -> PriceResult:
    """Call price by the damped-transform sum at a single strike."""
    check_state(model, state, option)
    terms = damped_terms(model, state.t, option.maturity, grid, generic=generic)
    m = np.log(option.strike / state.spot)
    raw = state.spot / np.pi * float(np.real(terms.value(m)))
    residue = state.spot * float(terms.imag_residue(m, grid.eta))
    ratio = float(terms.tail_ratio(m))
    _warn_coverage(ratio)
    return PriceResult(price=max(raw, 0.0), strike=option.strike, imag_residue=residue,
                       tail_ratio=ratio, method="quad", raw=raw)


def strike_lattice(spot: float, grid: TransformGrid) -> np.ndarray:
    """Log-strike nodes ``log S + lambda (m - N/2)``."""
    lam = grid.log_strike_spacing
    return np.log(spot) + lam * (np.arange(grid.N) - grid.N // 2)


def fft_sum(terms: TransformSum, spot: float, grid: TransformGrid) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate ``sum_j coef_j exp((1 - a_j) m)`` at every lattice node with one FFT.

    Returns ``(log_strikes, sums)`` where the sums are complex.
    """
    ks = strike_lattice(spot, grid)
    m0 = ks[0] - np.log(spot)
    # exp((1 - a_j) m) = exp((1 - R) m) exp(-i u_j m), and u_j * lam * n = 2 pi j n / N
    x = terms.coef * np.exp(-1j * grid.u * m0)
    sums = np.exp((1.0 - grid.R) * (ks - np.log(spot))) * np.fft.fft(x)
    return ks, sums


def select_window(ks, strike_window):
    lo, hi = strike_window
    if not 0 < lo <= hi:
        raise ValueError(f"bad strike window {strike_window}")
    sel = (ks >= np.log(lo)) & (ks <= np.log(hi))
    if not np.any(sel):
        raise ValueError(f"strike window {strike_window} contains no lattice node")
    if np.log(lo) < ks[0] or np.log(hi) > ks[-1]:
        raise ValueError(f"strike window {strike_window} exceeds lattice range "
                         f"[{np.exp(ks[0]):.4g}, {np.exp(ks[-1]):.4g}]")
    return sel


def price_curve_fft(model: ModelSpec, state: MarketState, maturity: float,
                    grid: TransformGrid = TransformGrid(), strike_window=(0.5, 1.5),
                    generic: bool = False) -> list[tuple[float, float]]:
    """Call prices at every log-strike lattice node inside ``strike_window``."""
    check_state(model, state, OptionSpec(1.0, maturity))
    terms = damped_terms(model, state.t, maturity, grid, generic=generic, mirror=False)
    ks, sums = fft_sum(terms, state.spot, grid)
    sel = select_window(ks, strike_window)
    prices = state.spot / np.pi * np.real(sums[sel])
    return list(zip(np.exp(ks[sel]).tolist(), prices.tolist()))


def interpolate_curve(curve, strike: float) -> float:
    """Quartic (5-point Lagrange) interpolation in log-strike on a curve."""
    ks = np.log([k for k, _ in curve])
    vs = np.array([v for _, v in curve])
    k = np.log(strike)
    if not ks[0] <= k <= ks[-1]:
        raise ValueError("strike outside curve")
    i = int(np.clip(np.searchsorted(ks, k) - 2, 0, len(ks) - 5))
    xs, ys = ks[i:i + 5], vs[i:i + 5]
    out = 0.0
    for a in range(5):
        basis = np.prod([(k - xs[b]) / (xs[a] - xs[b]) for b in range(5) if b != a])
        out += ys[a] * basis
    return float(out)


ATOM_PROBE = (1e6, 2e6)
EDGE_RATIO_MAX = 1e-9


def increment_atom(ctx: CharFnContext) -> tuple[float, float]:
    """Point mass of ``X = L_T - L_t`` as ``(weight, location)``.

    For ``t > 0`` the jump measure on ``[t, T]`` is finite, so with positive
    probability no jump occurs and ``phi*(u) -> a e^{iud}`` as ``u -> inf``.
    Both constants are read off ``log phi*`` at two large frequencies, where
    the remainder is ``O(u^-2)``.  Returns ``(0, 0)`` when there is no atom.
    """
    u1, u2 = ATOM_PROBE
    lp1, lp2 = log_phi_star(ctx, np.array([u1, u2], dtype=complex))
    # without an atom |phi*| keeps decaying between the probes
    if abs(lp2.real - lp1.real) > 1e-6:
        return 0.0, 0.0
    slope = (lp2 - lp1) / (u2 - u1)
    const = lp2 - slope * u2
    return float(np.exp(const.real)), float(slope.imag)


def increment_density(ctx: CharFnContext, n: int = 2**18, half_width: float | None = None):
    """Absolutely continuous part of the law of ``X = L_T - L_t`` under P*.

    ``p(y) = (1/pi) Re int_0^inf e^{-iuy} (phi*(u) - a e^{iud}) du`` evaluated
    with a trapezoid rule and one FFT onto ``y_k = -Y + k dy``; ``(a, d)`` is
    the atom from :func:`increment_atom`.

    :return: ``(y, p, (a, d))``
    """
    if half_width is None:
        p = ctx.model.params
        rate = min(p.G, p.M) * ctx.model.T ** (-p.H)
        half_width = max(45.0 / rate, 1.0)
    dy = 2.0 * half_width / n
    du = 2.0 * np.pi / (n * dy)
    u = du * np.arange(n)
    w = np.full(n, du)
    w[0] *= 0.5
    weight, loc = increment_atom(ctx)
    phi = np.exp(log_phi_star(ctx, u)) - weight * np.exp(1j * u * loc)
    y = -half_width + dy * np.arange(n)
    dens = np.real(np.fft.fft(w * phi * np.exp(1j * u * half_width))) / np.pi
    return y, dens, (weight, loc)


def price_call_inversion(model: ModelSpec, state: MarketState, option: OptionSpec,
                         n: int = 2**18, half_width: float | None = None) -> float:
    """Call price from the recovered law of the log-return.

    The put ``E[(K - S e^X)^+]`` has a bounded payoff, so it is integrated
    against the density and the call follows from parity with forward ``S``
    (S is a P*-martingale).  Integrating the unbounded call payoff directly
    amplifies density round-off by ``e^y`` in the right tail.
    """
    check_state(model, state, option)
    ctx = CharFnContext(model, state.t, option.maturity)
    y, dens, (weight, loc) = increment_density(ctx, n, half_width)
    dy = y[1] - y[0]
    mass = dens.sum() * dy + weight
    if abs(mass - 1.0) > 1e-6:
        raise ValueError(f"recovered law has mass {mass:.9f}; widen the grid")
    # a periodic inversion keeps the mass but wraps the tails onto the edges
    edge = max(abs(dens[0]), abs(dens[-1])) / dens.max()
    if edge > EDGE_RATIO_MAX:
        raise ValueError(f"density at the grid edges is {edge:.2e} of its peak; widen the grid")
    put_payoff = np.maximum(option.strike - state.spot * np.exp(y), 0.0)
    put = float(np.sum(put_payoff * dens) * dy)
    put += weight * max(option.strike - state.spot * np.exp(loc), 0.0)
    return max(state.spot - option.strike + put, 0.0)
