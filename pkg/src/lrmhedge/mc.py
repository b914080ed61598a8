"""Monte Carlo oracle for the martingale-drift model, where P* = P.

By self-similarity ``L_T = rho_T + T^H X``, with ``X`` variance-gamma in CGM
form: ``X = Gamma(C, rate M) - Gamma(C, rate G)``.  Gamma variates are exact:
numpy's Marsaglia-Tsang rejection sampler, or inverse-CDF sampling when
antithetic pairs ``(U, 1 - U)`` are requested.

Paths are generated in fixed-size chunks, each with its own
``SeedSequence`` child of the master seed, so results do not depend on how
many worker threads are used.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import special

from .model import MarketState, Martingale, ModelSpec, OptionSpec, check_state

CHUNK = 1 << 16


class UnsupportedModelError(ValueError):
    pass


@dataclass(frozen=True)
class MCConfig:
    paths: int = 10**6
    seed: int = 20240601
    antithetic: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.paths < 1:
            raise ValueError("paths must be >= 1")
        if self.antithetic and self.paths % 2:
            raise ValueError("antithetic sampling needs an even number of paths")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def _require_martingale(model: ModelSpec):
    if not isinstance(model.drift, Martingale):
        raise UnsupportedModelError(
            "Monte Carlo sampling is only available for the martingale drift (P* = P)"
        )


def _chunk_sizes(paths: int):
    full, rest = divmod(paths, CHUNK)
    return [CHUNK] * full + ([rest] if rest else [])


def _vg_chunk(seed_seq, n, C, G, M, antithetic):
    rng = np.random.default_rng(seed_seq)
    if not antithetic:
        return rng.gamma(C, 1.0 / M, n) - rng.gamma(C, 1.0 / G, n)
    half = n // 2
    u1 = rng.random(half)
    u2 = rng.random(half)
    up = np.concatenate([u1, 1.0 - u1])
    dn = np.concatenate([u2, 1.0 - u2])
    return special.gammaincinv(C, up) / M - special.gammaincinv(C, dn) / G


def sample_vg(model: ModelSpec, config: MCConfig) -> np.ndarray:
    """Unit-time variance-gamma variates with the model's (C, G, M)."""
    p = model.params
    sizes = _chunk_sizes(config.paths)
    if config.antithetic and any(s % 2 for s in sizes):
        raise ValueError("antithetic chunks must be even")
    children = np.random.SeedSequence(config.seed).spawn(len(sizes))
    jobs = [(c, n, p.C, p.G, p.M, config.antithetic) for c, n in zip(children, sizes)]
    if config.workers > 1:
        with ThreadPoolExecutor(config.workers) as pool:
            parts = list(pool.map(lambda a: _vg_chunk(*a), jobs))
    else:
        parts = [_vg_chunk(*a) for a in jobs]
    return np.concatenate(parts) if parts else np.empty(0)


def sample_terminal_log_price(model: ModelSpec, T: float, config: MCConfig = MCConfig()) -> np.ndarray:
    """Samples of ``L_T`` under the martingale drift."""
    _require_martingale(model)
    if not 0 <= T <= model.T:
        raise ValueError(f"T = {T} outside [0, {model.T}]")
    if T == 0:
        return np.zeros(config.paths)
    rho_T = model.drift.integrated(model, 0.0, T)
    return rho_T + T**model.params.H * sample_vg(model, config)


def _mean_and_se(values: np.ndarray, antithetic: bool):
    if antithetic:
        half = values.size // 2
        # chunks are [x, x_anti] blocks; pair index by index within each chunk
        pairs = []
        start = 0
        for n in _chunk_sizes(values.size):
            h = n // 2
            pairs.append(0.5 * (values[start:start + h] + values[start + h:start + n]))
            start += n
        values = np.concatenate(pairs)
        assert values.size == half
    mean = float(values.mean())
    se = float(values.std(ddof=1) / np.sqrt(values.size))
    return mean, se


def martingale_check(model: ModelSpec, T: float, config: MCConfig = MCConfig()):
    """Sample mean and standard error of ``exp(L_T)``; should be 1."""
    return _mean_and_se(np.exp(sample_terminal_log_price(model, T, config)), config.antithetic)


def mc_call_price(model: ModelSpec, state: MarketState, option: OptionSpec,
                  config: MCConfig = MCConfig()) -> tuple[float, float]:
    """(price, standard error) of the call at t = 0."""
    _require_martingale(model)
    check_state(model, state, option)
    if state.t != 0:
        raise UnsupportedModelError("Monte Carlo pricing is implemented for t = 0 only")
    log_ret = sample_terminal_log_price(model, option.maturity, config)
    payoff = np.maximum(state.spot * np.exp(log_ret) - option.strike, 0.0)
    return _mean_and_se(payoff, config.antithetic)


def log_price_moments(model: ModelSpec, T: float) -> tuple[float, float]:
    """Exact mean and variance of ``L_T`` from the cumulant generating function."""
    p = model.params
    mean = model.drift.integrated(model, 0.0, T) + p.C * T**p.H * (1.0 / p.M - 1.0 / p.G)
    var = p.C * T ** (2 * p.H) * (1.0 / p.M**2 + 1.0 / p.G**2)
    return float(mean), float(var)

