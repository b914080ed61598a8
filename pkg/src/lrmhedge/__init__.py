"""Locally risk-minimizing hedges and call prices for exponential VGSSD models."""

from .assumptions import AssumptionReport, Verdict, check_all
from .charfn import CharFnContext, log_phi_star, log_phi_star_generic, phi_star
from .hedging import HedgeResult, inner_integral, xi_at_strikes, xi_curve_fft, xi_fft, xi_quad_direct
from .mc import MCConfig, mc_call_price, sample_terminal_log_price
from .model import (
    HalfVariance,
    MarketState,
    Martingale,
    ModelSpec,
    OptionSpec,
    StripError,
    Tabulated,
    VGSSDParams,
    big_sigma,
    cumulant,
    l,
    lambda_t,
    levy_density,
    mu_s,
    q,
    q_integrated,
    theta,
)
from .pricing import (
    PriceResult,
    TransformGrid,
    price_call_inversion,
    price_call_quad,
    price_curve_fft,
)

__all__ = [
    "AssumptionReport",
    "big_sigma",
    "CharFnContext",
    "check_all",
    "cumulant",
    "HalfVariance",
    "HedgeResult",
    "inner_integral",
    "l",
    "lambda_t",
    "levy_density",
    "log_phi_star",
    "log_phi_star_generic",
    "MarketState",
    "Martingale",
    "mc_call_price",
    "MCConfig",
    "ModelSpec",
    "mu_s",
    "OptionSpec",
    "phi_star",
    "price_call_inversion",
    "price_call_quad",
    "price_curve_fft",
    "PriceResult",
    "q",
    "q_integrated",
    "sample_terminal_log_price",
    "StripError",
    "Tabulated",
    "theta",
    "TransformGrid",
    "Verdict",
    "VGSSDParams",
    "xi_at_strikes",
    "xi_curve_fft",
    "xi_fft",
    "xi_quad_direct",
]

__version__ = "0.1.0"
