import warnings

import numpy as np
import pytest

from conftest import make_model
from lrmhedge.hedging import (
    T_FLOOR,
    inner_integral,
    xi_at_strikes,
    xi_curve_fft,
    xi_fft,
    xi_quad_direct,
)
from lrmhedge.model import MarketState, OptionSpec
from lrmhedge.pricing import CoverageWarning, TransformGrid
from lrmhedge.quadrature import jump_integral

pytestmark = pytest.mark.filterwarnings("ignore::lrmhedge.pricing.CoverageWarning")

CASES = [(0.0, 0.5, 1.0), (0.0, 0.5, 1.2), (0.5, 1.0, 0.9)]


def hedge(model_id, M, t, T, K, S=1.0, fn=xi_fft, **kw):
    model = make_model(model_id, M, 1.0 if T > 0.5 else 0.5)
    return fn(model, MarketState(t, S), OptionSpec(K, T), **kw)


class TestInnerIntegral:
    def test_example_vs_quadrature(self):
        model = make_model(1, 16.0)
        z = 3j + 1.75
        oracle = jump_integral(model, 0.25, lambda x: np.expm1(z * x) * np.expm1(x), growth=2.75)
        assert abs(inner_integral(model, 0.25, z) - oracle) < 1e-8 * abs(oracle)

    @pytest.mark.parametrize("model_id", [1, 2])
    @pytest.mark.parametrize("t", [0.1, 0.5, 1.0])
    @pytest.mark.parametrize("z", [1.25 + 0j, 1.75 + 1j, 1.5 - 10j, 2.0 + 40j])
    def test_grid_vs_quadrature(self, model_id, t, z):
        model = make_model(model_id, 16.0)
        oracle = jump_integral(model, t, lambda x: np.expm1(z * x) * np.expm1(x), growth=z.real + 1)
        assert abs(inner_integral(model, t, z) - oracle) < 1e-8 * abs(oracle)

    def test_at_one_is_sigma_like(self):
        from lrmhedge.model import big_sigma
        model = make_model(1, 4.0)
        assert inner_integral(model, 0.5, 1.0).real == pytest.approx(big_sigma(model, 0.5), rel=1e-13)


class TestLimits:
    def test_deep_itm(self):
        assert hedge(1, 16.0, 0.0, 0.5, 0.001).xi == pytest.approx(1.0, abs=0.01)

    def test_deep_otm(self):
        assert abs(hedge(1, 16.0, 0.0, 0.5, 100.0).xi) < 1e-4

    @pytest.mark.parametrize("model_id", [1, 2])
    @pytest.mark.parametrize("M", [4.0, 16.0])
    def test_residue_and_bounds(self, model_id, M):
        res = hedge(model_id, M, 0.0, 0.5, 1.0)
        assert abs(res.imag_residue) < 1e-8
        assert -0.01 <= res.xi <= 1.01
        assert res.t_eval == T_FLOOR


class TestCrossPath:
    @pytest.mark.parametrize("model_id", [1, 2])
    @pytest.mark.parametrize("M", [4.0, 16.0])
    @pytest.mark.parametrize("t, T, K", CASES + [(0.99, 1.0, 1.0)])
    def test_fft_vs_direct(self, model_id, M, t, T, K):
        a = hedge(model_id, M, t, T, K).xi
        b = hedge(model_id, M, t, T, K, fn=xi_quad_direct).xi
        assert abs(a - b) < 1e-4

    @pytest.mark.parametrize("model_id", [1, 2])
    @pytest.mark.parametrize("M", [4.0, 16.0])
    def test_grid_refinement(self, model_id, M):
        a = hedge(model_id, M, 0.0, 0.5, 1.0).xi
        b = hedge(model_id, M, 0.0, 0.5, 1.0, grid=TransformGrid(N=2**15, eta=0.125)).xi
        assert abs(a - b) < 1e-6

    def test_generic_path_invariance(self):
        a = hedge(1, 16.0, 0.25, 1.0, 1.05).xi
        b = hedge(1, 16.0, 0.25, 1.0, 1.05, generic=True).xi
        assert abs(a - b) < 1e-8


class TestShape:
    @pytest.mark.parametrize("model_id", [1, 2])
    def test_scale_invariance(self, model_id):
        a = hedge(model_id, 16.0, 0.2, 1.0, 1.1).xi
        b = hedge(model_id, 16.0, 0.2, 1.0, 2.2, S=2.0).xi
        assert abs(a - b) < 1e-10

    @pytest.mark.parametrize("model_id", [1, 2])
    def test_curve_matches_single_strike(self, model_id):
        model = make_model(model_id, 16.0, 0.5)
        curve = xi_curve_fft(model, MarketState(0.0, 1.0), 0.5, strike_window=(0.8, 1.25))
        strikes = [k for k, _ in curve]
        single = xi_at_strikes(model, MarketState(0.0, 1.0), 0.5, strikes)
        assert np.max(np.abs(np.array([v for _, v in curve]) - single)) < 1e-10
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", CoverageWarning)
            k, v = curve[len(curve) // 2]
            assert xi_fft(model, MarketState(0.0, 1.0), OptionSpec(k, 0.5)).xi == pytest.approx(v, abs=1e-10)

    @pytest.mark.parametrize("model_id", [1, 2])
    @pytest.mark.parametrize("M", [4.0, 16.0])
    def test_monotone_in_strike(self, model_id, M):
        model = make_model(model_id, M, 0.5)
        xi = xi_at_strikes(model, MarketState(0.0, 1.0), 0.5, np.arange(51, 151) / 100)
        assert np.all(np.diff(xi) <= 1e-6)
        assert np.all((xi >= -0.01) & (xi <= 1.01))

    def test_half_variance_hedge_differs(self):
        a = hedge(1, 16.0, 0.0, 0.5, 1.0)
        b = hedge(2, 16.0, 0.0, 0.5, 1.0)
        assert a.mu_s_t == 0 and b.mu_s_t < 0
        assert abs(a.xi - b.xi) > 1e-3


def test_rejects_expired_state():
    model = make_model(1, 16.0, 1.0)
    with pytest.raises(ValueError):
        xi_fft(model, MarketState(1.0, 1.0), OptionSpec(1.0, 1.0))
