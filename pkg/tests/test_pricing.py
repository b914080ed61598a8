import warnings

import numpy as np
import pytest

from conftest import make_model
from lrmhedge.charfn import CharFnContext
from lrmhedge.model import MarketState, OptionSpec
from lrmhedge.pricing import (
    CoverageWarning,
    TransformGrid,
    increment_atom,
    increment_density,
    interpolate_curve,
    price_call_inversion,
    price_call_quad,
    price_curve_fft,
    strike_lattice,
)

FINE = TransformGrid(N=2**17, eta=0.05)
T0 = MarketState(0.0, 1.0)

# values from the inversion oracle (independent of the frequency sum)
REFERENCE = {
    (1, 4.0): 0.0897178948,
    (1, 16.0): 0.0221183853,
    (2, 4.0): 0.0947731752,
    (2, 16.0): 0.0221950062,
}


def quiet_price(*args, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CoverageWarning)
        return price_call_quad(*args, **kw)


class TestGrid:
    @pytest.mark.parametrize("kw", [dict(N=1000), dict(N=1), dict(eta=0), dict(R=1.0), dict(R=2.1),
                                    dict(weights="simps")])
    def test_validation(self, kw):
        with pytest.raises(ValueError):
            TransformGrid(**kw)

    def test_nodes(self):
        g = TransformGrid(N=8, eta=0.5, R=1.5)
        assert np.allclose(g.z, 0.5 * np.arange(8) - 1.5j)
        assert g.log_strike_spacing == pytest.approx(2 * np.pi / 4)

    @pytest.mark.parametrize("rule, first", [("trapezoid", 0.125), ("rectangle", 0.25)])
    def test_weights(self, rule, first):
        w = TransformGrid(N=16, eta=0.25, weights=rule).quad_weights
        assert w[0] == first and np.all(w[1:-1] == 0.25)

    def test_lattice_centred_on_spot(self):
        g = TransformGrid()
        ks = strike_lattice(1.3, g)
        assert ks[g.N // 2] == pytest.approx(np.log(1.3), abs=1e-15)


class TestPriceQuad:
    @pytest.mark.parametrize("key", sorted(REFERENCE))
    def test_reference_values(self, key):
        model = make_model(key[0], key[1], 0.5)
        res = quiet_price(model, T0, OptionSpec(1.0, 0.5))
        assert res.price == pytest.approx(REFERENCE[key], abs=1e-8)
        assert abs(res.imag_residue) < 1e-8

    @pytest.mark.parametrize("model_id", [1, 2])
    @pytest.mark.parametrize("M", [4.0, 16.0])
    def test_r_invariance_fine_grid(self, model_id, M):
        model = make_model(model_id, M, 0.5)
        prices = [quiet_price(model, T0, OptionSpec(1.0, 0.5),
                              TransformGrid(N=FINE.N, eta=FINE.eta, R=R)).price
                  for R in (1.25, 1.5, 1.75, 2.0)]
        assert (max(prices) - min(prices)) / prices[0] < 1e-6

    def test_aliasing_shrinks_with_damping(self):
        # on the baseline grid the aliasing error decays like exp(-(R - 1) 2 pi / eta)
        model = make_model(1, 4.0, 0.5)
        exact = quiet_price(model, T0, OptionSpec(1.0, 0.5), FINE).price
        errs = [abs(quiet_price(model, T0, OptionSpec(1.0, 0.5), TransformGrid(R=R)).price - exact)
                for R in (1.25, 1.5, 1.75)]
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] < 1e-7

    def test_rectangle_rule_bias(self):
        model = make_model(1, 4.0, 0.5)
        rect = quiet_price(model, T0, OptionSpec(1.0, 0.5), TransformGrid(weights="rectangle")).price
        trap = quiet_price(model, T0, OptionSpec(1.0, 0.5)).price
        # the u = 0 node carries a full weight eta instead of eta / 2
        assert rect - trap > 0.01

    @pytest.mark.parametrize("model_id", [1, 2])
    @pytest.mark.parametrize("t, S, K", [(0.0, 1.0, 0.5), (0.0, 1.0, 1.4), (0.3, 2.0, 2.1),
                                         (0.9, 1.0, 1.0)])
    def test_bounds(self, model_id, t, S, K):
        model = make_model(model_id, 16.0, 1.0)
        price = quiet_price(model, MarketState(t, S), OptionSpec(K, 1.0)).price
        assert max(S - K, 0.0) - 1e-9 <= price <= S

    def test_deep_itm(self):
        model = make_model(1, 4.0, 1.0)
        price = quiet_price(model, T0, OptionSpec(1e-4, 1.0)).price
        assert price == pytest.approx(1.0 - 1e-4, abs=1e-3)

    def test_homogeneity(self):
        model = make_model(2, 16.0, 0.5)
        a = quiet_price(model, MarketState(0.1, 1.0), OptionSpec(1.1, 0.5)).price
        b = quiet_price(model, MarketState(0.1, 3.0), OptionSpec(3.3, 0.5)).price
        assert b == pytest.approx(3 * a, rel=1e-12)

    def test_coverage_flag(self):
        model = make_model(1, 16.0, 1.0)
        with pytest.warns(CoverageWarning):
            res = price_call_quad(model, MarketState(0.5, 1.0), OptionSpec(1.0, 1.0))
        assert not res.coverage_ok


@pytest.fixture(scope="module")
def curve():
    return price_curve_fft(make_model(1, 4.0, 0.5), T0, 0.5, strike_window=(0.51, 1.5))


class TestFFTCurve:
    def test_nodes_match_single_strike(self, curve):
        model = make_model(1, 4.0, 0.5)
        dev = max(abs(quiet_price(model, T0, OptionSpec(k, 0.5)).raw - v) for k, v in curve)
        assert dev < 1e-6

    def test_monotone_and_convex(self, curve):
        prices = np.array([v for _, v in curve])
        assert np.all(np.diff(prices) <= 0)
        assert np.all(np.diff(prices, 2) >= -1e-5)

    def test_spacing(self, curve):
        ks = np.log([k for k, _ in curve])
        assert np.allclose(np.diff(ks), TransformGrid().log_strike_spacing)

    def test_interpolation(self, curve):
        model = make_model(1, 4.0, 0.5)
        exact = quiet_price(model, T0, OptionSpec(1.0137, 0.5)).price
        assert interpolate_curve(curve, 1.0137) == pytest.approx(exact, abs=1e-6)

    def test_window_outside_lattice(self):
        with pytest.raises(ValueError):
            price_curve_fft(make_model(1, 4.0, 0.5), T0, 0.5, strike_window=(1e-80, 2.0))


class TestInversion:
    @pytest.mark.parametrize("key", sorted(REFERENCE))
    def test_matches_transform(self, key):
        model = make_model(key[0], key[1], 0.5)
        inv = price_call_inversion(model, T0, OptionSpec(1.0, 0.5))
        quad = quiet_price(model, T0, OptionSpec(1.0, 0.5)).price
        assert abs(inv - quad) < 1e-4

    @pytest.mark.parametrize("model_id", [1, 2])
    def test_density_normalised(self, model_id):
        ctx = CharFnContext(make_model(model_id, 4.0, 1.0), 0.25, 1.0)
        y, p, (a, _) = increment_density(ctx)
        assert abs(p.sum() * (y[1] - y[0]) + a - 1.0) < 1e-6

    @pytest.mark.parametrize("t", [0.1, 0.5, 0.9])
    def test_no_jump_atom(self, t):
        # finite jump intensity 2 C H / s on [t, T]: P(no jump) = (t / T)^{2CH}
        model = make_model(1, 16.0, 1.0)
        a, d = increment_atom(CharFnContext(model, t, 1.0))
        assert a == pytest.approx(t, rel=1e-8)
        assert d == pytest.approx(-np.log((256 - t) / 255), rel=1e-8)

    def test_no_atom_from_zero(self):
        assert increment_atom(CharFnContext(make_model(2, 4.0, 1.0), 0.0, 1.0)) == (0.0, 0.0)

    @pytest.mark.parametrize("model_id", [1, 2])
    @pytest.mark.parametrize("t, K", [(0.5, 0.9), (0.5, 1.0), (0.8, 1.1)])
    def test_matches_transform_after_start(self, model_id, t, K):
        model = make_model(model_id, 4.0, 1.0)
        state = MarketState(t, 1.0)
        inv = price_call_inversion(model, state, OptionSpec(K, 1.0))
        ref = quiet_price(model, state, OptionSpec(K, 1.0), TransformGrid(N=2**18, eta=0.05)).price
        assert abs(inv - ref) < 1e-4

    def test_far_otm(self):
        model = make_model(1, 16.0, 0.5)
        assert price_call_inversion(model, T0, OptionSpec(5.0, 0.5)) < 1e-6
        assert quiet_price(model, T0, OptionSpec(5.0, 0.5)).price < 1e-6

    def test_narrow_grid_reported(self):
        with pytest.raises(ValueError, match="widen"):
            price_call_inversion(make_model(1, 4.0, 1.0), T0, OptionSpec(1.0, 1.0), half_width=0.3)
