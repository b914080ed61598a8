import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import asym_model, make_model
from lrmhedge.charfn import CharFnContext, log_phi_star, log_phi_star_generic, phi_star
from lrmhedge.model import HalfVariance, Martingale


@pytest.mark.parametrize("model_id", [1, 2])
@pytest.mark.parametrize("M", [4.0, 16.0])
@pytest.mark.parametrize("t, T", [(0.0, 0.5), (0.25, 1.0), (0.5, 1.0)])
def test_martingale_identity(model_id, M, t, T):
    ctx = CharFnContext(make_model(model_id, M, 1.0), t, T)
    assert abs(phi_star(ctx, -1j) - 1.0) < 1e-10


def test_at_zero():
    ctx = CharFnContext(make_model(2, 16.0), 0.2, 0.9)
    assert phi_star(ctx, 0.0) == 1.0


def test_closed_form_model_1():
    M, t, T = 16.0, 0.3, 0.8
    ctx = CharFnContext(make_model(1, M), t, T)
    z = np.array([0.1, 3.0, 250.0]) - 0.75j
    expected = np.log((M**2 + z**2 * t) / (M**2 + z**2 * T)) - 1j * z * np.log((M**2 - t) / (M**2 - T))
    assert np.allclose(log_phi_star(ctx, z), expected, rtol=1e-13)


@given(u=st.floats(-200, 200), v=st.floats(-1.5, 0.0))
@settings(max_examples=100, deadline=None)
def test_hermitian(u, v):
    ctx = CharFnContext(make_model(2, 4.0), 0.1, 0.6)
    z = complex(u, v)
    assert np.isclose(phi_star(ctx, -z.conjugate()), np.conj(phi_star(ctx, z)), rtol=1e-12, atol=1e-15)


@pytest.mark.parametrize("model_id", [1, 2])
def test_modulus_bounded_on_real_axis(model_id):
    ctx = CharFnContext(make_model(model_id, 4.0), 0.0, 1.0)
    u = np.linspace(0, 4096, 20001)
    assert np.all(np.abs(phi_star(ctx, u)) <= 1.0 + 1e-14)


@pytest.mark.parametrize("model_id", [1, 2])
@pytest.mark.parametrize("M", [4.0, 16.0])
@pytest.mark.parametrize("t, T", [(0.0, 0.5), (0.5, 1.0)])
def test_closed_vs_generic(model_id, M, t, T):
    ctx = CharFnContext(make_model(model_id, M, 1.0), t, T)
    u = np.concatenate([np.linspace(0, 20, 41), np.geomspace(20, 4096, 40)])
    z = u - 1.75j
    closed = log_phi_star(ctx, z)
    generic = log_phi_star_generic(ctx, z)
    # log values; relative agreement in phi*
    assert np.max(np.abs(np.expm1(closed - generic))) < 1e-9


def test_generic_path_for_asymmetric_model():
    model = asym_model(HalfVariance())
    ctx = CharFnContext(model, 0.1, 0.9)
    assert abs(np.exp(log_phi_star_generic(ctx, -1j)) - 1.0) < 1e-10
    ctx1 = CharFnContext(asym_model(Martingale()), 0.1, 0.9)
    z = np.array([0.5 - 1.2j, 7.0 - 0.5j])
    assert np.allclose(log_phi_star(ctx1, z), log_phi_star_generic(ctx1, z), rtol=1e-9, atol=1e-12)


@pytest.mark.parametrize("t, T", [(0.5, 0.5), (0.6, 0.5), (-0.1, 0.5), (0.0, 1.5)])
def test_context_validation(t, T):
    with pytest.raises(ValueError):
        CharFnContext(make_model(1, 16.0, 1.0), t, T)
