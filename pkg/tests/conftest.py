import numpy as np
import pytest

from lrmhedge.model import HalfVariance, Martingale, ModelSpec, VGSSDParams

DRIFTS = {1: Martingale, 2: HalfVariance}


def make_model(model_id=1, M=16.0, T=1.0):
    return ModelSpec.symmetric(M, T, DRIFTS[model_id]())


def asym_model(drift=None, T=1.0):
    return ModelSpec(VGSSDParams(C=1.3, G=9.0, M=14.0, H=0.35), drift or Martingale(), T)


@pytest.fixture
def m4():
    return make_model(1, 4.0, 1.0)


@pytest.fixture
def m16():
    return make_model(1, 16.0, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
