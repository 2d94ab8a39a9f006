import numpy as np
import pytest

from goluzin_lab.elliptic import params_from_x0
from goluzin_lab.theta import JacobiContext
from goluzin_lab.torus import GreenEvaluator


@pytest.fixture(scope="session")
def params_half():
    return params_from_x0(0.5)


@pytest.fixture(scope="session")
def ctx_kappa(params_half):
    return JacobiContext(params_half, "kappa")


@pytest.fixture(scope="session")
def ctx_l(params_half):
    return JacobiContext(params_half, "x0_squared")


@pytest.fixture(scope="session")
def green_half(params_half):
    return GreenEvaluator.from_params(params_half)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


def grid_in_rect(rng, n, x_half, y_half, margin=0.9):
    """Random complex points in (-x_half, x_half) x (-y_half, y_half)."""
    return rng.uniform(-margin * x_half, margin * x_half, n) + 1j * rng.uniform(
        -margin * y_half, margin * y_half, n
    )
