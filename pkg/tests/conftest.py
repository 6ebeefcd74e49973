import numpy as np
import pytest

from measurecost.linalg import ket, projector


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


@pytest.fixture
def ket0():
    return projector(ket(0, 2))


@pytest.fixture
def ket1():
    return projector(ket(1, 2))


@pytest.fixture
def plus():
    return projector((ket(0, 2) + ket(1, 2)) / np.sqrt(2.0))


@pytest.fixture
def z_instrument():
    from measurecost.instruments import projective_instrument

    return projective_instrument([projector(ket(0, 2)), projector(ket(1, 2))])
