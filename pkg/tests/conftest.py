import numpy as np
import pytest

from agiopp.config import build_plan
from agiopp.presets import preset
from agiopp.rrbasis import encode


@pytest.fixture(scope="session")
def f4_plan():
    return build_plan(preset("f4-kummer"))


@pytest.fixture(scope="session")
def hermitian_plan():
    return build_plan(preset("hermitian"))


@pytest.fixture(scope="session")
def tower_plan():
    return build_plan(preset("tower-q2"))


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


def random_codeword(plan, rng):
    top = plan.levels[0]
    message = plan.spec.field.Random(top.dimension, seed=rng)
    return encode(message, top.basis, top.domain)


def corrupt(word, positions, rng):
    """
    Add a nonzero random error at every given position.
    """
    field = type(word)
    out = word.copy()
    for k in positions:
        out[k] += field(int(rng.integers(1, field.order)))
    return out
