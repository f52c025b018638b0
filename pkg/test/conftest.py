"""
Shared pytest fixtures for unit tests.
"""
import numpy as np
import pytest

from pywell.feature_library import TrigPoly
from pywell.flows import TorusFlow
from pywell.forms import OneForm
from pywell.hamiltonian import PolynomialPotential
from pywell.turing import compile_machine
from pywell.turing import incrementer
from pywell.turing import Tape
from pywell.turing import writer


class _LazyFixture:
    """Placeholder for a fixture value inside ``parametrize`` (replaces the
    unmaintained pytest-lazy-fixture plugin, which is incompatible with
    pytest >= 8)."""

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return "<lazy_fixture {}>".format(self.name)


if not hasattr(pytest, "lazy_fixture"):
    pytest.lazy_fixture = _LazyFixture


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_setup(item):
    yield
    funcargs = getattr(item, "funcargs", None)
    if not funcargs:
        return
    for key, value in list(funcargs.items()):
        if isinstance(value, _LazyFixture):
            funcargs[key] = item._request.getfixturevalue(value.name)


@pytest.fixture
def data_derivative_1d():
    x = 2 * np.linspace(1, 100, 100)
    x_dot = 2 * np.ones(100).reshape(-1, 1)
    return x, x_dot


@pytest.fixture
def data_derivative_2d():
    x = np.zeros((100, 2))
    x[:, 0] = 2 * np.linspace(1, 100, 100)
    x[:, 1] = -10 * np.linspace(1, 100, 100)

    x_dot = np.ones((100, 2))
    x_dot[:, 0] *= 2
    x_dot[:, 1] *= -10
    return x, x_dot


@pytest.fixture
def rng():
    return np.random.RandomState(0)


@pytest.fixture
def bryant():
    return TorusFlow.bryant()


@pytest.fixture
def rotation():
    return TorusFlow.rotation([1.0, 0.5])


@pytest.fixture
def circle_shift():
    return TorusFlow.circle_shift()


@pytest.fixture
def bryant_x_circle():
    return TorusFlow.bryant().product_with_circle()


@pytest.fixture
def dx():
    return OneForm.coordinate(2, 0)


@pytest.fixture
def weak_form():
    # dx + d(sin(2 pi x) / 2 pi); theta(Y) vanishes at x = 1/2 for Y = (1, a)
    return OneForm(
        [TrigPoly.constant(2, 1.0) + TrigPoly.cos((1, 0), 1.0), TrigPoly.zero(2)],
        name="weak",
    )


@pytest.fixture
def harmonic():
    return PolynomialPotential.harmonic(2)


@pytest.fixture
def quartic():
    return PolynomialPotential.quartic(2)


@pytest.fixture
def data_writer():
    return writer(), Tape()


@pytest.fixture
def data_incrementer():
    return incrementer(), Tape.from_list([1, 1])


@pytest.fixture
def compiled_incrementer():
    return compile_machine(incrementer())
