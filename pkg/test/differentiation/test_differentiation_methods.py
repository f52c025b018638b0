"""
Unit tests for differentiation methods.
"""
import numpy as np
import pytest

from pywell.differentiation import FiniteDifference
from pywell.differentiation.base import BaseDifferentiation


def test_forward_difference_length():
    x = 2 * np.linspace(1, 100, 100)
    forward_difference = FiniteDifference(order=1)
    assert len(forward_difference(x)) == len(x)

    forward_difference_nans = FiniteDifference(order=1, drop_endpoints=True)
    assert len(forward_difference_nans(x)) == len(x)


def test_centered_difference_length():
    x = 2 * np.linspace(1, 100, 100)
    centered_difference = FiniteDifference(order=2)
    assert len(centered_difference(x)) == len(x)

    centered_difference_nans = FiniteDifference(order=2, drop_endpoints=True)
    assert np.isnan(centered_difference_nans(x)[0, 0])


def test_centered_difference_variable_timestep():
    t = np.linspace(1, 10, 100) ** 2
    x = 2 * t
    centered_difference = FiniteDifference(order=2)
    # one-sided end stencils assume equal spacing
    np.testing.assert_allclose(centered_difference(x, t)[1:-1, 0], 2.0)


@pytest.mark.parametrize(
    "data",
    [
        pytest.lazy_fixture("data_derivative_1d"),
        pytest.lazy_fixture("data_derivative_2d"),
    ],
)
def test_forward_difference(data):
    x, x_dot = data
    forward_difference = FiniteDifference(order=1)
    np.testing.assert_allclose(forward_difference(x), x_dot)


@pytest.mark.parametrize(
    "data",
    [
        pytest.lazy_fixture("data_derivative_1d"),
        pytest.lazy_fixture("data_derivative_2d"),
    ],
)
def test_centered_difference(data):
    x, x_dot = data
    centered_difference = FiniteDifference(order=2)
    np.testing.assert_allclose(centered_difference(x), x_dot)


def test_centered_difference_dim():
    x = np.ones((5, 5, 5))
    centered_difference = FiniteDifference(order=2)
    with pytest.raises(ValueError):
        centered_difference(x)


def test_order_error():
    with pytest.raises(NotImplementedError):
        FiniteDifference(order=3)
    with pytest.raises(ValueError):
        FiniteDifference(order=-1)
    with pytest.raises(ValueError):
        FiniteDifference(step=0)


def test_base_class(data_derivative_1d):
    x, x_dot = data_derivative_1d
    with pytest.raises(NotImplementedError):
        BaseDifferentiation()._differentiate(x)
    with pytest.raises(NotImplementedError):
        BaseDifferentiation()._directional(np.sin, x, x)


@pytest.mark.parametrize("order, tol", [(1, 1e-3), (2, 1e-8)])
def test_directional(order, tol):
    fd = FiniteDifference(order=order, step=1e-5)

    def f(x):
        return x[0] ** 2 * x[1]

    value = fd.directional(f, [1.0, 2.0], [1.0, 1.0])
    # grad f = (2 x y, x^2) = (4, 1)
    np.testing.assert_allclose(value, 5.0, atol=tol)


def test_jacobian():
    fd = FiniteDifference(step=1e-6)

    def f(x):
        return np.array([np.sin(x[0]), x[0] * x[1]])

    J = fd.jacobian(f, [0.0, 3.0])
    np.testing.assert_allclose(J, [[1.0, 0.0], [3.0, 0.0]], atol=1e-8)
    with pytest.raises(ValueError):
        fd.jacobian(f, np.zeros((2, 2)))
