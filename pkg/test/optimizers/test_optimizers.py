"""
Unit tests for optimizers.
"""
from fractions import Fraction

import numpy as np
import pytest
from sklearn.exceptions import ConvergenceWarning

from pywell.optimizers import BaseOptimizer
from pywell.optimizers import GaussNewton
from pywell.optimizers import RationalSimplex
from pywell.optimizers import verify_optimality


class DummyOptimizer(BaseOptimizer):
    def _reduce(self, x):
        self.coef_ = x


def test_base_optimizer():
    opt = DummyOptimizer().fit([1, 2])
    assert opt.coef_ == [1, 2]
    assert opt.n_iter_ == 0 and opt.history_ == []
    with pytest.raises(ValueError):
        DummyOptimizer(max_iter=0)


def test_simplex_example():
    A, b, c = [[1, 1], [1, 3]], [4, 6], [1, 2]
    opt = RationalSimplex().fit(A, b, c)
    assert opt.status_ == "optimal"
    assert opt.objective_ == 5
    assert opt.coef_ == [3, 1]
    assert opt.dual_ == [Fraction(1, 2), Fraction(1, 2)]
    assert verify_optimality(A, b, c, opt.coef_, opt.dual_)
    assert opt.n_iter_ == 2
    assert opt.history_[-1] == 5


def test_simplex_keeps_fractions():
    A, b, c = [[3, 2], [1, 4]], [Fraction(1, 3), 1], [1, 1]
    opt = RationalSimplex().fit(A, b, c)
    assert all(isinstance(v, Fraction) for v in opt.coef_ + opt.dual_)
    assert verify_optimality(A, b, c, opt.coef_, opt.dual_)


def test_simplex_zero_objective():
    opt = RationalSimplex().fit([[1, 1]], [1], [-1, 0])
    assert opt.status_ == "optimal"
    assert opt.objective_ == 0
    assert opt.n_iter_ == 0


def test_simplex_unbounded():
    opt = RationalSimplex().fit([[-1]], [1], [1])
    assert opt.status_ == "unbounded"


def test_simplex_validation():
    with pytest.raises(ValueError):
        RationalSimplex().fit([[1, 1]], [-1], [1, 1])
    with pytest.raises(ValueError):
        RationalSimplex().fit([[1, 1]], [1, 2], [1, 1])
    with pytest.raises(RuntimeError):
        RationalSimplex(max_iter=1).fit([[1, 1], [1, 3]], [4, 6], [1, 2])


def test_verify_optimality_rejects():
    A, b, c = [[1, 1], [1, 3]], [4, 6], [1, 2]
    # primal feasible, objective below the dual bound
    assert not verify_optimality(A, b, c, [1, 1], [Fraction(1, 2), Fraction(1, 2)])
    assert not verify_optimality(A, b, c, [5, 0], [1, 1])
    assert not verify_optimality(A, b, c, [3, 1], [0, 0])


def test_gauss_newton_converges():
    def fun(x):
        J = np.array([[1.0, 0.0], [0.0, 1.0], [x[1], x[0]]])
        r = np.array([x[0] - 1.0, x[1] - 2.0, x[0] * x[1] - 2.0])
        return J, r

    opt = GaussNewton().fit(fun, [0.5, 0.5])
    assert opt.converged_
    np.testing.assert_allclose(opt.coef_, [1.0, 2.0], atol=1e-12)
    assert opt.residual_ < 1e-12
    assert opt.history_[0] > opt.history_[-1]


def test_gauss_newton_warns():
    def fun(x):
        return np.ones((2, 1)), np.array([x[0] - 1.0, x[0] + 1.0])

    with pytest.warns(ConvergenceWarning):
        opt = GaussNewton(max_iter=5).fit(fun, [3.0])
    assert not opt.converged_
    assert opt.coef_[0] == pytest.approx(0.0, abs=1e-10)
    assert opt.residual_ == pytest.approx(1.0)


def test_gauss_newton_validation():
    with pytest.raises(ValueError):
        GaussNewton(tol=0)
    with pytest.raises(ValueError):
        GaussNewton(damping=-1.0)
