import warnings

import numpy as np
from sklearn.exceptions import ConvergenceWarning

from .base import BaseOptimizer


class GaussNewton(BaseOptimizer):
    """
    Damped Gauss-Newton (Levenberg-Marquardt) least-squares solver.

    Minimizes ``|r(x)|^2`` for a residual function supplied together with
    its Jacobian. Each step solves the damped normal equations in the
    least-squares sense; the damping is decreased after an accepted step
    and increased after a rejected one.

    Parameters
    ----------
    max_iter : int, optional (default 50)
        Maximum number of accepted or rejected steps.

    tol : float, optional (default 1e-12)
        Stop when the largest absolute residual entry falls below ``tol``.

    step_tol : float, optional (default 1e-14)
        Stop when the step norm falls below ``step_tol``.

    damping : float, optional (default 1e-6)
        Initial Levenberg-Marquardt damping.

    Attributes
    ----------
    coef_ : np.ndarray
        Best parameter vector found.

    residual_ : float
        Largest absolute residual entry at ``coef_``.

    history_ : list of float
        Residual after every accepted step.
    """

    def __init__(self, max_iter=50, tol=1e-12, step_tol=1e-14, damping=1e-6):
        super(GaussNewton, self).__init__(max_iter=max_iter)
        if tol <= 0:
            raise ValueError("tol must be positive")
        if damping < 0:
            raise ValueError("damping cannot be negative")
        self.tol = tol
        self.step_tol = step_tol
        self.damping = damping

    def _reduce(self, fun, x0):
        """
        ``fun(x)`` must return the pair ``(jacobian, residual)`` with shapes
        ``(n_residuals, n_params)`` and ``(n_residuals,)``.
        """
        x = np.array(x0, dtype=float)
        J, r = fun(x)
        cost = float(r @ r)
        self.history_.append(float(np.max(np.abs(r))) if r.size else 0.0)
        mu = self.damping
        converged = self.history_[-1] < self.tol
        while not converged and self.n_iter_ < self.max_iter:
            self.n_iter_ += 1
            JTJ = J.T @ J
            lhs = JTJ + mu * np.diag(np.maximum(np.diag(JTJ), 1e-12))
            delta = np.linalg.lstsq(lhs, -J.T @ r, rcond=None)[0]
            x_new = x + delta
            J_new, r_new = fun(x_new)
            cost_new = float(r_new @ r_new)
            if cost_new < cost:
                x, J, r, cost = x_new, J_new, r_new, cost_new
                mu = max(mu / 10, 1e-15)
                self.history_.append(float(np.max(np.abs(r))))
                converged = self.history_[-1] < self.tol
            else:
                mu *= 10
            if np.linalg.norm(delta) < self.step_tol:
                break
        if not converged:
            warnings.warn(
                "GaussNewton._reduce stopped at residual {:.3e} after {} "
                "iterations; tol is {:.1e}".format(
                    self.history_[-1], self.n_iter_, self.tol
                ),
                ConvergenceWarning,
            )
        self.coef_ = x
        self.residual_ = self.history_[-1]
        self.converged_ = converged
