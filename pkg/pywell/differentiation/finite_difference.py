import numpy as np

from pywell.differentiation.base import BaseDifferentiation


class FiniteDifference(BaseDifferentiation):
    """Finite difference derivatives of samples and of callables.

    Used for residual checks only; dynamics always use exact gradients.

    Parameters
    ----------
    order: int, 1 or 2, optional (default 2)
        If 1, first order forward differences are used.
        If 2, second order centered differences are used.

    step: float, optional (default 1e-5)
        Step size h for derivatives of callables.

    drop_endpoints: boolean, optional (default False)
        For sampled data, whether endpoints are left as np.nan instead of
        being filled with one-sided stencils.

    Examples
    --------
    >>> import numpy as np
    >>> from pywell.differentiation import FiniteDifference
    >>> fd = FiniteDifference(step=1e-4)
    >>> round(float(fd.directional(lambda x: x[0] ** 2, [3.0], [1.0])), 6)
    6.0
    """

    def __init__(self, order=2, step=1e-5, drop_endpoints=False):
        if order <= 0 or not isinstance(order, int):
            raise ValueError("order must be a positive int")
        elif order > 2:
            raise NotImplementedError
        if step <= 0:
            raise ValueError("step must be positive")

        self.order = order
        self.step = step
        self.drop_endpoints = drop_endpoints

    def _directional(self, f, x, v):
        h = self.step
        if self.order == 1:
            return (np.asarray(f(x + h * v)) - np.asarray(f(x))) / h
        return (np.asarray(f(x + h * v)) - np.asarray(f(x - h * v))) / (2 * h)

    def _differentiate(self, x, t=1):
        if self.order == 1:
            return self._forward_difference(x, t)
        return self._centered_difference(x, t)

    def _forward_difference(self, x, t=1):
        """
        First order forward difference, second order backward difference
        at the final point.
        """
        x_dot = np.full_like(x, fill_value=np.nan)
        dt = np.full(len(x) - 1, t, dtype=float) if np.isscalar(t) else np.diff(t)
        x_dot[:-1] = (x[1:] - x[:-1]) / dt[:, None]
        if not self.drop_endpoints:
            x_dot[-1] = (3 * x[-1] / 2 - 2 * x[-2] + x[-3] / 2) / dt[-1]
        return x_dot

    def _centered_difference(self, x, t=1):
        """
        Second order centered difference, third order one-sided stencils
        at the endpoints.
        """
        x_dot = np.full_like(x, fill_value=np.nan)
        if np.isscalar(t):
            span = np.full(len(x) - 2, 2.0 * t)
            h_first = h_last = t
        else:
            span = t[2:] - t[:-2]
            h_first, h_last = span[0] / 2, span[-1] / 2
        x_dot[1:-1] = (x[2:] - x[:-2]) / span[:, None]
        if not self.drop_endpoints:
            x_dot[0] = (-11 / 6 * x[0] + 3 * x[1] - 3 / 2 * x[2] + x[3] / 3) / h_first
            x_dot[-1] = (
                11 / 6 * x[-1] - 3 * x[-2] + 3 / 2 * x[-3] - x[-4] / 3
            ) / h_last
        return x_dot
