"""
Base class for numerical differentiation methods
"""
import abc

import numpy as np

from pywell.utils.base import validate_input


class BaseDifferentiation:
    """
    Base class for differentiation methods.

    Forces differentiation methods to implement a
    _differentiate function for sampled data and a
    _directional function for callables.
    """

    def __init__(self):
        pass

    # Force subclasses to implement this
    @abc.abstractmethod
    def _differentiate(self, x, t=1):
        """
        Numerically differentiate sampled data.

        Parameters
        ----------
        x: array-like, shape (n_samples, n_input_features)
            Data to be differentiated. Rows of x should correspond to the same
            point in time.

        t: float or numpy array of shape [n_samples]
            If t is a float, it is interpreted as the timestep between
            samples in x.
            If t is a numpy array, it specifies the times corresponding
            to the rows of x.

        Returns
        -------
        x_dot: array-like, shape (n_samples, n_input_features)
            Numerical time derivative of x. Entries where derivatives were
            not computed will have the value np.nan.
        """
        raise NotImplementedError

    # Force subclasses to implement this
    @abc.abstractmethod
    def _directional(self, f, x, v):
        """
        Derivative of the callable ``f`` at ``x`` in direction ``v``.
        """
        raise NotImplementedError

    def __call__(self, x, t=1):
        x = validate_input(x)
        if x.ndim == 1:
            x = x.reshape(-1, 1)
        elif x.ndim > 2:
            raise ValueError("x must be one- or two-dimensional")
        return self._differentiate(x, t)

    def directional(self, f, x, v):
        x = validate_input(x)
        v = validate_input(v, dim=x.shape[-1], name="v")
        return self._directional(f, x, v)

    def jacobian(self, f, x):
        """
        Jacobian of ``f`` at the point ``x``, one column per coordinate.
        """
        x = validate_input(x)
        if x.ndim != 1:
            raise ValueError("jacobian expects a single point")
        columns = [self._directional(f, x, e) for e in np.eye(x.size)]
        return np.stack([np.atleast_1d(c) for c in columns], axis=-1)
