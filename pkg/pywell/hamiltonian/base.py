"""
Base class for potentials V: R^m -> R.
"""
import abc

import numpy as np

from pywell.utils import validate_input


class BasePotential:
    """
    Base class for potentials of a well system ``Well(R^m, V)``.

    Subclasses evaluate ``V`` and its exact gradient on arrays of points
    of shape ``(..., dim)``. No potential is ever differentiated
    numerically inside the dynamics.

    Parameters
    ----------
    dim : int
        Dimension m of the configuration space.
    """

    kind = None

    def __init__(self, dim):
        if not isinstance(dim, (int, np.integer)) or dim < 1:
            raise ValueError("dim must be a positive integer")
        self.dim = int(dim)

    # Force subclasses to implement this
    @abc.abstractmethod
    def _value(self, q):
        raise NotImplementedError

    # Force subclasses to implement this
    @abc.abstractmethod
    def _gradient(self, q):
        raise NotImplementedError

    # Force subclasses to implement this
    @abc.abstractmethod
    def to_spec(self):
        """JSON-compatible description, inverse of ``potential_from_spec``."""
        raise NotImplementedError

    def value(self, q):
        q = validate_input(q, self.dim, name="q")
        return self._value(q)

    def gradient(self, q):
        q = validate_input(q, self.dim, name="q")
        return self._gradient(q)

    __call__ = value

    def coercivity_constants(self):
        """
        Return ``(tau, K)`` with ``V(q) >= tau |q|^2 - K`` when this is
        known from the representation, else None.
        """
        return None

    @property
    def coercive(self):
        constants = self.coercivity_constants()
        return constants is not None and constants[0] > 0
