from dataclasses import dataclass

import numpy as np

from pywell.feature_library import TrigPoly
from pywell.flows import TorusFlow


def circle_average(f, axis, point):
    """
    ``int_0^1 f(point + s e_axis) ds`` for a trig polynomial ``f``.

    Only frequencies with ``k[axis] = 0`` survive; they are evaluated at
    ``point`` (whose ``axis`` entry is irrelevant).
    """
    if not 0 <= axis < f.dim:
        raise ValueError("axis {} out of range".format(axis))
    kept = TrigPoly(f.dim, {k: ab for k, ab in f.items() if k[axis] == 0})
    return float(kept(np.asarray(point, dtype=float)))


def cycle_integral(theta, axis, point=None):
    """
    Integral of ``theta`` over the coordinate circle along ``axis`` through
    ``point``, oriented by increasing coordinate.

    Parameters
    ----------
    theta : OneForm

    axis : int

    point : array-like, optional
        The fixed coordinates of the circle (default the origin).

    Examples
    --------
    >>> from pywell.forms import OneForm
    >>> from pywell.adapted_lp import cycle_integral
    >>> cycle_integral(OneForm.coordinate(2, 1), axis=1, point=[0.0, 0.0])
    1.0
    """
    point = np.zeros(theta.dim) if point is None else point
    return circle_average(theta.components[axis], axis, point)


@dataclass(frozen=True)
class BryantObstruction:
    """
    Cycle integrals behind the Bryant obstruction.

    ``C0 = {x = 0}`` and ``C1 = {x = 1/2}`` are invariant circles where the
    Bryant field is ``(0, 1)`` and ``(0, -1)``. For a closed form the two
    periods agree, so the integrals of theta(Y) over the circles are
    negatives of each other and cannot both be positive.
    """

    period_c0: float
    period_c1: float
    thetaY_c0: float
    thetaY_c1: float
    closed: bool

    @property
    def contradiction(self):
        """True when theta(Y) cannot be positive on both circles."""
        return self.closed and not (self.thetaY_c0 > 0 and self.thetaY_c1 > 0)


def bryant_obstruction(theta, tol=1e-12):
    """Evaluate the cycle integrals of ``theta`` on the Bryant flow."""
    if theta.dim != 2:
        raise ValueError("the Bryant flow lives on the 2-torus")
    thetaY = theta.contract(TorusFlow.bryant())
    c0, c1 = [0.0, 0.0], [0.5, 0.0]
    return BryantObstruction(
        period_c0=cycle_integral(theta, 1, c0),
        period_c1=cycle_integral(theta, 1, c1),
        thetaY_c0=circle_average(thetaY, 1, c0),
        thetaY_c1=circle_average(thetaY, 1, c1),
        closed=theta.is_closed(tol),
    )
