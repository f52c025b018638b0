"""
Mapping torus of a compiled machine.

The suspension of ``Phi: M -> M`` is the flow on ``M x [0, 1]`` with
``(y, 1) ~ (Phi(y), 0)`` and unit speed in the last coordinate. In the
chart away from the gluing it is the constant field ``(0, ..., 0, 1)``,
for which ``dt`` is a strongly adapted 1-form.
"""
import math
from fractions import Fraction

from .compiled import CompiledDiffeo
from .compiled import halting_set
from .compiled import run_orbit
from .compiled import step_point
from pywell.flows import TorusFlow
from pywell.forms import OneForm


class SuspensionFlow:
    """
    Suspension flow of a compiled machine or of any map of a torus.

    Points are tuples ``y + (s,)`` with ``s`` in [0, 1).

    Parameters
    ----------
    diffeo : CompiledDiffeo or callable
        A callable must map a coordinate tuple to a coordinate tuple of the
        same length; ``dim`` is then required.

    dim : int, optional
        Dimension of the base torus for a callable map.
    """

    def __init__(self, diffeo, dim=None):
        if isinstance(diffeo, CompiledDiffeo):
            self.diffeo = diffeo
            self.base_dim = 4
            self._map = self._compiled_step
        elif callable(diffeo):
            if dim is None:
                raise ValueError("dim is required when suspending a callable")
            self.diffeo = None
            self.base_dim = int(dim)
            self._map = diffeo
        else:
            raise TypeError("expected a CompiledDiffeo or a callable")

    def _compiled_step(self, y):
        z, w = step_point(self.diffeo, y[:2], y[2:])
        return tuple(z) + tuple(w)

    @property
    def dim(self):
        return self.base_dim + 1

    def base_map(self, y):
        """``Phi(y)``; raises whatever the underlying map raises."""
        y = tuple(y)
        if len(y) != self.base_dim:
            raise ValueError(
                "expected {} base coordinates, got {}".format(self.base_dim, len(y))
            )
        return tuple(self._map(y))

    def local_flow(self):
        """The field ``(0, ..., 0, 1)`` of the chart, as a TorusFlow."""
        return TorusFlow.rotation([0.0] * self.base_dim + [1.0], name="suspension")

    def witness(self):
        """``dt``, the strongly adapted 1-form of the suspension."""
        return OneForm.coordinate(self.dim, self.base_dim)

    def evaluate(self, point, t):
        """
        Flow ``point = y + (s,)`` for time ``t >= 0``.

        The map is applied once at every integer crossing of ``s + t``;
        coordinates and time are kept exact when given as rationals.
        """
        point = tuple(point)
        if len(point) != self.dim:
            raise ValueError(
                "expected {} coordinates, got {}".format(self.dim, len(point))
            )
        t = Fraction(t)
        if t < 0:
            raise ValueError("only forward time is supported, got t = {}".format(t))
        y, s = point[:-1], Fraction(point[-1])
        if not 0 <= s < 1:
            raise ValueError("the fibre coordinate must lie in [0, 1)")
        total = s + t
        crossings = math.floor(total)
        for _ in range(crossings):
            y = self.base_map(y)
        return tuple(y) + (total - crossings,)

    def time_one_map(self, y):
        return self.evaluate(tuple(y) + (Fraction(0),), 1)[:-1]

    def __repr__(self):
        return "SuspensionFlow(diffeo={!r}, dim={})".format(self.diffeo, self.dim)


def suspend(diffeo, dim=None):
    return SuspensionFlow(diffeo, dim)


def suspension_eval(flow, point, t):
    """Alias of :meth:`SuspensionFlow.evaluate`."""
    return flow.evaluate(point, t)


def suspension_enters(flow, tape, window=None, max_time=1000):
    """
    First integer time at which the suspension orbit of ``(y_s, 0)`` lies in
    ``U x [0, 1)``, or None within ``max_time``.

    The answer is cross-checked against :func:`run_orbit`.
    """
    diffeo = flow.diffeo
    if diffeo is None:
        raise TypeError("halting sets are defined for compiled machines only")
    U = halting_set(diffeo, window)
    z, w = diffeo.start_point(tape)
    point = tuple(z) + tuple(w) + (Fraction(0),)
    entry = None
    for time in range(max_time + 1):
        if U.contains(point[:2], point[2:4]):
            entry = time
            break
        if diffeo.locate(point[:2]) == diffeo.machine.halt or time == max_time:
            break
        point = flow.evaluate(point, 1)
    orbit = run_orbit(diffeo, tape, max_time, window)
    if orbit.entered_U != (entry is not None) or (
        entry is not None and entry != orbit.step_index
    ):
        raise RuntimeError("suspension and compiled orbit disagree")
    return entry
