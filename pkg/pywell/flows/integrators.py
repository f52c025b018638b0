import warnings
from dataclasses import dataclass

import numpy as np

from pywell.differentiation import FiniteDifference
from pywell.utils import reduce_mod1
from pywell.utils import torus_difference
from pywell.utils import validate_input
from pywell.utils import validate_positive


class RichardsonWarning(UserWarning):
    """Step-doubling error estimate of a flow map exceeded the target tolerance."""


class SingularPointError(ValueError):
    """The field vanished at a sample of an integrated path."""


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    Sampled solution of ``d/dt u = X(u)``.

    Parameters
    ----------
    times : np.ndarray, shape (n_times,)
        Strictly increasing sample times.

    points : np.ndarray, shape (n_times, dim)
        State at every sample time. Periodic coordinates lie in [0, 1).

    step_size : float
        Integrator step.

    method : str
        Integrator tag, e.g. ``"rk4"`` or ``"leapfrog"``.

    periodic : np.ndarray of bool, shape (dim,)
        Which coordinates are torus coordinates.
    """

    times: np.ndarray
    points: np.ndarray
    step_size: float
    method: str = "rk4"
    periodic: np.ndarray = None

    def __post_init__(self):
        if len(self.times) != len(self.points):
            raise ValueError("times and points must have the same length")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")

    @property
    def last(self):
        return self.points[-1]

    def unwrapped(self):
        """Points with torus coordinates lifted to a continuous path."""
        if self.periodic is None or not np.any(self.periodic):
            return self.points
        steps = torus_difference(self.points[1:], self.points[:-1])
        lifted = self.points[0] + np.concatenate(
            [np.zeros_like(self.points[:1]), np.cumsum(steps, axis=0)]
        )
        return np.where(self.periodic, lifted, self.points)

    def __len__(self):
        return len(self.times)

    def to_csv(self, path, names=None):
        """Write ``t,x1,...,xn`` rows."""
        dim = self.points.shape[1]
        names = names or ["x%d" % (i + 1) for i in range(dim)]
        table = np.column_stack([self.times, self.points])
        np.savetxt(
            path, table, delimiter=",", header=",".join(["t"] + names), comments=""
        )


def _reduce(x, periodic):
    if periodic is True:
        return reduce_mod1(x)
    if periodic is False or periodic is None:
        return x
    return np.where(periodic, reduce_mod1(x), x)


def rk4_path(field, x0, h, n_steps, periodic=True, record=True):
    """
    Classical fourth-order Runge-Kutta with fixed step ``h``.

    ``field`` maps states of shape ``(..., d)`` to velocities of the same
    shape, so ``x0`` may hold a batch of independent initial states.
    Periodic coordinates are reduced mod 1 after every step. Global error
    is O(h^4) per unit time.

    Returns the array of shape ``(n_steps + 1,) + x0.shape`` when ``record``
    is True, otherwise only the final state.
    """
    x = _reduce(np.array(x0, dtype=float), periodic)
    path = np.empty((n_steps + 1,) + x.shape) if record else None
    if record:
        path[0] = x
    for i in range(n_steps):
        k1 = field(x)
        k2 = field(x + 0.5 * h * k1)
        k3 = field(x + 0.5 * h * k2)
        k4 = field(x + h * k3)
        x = _reduce(x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4), periodic)
        if not np.all(np.isfinite(x)):
            raise ValueError("non-finite state after step {}".format(i + 1))
        if record:
            path[i + 1] = x
    return path if record else x


def step_count(T, dt):
    # tolerate T / dt landing a hair above an integer
    return max(int(np.ceil(T / dt - 1e-9)), 1)


def _check_speed(flow, points, h, singular_tol):
    speed = np.linalg.norm(flow.eval_field(points), axis=-1)
    small = np.flatnonzero(speed <= singular_tol)
    if small.size:
        i = int(small[0])
        raise SingularPointError(
            "|Y| = {:.1e} at t = {:g}, x = {}".format(speed[i], i * h, points[i])
        )


def integrate(flow, x0, T, dt, singular_tol=1e-12):
    """
    Integrate a torus flow from ``x0`` for time ``T``.

    The step is shrunk to ``T / ceil(T / dt)`` so that the last sample is
    exactly at ``T``. Every sample is checked for ``|Y(u)| > singular_tol``.

    Parameters
    ----------
    flow : TorusFlow
        The vector field.

    x0 : array-like, shape (dim,)
        Initial point.

    T : float
        Final time, positive.

    dt : float
        Largest allowed step, positive.

    singular_tol : float, optional (default 1e-12)
        Speed at or below which a sample counts as a zero of the field.

    Returns
    -------
    trajectory : Trajectory

    Raises
    ------
    SingularPointError
        The field vanishes at ``x0`` or at a later sample of the path.
    """
    validate_positive(T, "T")
    validate_positive(dt, "dt")
    x0 = validate_input(x0, flow.dim, name="x0")
    if x0.ndim != 1:
        raise ValueError("x0 must be a single point")
    n_steps = step_count(T, dt)
    h = T / n_steps
    _check_speed(flow, x0[None, :], 0.0, singular_tol)
    points = rk4_path(flow.eval_field, x0, h, n_steps)
    _check_speed(flow, points, h, singular_tol)
    return Trajectory(
        times=h * np.arange(n_steps + 1),
        points=points,
        step_size=h,
        method="rk4",
        periodic=np.ones(flow.dim, dtype=bool),
    )


def field_residual(flow, trajectory, differentiation_method=None):
    """
    Largest gap between the sampled time derivative of a trajectory and the
    field evaluated along it.

    Parameters
    ----------
    flow : TorusFlow

    trajectory : Trajectory
        Uniformly sampled, e.g. from :func:`integrate`.

    differentiation_method : BaseDifferentiation, optional
        Defaults to second order centered FiniteDifference.

    Returns
    -------
    residual : float
    """
    if trajectory.points.shape[-1] != flow.dim:
        raise ValueError(
            "trajectory has dimension {}, flow has {}".format(
                trajectory.points.shape[-1], flow.dim
            )
        )
    if len(trajectory) < 4:
        raise ValueError("need at least 4 samples to differentiate")
    method = differentiation_method or FiniteDifference(order=2)
    x_dot = method(trajectory.unwrapped(), trajectory.times)
    gap = np.abs(x_dot - flow.eval_field(trajectory.points))
    return float(np.nanmax(gap))


def flow_map(flow, t, x, tol=1e-10, check=True):
    """
    Time-``t`` map ``e^{tY}`` applied to one point or a batch of points.

    The step is ``min(1e-3, tol ** (1/4))``. When ``check`` is set, the
    result is compared against a run at half the step and a
    RichardsonWarning is emitted if the error estimate exceeds ``tol``;
    the half-step result is returned.

    Negative ``t`` integrates the reversed field.
    """
    x = validate_input(x, flow.dim)
    t = float(t)
    if not np.isfinite(t):
        raise ValueError("t must be finite")
    if t == 0:
        return reduce_mod1(x)
    validate_positive(tol, "tol")
    sign = 1.0 if t > 0 else -1.0

    def field(y):
        return sign * flow.eval_field(y)

    dt = min(1e-3, tol ** 0.25)
    n_steps = step_count(abs(t), dt)
    h = abs(t) / n_steps
    if not check:
        return rk4_path(field, x, h, n_steps, record=False)
    coarse = rk4_path(field, x, h, n_steps, record=False)
    fine = rk4_path(field, x, h / 2, 2 * n_steps, record=False)
    estimate = float(np.max(np.abs(torus_difference(fine, coarse)))) / 15
    if estimate > tol:
        warnings.warn(
            "flow_map error estimate {:.2e} exceeds tol {:.1e} at t={}".format(
                estimate, tol, t
            ),
            RichardsonWarning,
        )
    return fine
