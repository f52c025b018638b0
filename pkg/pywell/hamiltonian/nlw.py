"""
Nonlinear wave equation ``u_tt - u_xx = -(grad V)(u)`` on R/Z with values
in R^m, discretized by the method of lines.
"""
from dataclasses import dataclass

import numpy as np

from .well import WellState
from pywell.flows import step_count
from pywell.flows import Trajectory
from pywell.utils import validate_positive


class StabilityError(ValueError):
    """Time step violates the leapfrog stability bound of the spectral grid."""


def _is_power_of_two(n):
    return n >= 2 and n & (n - 1) == 0


@dataclass(frozen=True, eq=False)
class NLWState:
    """
    Samples ``Q[j] = q(j / N)``, ``P[j] = p(j / N)`` on the uniform grid of
    the circle, shape ``(N, m)``; ``N`` is a power of two.
    """

    Q: np.ndarray
    P: np.ndarray
    d: int = 1

    def __post_init__(self):
        Q = np.array(self.Q, dtype=float)
        P = np.array(self.P, dtype=float)
        if Q.ndim == 1:
            Q, P = Q[:, None], P.reshape(-1, 1)
        if Q.shape != P.shape or Q.ndim != 2:
            raise ValueError("Q and P must both have shape (N, m)")
        if not _is_power_of_two(Q.shape[0]):
            raise ValueError(
                "grid size N={} is not a power of two".format(Q.shape[0])
            )
        if not (np.all(np.isfinite(Q)) and np.all(np.isfinite(P))):
            raise ValueError("state entries must be finite")
        if self.d != 1:
            raise NotImplementedError("only d = 1 is implemented")
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "P", P)

    @property
    def N(self):
        return self.Q.shape[0]

    @property
    def dim(self):
        return self.Q.shape[1]

    @property
    def grid(self):
        return np.arange(self.N) / self.N

    @classmethod
    def from_well(cls, state, N):
        """Spatially constant data equal to ``state`` at every grid point."""
        return cls(np.tile(state.q, (N, 1)), np.tile(state.p, (N, 1)))

    def sample(self, j):
        """The well state at grid point ``j``."""
        return WellState(self.Q[j], self.P[j])

    def is_constant(self, tol=0.0):
        return bool(
            np.all(np.abs(self.Q - self.Q[0]) <= tol)
            and np.all(np.abs(self.P - self.P[0]) <= tol)
        )

    def to_csv(self, path):
        m = self.dim
        header = ["x"] + ["q%d" % (i + 1) for i in range(m)]
        header += ["p%d" % (i + 1) for i in range(m)]
        np.savetxt(
            path,
            np.column_stack([self.grid, self.Q, self.P]),
            delimiter=",",
            header=",".join(header),
            comments="",
        )

    @classmethod
    def from_csv(cls, path):
        table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        m = (table.shape[1] - 1) // 2
        return cls(table[:, 1 : 1 + m], table[:, 1 + m :])


def _wavenumbers(N):
    return np.fft.rfftfreq(N, d=1.0 / N)


def laplacian(Q):
    """Spectral second derivative along axis 0 of samples on R/Z."""
    N = Q.shape[0]
    # the Laplacian kills constants; subtracting one keeps constant data exact
    Q = Q - Q[0]
    multiplier = -((2 * np.pi * _wavenumbers(N)) ** 2)
    return np.fft.irfft(multiplier[:, None] * np.fft.rfft(Q, axis=0), n=N, axis=0)


def max_stable_step(N):
    """Documented bound ``dt <= h / pi`` with grid spacing ``h = 1 / N``."""
    return 1.0 / (N * np.pi)


def nlw_energy(V, s):
    """
    Discrete energy
    ``h sum_j ( |P_j|^2 / 2 - Q_j . (L Q)_j / 2 + V(Q_j) )`` with ``L`` the
    spectral Laplacian used by :func:`integrate_nlw`, Nyquist mode included.

    This is the energy the semi-discrete system conserves; leapfrog keeps it
    up to O(dt^2) oscillations without drift.
    """
    if s.dim != V.dim:
        raise ValueError(
            "state dimension {} != potential dimension {}".format(s.dim, V.dim)
        )
    density = (
        0.5 * np.sum(s.P ** 2, axis=1)
        - 0.5 * np.sum(s.Q * laplacian(s.Q), axis=1)
        + V.value(s.Q)
    )
    return float(np.mean(density))


def integrate_nlw(V, s0, T, dt, record_every=1):
    """
    Leapfrog in time with a spectral Laplacian in space.

    Parameters
    ----------
    V : BasePotential
        Potential on the target R^m.

    s0 : NLWState
        Initial data.

    T : float
        Final time.

    dt : float
        Time step; must satisfy ``dt <= 1 / (N pi)`` or StabilityError is
        raised before any work is done.

    record_every : int, optional (default 1)
        Keep every ``record_every``-th step (the final step is always kept).

    Returns
    -------
    trajectory : Trajectory
        ``points`` has shape ``(n_times, 2, N, m)`` holding ``(Q, P)``.
    """
    validate_positive(T, "T")
    validate_positive(dt, "dt")
    if s0.dim != V.dim:
        raise ValueError(
            "state dimension {} != potential dimension {}".format(s0.dim, V.dim)
        )
    bound = max_stable_step(s0.N)
    if dt > bound:
        raise StabilityError(
            "dt={} exceeds the stability bound 1/(N pi)={:.3e} for N={}".format(
                dt, bound, s0.N
            )
        )
    n_steps = step_count(T, dt)
    h = T / n_steps
    Q, P = s0.Q.copy(), s0.P.copy()
    times, frames = [0.0], [np.stack([Q, P])]
    force = laplacian(Q) - V.gradient(Q)
    for i in range(1, n_steps + 1):
        P_half = P + 0.5 * h * force
        Q = Q + h * P_half
        force = laplacian(Q) - V.gradient(Q)
        P = P_half + 0.5 * h * force
        if not np.all(np.isfinite(Q)):
            raise ValueError("non-finite state after step {}".format(i))
        if i % record_every == 0 or i == n_steps:
            times.append(i * h)
            frames.append(np.stack([Q, P]))
    return Trajectory(
        times=np.array(times),
        points=np.array(frames),
        step_size=h,
        method="leapfrog-spectral",
        periodic=None,
    )


def nlw_state_at(trajectory, i):
    Q, P = trajectory.points[i]
    return NLWState(Q, P)
