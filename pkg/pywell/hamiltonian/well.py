from dataclasses import dataclass

import numpy as np

from pywell.differentiation import FiniteDifference
from pywell.flows import step_count
from pywell.flows import Trajectory
from pywell.utils import validate_positive


@dataclass(frozen=True, eq=False)
class WellState:
    """Point ``(q, p)`` of the phase space T*R^m of a potential well."""

    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        q = np.array(self.q, dtype=float)
        p = np.array(self.p, dtype=float)
        if q.ndim == 0:
            q, p = q.reshape(1), p.reshape(1)
        if q.shape != p.shape:
            raise ValueError(
                "q and p must have the same shape, got {} and {}".format(
                    q.shape, p.shape
                )
            )
        if not (np.all(np.isfinite(q)) and np.all(np.isfinite(p))):
            raise ValueError("state entries must be finite")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)

    @property
    def dim(self):
        return self.q.shape[-1]

    def reversed(self):
        """Same position, opposite momentum."""
        return WellState(self.q, -self.p)

    def as_array(self):
        return np.concatenate([self.q, self.p], axis=-1)


@dataclass(frozen=True, eq=False)
class WellTrajectory(Trajectory):
    """Trajectory whose points are ``(q, p)`` rows, ``q`` first."""

    @property
    def q(self):
        return self.points[..., : self.points.shape[-1] // 2]

    @property
    def p(self):
        return self.points[..., self.points.shape[-1] // 2 :]

    def state(self, i):
        return WellState(self.q[i], self.p[i])

    @property
    def last_state(self):
        return self.state(-1)

    def energies(self, V):
        return 0.5 * np.sum(self.p ** 2, axis=-1) + V.value(self.q)

    def to_csv(self, path, names=None):
        m = self.points.shape[-1] // 2
        names = names or ["q%d" % (i + 1) for i in range(m)] + [
            "p%d" % (i + 1) for i in range(m)
        ]
        super(WellTrajectory, self).to_csv(path, names)


def energy(V, s):
    """``H(q, p) = |p|^2 / 2 + V(q)``."""
    if s.dim != V.dim:
        raise ValueError(
            "state dimension {} != potential dimension {}".format(s.dim, V.dim)
        )
    return 0.5 * float(s.p @ s.p) + float(V.value(s.q))


def leapfrog_step(V, q, p, dt):
    """One kick-drift-kick step of ``q' = p, p' = -grad V(q)``."""
    p_half = p - 0.5 * dt * V.gradient(q)
    q_new = q + dt * p_half
    p_new = p_half - 0.5 * dt * V.gradient(q_new)
    return q_new, p_new


def symplectic_defect(V, s, dt, differentiation_method=None):
    """
    ``max |J^T Omega J - Omega|`` for the Jacobian ``J`` of one leapfrog
    step at ``s``, with ``Omega = [[0, I], [-I, 0]]``.

    ``J`` is taken by finite differences, so the defect is zero up to the
    differentiation error.
    """
    if s.dim != V.dim:
        raise ValueError(
            "state dimension {} != potential dimension {}".format(s.dim, V.dim)
        )
    validate_positive(dt, "dt")
    m = V.dim
    method = differentiation_method or FiniteDifference(order=2, step=1e-6)

    def step(z):
        return np.concatenate(leapfrog_step(V, z[:m], z[m:], dt))

    J = method.jacobian(step, s.as_array())
    eye, zero = np.eye(m), np.zeros((m, m))
    omega = np.block([[zero, eye], [-eye, zero]])
    return float(np.max(np.abs(J.T @ omega @ J - omega)))


def leapfrog_path(V, q0, p0, dt, n_steps, record=True):
    """
    Run ``n_steps`` leapfrog steps; ``q0`` and ``p0`` may be batches.

    Returns arrays ``(q, p)`` of shape ``(n_steps + 1,) + q0.shape`` when
    ``record`` is True, otherwise the final pair.
    """
    q, p = np.array(q0, dtype=float), np.array(p0, dtype=float)
    if record:
        qs = np.empty((n_steps + 1,) + q.shape)
        ps = np.empty((n_steps + 1,) + p.shape)
        qs[0], ps[0] = q, p
    # fuse the closing kick of one step with the opening kick of the next
    force = -V.gradient(q)
    for i in range(n_steps):
        p_half = p + 0.5 * dt * force
        q = q + dt * p_half
        force = -V.gradient(q)
        p = p_half + 0.5 * dt * force
        if not np.all(np.isfinite(q)):
            raise ValueError("non-finite state after step {}".format(i + 1))
        if record:
            qs[i + 1], ps[i + 1] = q, p
    if record:
        return qs, ps
    return q, p


def integrate_well(V, s0, T, dt):
    """
    Integrate ``Well(R^m, V)`` with the Stormer-Verlet (leapfrog) scheme.

    The scheme is symplectic and time-reversible; the step is shrunk to
    ``T / ceil(T / dt)`` so the last sample is at ``T``.

    Parameters
    ----------
    V : BasePotential
        The potential.

    s0 : WellState
        Initial state.

    T : float
        Final time, positive.

    dt : float
        Largest allowed step, positive.

    Returns
    -------
    trajectory : WellTrajectory
    """
    validate_positive(T, "T")
    validate_positive(dt, "dt")
    if s0.dim != V.dim:
        raise ValueError(
            "state dimension {} != potential dimension {}".format(s0.dim, V.dim)
        )
    n_steps = step_count(T, dt)
    h = T / n_steps
    qs, ps = leapfrog_path(V, s0.q, s0.p, h, n_steps)
    return WellTrajectory(
        times=h * np.arange(n_steps + 1),
        points=np.concatenate([qs, ps], axis=-1),
        step_size=h,
        method="leapfrog",
        periodic=np.zeros(2 * V.dim, dtype=bool),
    )
