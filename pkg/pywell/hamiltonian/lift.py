import numpy as np

from pywell.flows import rk4_path
from pywell.flows import step_count
from pywell.flows import Trajectory
from pywell.utils import validate_input
from pywell.utils import validate_positive


class LiftedSystem:
    """
    Cotangent lift of a torus flow, the Hamiltonian system of
    ``H(q, p) = sum_i p_i Y_i(q)`` on T*(R/Z)^n.

    Hamilton's equations give ``dq_i/dt = dH/dp_i = Y_i(q)`` and
    ``dp_i/dt = -dH/dq_i = -sum_j p_j dY_j/dq_i(q)``. The derivatives of
    ``Y`` come from the exact trig-polynomial Jacobian.

    Parameters
    ----------
    flow : TorusFlow
        Base flow on the n-torus.
    """

    def __init__(self, flow):
        self.flow = flow
        self.n = flow.dim
        self.dim = 2 * flow.dim
        self.periodic = np.arange(self.dim) < self.n

    def field(self, state):
        state = np.asarray(state, dtype=float)
        q, p = state[..., : self.n], state[..., self.n :]
        # jacobian[..., j, i] = dY_j / dq_i
        p_dot = -np.einsum("...j,...ji->...i", p, self.flow.jacobian(q))
        return np.concatenate([self.flow.eval_field(q), p_dot], axis=-1)

    __call__ = field

    def hamiltonian(self, q, p):
        q = validate_input(q, self.n, name="q")
        p = validate_input(p, self.n, name="p")
        return np.sum(p * self.flow.eval_field(q), axis=-1)

    def zero_section(self, q):
        """The embedding ``q -> (q, 0)`` of the base flow."""
        q = validate_input(q, self.n, name="q")
        return np.concatenate([q, np.zeros_like(q)], axis=-1)

    def integrate(self, s0, T, dt):
        """RK4 trajectory from ``s0 = (q, p)``; q is reduced mod 1."""
        validate_positive(T, "T")
        validate_positive(dt, "dt")
        s0 = validate_input(s0, self.dim, name="s0")
        n_steps = step_count(T, dt)
        h = T / n_steps
        points = rk4_path(self.field, s0, h, n_steps, periodic=self.periodic)
        return Trajectory(
            times=h * np.arange(n_steps + 1),
            points=points,
            step_size=h,
            method="rk4",
            periodic=self.periodic,
        )


def cotangent_lift(flow):
    """Return the cotangent-lift Hamiltonian system of ``flow``."""
    return LiftedSystem(flow)
