"""
The canonical 1-form ``theta = sum_i p_i dq_i`` on flat T*R^m.
"""
import numpy as np

from pywell.differentiation import FiniteDifference
from pywell.utils import validate_positive


def _split(z):
    m = z.shape[-1] // 2
    return z[..., :m], z[..., m:]


def canonical_theta_x(state):
    """``theta(X)(q, p) = |p|^2`` for the well field ``X = (p, -grad V)``."""
    return float(state.p @ state.p)


def canonical_form_check(V, samples, h=1e-5):
    """
    Finite-difference residual of ``L_X theta = dL`` on T*R^m.

    Here ``X = (p, -grad V(q))`` is the well field, ``theta`` the canonical
    form and ``L = |p|^2 / 2 - V(q)`` the Lagrangian. For a constant vector
    ``v`` the Lie derivative is ``(L_X theta)(v) = D_X[theta(v)] +
    theta(D_v X)``; both sides are evaluated with centered differences of
    step ``h`` along every basis direction.

    Parameters
    ----------
    V : BasePotential

    samples : list of WellState
        Phase points of dimension ``V.dim``.

    h : float, optional (default 1e-5)
        Finite-difference step.

    Returns
    -------
    residual : float
        Largest absolute residual over samples and directions.
    """
    validate_positive(h, "h")
    fd = FiniteDifference(order=2, step=h)

    def field(z):
        q, p = _split(z)
        return np.concatenate([p, -V.gradient(q)], axis=-1)

    def lagrangian(z):
        q, p = _split(z)
        return 0.5 * float(p @ p) - float(V.value(q))

    residual = 0.0
    for s in samples:
        if s.dim != V.dim:
            raise ValueError(
                "state dimension {} != potential dimension {}".format(s.dim, V.dim)
            )
        z = s.as_array()
        X = field(z)
        for v in np.eye(z.size):
            v_q = v[: V.dim]

            def theta_v(w, v_q=v_q):
                return float(_split(w)[1] @ v_q)

            lie = fd.directional(theta_v, z, X)
            lie = lie + s.p @ _split(fd.directional(field, z, v))[0]
            dL = fd.directional(lagrangian, z, v)
            residual = max(residual, abs(float(lie - dL)))
    return residual
