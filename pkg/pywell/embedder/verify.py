from dataclasses import dataclass

import numpy as np

from pywell.flows import flow_map
from pywell.hamiltonian import integrate_well
from pywell.hamiltonian import WellState
from pywell.utils import validate_input
from pywell.utils import validate_positive


@dataclass(frozen=True, eq=False)
class EmbeddingReport:
    """
    Outcome of :func:`verify_embedding`.

    ``deviation[s, c]`` is the largest coordinate gap in ``q`` or ``p``
    between the well trajectory of sample ``s`` and the embedded flow
    trajectory at checkpoint ``c`` (checkpoint 0 is ``t = 0``).
    """

    times: np.ndarray
    deviation: np.ndarray
    max_q_deviation: float
    max_p_deviation: float
    energy_drift: float
    tol: float

    @property
    def max_deviation(self):
        return float(np.max(self.deviation))

    @property
    def passed(self):
        return self.max_deviation <= self.tol


def verify_embedding(
    flow, embedding, potential, y0_samples, T, tol=1e-4, dt=1e-3, n_checkpoints=20
):
    """
    Compare well trajectories with the image of the flow.

    Every ``y0`` starts the well at ``(q(y0), p(y0))``; the whole batch is
    integrated at once with leapfrog and compared with
    ``(q, p)(e^{tY} y0)`` at ``n_checkpoints`` equally spaced times.

    Parameters
    ----------
    flow : TorusFlow

    embedding : EmbeddingMap

    potential : BasePotential
        Potential on R^m, usually an ExtendedPotential.

    y0_samples : array-like, shape (n_samples, n)

    T : float

    tol : float, optional (default 1e-4)

    dt : float, optional (default 1e-3)
        Leapfrog step.

    n_checkpoints : int, optional (default 20)

    Returns
    -------
    report : EmbeddingReport
    """
    validate_positive(T, "T")
    validate_positive(tol, "tol")
    y = validate_input(y0_samples, flow.dim, name="y0_samples")
    y = np.atleast_2d(y)
    embedding = embedding.with_flow(flow)
    if potential.dim != embedding.m:
        raise ValueError("potential and embedding have different target dimension")

    def image(points):
        return embedding(points), embedding.momentum(points)

    state = WellState(*image(y))
    h = T / n_checkpoints
    times, gaps_q, gaps_p = [], [], []
    energy0 = 0.5 * np.sum(state.p ** 2, axis=-1) + potential.value(state.q)
    drift = 0.0
    for c in range(n_checkpoints + 1):
        if c:
            state = integrate_well(potential, state, h, dt).last_state
            y = flow_map(flow, h, y)
        q_ref, p_ref = image(y)
        times.append(c * h)
        gaps_q.append(np.max(np.abs(state.q - q_ref), axis=-1))
        gaps_p.append(np.max(np.abs(state.p - p_ref), axis=-1))
        energy = 0.5 * np.sum(state.p ** 2, axis=-1) + potential.value(state.q)
        drift = max(drift, float(np.max(np.abs(energy - energy0))))
    gaps_q, gaps_p = np.array(gaps_q).T, np.array(gaps_p).T
    return EmbeddingReport(
        times=np.array(times),
        deviation=np.maximum(gaps_q, gaps_p),
        max_q_deviation=float(np.max(gaps_q)),
        max_p_deviation=float(np.max(gaps_p)),
        energy_drift=drift,
        tol=float(tol),
    )
