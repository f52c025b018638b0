import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from sklearn.utils import check_random_state

from .calculus import FitResidualWarning
from .calculus import is_exact
from .calculus import lie_derivative
from .one_form import OneForm
from pywell.feature_library import torus_grid
from pywell.feature_library import TorusFourierLibrary
from pywell.feature_library import TrigPoly
from pywell.flows import rk4_path
from pywell.flows import step_count


@dataclass(frozen=True, eq=False)
class AdaptationReport:
    """
    Outcome of ``check_adapted``.

    ``min_thetaY`` is the certified lower bound for theta(Y) over the torus
    (grid minimum minus the Lipschitz margin); ``grid_min`` and ``margin``
    are its two ingredients.
    """

    classification: str
    min_thetaY: float
    grid_min: float
    margin: float
    exactness_residual: float
    potential: Optional[TrigPoly]
    eps: float = 0.0
    grid_res: int = 0

    @property
    def strong(self):
        return self.classification == "strong"

    @property
    def weak(self):
        return self.classification in ("strong", "weak")


def check_adapted(flow, theta, eps=0.0, tol=1e-12, grid_res=None):
    """
    Classify ``theta`` as strongly, weakly or not adapted to ``flow``.

    ``theta`` is adapted when ``L_Y theta`` is exact; weakly adapted when
    moreover theta(Y) >= 0 on the evaluation grid (up to ``tol``), and
    strongly adapted when the certified lower bound of theta(Y) exceeds
    ``eps``.

    Parameters
    ----------
    flow : TorusFlow
        A certified nonsingular flow.

    theta : OneForm

    eps : float, optional (default 0)
        Required margin for the strong classification.

    tol : float, optional (default 1e-12)
        Coefficient tolerance of the exactness decision and slack of the
        weak sign check. Exact (Fraction) inputs can use 0.

    grid_res : int, optional
        Grid points per dimension; defaults to 8 times the degree of
        theta(Y), at least 16.

    Returns
    -------
    report : AdaptationReport
    """
    if not flow.nonsingular:
        raise ValueError("flow {!r} is not certified nonsingular".format(flow.name))
    thetaY = theta.contract(flow)
    grid_res = grid_res or thetaY.default_grid_res()
    grid_min, margin = thetaY.grid_minimum(grid_res)
    exactness = is_exact(lie_derivative(flow, theta), tol=tol)
    certified = grid_min - margin
    if exactness.exact and certified > eps:
        classification = "strong"
    elif exactness.exact and grid_min >= -tol:
        classification = "weak"
    else:
        classification = "none"
    return AdaptationReport(
        classification=classification,
        min_thetaY=certified,
        grid_min=grid_min,
        margin=margin,
        exactness_residual=exactness.residual,
        potential=exactness.potential,
        eps=float(eps),
        grid_res=grid_res,
    )


def _variational_field(flow):
    n = flow.dim

    def field(state):
        x = state[..., :n]
        J = state[..., n:].reshape(state.shape[:-1] + (n, n))
        dJ = flow.jacobian(x) @ J
        return np.concatenate(
            [flow.eval_field(x), dJ.reshape(state.shape[:-1] + (n * n,))], axis=-1
        )

    return field


def average(
    flow, theta, n_samples=64, degree=None, grid_res=None, tol=1e-8, dt=1e-3
):
    """
    Time average ``int_0^1 (e^{tY})^* theta dt`` fitted as a trig-polynomial form.

    The pullbacks ``theta(e^{tY} y) D e^{tY}(y)`` are computed on a grid
    from the variational equations ``J' = DY(x) J`` and averaged with an
    ``n_samples``-point midpoint rule, then every component is fitted by
    least squares with a TorusFourierLibrary of ``degree``.

    Parameters
    ----------
    flow : TorusFlow
        A certified nonsingular flow.

    theta : OneForm

    n_samples : int, optional (default 64)
        Midpoint-rule nodes on [0, 1].

    degree : int, optional
        Degree of the fitted form; defaults to deg(theta) + deg(Y) + 4.

    grid_res : int, optional
        Grid points per dimension; defaults to ``max(4 * degree + 4, 16)``.

    tol : float, optional (default 1e-8)
        Fit residual above which a FitResidualWarning is emitted.

    dt : float, optional (default 1e-3)
        Largest integrator step.

    Returns
    -------
    averaged : OneForm
        The fitted form; its ``residual`` attribute holds the fit residual.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    if not flow.nonsingular:
        raise ValueError("flow {!r} is not certified nonsingular".format(flow.name))
    n = flow.dim
    degree = theta.degree + flow.degree + 4 if degree is None else degree
    grid_res = grid_res or max(4 * degree + 4, 16)
    grid = torus_grid(n, grid_res)

    # half a node spacing, split into substeps of at most dt
    half = 0.5 / n_samples
    substeps = step_count(half, dt)
    h = half / substeps
    field = _variational_field(flow)
    periodic = np.arange(n + n * n) < n
    state = np.concatenate(
        [grid, np.tile(np.eye(n).ravel(), (len(grid), 1))], axis=-1
    )
    total = np.zeros((len(grid), n))
    for k in range(n_samples):
        # advance to the midpoint (k + 1/2) / n_samples
        span = substeps if k == 0 else 2 * substeps
        state = rk4_path(field, state, h, span, periodic=periodic, record=False)
        x = state[:, :n]
        J = state[:, n:].reshape(-1, n, n)
        total += np.einsum("gi,gij->gj", theta(x), J)
    values = total / n_samples

    lib = TorusFourierLibrary(degree=degree).fit(grid)
    comps, residual = [], 0.0
    for j in range(n):
        poly, r = lib.fit_values(grid, values[:, j])
        comps.append(poly)
        residual = max(residual, r)
    if residual > tol:
        warnings.warn(
            "averaged form fit residual {:.2e} exceeds {:.1e}; raise degree".format(
                residual, tol
            ),
            FitResidualWarning,
        )
    name = "avg({})".format(theta.name or "theta")
    return OneForm(comps, name=name, residual=residual)


def obstruction_hamiltonian(flow, theta, tol=1e-12):
    """
    The conserved quantity ``H = theta(Y) - L`` where ``L_Y theta = dL``.

    Returns ``(H, residual)`` with ``residual`` the largest coefficient of
    ``Y . grad H``, which vanishes in exact arithmetic.
    """
    exactness = is_exact(lie_derivative(flow, theta), tol=tol)
    if not exactness.exact:
        raise ValueError(
            "L_Y theta is not exact (residual {:.2e})".format(exactness.residual)
        )
    H = theta.contract(flow) - exactness.potential
    drift = TrigPoly.zero(flow.dim)
    for y, dH in zip(flow.components, H.gradient()):
        drift = drift + y * dH
    residual = max(
        (abs(float(v)) for ab in drift.terms.values() for v in ab), default=0.0
    )
    return H, residual


@dataclass(frozen=True)
class ArcReport:
    passed: bool
    longest_zero_arc: float
    min_abs_thetaY: float
    n_trajectories: int


def arc_nonvanishing(
    flow, theta, n_trajectories=100, T=1.0, dt=1e-3, tol=1e-10, random_state=None
):
    """
    Sampled check that theta(Y) vanishes on no arc of a trajectory.

    Trajectories of length ``T`` start from random points; along each one
    theta(Y) is sampled every ``dt``. A run of two or more consecutive
    samples with ``|theta(Y)| <= tol`` counts as a vanishing arc. Passing
    is evidence, not a proof: arcs shorter than ``dt`` or between samples
    go unseen.
    """
    rng = check_random_state(random_state)
    starts = rng.uniform(size=(n_trajectories, flow.dim))
    n_steps = step_count(T, dt)
    path = rk4_path(flow.eval_field, starts, T / n_steps, n_steps)
    values = np.abs(theta.contract(flow)(path))
    small = values <= tol
    longest = 0
    for j in range(n_trajectories):
        run = 0
        for flag in small[:, j]:
            run = run + 1 if flag else 0
            longest = max(longest, run)
    longest_arc = max(longest - 1, 0) * T / n_steps
    return ArcReport(
        passed=longest < 2,
        longest_zero_arc=longest_arc,
        min_abs_thetaY=float(values.min()),
        n_trajectories=n_trajectories,
    )
