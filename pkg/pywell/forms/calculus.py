"""
Exact calculus of trig-polynomial 1-forms: Lie derivatives, exactness and
pullbacks.
"""
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .one_form import OneForm
from pywell.feature_library import torus_grid
from pywell.feature_library import TorusFourierLibrary
from pywell.feature_library import TrigPoly
from pywell.feature_library import TWO_PI


class UnsupportedMapError(TypeError):
    """Pullback requested through a map whose pullback is not trig-polynomial."""


class FitResidualWarning(UserWarning):
    """A least-squares trig fit missed its samples by more than the tolerance."""


def lie_derivative(flow, theta, scale=TWO_PI):
    """
    Lie derivative of ``theta`` along ``flow`` by Cartan's formula
    ``L_Y theta = d(theta(Y)) + i_Y d theta``.

    In components ``(L_Y theta)_i = d_i(theta(Y)) + sum_j Y_j (d_j theta_i -
    d_i theta_j)``. Every term carries exactly one derivative, so
    ``scale=1`` returns ``L_Y theta / (2 pi)`` with rational coefficients
    kept rational.

    Parameters
    ----------
    flow : TorusFlow

    theta : OneForm

    scale : float, optional (default 2 pi)
        Derivative scale passed to ``TrigPoly.derivative``.

    Returns
    -------
    omega : OneForm
    """
    if flow.dim != theta.dim:
        raise ValueError(
            "form dimension {} != flow dimension {}".format(theta.dim, flow.dim)
        )
    n = theta.dim
    thetaY = theta.contract(flow)
    dtheta = [
        [c.derivative(j, scale=scale) for j in range(n)] for c in theta.components
    ]
    out = []
    for i in range(n):
        total = thetaY.derivative(i, scale=scale)
        for j in range(n):
            if i == j:
                continue
            curl = dtheta[i][j] - dtheta[j][i]
            if not curl.is_zero():
                total = total + flow.components[j] * curl
        out.append(total)
    return OneForm(out, name="L_Y({})".format(theta.name or "theta"))


@dataclass(frozen=True, eq=False)
class Exactness:
    exact: bool
    potential: Optional[TrigPoly]
    residual: float

    def __bool__(self):
        return self.exact


def _coefficient_sup(polys):
    values = [abs(float(v)) for p in polys for ab in p.terms.values() for v in ab]
    return max(values, default=0.0)


def is_exact(omega, tol=0, scale=TWO_PI):
    """
    Decide whether ``omega = dL`` for a trig polynomial ``L``.

    On the torus a 1-form is exact iff it is closed and its periods over
    the coordinate circles (the constant terms) vanish. Both conditions are
    checked coefficient by coefficient; with ``tol=0`` the decision is
    exact. ``L`` is recovered term by term, normalized to zero mean.

    ``scale`` must match the derivative scale ``omega`` was built with.

    Returns
    -------
    result : Exactness
        ``exact``, the potential (or None) and the largest offending
        coefficient (0 when exact in exact arithmetic).
    """
    n = omega.dim
    curl = omega.exterior_derivative(scale=scale)
    periods = [abs(float(p)) for p in omega.periods()]
    residual = max(_coefficient_sup(curl.values()), max(periods))
    if residual > tol:
        return Exactness(False, None, residual)
    terms = {}
    for i, comp in enumerate(omega.components):
        for k, (a, b) in comp.items():
            if not any(k) or k in terms:
                continue
            # the first nonzero entry of a canonical frequency is positive
            first = next(j for j in range(n) if k[j])
            if first != i:
                continue
            f = scale * k[i]
            # d_i(A cos + B sin) = f B cos - f A sin
            terms[k] = (-b / f, a / f)
    # frequencies whose first-coordinate component vanished only up to tol
    for i, comp in enumerate(omega.components):
        for k, (a, b) in comp.items():
            if any(k) and k not in terms and k[i]:
                f = scale * k[i]
                terms[k] = (-b / f, a / f)
    L = TrigPoly(n, terms)
    recovered = OneForm.differential(L, scale=scale)
    residual = max(residual, omega.max_difference(recovered))
    return Exactness(residual <= tol, L if residual <= tol else None, residual)


def pullback(phi, theta, approximate=False, degree=None, grid_res=None, tol=1e-8):
    """
    Pull ``theta`` back through ``phi``: ``(phi^* theta)(v) = theta(d phi v)``.

    Affine torus maps (including projections, products and compositions of
    them) give an exact trig-polynomial result: with ``phi(y) = A y + b``
    the new components are ``sum_i A_ij theta_i(A y + b)``. Any other map
    requires ``approximate=True``, which samples the pullback on a grid and
    fits a trig polynomial of ``degree``; the fit residual is stored on the
    returned form and a FitResidualWarning is emitted above ``tol``.

    Raises
    ------
    UnsupportedMapError
        ``phi`` is not affine and ``approximate`` is False.
    """
    if phi.target_dim != theta.dim:
        raise ValueError(
            "map target dimension {} != form dimension {}".format(
                phi.target_dim, theta.dim
            )
        )
    if not phi.periodic:
        raise ValueError("pullback needs a map into a torus")
    affine = phi.affine_part()
    if affine is not None:
        A, b = affine
        moved = [c.compose_affine(A, b) for c in theta.components]
        comps = []
        for j in range(phi.source_dim):
            total = TrigPoly.zero(phi.source_dim)
            for i in range(theta.dim):
                if A[i, j]:
                    coef = int(A[i, j])
                    total = total + (moved[i] if coef == 1 else moved[i].scale(coef))
            comps.append(total)
        return OneForm(comps, name=theta.name)
    if not approximate:
        raise UnsupportedMapError(
            "{} is not affine; pass approximate=True for a fitted pullback".format(
                type(phi).__name__
            )
        )
    degree = theta.degree + 4 if degree is None else degree
    grid_res = grid_res or max(4 * degree + 4, 16)
    grid = torus_grid(phi.source_dim, grid_res)
    values = np.einsum("gi,gij->gj", theta(phi(grid)), phi.jacobian(grid))
    lib = TorusFourierLibrary(degree=degree).fit(grid)
    comps, residual = [], 0.0
    for j in range(phi.source_dim):
        poly, r = lib.fit_values(grid, values[:, j])
        comps.append(poly)
        residual = max(residual, r)
    if residual > tol:
        warnings.warn(
            "approximate pullback fit residual {:.2e} exceeds {:.1e}".format(
                residual, tol
            ),
            FitResidualWarning,
        )
    return OneForm(comps, name=theta.name, residual=residual)
