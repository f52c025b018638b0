"""
Exact decision of the adapted-form LP with feasibility witnesses and Farkas
certificates.
"""
import json
import warnings
from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction
from typing import Optional

import numpy as np
import sympy
from scipy.optimize import linprog

from pywell.forms import AdaptationReport
from pywell.forms import check_adapted
from pywell.forms import OneForm
from pywell.optimizers import RationalSimplex
from pywell.utils import fraction_to_str

FEASIBLE = "feasible"
INFEASIBLE = "infeasible-at-degree"
# positive on the grid but not certified between grid points
GRID_FEASIBLE = "grid-feasible"


class FarkasWarning(UserWarning):
    """The float LP failed; the exact search starts from a blind row set."""


@dataclass(frozen=True, eq=False)
class AdaptedCertificate:
    """
    Outcome of :func:`solve`.

    A feasible verdict carries the witness form and its AdaptationReport.
    An infeasible verdict carries a Farkas vector ``(lam, u, w)`` for the
    system ``E x = 0, G x >= eps, -G x >= -1``: ``lam`` multiplies the
    exactness rows, ``u`` and ``w`` the grid rows listed in
    ``grid_indices``. The identity ``lam^T E + (u - w)^T G = 0`` and
    ``eps sum(u) - sum(w) > 0`` are checked in exact arithmetic and
    ``farkas_residual`` is the largest entry of the left side (always 0
    for a returned certificate).

    ``certified_radius`` is the coefficient 1-norm below which the same
    vector also excludes the system with unrounded grid values.

    Degree-truncated infeasibility says nothing about forms of higher
    degree.
    """

    verdict: str
    degree: int
    eps: Fraction
    grid_res: int
    objective: Fraction
    witness: Optional[OneForm] = None
    coefficients: Optional[list] = None
    report: Optional[AdaptationReport] = None
    grid_indices: list = field(default_factory=list)
    lam: list = field(default_factory=list)
    u: list = field(default_factory=list)
    w: list = field(default_factory=list)
    farkas_value: Optional[Fraction] = None
    farkas_residual: Optional[Fraction] = None
    certified_radius: Optional[Fraction] = None
    n_rounds: int = 0

    @property
    def feasible(self):
        return self.verdict == FEASIBLE

    def to_json(self):
        """JSON-compatible dict; rationals are written as "p/q" strings."""

        def rationals(values):
            return [fraction_to_str(v) for v in values]

        out = {
            "verdict": self.verdict,
            "degree": self.degree,
            "eps": fraction_to_str(self.eps),
            "grid_res": self.grid_res,
            "objective": fraction_to_str(self.objective),
            "rounds": self.n_rounds,
        }
        if self.witness is not None:
            out["witness"] = self.witness.to_spec()
            out["coefficients"] = rationals(self.coefficients)
            out["min_thetaY"] = self.report.min_thetaY
            out["classification"] = self.report.classification
        if self.verdict == INFEASIBLE:
            out["farkas"] = {
                "grid_indices": [int(i) for i in self.grid_indices],
                "lambda": rationals(self.lam),
                "u": rationals(self.u),
                "w": rationals(self.w),
                "value": fraction_to_str(self.farkas_value),
                "residual": fraction_to_str(self.farkas_residual),
                "certified_radius": fraction_to_str(self.certified_radius),
            }
        return out

    def dumps(self, **kwargs):
        return json.dumps(self.to_json(), **kwargs)


def _float_active_rows(GZ, max_rows):
    """Grid rows with nonzero duals in the float LP."""
    n_rows, d = GZ.shape
    A_ub = np.block([[-GZ, np.ones((n_rows, 1))], [GZ, np.zeros((n_rows, 1))]])
    b_ub = np.concatenate([np.zeros(n_rows), np.ones(n_rows)])
    c = np.zeros(d + 1)
    c[-1] = -1.0
    bounds = [(None, None)] * d + [(0, None)]
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if res.status != 0:
        warnings.warn(
            "float LP ended with status {} ({}); starting from spread rows".format(
                res.status, res.message
            ),
            FarkasWarning,
        )
        step = max(n_rows // max_rows, 1)
        return sorted(range(0, n_rows, step))[:max_rows]
    marg = np.abs(res.ineqlin.marginals)
    weight = marg[:n_rows] + marg[n_rows:]
    active = np.flatnonzero(weight > 1e-9)
    if active.size == 0:
        active = np.argsort(GZ @ res.x[:d])[:1]
    return sorted(int(r) for r in active)


def _exact_subproblem(rows, d):
    """Simplex data for ``max t`` over the listed rows of ``G Z``."""
    A, b = [], []
    for a in rows:
        A.append([-v for v in a] + list(a) + [1])
        b.append(0)
    for a in rows:
        A.append(list(a) + [-v for v in a] + [0])
        b.append(1)
    c = [0] * (2 * d) + [1]
    return A, b, c


def _matvec(Z, z):
    return [sum(col[i] * zj for col, zj in zip(Z, z)) for i in range(len(Z[0]))]


def _farkas(lp, indices, u, w):
    """Complete ``(u, w)`` with exactness multipliers and verify exactly."""
    n_free = lp.n_free
    diff = [Fraction(0)] * n_free
    for r, ur, wr in zip(indices, u, w):
        if ur == wr:
            continue
        row = lp.grid_row(r)
        for j in range(n_free):
            diff[j] += (ur - wr) * row[j]
    if lp.equalities and any(diff):
        Et = sympy.Matrix(
            [
                [sympy.Rational(v.numerator, v.denominator) for v in row]
                for row in lp.equalities
            ]
        ).T
        rhs = sympy.Matrix([-sympy.Rational(v.numerator, v.denominator) for v in diff])
        sol, params = Et.gauss_jordan_solve(rhs)
        sol = sol.subs({p: 0 for p in params})
        lam = [Fraction(int(v.p), int(v.q)) for v in sol]
    else:
        lam = [Fraction(0)] * lp.n_equalities
    residual = list(diff)
    for l_e, row in zip(lam, lp.equalities):
        if l_e:
            for j in range(n_free):
                residual[j] += l_e * row[j]
    farkas_residual = max((abs(v) for v in residual), default=Fraction(0))
    value = lp.eps * sum(u) - sum(w)
    return lam, farkas_residual, value


def solve(lp, max_rows=None, max_rounds=100):
    """
    Decide the adapted-form LP exactly.

    Solves ``max t`` subject to ``t <= G x <= 1`` on the grid with ``x`` in
    the kernel of the exactness rows. A float LP (scipy/HiGHS) proposes the
    active grid rows; the exact rational simplex (Bland's rule) then solves
    the program restricted to those rows, and rows the exact optimum
    violates are added until none remain. The restricted program is a
    relaxation, so its optimal dual is a valid Farkas vector of the whole
    system, and a restricted optimum satisfying every row is optimal
    overall.

    Parameters
    ----------
    lp : AdaptedLP

    max_rows : int, optional
        Rows added per round; defaults to ``2 * (dim ker E + 1)``.

    max_rounds : int, optional (default 100)
        Cutting-plane rounds before giving up with RuntimeError.

    Returns
    -------
    certificate : AdaptedCertificate
        Feasible when the optimum minus the rounding slack is at least
        ``eps``; the witness is then re-checked with
        ``forms.check_adapted`` at margin ``eps / 2``.
    """
    Z = lp.nullspace()
    d = len(Z)
    if d == 0:
        return _infeasible_trivial(lp)
    Zf = np.array(Z, dtype=float).T
    GZ = (lp.grid_numerators / lp.denominator) @ Zf
    max_rows = max_rows or 2 * (d + 1)
    active = _float_active_rows(GZ, max_rows)

    for n_round in range(1, max_rounds + 1):
        rows = []
        for r in active:
            g = lp.grid_row(r)
            rows.append([sum(gi * col[i] for i, gi in enumerate(g)) for col in Z])
        A, b, c = _exact_subproblem(rows, d)
        opt = RationalSimplex().fit(A, b, c)
        if opt.status_ != "optimal":
            raise RuntimeError("restricted LP is {}".format(opt.status_))
        t = opt.objective_
        if t < lp.eps:
            m = len(active)
            u, w = opt.dual_[:m], opt.dual_[m:]
            lam, residual, value = _farkas(lp, active, u, w)
            assert residual == 0 and value > 0, "Farkas identity failed"
            return AdaptedCertificate(
                verdict=INFEASIBLE,
                degree=lp.degree,
                eps=lp.eps,
                grid_res=lp.grid_res,
                objective=t,
                grid_indices=list(active),
                lam=lam,
                u=list(u),
                w=list(w),
                farkas_value=value,
                farkas_residual=residual,
                certified_radius=value / (lp.rounding_radius * sum(u + w)),
                n_rounds=n_round,
            )
        z = [p - q for p, q in zip(opt.coef_[:d], opt.coef_[d : 2 * d])]
        x = _matvec(Z, z)
        values = lp.grid_values(x)
        taken = set(active)
        violated = [
            r for r, v in enumerate(values) if (v < t or v > 1) and r not in taken
        ]
        if not violated:
            return _feasible(lp, x, t, n_round)
        violated.sort(key=lambda r: min(values[r] - t, 1 - values[r]))
        active = sorted(set(active) | set(violated[:max_rows]))
    raise RuntimeError(
        "no exact decision after {} cutting-plane rounds".format(max_rounds)
    )


def _infeasible_trivial(lp):
    # ker E = 0: only theta = 0, and t <= G 0 = 0 < eps at any grid row
    lam, residual, value = _farkas(lp, [0], [Fraction(1)], [Fraction(0)])
    assert residual == 0 and value > 0, "Farkas identity failed"
    return AdaptedCertificate(
        verdict=INFEASIBLE,
        degree=lp.degree,
        eps=lp.eps,
        grid_res=lp.grid_res,
        objective=Fraction(0),
        grid_indices=[0],
        lam=lam,
        u=[Fraction(1)],
        w=[Fraction(0)],
        farkas_value=value,
        farkas_residual=residual,
        certified_radius=value / lp.rounding_radius,
    )


def _feasible(lp, x, t, n_round):
    theta = lp.form(x, name="witness_K{}".format(lp.degree))
    slack = lp.rounding_radius * sum(abs(v) for v in x)
    grid_res = max(lp.grid_res, theta.contract(lp.flow).default_grid_res())
    report = check_adapted(lp.flow, theta, eps=float(lp.eps) / 2, grid_res=grid_res)
    verdict = FEASIBLE if t - slack >= lp.eps and report.strong else GRID_FEASIBLE
    return AdaptedCertificate(
        verdict=verdict,
        degree=lp.degree,
        eps=lp.eps,
        grid_res=lp.grid_res,
        objective=t,
        witness=theta,
        coefficients=list(x),
        report=report,
        n_rounds=n_round,
    )
