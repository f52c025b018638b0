"""
The adapted metric ``g~`` built from a flow and a strongly adapted form.
"""
import warnings

import numpy as np

from .embedding import EmbeddingError
from pywell.feature_library import torus_grid
from pywell.feature_library import TorusFourierLibrary
from pywell.feature_library import TrigPoly
from pywell.feature_library import TrigPolyStack
from pywell.forms import check_adapted
from pywell.forms import FitResidualWarning


class NotStronglyAdaptedError(ValueError):
    """The metric construction needs a strongly adapted form."""


class MetricField:
    """
    Riemannian metric on (R/Z)^n with trig-polynomial entries.

    Parameters
    ----------
    entries : n x n nested list of TrigPoly
        Symmetric matrix of coefficients ``g_ij``.

    flow, theta, base : optional
        Provenance: the flow, the adapted form and the base metric the
        entries were built from (``build_metric`` fills these in).

    C : float, optional
        Weight of the base metric on the complement of Y.

    fit_residual : float, optional (default 0)
        Largest entry residual when the entries were fitted on a grid.
    """

    def __init__(
        self, entries, flow=None, theta=None, base=None, C=None, fit_residual=0.0
    ):
        entries = [list(row) for row in entries]
        n = len(entries)
        if n == 0 or any(len(row) != n for row in entries):
            raise ValueError("metric entries must form a square matrix")
        for row in entries:
            for e in row:
                if not isinstance(e, TrigPoly) or e.dim != n:
                    raise ValueError(
                        "metric entries must be TrigPoly on the {}-torus".format(n)
                    )
        for i in range(n):
            for j in range(i):
                if entries[i][j].max_difference(entries[j][i]) > 1e-12:
                    raise ValueError("metric entries are not symmetric")
        self.dim = n
        self.entries = entries
        self.flow = flow
        self.theta = theta
        self.base = base
        self.C = C
        self.fit_residual = float(fit_residual)
        self.duality_residual = None
        self._stack = None

    @classmethod
    def identity(cls, dim):
        return cls(
            [
                [TrigPoly.constant(dim, 1.0 if i == j else 0.0) for j in range(dim)]
                for i in range(dim)
            ]
        )

    @classmethod
    def constant(cls, matrix):
        matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
        n = matrix.shape[0]
        return cls([[TrigPoly.constant(n, v) for v in row] for row in matrix])

    @property
    def degree(self):
        return max(e.degree for row in self.entries for e in row)

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        if self._stack is None:
            self._stack = TrigPolyStack([e for row in self.entries for e in row])
        return self._stack(y).reshape(y.shape[:-1] + (self.dim, self.dim))

    def is_constant(self, tol=0):
        return all(e.is_constant(tol) for row in self.entries for e in row)

    def constant_part(self):
        return np.array([[float(e.constant_term) for e in row] for row in self.entries])

    def apply(self, Y):
        """The 1-form ``g(Y, .)`` as a list of components."""
        out = []
        for i in range(self.dim):
            total = TrigPoly.zero(self.dim)
            for j in range(self.dim):
                total = total + self.entries[i][j] * Y[j]
            out.append(total)
        return out

    def min_eigenvalue(self, grid_res=None):
        """
        Return ``(grid minimum, margin)`` of the smallest eigenvalue.

        Every entry moves by at most its Lipschitz bound times half a grid
        step, so the smallest eigenvalue over the whole torus is at least
        ``grid minimum - margin``.
        """
        grid_res = grid_res or max(8 * max(self.degree, 1), 16)
        values = self(torus_grid(self.dim, grid_res))
        low = float(np.min(np.linalg.eigvalsh(values)))
        lips = np.array(
            [[np.sum(e.gradient_bounds()) for e in row] for row in self.entries]
        )
        margin = 0.5 / grid_res * float(np.sqrt(np.sum(lips ** 2)))
        return low, margin

    def certified_min_eigenvalue(self, grid_res=None):
        low, margin = self.min_eigenvalue(grid_res)
        return low - margin

    def to_spec(self):
        return {
            "kind": "metric",
            "dim": self.dim,
            "entries": [[e.to_spec() for e in row] for row in self.entries],
            "C": self.C,
        }

    def __repr__(self):
        return "MetricField(dim={}, C={})".format(self.dim, self.C)


def _outer(u, v):
    return [[a * b for b in v] for a in u]


def _combine(*terms):
    """Entrywise sum of (coefficient, matrix) pairs."""
    n = len(terms[0][1])
    out = [[TrigPoly.zero(terms[0][1][0][0].dim) for _ in range(n)] for _ in range(n)]
    for c, M in terms:
        for i in range(n):
            for j in range(n):
                out[i][j] = out[i][j] + M[i][j].scale(c)
    return out


def _fit_entries(parts, dim, degree):
    """Fit the grid values of ``P_a``-dependent entries by trig polynomials."""
    grid_res = max(4 * degree + 4, 16)
    grid = torus_grid(dim, grid_res)
    lib = TorusFourierLibrary(degree=degree).fit(grid)
    fitted, residual = [], 0.0
    for M in parts:
        rows = []
        for i in range(dim):
            row = []
            for j in range(dim):
                poly, r = lib.fit_values(grid, M(grid)[:, i, j])
                row.append(poly)
                residual = max(residual, r)
            rows.append(row)
        fitted.append(rows)
    if residual > 1e-8:
        warnings.warn(
            "metric fit residual {:.2e}; raise fit_degree".format(residual),
            FitResidualWarning,
        )
    return fitted, residual


def build_metric(
    flow, theta, g0=None, delta=1e-3, grid_res=None, max_doublings=30, fit_degree=None
):
    """
    Metric in which ``Y`` and ``theta`` are dual.

    Splitting vectors as ``aY + Z`` with ``Z`` orthogonal to ``Y`` in
    ``g0``, the metric is ``g~(aY + Z, bY + W) = ab theta(Y) + a theta(W) +
    b theta(Z) + C g0(Z, W)``. In matrices, with ``s = g0(Y, Y)`` and
    ``P = g0 Y / s``,

    ``g~ = P theta^T + theta P^T - theta(Y) P P^T + C (g0 - s P P^T)``

    so ``g~ Y = theta`` identically. When ``s`` is constant the entries are
    exact trig polynomials; otherwise they are least-squares fits of
    degree ``fit_degree`` and ``fit_residual`` is recorded. ``C`` starts at
    1 and doubles until the certified smallest eigenvalue reaches
    ``delta``.

    Parameters
    ----------
    flow : TorusFlow

    theta : OneForm
        Strongly adapted to ``flow``.

    g0 : MetricField, optional
        Base metric, the identity by default.

    delta : float, optional (default 1e-3)
        Required certified lower bound for the eigenvalues.

    grid_res : int, optional
        Grid for the eigenvalue certificate.

    max_doublings : int, optional (default 30)

    fit_degree : int, optional
        Degree of fitted entries when ``s`` is not constant.

    Returns
    -------
    metric : MetricField
        With ``duality_residual`` set to the largest coefficient of
        ``g~ Y - theta``.

    Raises
    ------
    NotStronglyAdaptedError
        ``theta`` is not strongly adapted to ``flow``.

    EmbeddingError
        No ``C`` up to ``2**max_doublings`` gives a positive-definite
        metric.
    """
    n = flow.dim
    report = check_adapted(flow, theta)
    if not report.strong:
        raise NotStronglyAdaptedError(
            "theta is {} adapted (certified min theta(Y) = {:.3e})".format(
                report.classification, report.min_thetaY
            )
        )
    g0 = MetricField.identity(n) if g0 is None else g0
    if g0.dim != n:
        raise ValueError("base metric dimension {} != {}".format(g0.dim, n))
    if g0.certified_min_eigenvalue() <= 0:
        raise ValueError("base metric is not certified positive definite")

    Y = list(flow.components)
    G0Y = g0.apply(Y)
    s = sum((y * gy for y, gy in zip(Y, G0Y)), TrigPoly.zero(n))
    thetaY = theta.contract(flow)
    th = list(theta.components)
    fit_residual = 0.0
    if s.is_constant():
        P = [c / float(s.constant_term) for c in G0Y]
        PP = _outer(P, P)
        A = _combine(
            (1.0, _outer(P, th)),
            (1.0, _outer(th, P)),
            (-1.0, [[thetaY * e for e in row] for row in PP]),
        )
        B = _combine(
            (1.0, g0.entries), (-1.0, [[s * e for e in row] for row in PP])
        )
    else:
        degree = fit_degree or (theta.degree + 2 * flow.degree + g0.degree + 4)
        stacks = TrigPolyStack(G0Y), TrigPolyStack([s]), TrigPolyStack([thetaY])
        theta_stack = TrigPolyStack(th)

        def pieces(y):
            Pv = stacks[0](y) / stacks[1](y)
            outer = Pv[:, :, None] * Pv[:, None, :]
            tv = theta_stack(y)
            A = (
                Pv[:, :, None] * tv[:, None, :]
                + tv[:, :, None] * Pv[:, None, :]
                - stacks[2](y)[:, :, None] * outer
            )
            B = g0(y) - stacks[1](y)[:, :, None] * outer
            return A, B

        (A, B), fit_residual = _fit_entries(
            [lambda y: pieces(y)[0], lambda y: pieces(y)[1]], n, degree
        )

    C = 1.0
    for _ in range(max_doublings + 1):
        metric = MetricField(
            _combine((1.0, A), (C, B)),
            flow=flow,
            theta=theta,
            base=g0,
            C=C,
            fit_residual=fit_residual,
        )
        if metric.certified_min_eigenvalue(grid_res) >= delta:
            break
        C *= 2
    else:
        raise EmbeddingError(
            "metric not positive definite up to C = {:.3g}".format(C / 2)
        )
    dual = metric.apply(Y)
    metric.duality_residual = max(
        d.max_difference(t) for d, t in zip(dual, theta.components)
    )
    return metric
