"""
Isometric embeddings of flat and nearly flat tori into R^m.
"""
from itertools import combinations
from math import gcd

import numpy as np
import sympy
from scipy.optimize import nnls
from scipy.spatial.distance import pdist
from sklearn.utils import check_random_state

from pywell.feature_library import frequency_box
from pywell.feature_library import torus_grid
from pywell.feature_library import TorusFourierLibrary
from pywell.feature_library import TrigPoly
from pywell.flows import TrigPolyMap
from pywell.forms import OneForm
from pywell.optimizers import GaussNewton


class EmbeddingError(RuntimeError):
    """No admissible embedding or tube was found."""


class EmbeddingMap(TrigPolyMap):
    """
    Map ``q : (R/Z)^n -> R^m`` with trig-polynomial coordinates.

    With a flow attached, the momentum ``p = L_Y q`` and acceleration
    ``a = L_Y p`` are exact trig polynomials built from ``q``.

    Parameters
    ----------
    components : list of TrigPoly
        The m coordinates of q.

    metric : MetricField, optional
        The metric q is meant to realize; sets ``residual``.

    flow : TorusFlow, optional
        Defaults to ``metric.flow``.

    converged : bool, optional (default True)
        False when an optimizer stopped above its tolerance.

    grid_res : int, optional
        Grid for residual, immersion and injectivity checks.
    """

    def __init__(
        self, components, metric=None, flow=None, converged=True, grid_res=None
    ):
        super(EmbeddingMap, self).__init__(components, periodic=False)
        self.metric = metric
        self.flow = flow if flow is not None else getattr(metric, "flow", None)
        if self.flow is not None and self.flow.dim != self.source_dim:
            raise ValueError("flow and embedding live on different tori")
        self.converged = converged
        degree = max(c.degree for c in self.components)
        self.grid_res = grid_res or max(4 * degree + 4, 16)
        self.residual = None if metric is None else self.gram_residual()
        self._p = None

    @property
    def m(self):
        return self.target_dim

    def gram(self, y):
        J = self.jacobian(y)
        return np.swapaxes(J, -1, -2) @ J

    def gram_residual(self, grid_res=None):
        """Largest ``|<d_i q, d_j q> - g_ij|`` over the grid."""
        grid = torus_grid(self.source_dim, grid_res or self.grid_res)
        return float(np.max(np.abs(self.gram(grid) - self.metric(grid))))

    def immersion_bound(self, grid_res=None):
        """Smallest Gram determinant over the grid."""
        grid = torus_grid(self.source_dim, grid_res or self.grid_res)
        return float(np.min(np.linalg.det(self.gram(grid))))

    def injectivity_gap(self, grid_res=None):
        """Smallest image distance between distinct grid points."""
        grid = torus_grid(self.source_dim, grid_res or self.grid_res)
        return float(np.min(pdist(self(grid))))

    def _require_flow(self):
        if self.flow is None:
            raise ValueError("attach a flow to form p = L_Y q")

    def _along_flow(self, polys):
        Y = self.flow.components
        out = []
        for f in polys:
            total = TrigPoly.zero(self.source_dim)
            for i, y in enumerate(Y):
                total = total + y * f.derivative(i)
            out.append(total)
        return out

    @property
    def p(self):
        """Momentum ``p = L_Y q`` as one TrigPoly per coordinate."""
        self._require_flow()
        if self._p is None:
            self._p = self._along_flow(self.components)
        return self._p

    @property
    def acceleration(self):
        """``a = L_Y p``."""
        return self._along_flow(self.p)

    def momentum(self, y):
        return TrigPolyMap(self.p)(y)

    def state(self, y):
        """Phase point ``(q(y), p(y))`` as a WellState."""
        from pywell.hamiltonian import WellState

        return WellState(self(y), self.momentum(y))

    def with_flow(self, flow):
        return EmbeddingMap(
            self.components, self.metric, flow, self.converged, self.grid_res
        )

    def to_spec(self):
        return {
            "kind": "embedding",
            "dim": self.source_dim,
            "m": self.m,
            "components": [c.to_spec() for c in self.components],
            "residual": self.residual,
        }


def generates_lattice(freqs):
    """Whether integer vectors ``freqs`` generate the full lattice Z^n."""
    freqs = [list(k) for k in freqs]
    if not freqs:
        return False
    n = len(freqs[0])
    g = 0
    for rows in combinations(freqs, n):
        g = gcd(g, int(sympy.Matrix(rows).det()))
        if g == 1:
            return True
    return False


def _dominant_split(G, tol):
    """``G = D + sum |G_ij| (e_i +- e_j)(e_i +- e_j)^T`` when diagonally dominant."""
    n = G.shape[0]
    weights = {}
    for i in range(n):
        d = G[i, i] - sum(abs(G[i, j]) for j in range(n) if j != i)
        if d < -tol:
            return None
        if d > tol:
            k = [0] * n
            k[i] = 1
            weights[tuple(k)] = d
    for i, j in combinations(range(n), 2):
        if abs(G[i, j]) > tol:
            k = [0] * n
            k[i], k[j] = 1, int(np.sign(G[i, j]))
            weights[tuple(k)] = abs(G[i, j])
    return weights


def _upper(M):
    n = M.shape[0]
    return np.array([M[i, j] for i in range(n) for j in range(i, n)])


def _staged_nnls(G, max_frequency, tol):
    n = G.shape[0]
    target = _upper(G)
    best = np.inf
    for bound in range(1, max_frequency + 1):
        freqs = [k for k in frequency_box(n, bound, canonical=True) if any(k)]
        M = np.stack([_upper(np.outer(k, k)) for k in freqs], axis=1)
        w, res = nnls(M, target)
        best = min(best, res)
        chosen = {k: v for k, v in zip(freqs, w) if v > 0}
        if res < tol and generates_lattice(chosen):
            return chosen, res
    raise EmbeddingError(
        "no flat embedding with frequencies up to {}; smallest residual "
        "{:.3e}".format(max_frequency, best)
    )


def flat_embedding(metric, max_frequency=3, tol=1e-12):
    """
    Exact isometric embedding of a torus with a constant metric.

    Finds integer frequency vectors ``l_i`` and radii ``r_i`` with
    ``sum (2 pi r_i)^2 l_i l_i^T = G`` and returns
    ``q(y) = (r_i cos 2 pi l_i.y, r_i sin 2 pi l_i.y)_i`` in ``R^{2r}``.
    Diagonally dominant ``G`` is split into coordinate vectors and
    ``e_i +- e_j``; otherwise a nonnegative least-squares fit runs over
    growing frequency boxes. The vectors must generate Z^n, which makes q
    injective.

    Parameters
    ----------
    metric : MetricField
        Constant entries required.

    max_frequency : int, optional (default 3)
        Largest sup-norm of candidate frequency vectors.

    tol : float, optional (default 1e-12)
        Largest accepted Gram residual.

    Returns
    -------
    embedding : EmbeddingMap

    Examples
    --------
    >>> from pywell.embedder import flat_embedding, MetricField
    >>> q = flat_embedding(MetricField.identity(2))
    >>> q.m
    4
    """
    if not metric.is_constant(1e-14):
        raise ValueError("flat_embedding needs a metric with constant entries")
    G = metric.constant_part()
    if np.min(np.linalg.eigvalsh(G)) <= 0:
        raise EmbeddingError("metric is not positive definite")
    weights = _dominant_split(G, tol)
    if weights is None or not generates_lattice(weights):
        weights, _ = _staged_nnls(G, max_frequency, tol)
    components = []
    for k, w in sorted(weights.items()):
        r = np.sqrt(w) / (2 * np.pi)
        components.append(TrigPoly.cos(k, r))
        components.append(TrigPoly.sin(k, r))
    embedding = EmbeddingMap(components, metric=metric)
    if embedding.residual > max(tol, 1e-12):
        raise EmbeddingError(
            "flat embedding residual {:.3e} exceeds {:.1e}".format(
                embedding.residual, tol
            )
        )
    return embedding


def optimize_embedding(
    metric,
    m,
    degree=4,
    iters=50,
    tol=1e-10,
    grid_res=None,
    perturbation=1e-3,
    random_state=None,
):
    """
    Least-squares approximate isometric embedding.

    Minimizes ``sum |<d_i q, d_j q> - g_ij|^2`` over the grid with
    Gauss-Newton, q ranging over m trig polynomials of ``degree`` without
    constant term. The start is ``flat_embedding`` of the constant part of
    the metric, padded with small random coordinates up to ``m``.

    Parameters
    ----------
    metric : MetricField

    m : int
        Target dimension, at least ``2 n + 2``.

    degree : int, optional (default 4)

    iters : int, optional (default 50)
        Gauss-Newton iteration budget.

    tol : float, optional (default 1e-10)
        Residual below which the result counts as converged.

    grid_res : int, optional
        Defaults to ``4 * degree + 4``.

    perturbation : float, optional (default 1e-3)
        Scale of the random padding; unused for constant metrics.

    random_state : int or RandomState, optional

    Returns
    -------
    embedding : EmbeddingMap
        ``converged`` is False when the residual stayed above ``tol``; the
        residual is always recorded.
    """
    from .metric import MetricField

    n = metric.dim
    if m < 2 * n + 2:
        raise ValueError("m must be at least 2n + 2 = {}".format(2 * n + 2))
    start = flat_embedding(MetricField.constant(metric.constant_part()))
    if start.m > m:
        raise EmbeddingError(
            "the flat start needs m >= {}, got m = {}".format(start.m, m)
        )
    grid_res = grid_res or 4 * degree + 4
    grid = torus_grid(n, grid_res)
    lib = TorusFourierLibrary(degree=degree, include_constant=False).fit(grid)
    F = lib.n_output_features_
    if max(c.degree for c in start.components) > degree:
        raise ValueError("degree {} is below the flat start's degree".format(degree))

    rng = check_random_state(random_state)
    coef = np.zeros((m, F))
    for alpha, c in enumerate(start.components):
        coef[alpha] = lib.trigpoly_to_coefficients(c)
    if not metric.is_constant():
        coef[start.m :] = perturbation * rng.standard_normal((m - start.m, F))

    D = [lib.derivative_transform(grid, i) for i in range(n)]
    target = metric(grid)
    pairs = [(i, j) for i in range(n) for j in range(i, n)]

    def fun(x):
        C = x.reshape(m, F)
        dq = [Di @ C.T for Di in D]
        residuals, jac = [], []
        for i, j in pairs:
            residuals.append(np.sum(dq[i] * dq[j], axis=1) - target[:, i, j])
            block = (
                D[i][:, None, :] * dq[j][:, :, None]
                + dq[i][:, :, None] * D[j][:, None, :]
            )
            jac.append(block.reshape(len(grid), m * F))
        return np.concatenate(jac), np.concatenate(residuals)

    opt = GaussNewton(max_iter=iters, tol=tol).fit(fun, coef.ravel())
    C = opt.coef_.reshape(m, F)
    components = [lib.coefficients_to_trigpoly(row) for row in C]
    return EmbeddingMap(
        components, metric=metric, converged=opt.converged_, grid_res=grid_res
    )


def tautological_form(embedding):
    """The pullback ``sum_j <p, d_j q> dy_j`` of the canonical form by (q, p)."""
    n = embedding.source_dim
    comps = []
    for j in range(n):
        total = TrigPoly.zero(n)
        for q, p in zip(embedding.components, embedding.p):
            total = total + p * q.derivative(j)
        comps.append(total)
    return OneForm(comps, name="q*lambda")
