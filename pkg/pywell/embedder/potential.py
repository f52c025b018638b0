"""
Extension of the on-manifold potential to a coercive potential on R^m.
"""
import numpy as np
from scipy.spatial import cKDTree

from .embedding import EmbeddingError
from .embedding import EmbeddingMap
from pywell.feature_library import torus_grid
from pywell.feature_library import TrigPoly
from pywell.feature_library import TrigPolyStack
from pywell.flows import TorusFlow
from pywell.forms import is_exact
from pywell.forms import lie_derivative
from pywell.hamiltonian import BasePotential
from pywell.hamiltonian import smoothstep
from pywell.hamiltonian import smoothstep_derivative
from pywell.utils import require
from pywell.utils import validate_positive


def cutoff(s):
    """1 for ``s <= 1/3``, 0 for ``s >= 2/3``, quintic in between."""
    return 1.0 - smoothstep(3 * s - 1)


def cutoff_derivative(s):
    return -3.0 * smoothstep_derivative(3 * s - 1)


def _sup(poly):
    return float(poly.coefficient_norm())


class ExtendedPotential(BasePotential):
    """
    Potential on R^m whose gradient on ``q(N)`` is minus the acceleration.

    With ``pi`` the nearest-point projection onto ``q(N)`` and
    ``w = z - pi(z)``,

    ``V(z) = chi(|w| / eps) (v(y) - <n(y), w>) + (1 - chi) tau |z|^2``

    where ``y`` is the torus point with ``q(y) = pi(z)``, ``v = |p|^2 / 2 -
    L``, ``a = L_Y p`` and ``n`` is the normal part of ``a``. On ``q(N)``,
    ``-grad V = a`` exactly when ``<a, d_i q> = -d_i v``.

    Projections start at the nearest manifold sample (k-d tree over
    ``q`` on the grid) and are refined by Newton's method on
    ``d_i q(y) . (z - q(y)) = 0``.

    Parameters
    ----------
    q : list of TrigPoly
        Coordinates of the embedding, on the n-torus.

    flow : TorusFlow

    L : TrigPoly
        Potential with ``L_Y theta = dL``.

    eps : float
        Tube radius; the cutoff vanishes beyond ``2 eps / 3``.

    tau : float, optional (default 1)
        Strength of the quadratic tail.

    grid_res : int, optional
        Resolution of the sample grid on the torus.

    newton_iters : int, optional (default 20)

    newton_tol : float, optional (default 1e-13)
    """

    kind = "extended"

    def __init__(
        self,
        q,
        flow,
        L,
        eps,
        tau=1.0,
        grid_res=None,
        newton_iters=20,
        newton_tol=1e-13,
    ):
        q = list(q)
        super(ExtendedPotential, self).__init__(len(q))
        validate_positive(eps, "eps")
        validate_positive(tau, "tau")
        n = flow.dim
        if any(c.dim != n for c in q) or L.dim != n:
            raise ValueError("q, flow and L must live on the same torus")
        self.embedding = EmbeddingMap(q, flow=flow)
        self.flow = flow
        self.L = L
        self.eps = float(eps)
        self.tau = float(tau)
        degree = max(c.degree for c in q)
        self.grid_res = grid_res or max(8 * degree, 32)
        self.newton_iters = newton_iters
        self.newton_tol = newton_tol
        self.torus_dim = n

        p = self.embedding.p
        a = self.embedding.acceleration
        self.v = sum((c * c for c in p), TrigPoly.zero(n)).scale(0.5) - L
        self._a = a
        self._q = TrigPolyStack(q)
        self._dq = TrigPolyStack([c.derivative(j) for j in range(n) for c in q])
        self._hq = TrigPolyStack(
            [
                c.derivative(j).derivative(k)
                for j in range(n)
                for k in range(n)
                for c in q
            ]
        )
        self._v = TrigPolyStack([self.v])
        self._dv = TrigPolyStack(self.v.gradient())
        self._av = TrigPolyStack(a)
        self._da = TrigPolyStack([c.derivative(j) for j in range(n) for c in a])

        self.samples = torus_grid(n, self.grid_res)
        self.sample_points = self._q(self.samples)
        self._tree = cKDTree(self.sample_points)
        bounds = np.array([c.gradient_bounds() for c in q])
        # any point of q(N) lies within this distance of a sample
        self.sample_gap = 0.5 / self.grid_res * float(
            np.sqrt(np.sum(np.sum(bounds, axis=1) ** 2))
        )

    # geometry at torus points --------------------------------------------

    def _frame(self, y):
        N, n, m = y.shape[0], self.torus_dim, self.dim
        T = np.swapaxes(self._dq(y).reshape(N, n, m), 1, 2)
        hess = self._hq(y).reshape(N, n, n, m)
        return T, hess

    def project(self, z, y0=None):
        """
        Torus points ``y`` with ``q(y)`` nearest to ``z`` (shape ``(N, m)``).

        Starts from ``y0`` or from the nearest sample.
        """
        z = np.atleast_2d(np.asarray(z, dtype=float))
        if y0 is None:
            _, idx = self._tree.query(z)
            y0 = self.samples[idx]
        y = np.array(y0, dtype=float)
        for _ in range(self.newton_iters):
            w = z - self._q(y)
            T, hess = self._frame(y)
            F = np.einsum("nai,na->ni", T, w)
            H = np.einsum("nai,naj->nij", T, T) - np.einsum("nija,na->nij", hess, w)
            step = np.linalg.solve(H, F[..., None])[..., 0]
            y = y + step
            if np.max(np.abs(step)) < self.newton_tol:
                break
        return y

    def normal(self, y):
        """Normal part ``n = a - T G^-1 T^T a`` of the acceleration."""
        y = np.atleast_2d(y)
        T, _ = self._frame(y)
        a = self._av(y)
        G = np.einsum("nai,naj->nij", T, T)
        c = np.linalg.solve(G, np.einsum("nai,na->ni", T, a)[..., None])[..., 0]
        return a - np.einsum("nai,ni->na", T, c)

    def _inner(self, z, y):
        """Value and gradient of ``v(y) - <n(y), w>`` near the manifold."""
        N, n = y.shape[0], self.torus_dim
        w = z - self._q(y)
        T, hess = self._frame(y)
        a = self._av(y)
        da = self._da(y).reshape(N, n, self.dim)
        G = np.einsum("nai,naj->nij", T, T)
        Ginv = np.linalg.inv(G)
        c = np.einsum("nij,nj->ni", Ginv, np.einsum("nai,na->ni", T, a))
        nrm = a - np.einsum("nai,ni->na", T, c)
        Ttw = np.einsum("nai,na->ni", T, w)
        Qw = w - np.einsum("nai,ni->na", T, np.einsum("nij,nj->ni", Ginv, Ttw))
        # (D_j n) . w with D_j n = Q D_j a - Q dT_j c - T G^-1 dT_j^T Q a
        dn_w = np.empty((N, n))
        for j in range(n):
            dTj = np.swapaxes(hess[:, j], 1, 2)
            dn_w[:, j] = (
                np.einsum("na,na->n", da[:, j], Qw)
                - np.einsum("nai,ni,na->n", dTj, c, Qw)
                - np.einsum("ni,nik,nak,na->n", Ttw, Ginv, dTj, nrm)
            )
        H = G - np.einsum("nija,na->nij", hess, w)
        rhs = self._dv(y) - dn_w
        value = self._v(y)[:, 0] - np.einsum("na,na->n", nrm, w)
        grad = -nrm + np.einsum(
            "nai,ni->na", T, np.linalg.solve(H, rhs[..., None])[..., 0]
        )
        return value, grad, w

    def _evaluate(self, z):
        shape = z.shape
        z = z.reshape(-1, self.dim)
        r2 = np.sum(z ** 2, axis=-1)
        value = self.tau * r2
        grad = 2 * self.tau * z
        kd_dist, idx = self._tree.query(z)
        near = kd_dist - self.sample_gap < 2 * self.eps / 3
        if np.any(near):
            zn = z[near]
            y = self.project(zn, self.samples[idx[near]])
            v_in, g_in, w = self._inner(zn, y)
            d = np.sqrt(np.sum(w ** 2, axis=-1))
            s = d / self.eps
            chi = cutoff(s)
            dchi = cutoff_derivative(s) / self.eps
            unit = np.where(d[:, None] > 0, w / np.where(d > 0, d, 1.0)[:, None], 0.0)
            tail = self.tau * r2[near]
            value[near] = chi * v_in + (1 - chi) * tail
            grad[near] = (
                chi[:, None] * g_in
                + (1 - chi)[:, None] * grad[near]
                + ((v_in - tail) * dchi)[:, None] * unit
            )
        return value.reshape(shape[:-1]), grad.reshape(shape)

    def _value(self, q):
        out, _ = self._evaluate(np.atleast_1d(q))
        return float(out) if np.ndim(out) == 0 else out

    def _gradient(self, q):
        _, grad = self._evaluate(np.atleast_1d(q))
        return grad

    # diagnostics -----------------------------------------------------------

    def acceleration(self, y):
        return self._av(np.atleast_2d(y))

    def tangential_residual(self, grid_res=None):
        """Largest ``|<a, d_i q> + d_i v|`` over the grid."""
        grid = torus_grid(self.torus_dim, grid_res or self.grid_res)
        T, _ = self._frame(grid)
        lhs = np.einsum("nai,na->ni", T, self._av(grid)) + self._dv(grid)
        return float(np.max(np.abs(lhs)))

    def gradient_residual(self, y=None):
        """Largest ``|grad V(q(y)) + a(y)|`` over ``y`` (default: the samples)."""
        y = self.samples if y is None else np.atleast_2d(y)
        z = self._q(y)
        return float(
            np.max(np.linalg.norm(self.gradient(z) + self._av(y), axis=-1))
        )

    def coercivity_constants(self):
        """
        ``(tau, K)`` with ``V(z) >= tau |z|^2 - K``.

        Sup bounds come from coefficient norms: ``|v| <= K_v``,
        ``|n| <= |a| <= K_a`` and ``|q| <= K_q``.
        """
        K_v = _sup(self.v)
        K_a = float(np.sqrt(sum(_sup(c) ** 2 for c in self._a)))
        K_q = float(np.sqrt(sum(_sup(c) ** 2 for c in self.embedding.components)))
        K = K_v + K_a * self.eps + self.tau * (K_q + self.eps) ** 2
        return self.tau, K

    def sample_table(self):
        """Rows ``y, q(y), V0(y), n(y)`` for every grid sample."""
        y = self.samples
        return np.column_stack(
            [y, self.sample_points, self._v(y)[:, 0], self.normal(y)]
        )

    def to_csv(self, path):
        n, m = self.torus_dim, self.dim
        names = (
            ["y%d" % (i + 1) for i in range(n)]
            + ["z%d" % (i + 1) for i in range(m)]
            + ["V0"]
            + ["n%d" % (i + 1) for i in range(m)]
        )
        np.savetxt(
            path,
            self.sample_table(),
            delimiter=",",
            header=",".join(names),
            comments="",
        )

    def to_spec(self):
        return {
            "kind": self.kind,
            "dim": self.dim,
            "torus_dim": self.torus_dim,
            "q": [c.to_spec() for c in self.embedding.components],
            "flow": self.flow.to_spec(),
            "L": self.L.to_spec(),
            "eps": self.eps,
            "tau": self.tau,
            "grid_res": self.grid_res,
        }

    @classmethod
    def from_spec(cls, spec):
        n = require(spec, "torus_dim", int)
        q = [TrigPoly.from_spec(n, c) for c in require(spec, "q", list)]
        if len(q) != require(spec, "dim", int):
            raise ValueError("field 'q' does not have 'dim' entries")
        return cls(
            q,
            TorusFlow.from_spec(require(spec, "flow", dict)),
            TrigPoly.from_spec(n, require(spec, "L", list)),
            require(spec, "eps", (int, float)),
            tau=spec.get("tau", 1.0),
            grid_res=spec.get("grid_res"),
        )

    def __repr__(self):
        return "ExtendedPotential(m={}, n={}, eps={:.3g})".format(
            self.dim, self.torus_dim, self.eps
        )


def estimate_reach(embedding, grid_res=None, chunk=256):
    """
    Sampled reach of ``q(N)``.

    For sample pairs ``z_i, z_j`` the normal segments at ``z_i`` of length
    ``|z_j - z_i|^2 / (2 |P_N(z_j - z_i)|)`` reach a point equidistant from
    both; the minimum over pairs estimates the reach (exact for round
    circles).
    """
    grid = torus_grid(embedding.source_dim, grid_res or embedding.grid_res)
    Z = embedding(grid)
    J = embedding.jacobian(grid)
    proj = J @ np.linalg.solve(np.swapaxes(J, 1, 2) @ J, np.swapaxes(J, 1, 2))
    best = np.inf
    for start in range(0, len(Z), chunk):
        rows = slice(start, start + chunk)
        D = Z[None, :, :] - Z[rows, None, :]
        normal = D - np.einsum("iab,ijb->ija", proj[rows], D)
        num = np.sum(D ** 2, axis=-1)
        den = 2 * np.linalg.norm(normal, axis=-1)
        mask = den > 1e-14 * np.maximum(num, 1e-300)
        if np.any(mask):
            best = min(best, float(np.min(num[mask] / den[mask])))
    return best


def build_potential(
    embedding,
    flow=None,
    L=None,
    tau=1.0,
    grid_res=None,
    reach_grid_res=None,
    min_eps=1e-3,
):
    """
    Extend the on-manifold data of an embedded flow to a potential on R^m.

    Parameters
    ----------
    embedding : EmbeddingMap

    flow : TorusFlow, optional
        Defaults to ``embedding.flow``.

    L : TrigPoly, optional
        Exactness potential with ``L_Y theta = dL``. Defaults to the one of
        the tautological form ``sum_j <p, d_j q> dy_j``.

    tau : float, optional (default 1)
        Tail strength.

    grid_res : int, optional
        Sample grid of the potential.

    reach_grid_res : int, optional
        Grid of the reach estimate.

    min_eps : float, optional (default 1e-3)
        Smallest acceptable tube radius.

    Returns
    -------
    potential : ExtendedPotential
        With ``reach``, ``tangential_residual_`` and ``gradient_residual_``
        recorded.

    Raises
    ------
    EmbeddingError
        Half the estimated reach is below ``min_eps``.
    """
    flow = flow if flow is not None else embedding.flow
    if flow is None:
        raise ValueError("a flow is required")
    embedding = embedding.with_flow(flow)
    if L is None:
        from .embedding import tautological_form

        exact = is_exact(lie_derivative(flow, tautological_form(embedding)), tol=1e-8)
        if not exact:
            raise ValueError(
                "L_Y of the tautological form is not exact (residual {:.2e})".format(
                    exact.residual
                )
            )
        L = exact.potential
    reach = estimate_reach(embedding, reach_grid_res)
    eps = 0.5 * reach
    if not eps >= min_eps:
        raise EmbeddingError(
            "tube too thin: reach estimate {:.3e}, eps {:.3e} < {:.1e}".format(
                reach, eps, min_eps
            )
        )
    potential = ExtendedPotential(
        embedding.components, flow, L, eps, tau=tau, grid_res=grid_res
    )
    potential.reach = reach
    potential.tangential_residual_ = potential.tangential_residual()
    potential.gradient_residual_ = potential.gradient_residual()
    return potential
