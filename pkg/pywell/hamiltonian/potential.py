import numpy as np

from .base import BasePotential
from pywell.feature_library import TrigPoly
from pywell.feature_library import TrigPolyStack
from pywell.utils import require
from pywell.utils import SpecError


class PolynomialPotential(BasePotential):
    """
    Polynomial potential ``V(q) = sum_j c_j prod_i q_i^{e_ji}``.

    Parameters
    ----------
    dim : int
        Dimension m of the configuration space.

    terms : list of (exponents, coefficient), optional
        Monomials with a nonnegative integer exponent per coordinate. An
        empty list gives the zero potential.

    Examples
    --------
    >>> from pywell.hamiltonian import PolynomialPotential
    >>> V = PolynomialPotential.harmonic(2)
    >>> V.value([1.0, 0.0])
    0.5
    >>> V.gradient([1.0, 2.0])
    array([1., 2.])
    """

    kind = "polynomial"

    def __init__(self, dim, terms=None):
        super(PolynomialPotential, self).__init__(dim)
        terms = list(terms or [])
        exponents, coefs = [], []
        for e, c in terms:
            e = tuple(int(v) for v in e)
            if len(e) != self.dim or min(e) < 0:
                raise ValueError(
                    "exponent {} must have {} nonnegative entries".format(e, self.dim)
                )
            exponents.append(e)
            coefs.append(float(c))
        self.terms = list(zip(exponents, coefs))
        self._exponents = np.array(exponents, dtype=int).reshape(-1, self.dim)
        self._coefs = np.array(coefs, dtype=float)

    @classmethod
    def zero(cls, dim):
        return cls(dim)

    @classmethod
    def harmonic(cls, dim, omega=1.0):
        """``omega^2 |q|^2 / 2``."""
        eye = np.eye(dim, dtype=int)
        return cls(dim, [(2 * eye[i], omega ** 2 / 2) for i in range(dim)])

    @classmethod
    def quartic(cls, dim, a=0.25, b=0.5):
        """``a sum q_i^4 + b sum q_i^2``."""
        eye = np.eye(dim, dtype=int)
        terms = [(4 * eye[i], a) for i in range(dim)]
        return cls(dim, terms + [(2 * eye[i], b) for i in range(dim)])

    def _monomials(self, q, exponents):
        return np.prod(q[..., None, :] ** exponents, axis=-1)

    def _value(self, q):
        if not self.terms:
            return np.zeros(q.shape[:-1]) if q.ndim > 1 else 0.0
        out = self._monomials(q, self._exponents) @ self._coefs
        return float(out) if np.ndim(out) == 0 else out

    def _gradient(self, q):
        grad = np.zeros(q.shape)
        for i in range(self.dim):
            e = self._exponents[:, i]
            mask = e > 0
            if not np.any(mask):
                continue
            lowered = self._exponents[mask].copy()
            lowered[:, i] -= 1
            grad[..., i] = self._monomials(q, lowered) @ (self._coefs[mask] * e[mask])
        return grad

    def coercivity_constants(self):
        # recognized shape: sum of c q_i^(2j) with c >= 0 and every q_i^2 present
        quadratic = {}
        for e, c in self.terms:
            axes = np.flatnonzero(e)
            if len(axes) != 1 or e[axes[0]] % 2 or c < 0:
                return None
            if e[axes[0]] == 2:
                quadratic[int(axes[0])] = quadratic.get(int(axes[0]), 0.0) + c
        if len(quadratic) != self.dim or min(quadratic.values()) <= 0:
            return None
        return min(quadratic.values()), 0.0

    def to_spec(self):
        return {
            "kind": self.kind,
            "dim": self.dim,
            "terms": [[list(e), c] for e, c in self.terms],
        }


class TrigPotential(BasePotential):
    """
    Potential given by a trig polynomial in ``q``, periodic with period 1.

    Parameters
    ----------
    poly : TrigPoly
        The potential as a function of q.
    """

    kind = "trig"

    def __init__(self, poly):
        if not isinstance(poly, TrigPoly):
            raise TypeError("poly must be a TrigPoly")
        super(TrigPotential, self).__init__(poly.dim)
        self.poly = poly
        self._values = TrigPolyStack([poly])
        self._gradients = TrigPolyStack(poly.gradient())

    def _value(self, q):
        out = self._values(q)[..., 0]
        return float(out) if np.ndim(out) == 0 else out

    def _gradient(self, q):
        return self._gradients(q)

    def to_spec(self):
        return {"kind": self.kind, "dim": self.dim, "poly": self.poly.to_spec()}


def smoothstep(s):
    """Quintic ramp: 0 for s <= 0, 1 for s >= 1, C^2 in between."""
    s = np.clip(s, 0.0, 1.0)
    return s ** 3 * (10 - 15 * s + 6 * s ** 2)


def smoothstep_derivative(s):
    inside = (s > 0) & (s < 1)
    s = np.clip(s, 0.0, 1.0)
    return np.where(inside, 30 * s ** 2 * (1 - s) ** 2, 0.0)


class RBFPotential(BasePotential):
    """
    Gaussian bump sum with a coercive quadratic tail.

    ``V(q) = sum_i w_i exp(-|q - c_i|^2 / (2 sigma^2)) + tau * s(q) |q|^2``
    where ``s`` ramps from 0 at ``|q| = radius`` to 1 at
    ``|q| = radius + transition`` with a quintic smoothstep.

    Parameters
    ----------
    centers : array-like, shape (n_centers, dim)

    weights : array-like, shape (n_centers,)

    width : float
        Gaussian width sigma.

    tau : float, optional (default 0)
        Tail strength. With ``tau > 0`` the potential is coercive.

    radius : float, optional (default 0)
        Radius at which the tail starts switching on.

    transition : float, optional (default 1)
        Width of the switching shell.
    """

    kind = "rbf"

    def __init__(self, centers, weights, width, tau=0.0, radius=0.0, transition=1.0):
        centers = np.atleast_2d(np.asarray(centers, dtype=float))
        super(RBFPotential, self).__init__(centers.shape[1])
        weights = np.asarray(weights, dtype=float).ravel()
        if weights.shape[0] != centers.shape[0]:
            raise ValueError("need one weight per center")
        if width <= 0:
            raise ValueError("width must be positive")
        if tau < 0:
            raise ValueError("tau cannot be negative")
        if radius < 0 or transition <= 0:
            raise ValueError("radius must be nonnegative and transition positive")
        self.centers = centers
        self.weights = weights
        self.width = float(width)
        self.tau = float(tau)
        self.radius = float(radius)
        self.transition = float(transition)

    def _bumps(self, q):
        diff = q[..., None, :] - self.centers
        return diff, np.exp(-np.sum(diff ** 2, axis=-1) / (2 * self.width ** 2))

    def _value(self, q):
        _, g = self._bumps(q)
        r2 = np.sum(q ** 2, axis=-1)
        s = (np.sqrt(r2) - self.radius) / self.transition
        out = g @ self.weights + self.tau * smoothstep(s) * r2
        return float(out) if np.ndim(out) == 0 else out

    def _gradient(self, q):
        diff, g = self._bumps(q)
        grad = -np.einsum("...c,...ci->...i", g * self.weights, diff) / self.width ** 2
        if self.tau:
            r2 = np.sum(q ** 2, axis=-1)
            r = np.sqrt(r2)
            s = (r - self.radius) / self.transition
            # d/dq [s(q) |q|^2] = s' q |q| / transition + 2 s q
            ds = smoothstep_derivative(s) * r / self.transition
            grad = grad + self.tau * (ds + 2 * smoothstep(s))[..., None] * q
        return grad

    def coercivity_constants(self):
        K = float(np.sum(np.abs(self.weights))) + self.tau * (
            self.radius + self.transition
        ) ** 2
        return self.tau, K

    def to_spec(self):
        return {
            "kind": self.kind,
            "dim": self.dim,
            "centers": self.centers.tolist(),
            "weights": self.weights.tolist(),
            "width": self.width,
            "tau": self.tau,
            "radius": self.radius,
            "transition": self.transition,
        }


def potential_from_spec(spec):
    """Build a potential from its JSON-compatible description."""
    kind = require(spec, "kind", str)
    try:
        if kind == "polynomial":
            return PolynomialPotential(
                require(spec, "dim", int), require(spec, "terms", list)
            )
        if kind == "trig":
            dim = require(spec, "dim", int)
            return TrigPotential(TrigPoly.from_spec(dim, require(spec, "poly", list)))
        if kind == "rbf":
            return RBFPotential(
                require(spec, "centers", list),
                require(spec, "weights", list),
                require(spec, "width", (int, float)),
                tau=spec.get("tau", 0.0),
                radius=spec.get("radius", 0.0),
                transition=spec.get("transition", 1.0),
            )
        if kind == "extended":
            from pywell.embedder import ExtendedPotential

            return ExtendedPotential.from_spec(spec)
    except SpecError:
        raise
    except (TypeError, ValueError) as e:
        raise SpecError("potential of kind '{}': {}".format(kind, e))
    raise SpecError("field 'kind': unknown potential kind '{}'".format(kind))
