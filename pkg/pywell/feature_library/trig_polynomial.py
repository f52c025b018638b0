"""
Real trigonometric polynomials on the torus (R/Z)^n.
"""
from fractions import Fraction
from itertools import product as cartesian

import numpy as np

TWO_PI = 2 * np.pi


def canonical_frequency(k):
    """Return ``(k', sign)`` with ``k'`` the representative of ``{k, -k}``.

    The representative is the vector whose first nonzero entry is positive.
    ``sign`` is -1 when ``k`` had to be negated (sine terms flip sign).
    """
    k = tuple(int(ki) for ki in k)
    for ki in k:
        if ki > 0:
            return k, 1
        if ki < 0:
            return tuple(-kj for kj in k), -1
    return k, 1


def frequency_box(dim, degree, canonical=False):
    """All integer frequency vectors with sup-norm at most ``degree``."""
    freqs = list(cartesian(range(-degree, degree + 1), repeat=dim))
    if canonical:
        freqs = [k for k in freqs if canonical_frequency(k)[1] == 1]
    return freqs


def _is_zero(c):
    return c == 0


# (cos, sin) of 2 pi j / 4
_QUARTER_TURNS = ((1, 0), (0, 1), (-1, 0), (0, -1))


class TrigPoly:
    """
    Finite sum of terms ``a_k cos(2 pi k.x) + b_k sin(2 pi k.x)``.

    Terms are stored under canonical frequencies (first nonzero entry
    positive) so two equal polynomials have equal coefficient tables.
    Coefficients may be ``float`` or ``fractions.Fraction``; all
    algebra preserves the coefficient type.

    Parameters
    ----------
    dim : int
        Dimension n of the torus.

    terms : dict, optional
        Map from frequency vector (length ``dim``) to a ``(cos, sin)``
        coefficient pair. Non-canonical frequencies are folded in.

    Examples
    --------
    >>> from pywell.feature_library import TrigPoly
    >>> f = TrigPoly.sin((1, 0))
    >>> f([0.25, 0.7])
    1.0
    >>> f.derivative(0)([0.0, 0.0])
    6.283185307179586
    """

    __slots__ = ("dim", "_terms")
    __array_ufunc__ = None

    def __init__(self, dim, terms=None):
        if not isinstance(dim, (int, np.integer)) or dim < 1:
            raise ValueError("dim must be a positive integer")
        self.dim = int(dim)
        self._terms = {}
        for k, (a, b) in (terms or {}).items():
            if len(k) != self.dim:
                raise ValueError(
                    "frequency {} does not match dimension {}".format(k, self.dim)
                )
            self._add_term(k, a, b)
        self._prune()

    # construction -------------------------------------------------------

    @classmethod
    def constant(cls, dim, value):
        return cls(dim, {(0,) * dim: (value, 0)})

    @classmethod
    def zero(cls, dim):
        return cls(dim)

    @classmethod
    def cos(cls, k, coef=1):
        return cls(len(k), {tuple(k): (coef, 0)})

    @classmethod
    def sin(cls, k, coef=1):
        return cls(len(k), {tuple(k): (0, coef)})

    def _add_term(self, k, a, b):
        k, sign = canonical_frequency(k)
        if not any(k):
            b = 0
        elif sign < 0:
            b = -b
        a0, b0 = self._terms.get(k, (0, 0))
        self._terms[k] = (a0 + a, b0 + b)

    def _prune(self):
        self._terms = {
            k: (a, b)
            for k, (a, b) in self._terms.items()
            if not (_is_zero(a) and _is_zero(b))
        }

    # inspection ----------------------------------------------------------

    @property
    def terms(self):
        """Copy of the canonical coefficient table."""
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, k):
        """Coefficient pair of the canonical term at frequency ``k``."""
        k, sign = canonical_frequency(k)
        a, b = self._terms.get(k, (0, 0))
        return a, sign * b

    @property
    def constant_term(self):
        return self._terms.get((0,) * self.dim, (0, 0))[0]

    @property
    def degree(self):
        if not self._terms:
            return 0
        return max(max(abs(ki) for ki in k) for k in self._terms)

    def is_zero(self, tol=0):
        return all(abs(a) <= tol and abs(b) <= tol for a, b in self._terms.values())

    def is_constant(self, tol=0):
        return all(
            abs(a) <= tol and abs(b) <= tol
            for k, (a, b) in self._terms.items()
            if any(k)
        )

    def coefficient_norm(self):
        """Sum of absolute coefficients, an upper bound for sup |f|."""
        return float(sum(abs(a) + abs(b) for a, b in self._terms.values()))

    def gradient_bounds(self):
        """Upper bounds for sup |d f / d x_i|, one per coordinate."""
        bounds = np.zeros(self.dim)
        for k, (a, b) in self._terms.items():
            bounds += TWO_PI * np.abs(k) * (abs(float(a)) + abs(float(b)))
        return bounds

    def max_difference(self, other):
        """Largest absolute coefficient difference to ``other``."""
        diff = self - other
        if not diff._terms:
            return 0.0
        return float(max(max(abs(a), abs(b)) for a, b in diff._terms.values()))

    # evaluation ----------------------------------------------------------

    def _arrays(self):
        if not self._terms:
            return np.zeros((0, self.dim)), np.zeros(0), np.zeros(0)
        freqs = np.array(list(self._terms.keys()), dtype=float)
        a = np.array([float(c[0]) for c in self._terms.values()])
        b = np.array([float(c[1]) for c in self._terms.values()])
        return freqs, a, b

    def __call__(self, x):
        """Evaluate at a point of shape ``(dim,)`` or points ``(..., dim)``."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim:
            raise ValueError(
                "point dimension {} does not match {}".format(x.shape[-1], self.dim)
            )
        freqs, a, b = self._arrays()
        phases = TWO_PI * (x @ freqs.T)
        values = np.cos(phases) @ a + np.sin(phases) @ b
        if values.ndim == 0:
            return float(values)
        return values

    def evaluate_exact(self, x, cos_sin):
        """Evaluate with user-supplied rational trig values.

        ``cos_sin(k, x)`` must return the ``(cos, sin)`` pair of the phase
        ``2 pi k.x``; used by callers that keep rational enclosures.
        """
        total = 0
        for k, (a, b) in self._terms.items():
            c, s = cos_sin(k, x)
            total += a * c + b * s
        return total

    # algebra ---------------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, TrigPoly):
            raise TypeError("expected a TrigPoly, got {}".format(type(other)))
        if other.dim != self.dim:
            raise ValueError("dimension mismatch: {} vs {}".format(self.dim, other.dim))

    def __add__(self, other):
        if not isinstance(other, TrigPoly):
            other = TrigPoly.constant(self.dim, other)
        self._check(other)
        out = TrigPoly(self.dim, self._terms)
        for k, (a, b) in other._terms.items():
            out._add_term(k, a, b)
        out._prune()
        return out

    __radd__ = __add__

    def __neg__(self):
        return TrigPoly(self.dim, {k: (-a, -b) for k, (a, b) in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        terms = {k: (c * a, c * b) for k, (a, b) in self._terms.items()}
        return TrigPoly(self.dim, terms)

    def __mul__(self, other):
        if not isinstance(other, TrigPoly):
            return self.scale(other)
        self._check(other)
        out = TrigPoly(self.dim)
        for k1, (a1, b1) in self._terms.items():
            for k2, (a2, b2) in other._terms.items():
                ksum = tuple(i + j for i, j in zip(k1, k2))
                kdiff = tuple(i - j for i, j in zip(k1, k2))
                # product-to-sum on cos/sin pairs
                out._add_term(ksum, (a1 * a2 - b1 * b2) / 2, (a1 * b2 + b1 * a2) / 2)
                out._add_term(kdiff, (a1 * a2 + b1 * b2) / 2, (b1 * a2 - a1 * b2) / 2)
        out._prune()
        return out

    __rmul__ = __mul__

    def __truediv__(self, c):
        terms = {k: (a / c, b / c) for k, (a, b) in self._terms.items()}
        return TrigPoly(self.dim, terms)

    def __eq__(self, other):
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self.dim == other.dim and self._terms == other._terms

    def __hash__(self):
        return hash((self.dim, tuple(sorted(self._terms.items()))))

    def __repr__(self):
        return "TrigPoly(dim={}, terms={})".format(self.dim, self._terms)

    def derivative(self, i, scale=TWO_PI):
        """Partial derivative in coordinate ``i``.

        With the default ``scale`` this is the true derivative; ``scale=1``
        drops the common factor 2 pi so rational coefficients stay rational.
        """
        if not 0 <= i < self.dim:
            raise ValueError("coordinate index {} out of range".format(i))
        out = {}
        for k, (a, b) in self._terms.items():
            if k[i] == 0:
                continue
            f = scale * k[i]
            out[k] = (f * b, -f * a)
        return TrigPoly(self.dim, out)

    def gradient(self, scale=TWO_PI):
        return [self.derivative(i, scale=scale) for i in range(self.dim)]

    def compose_affine(self, A, b):
        """Return ``y -> f(A y + b)`` for an integer matrix ``A``.

        ``A`` has shape ``(dim, m)`` so the result lives on (R/Z)^m.
        """
        A = np.asarray(A)
        if A.ndim != 2 or A.shape[0] != self.dim:
            raise ValueError("A must have shape ({}, m)".format(self.dim))
        if not np.all(np.equal(np.mod(A, 1), 0)):
            raise ValueError("affine torus maps need an integer matrix")
        A = A.astype(int)
        b = np.asarray(b, dtype=float).reshape(self.dim)
        out = TrigPoly(A.shape[1])
        for k, (a, s) in self._terms.items():
            knew = tuple(int(v) for v in np.asarray(k) @ A)
            turn = float(np.dot(k, b)) % 1.0
            if turn * 4 == int(turn * 4):
                # quarter turns keep coefficients exact
                c, sn = _QUARTER_TURNS[int(turn * 4)]
            else:
                c, sn = np.cos(TWO_PI * turn), np.sin(TWO_PI * turn)
            # angle addition for cos(u + p) and sin(u + p)
            out._add_term(knew, a * c + s * sn, s * c - a * sn)
        out._prune()
        return out

    def embed(self, dim, axes):
        """View ``f`` as a function on a larger torus through ``axes``."""
        if len(axes) != self.dim:
            raise ValueError("need one axis per coordinate")
        out = {}
        for k, c in self._terms.items():
            knew = [0] * dim
            for ax, ki in zip(axes, k):
                knew[ax] = ki
            out[tuple(knew)] = c
        return TrigPoly(dim, out)

    def as_fractions(self):
        """Exact copy with ``Fraction`` coefficients (floats are dyadic)."""
        return TrigPoly(
            self.dim,
            {k: (Fraction(a), Fraction(b)) for k, (a, b) in self._terms.items()},
        )

    def as_floats(self):
        return TrigPoly(
            self.dim, {k: (float(a), float(b)) for k, (a, b) in self._terms.items()}
        )

    # certified bounds ------------------------------------------------------

    def default_grid_res(self, factor=8, minimum=16):
        return max(factor * max(self.degree, 1), minimum)

    def grid_minimum(self, grid_res=None):
        """Return ``(min over grid, Lipschitz margin)``.

        The true minimum is at least ``min - margin``: every point is within
        half a grid step of a grid node in each coordinate.
        """
        grid_res = grid_res or self.default_grid_res()
        grid = torus_grid(self.dim, grid_res)
        values = self(grid)
        margin = 0.5 / grid_res * float(np.sum(self.gradient_bounds()))
        return float(np.min(values)), margin

    def certified_minimum(self, grid_res=None):
        low, margin = self.grid_minimum(grid_res)
        return low - margin

    # serialization ---------------------------------------------------------

    def to_spec(self):
        return [
            [list(k), float(a), float(b)] for k, (a, b) in sorted(self._terms.items())
        ]

    @classmethod
    def from_spec(cls, dim, spec):
        terms = {}
        for entry in spec:
            if len(entry) != 3:
                raise ValueError("term must be [freq, cos, sin], got {}".format(entry))
            k, a, b = entry
            k = tuple(int(v) for v in k)
            a0, b0 = terms.get(k, (0.0, 0.0))
            terms[k] = (a0 + float(a), b0 + float(b))
        out = cls(dim)
        for k, (a, b) in terms.items():
            if len(k) != dim:
                raise ValueError("frequency {} has wrong length".format(list(k)))
            out._add_term(k, a, b)
        out._prune()
        return out


def torus_grid(dim, grid_res):
    """Uniform grid ``{j / grid_res}^dim`` as an array of shape (grid_res^dim, dim)."""
    axes = [np.arange(grid_res) / grid_res] * dim
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


class TrigPolyStack:
    """
    Evaluate several trig polynomials on a shared frequency table.

    One ``cos``/``sin`` evaluation of the union of frequencies serves every
    polynomial, which keeps inner loops (projections, potential gradients)
    down to two matrix products.

    Parameters
    ----------
    polys : list of TrigPoly
        Polynomials on the same torus.
    """

    def __init__(self, polys):
        polys = list(polys)
        if not polys:
            raise ValueError("need at least one polynomial")
        dims = {p.dim for p in polys}
        if len(dims) != 1:
            raise ValueError("polynomials live on tori of different dimension")
        self.dim = dims.pop()
        self.n_polys = len(polys)
        freqs = sorted(set().union(*(p.terms.keys() for p in polys)))
        if not freqs:
            freqs = [(0,) * self.dim]
        index = {k: i for i, k in enumerate(freqs)}
        self.frequencies = np.array(freqs, dtype=float).reshape(-1, self.dim)
        self.cos_coef = np.zeros((len(freqs), self.n_polys))
        self.sin_coef = np.zeros((len(freqs), self.n_polys))
        for j, p in enumerate(polys):
            for k, (a, b) in p.items():
                self.cos_coef[index[k], j] = float(a)
                self.sin_coef[index[k], j] = float(b)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        phases = TWO_PI * (x @ self.frequencies.T)
        return np.cos(phases) @ self.cos_coef + np.sin(phases) @ self.sin_coef
