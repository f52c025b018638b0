import numpy as np
from scipy.linalg import block_diag

from .base import ChartMap
from pywell.feature_library import TrigPolyStack
from pywell.utils import reduce_mod1
from pywell.utils import validate_input


class AffineMap(ChartMap):
    """
    Affine map ``y -> A y + b``.

    Parameters
    ----------
    A : array-like, shape (target_dim, source_dim)
        Linear part. Must be an integer matrix when the target is a torus,
        so the map descends to the quotient.

    b : array-like, shape (target_dim,), optional
        Translation (default zero).

    periodic : bool, optional (default True)
        Reduce images mod 1.
    """

    def __init__(self, A, b=None, periodic=True):
        A = np.atleast_2d(np.asarray(A, dtype=float))
        super(AffineMap, self).__init__(A.shape[1], A.shape[0], periodic=periodic)
        if periodic and not np.all(A == np.round(A)):
            raise ValueError("torus maps need an integer linear part")
        self.A = A
        self.b = np.zeros(A.shape[0]) if b is None else np.asarray(b, dtype=float)
        if self.b.shape != (A.shape[0],):
            raise ValueError("b must have shape ({},)".format(A.shape[0]))

    def __call__(self, y):
        y = validate_input(y, self.source_dim, name="y")
        out = y @ self.A.T + self.b
        return reduce_mod1(out) if self.periodic else out

    def jacobian(self, y):
        y = validate_input(y, self.source_dim, name="y")
        return np.broadcast_to(self.A, y.shape[:-1] + self.A.shape)

    def affine_part(self):
        return self.A, self.b


class IdentityMap(AffineMap):
    def __init__(self, dim):
        super(IdentityMap, self).__init__(np.eye(dim))


class ProjectionMap(AffineMap):
    """Keep the coordinates listed in ``indices``."""

    def __init__(self, source_dim, indices):
        indices = list(indices)
        if not indices or any(not 0 <= i < source_dim for i in indices):
            raise ValueError("projection indices out of range")
        A = np.zeros((len(indices), source_dim))
        A[np.arange(len(indices)), indices] = 1
        super(ProjectionMap, self).__init__(A)
        self.indices = indices


class TrigPolyMap(ChartMap):
    """
    Map from a torus given by one TrigPoly per output coordinate.

    Parameters
    ----------
    components : list of TrigPoly
        Output coordinates.

    periodic : bool, optional (default False)
        Whether outputs are torus coordinates.
    """

    def __init__(self, components, periodic=False):
        components = list(components)
        if not components:
            raise ValueError("need at least one component")
        super(TrigPolyMap, self).__init__(
            components[0].dim, len(components), periodic=periodic
        )
        self.components = components
        self._values = TrigPolyStack(components)
        self._derivatives = TrigPolyStack(
            [c.derivative(j) for c in components for j in range(self.source_dim)]
        )

    def __call__(self, y):
        y = validate_input(y, self.source_dim, name="y")
        out = self._values(y)
        return reduce_mod1(out) if self.periodic else out

    def jacobian(self, y):
        y = validate_input(y, self.source_dim, name="y")
        return self._derivatives(y).reshape(
            y.shape[:-1] + (self.target_dim, self.source_dim)
        )


class ProductMap(ChartMap):
    """Block map ``(y_1, ..., y_r) -> (f_1(y_1), ..., f_r(y_r))``."""

    def __init__(self, maps):
        maps = list(maps)
        if not maps:
            raise ValueError("need at least one factor")
        periodic = {m.periodic for m in maps}
        if len(periodic) != 1:
            raise ValueError("cannot mix periodic and Euclidean factors")
        super(ProductMap, self).__init__(
            sum(m.source_dim for m in maps),
            sum(m.target_dim for m in maps),
            periodic=periodic.pop(),
        )
        self.maps = maps
        self._source_splits = np.cumsum([m.source_dim for m in maps])[:-1]

    def __call__(self, y):
        y = validate_input(y, self.source_dim, name="y")
        parts = np.split(y, self._source_splits, axis=-1)
        return np.concatenate([m(p) for m, p in zip(self.maps, parts)], axis=-1)

    def jacobian(self, y):
        y = validate_input(y, self.source_dim, name="y")
        parts = np.split(y, self._source_splits, axis=-1)
        out = np.zeros(y.shape[:-1] + (self.target_dim, self.source_dim))
        r = c = 0
        for m, p in zip(self.maps, parts):
            out[..., r : r + m.target_dim, c : c + m.source_dim] = m.jacobian(p)
            r += m.target_dim
            c += m.source_dim
        return out

    def affine_part(self):
        parts = [m.affine_part() for m in self.maps]
        if any(p is None for p in parts):
            return None
        return block_diag(*[A for A, _ in parts]), np.concatenate([b for _, b in parts])


class ComposedMap(ChartMap):
    """Composition ``outer o inner``."""

    def __init__(self, outer, inner):
        if inner.target_dim != outer.source_dim:
            raise ValueError(
                "cannot compose: inner target dimension {} != outer source "
                "dimension {}".format(inner.target_dim, outer.source_dim)
            )
        if not inner.periodic:
            raise ValueError("inner map must land in a torus")
        super(ComposedMap, self).__init__(
            inner.source_dim, outer.target_dim, periodic=outer.periodic
        )
        self.outer = outer
        self.inner = inner

    def __call__(self, y):
        return self.outer(self.inner(y))

    def jacobian(self, y):
        return self.outer.jacobian(self.inner(y)) @ self.inner.jacobian(y)

    def affine_part(self):
        outer, inner = self.outer.affine_part(), self.inner.affine_part()
        if outer is None or inner is None:
            return None
        (Ao, bo), (Ai, bi) = outer, inner
        return Ao @ Ai, Ao @ bi + bo
