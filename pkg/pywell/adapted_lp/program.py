"""
Linear program for strongly adapted 1-forms of bounded Fourier degree.
"""
import math
from fractions import Fraction

import numpy as np
import sympy

from pywell.feature_library import frequency_box
from pywell.feature_library import torus_grid
from pywell.feature_library import TrigPoly
from pywell.feature_library import TWO_PI
from pywell.forms import lie_derivative
from pywell.forms import OneForm
from pywell.utils import decimal_fraction

# grid values are stored as integers over this denominator
DENOMINATOR_BITS = 30


class AdaptedLP:
    """
    Exact-rational description of the adapted-form cone at degree ``K``.

    The unknowns are the coefficients of ``theta = sum_i theta_i dy_i`` with
    every ``theta_i`` a trig polynomial of degree at most ``K``. Two row
    families constrain them:

    * equality rows ``E x = 0``: ``L_Y theta`` is closed and has zero
      periods, i.e. it is exact. The Lie derivative is computed with the
      2 pi factor dropped, so every entry is an exact rational.
    * grid rows ``G x``: the values ``theta(Y)(g)`` at the grid points
      ``g in {j / grid_res}^n``. Trig values at grid points are irrational;
      they are stored as integers over ``2**30`` and every entry is within
      ``rounding_radius`` of the true value.

    Use :func:`build_lp` to construct instances and :func:`solve` to decide
    them.

    Attributes
    ----------
    basis : list of (int, tuple, str)
        Component index, canonical frequency and "cos"/"sin" of every
        unknown.

    equalities : list of list of Fraction
        Nonzero rows of ``E``.

    grid : np.ndarray, shape (grid_res**n, n)

    grid_numerators : np.ndarray of int64, shape (grid_res**n, n_free)
        ``G`` times ``denominator``, rounded to the nearest integer.
    """

    def __init__(self, flow, degree, eps, grid_res, basis, equalities, grid, numer):
        self.flow = flow
        self.degree = degree
        self.eps = eps
        self.grid_res = grid_res
        self.basis = basis
        self.equalities = equalities
        self.grid = grid
        self.grid_numerators = numer
        self.denominator = 2 ** DENOMINATOR_BITS
        self.rounding_radius = Fraction(1, self.denominator)

    @property
    def dim(self):
        return self.flow.dim

    @property
    def n_variables(self):
        """Cos and sin slots of all n components over the full frequency box."""
        return 2 * self.dim * (2 * self.degree + 1) ** self.dim

    @property
    def n_free(self):
        """Independent unknowns: the box modulo ``k ~ -k``."""
        return len(self.basis)

    @property
    def n_equalities(self):
        return len(self.equalities)

    @property
    def n_inequalities(self):
        return 2 * len(self.grid)

    def grid_row(self, r):
        """Exact rational row ``r`` of ``G``."""
        return [Fraction(int(v), self.denominator) for v in self.grid_numerators[r]]

    def grid_values(self, x):
        """Exact ``G x`` for rational coefficients ``x``."""
        x = [Fraction(v) for v in x]
        common = 1
        for v in x:
            common = common * v.denominator // math.gcd(common, v.denominator)
        ints = np.array([int(v * common) for v in x], dtype=object)
        total = self.grid_numerators.astype(object) @ ints
        scale = self.denominator * common
        return [Fraction(int(v), scale) for v in total]

    def form(self, x, name=None):
        """The 1-form with coefficient vector ``x`` in ``basis`` order."""
        n = self.dim
        terms = [{} for _ in range(n)]
        for (i, k, kind), v in zip(self.basis, x):
            if not v:
                continue
            a, b = terms[i].get(k, (0, 0))
            terms[i][k] = (a + v, b) if kind == "cos" else (a, b + v)
        return OneForm([TrigPoly(n, t) for t in terms], name=name)

    def nullspace(self):
        """Integer basis of ``ker E`` as a list of columns (list of int)."""
        if not self.equalities:
            return [
                [int(i == j) for i in range(self.n_free)] for j in range(self.n_free)
            ]
        E = sympy.Matrix(
            [
                [sympy.Rational(v.numerator, v.denominator) for v in row]
                for row in self.equalities
            ]
        )
        columns = []
        for vec in E.nullspace():
            denoms = [sympy.fraction(v)[1] for v in vec]
            vec = vec * sympy.ilcm(*denoms) if denoms else vec
            columns.append([int(v) for v in vec])
        return columns

    def __repr__(self):
        return "AdaptedLP(flow={!r}, degree={}, eps={}, grid_res={})".format(
            self.flow.name, self.degree, self.eps, self.grid_res
        )


def _basis(n, K):
    basis = []
    for i in range(n):
        for k in frequency_box(n, K, canonical=True):
            basis.append((i, k, "cos"))
            if any(k):
                basis.append((i, k, "sin"))
    return basis


def _basis_form(n, i, k, kind):
    comps = [TrigPoly.zero(n) for _ in range(n)]
    one = Fraction(1)
    comps[i] = TrigPoly.cos(k, one) if kind == "cos" else TrigPoly.sin(k, one)
    return OneForm(comps)


def _exactness_rows(flow, basis):
    n = flow.dim
    columns = []
    keys = set()
    for i, k, kind in basis:
        omega = lie_derivative(flow, _basis_form(n, i, k, kind), scale=1)
        col = {}
        for pair, curl in omega.exterior_derivative(scale=1).items():
            for freq, (a, b) in curl.items():
                col[(pair, freq, "cos")] = a
                col[(pair, freq, "sin")] = b
        for j, period in enumerate(omega.periods()):
            col[("period", j)] = period
        keys.update(key for key, v in col.items() if v)
        columns.append(col)
    rows = []
    for key in sorted(keys, key=repr):
        row = [Fraction(col.get(key, 0)) for col in columns]
        if any(row):
            rows.append(row)
    return rows


def _grid_numerators(flow, basis, grid):
    Y = flow.eval_field(grid)
    freqs = np.array([k for _, k, _ in basis], dtype=float)
    phases = TWO_PI * (grid @ freqs.T)
    is_sin = np.array([kind == "sin" for _, _, kind in basis])
    waves = np.where(is_sin, np.sin(phases), np.cos(phases))
    comp = np.array([i for i, _, _ in basis])
    values = waves * Y[:, comp]
    return np.rint(values * 2 ** DENOMINATOR_BITS).astype(np.int64)


def build_lp(flow, K, eps, grid_res=64):
    """
    Assemble the adapted-form LP of ``flow`` at Fourier degree ``K``.

    Parameters
    ----------
    flow : TorusFlow
        A certified nonsingular flow; float coefficients are read exactly
        from their decimal form.

    K : int
        Largest sup-norm of the frequencies of theta, at least 0.

    eps : float or Fraction
        Required positivity margin, positive.

    grid_res : int, optional (default 64)
        Grid points per dimension.

    Returns
    -------
    lp : AdaptedLP

    Examples
    --------
    >>> from pywell.flows import TorusFlow
    >>> from pywell.adapted_lp import build_lp
    >>> build_lp(TorusFlow.rotation([1, 1]), 1, 1e-3, grid_res=8).n_variables
    36
    """
    if not isinstance(K, (int, np.integer)) or K < 0:
        raise ValueError("K must be a nonnegative integer, got {}".format(K))
    if not isinstance(grid_res, (int, np.integer)) or grid_res < 1:
        raise ValueError("grid_res must be a positive integer")
    eps = decimal_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not flow.nonsingular:
        raise ValueError("flow {!r} is not certified nonsingular".format(flow.name))
    exact_flow = flow.as_fractions()
    basis = _basis(flow.dim, int(K))
    grid = torus_grid(flow.dim, grid_res)
    return AdaptedLP(
        exact_flow,
        int(K),
        eps,
        int(grid_res),
        basis,
        _exactness_rows(exact_flow, basis),
        grid,
        _grid_numerators(exact_flow, basis, grid),
    )
