from fractions import Fraction

from .base import BaseOptimizer


class RationalSimplex(BaseOptimizer):
    """
    Exact primal simplex method over the rationals with Bland's rule.

    Solves ``max c^T x  s.t.  A x <= b, x >= 0`` for ``b >= 0``, starting
    from the all-slack basis. All arithmetic is done with
    ``fractions.Fraction`` so the optimal primal and dual solutions are
    exact.

    Parameters
    ----------
    max_iter : int, optional (default 100000)
        Pivot budget. Bland's rule cannot cycle, so running out of budget
        means the problem is too large, not that the method stalled.

    Attributes
    ----------
    coef_ : list of Fraction
        Optimal primal solution x.

    dual_ : list of Fraction
        Optimal dual solution y >= 0 with A^T y >= c and b^T y = c^T x.

    objective_ : Fraction
        Optimal objective value.

    status_ : str
        "optimal" or "unbounded".

    Examples
    --------
    >>> from pywell.optimizers import RationalSimplex
    >>> opt = RationalSimplex().fit([[1, 1], [1, 3]], [4, 6], [1, 2])
    >>> opt.objective_, opt.coef_
    (Fraction(5, 1), [Fraction(3, 1), Fraction(1, 1)])
    """

    def __init__(self, max_iter=100000):
        super(RationalSimplex, self).__init__(max_iter=max_iter)

    def _reduce(self, A, b, c):
        A = [[Fraction(v) for v in row] for row in A]
        b = [Fraction(v) for v in b]
        c = [Fraction(v) for v in c]
        m, n = len(A), len(c)
        if len(b) != m or any(len(row) != n for row in A):
            raise ValueError("inconsistent LP dimensions")
        if any(v < 0 for v in b):
            raise ValueError("b must be nonnegative for the slack starting basis")

        # dictionary form: x_B = b - A x_N, z = objective + c x_N
        self._A, self._b, self._c = A, b, c
        self._m, self._n = m, n
        self._nb_vars = list(range(n))
        self._b_vars = list(range(n, n + m))
        self.objective_ = Fraction(0)

        self.status_ = None
        while self.status_ is None:
            if self.n_iter_ >= self.max_iter:
                raise RuntimeError(
                    "pivot budget of {} exhausted; Bland's rule does not cycle, "
                    "so the problem is too large for this budget".format(self.max_iter)
                )
            self.status_ = self._bland_step()
            self.history_.append(self.objective_)

        x = [Fraction(0)] * (n + m)
        for i, v in enumerate(self._b_vars):
            x[v] = self._b[i]
        self.coef_ = x[:n]
        y = [Fraction(0)] * (n + m)
        for j, v in enumerate(self._nb_vars):
            y[v] = -self._c[j]
        self.dual_ = y[n:]
        del self._A, self._b, self._c

    def _bland_step(self):
        candidates = [
            (self._nb_vars[j], j) for j in range(self._n) if self._c[j] > 0
        ]
        if not candidates:
            return "optimal"
        _, j = min(candidates)
        rows = [
            (self._b[i] / self._A[i][j], self._b_vars[i], i)
            for i in range(self._m)
            if self._A[i][j] > 0
        ]
        if not rows:
            return "unbounded"
        _, _, i = min(rows)
        self._pivot(i, j)
        self.n_iter_ += 1
        return None

    def _pivot(self, i, j):
        A, b, c = self._A, self._b, self._c
        piv = A[i][j]
        row = A[i]
        delta = c[j] / piv
        self.objective_ += delta * b[i]
        for l in range(self._n):
            if row[l]:
                c[l] -= delta * row[l]
        c[j] = -delta
        inv = 1 / piv
        for l in range(self._n):
            row[l] = inv if l == j else row[l] * inv
        b[i] *= inv
        nonzero = [l for l in range(self._n) if row[l]]
        for k in range(self._m):
            if k == i:
                continue
            f = A[k][j]
            if not f:
                continue
            other = A[k]
            for l in nonzero:
                other[l] -= f * row[l]
            other[j] = -f * inv
            b[k] -= f * b[i]
        self._nb_vars[j], self._b_vars[i] = self._b_vars[i], self._nb_vars[j]


def verify_optimality(A, b, c, x, y):
    """Check primal/dual feasibility and equal objectives in exact arithmetic."""
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    c = [Fraction(v) for v in c]
    if any(v < 0 for v in x) or any(v < 0 for v in y):
        return False
    for row, bi in zip(A, b):
        if sum(a * xi for a, xi in zip(row, x)) > bi:
            return False
    for j, cj in enumerate(c):
        if sum(A[i][j] * y[i] for i in range(len(A))) < cj:
            return False
    primal = sum(ci * xi for ci, xi in zip(c, x))
    dual = sum(bi * yi for bi, yi in zip(b, y))
    return primal == dual
