"""
Base-b Cantor encoding of tapes into the 2-torus and the shift map.
"""
from dataclasses import dataclass
from fractions import Fraction

from .machine import Tape


@dataclass(frozen=True)
class TapePoint:
    """Exact point ``(u, v)`` of [0, 1)^2."""

    u: Fraction
    v: Fraction

    def __iter__(self):
        return iter((self.u, self.v))

    def as_floats(self):
        return float(self.u), float(self.v)


def check_base(b, k):
    """Digits ``0..k`` in base ``b`` need ``k < b - 1`` to keep the pieces apart."""
    if not isinstance(b, int) or b < k + 2:
        raise ValueError("base b={} must be an integer >= k + 2 = {}".format(b, k + 2))


def _expansion(digits, fill, b):
    """``sum_i digits[i] b^-(i+1)`` followed by ``fill`` forever."""
    value = Fraction(0)
    scale = Fraction(1)
    for d in digits:
        scale /= b
        value += d * scale
    return value + Fraction(fill, b - 1) * scale


def encode_tape(tape, b, k=None):
    """
    ``f(t) = (sum_{n>=1} t_n b^-n, sum_{n>=1} t_{1-n} b^-n)``.

    The eventually constant tails are summed as geometric series, so the
    result is exact.

    Parameters
    ----------
    tape : Tape

    b : int
        Base, at least ``k + 2``.

    k : int, optional
        Largest symbol of the alphabet; defaults to the largest symbol on
        the tape (at least 1).

    Examples
    --------
    >>> from pywell.turing import encode_tape, Tape
    >>> encode_tape(Tape.from_list([0, 1]), 10)
    TapePoint(u=Fraction(1, 10), v=Fraction(0, 1))
    """
    top = max(tape.symbols)
    k = max(top, 1) if k is None else k
    check_base(b, k)
    if min(tape.symbols) < 0 or top > k:
        raise ValueError("tape symbols must lie in 0..{}".format(k))
    right = [tape[n] for n in range(1, max(tape.hi, 0) + 1)]
    left = [tape[1 - n] for n in range(1, max(1 - tape.lo, 0) + 1)]
    return TapePoint(_expansion(right, tape.right, b), _expansion(left, tape.left, b))


def _digits(x, b, n):
    x = Fraction(x)
    out = []
    for _ in range(n):
        x *= b
        d = x.numerator // x.denominator
        out.append(int(d))
        x -= d
    return out


def decode_window(point, b, n):
    """
    Read ``(t_{-n}, ..., t_n)`` off an encoded point.

    Digits of ``u`` are ``t_1, t_2, ...`` and digits of ``v`` are
    ``t_0, t_{-1}, ...``; with symbols below ``b - 1`` the expansions are
    unique.
    """
    u, v = point
    right = _digits(u, b, n)
    left = _digits(v, b, n + 1)
    return tuple(reversed(left)) + tuple(right)


def rect_R(j, b, k):
    """``R_j = [0, k/(b-1)] x [j/b, j/b + k/(b(b-1))]`` as ``((u0, u1), (v0, v1))``."""
    w = Fraction(k, b - 1)
    return (Fraction(0), w), (Fraction(j, b), Fraction(j, b) + w / b)


def rect_S(j, b, k):
    """``S_j``, the mirror of ``R_j``."""
    (u0, u1), (v0, v1) = rect_R(j, b, k)
    return (v0, v1), (u0, u1)


def _inside(point, rect):
    (u0, u1), (v0, v1) = rect
    u, v = point
    return u0 <= u <= u1 and v0 <= v <= v1


def find_rect(point, b, k, kind="R"):
    """Index ``j`` of the ``R_j`` (or ``S_j``) containing ``point``, else None."""
    rect = rect_R if kind == "R" else rect_S
    for j in range(k + 1):
        if _inside(point, rect(j, b, k)):
            return j
    return None


def shift_map(point, b, k):
    """``phi(u, j/b + beta/b) = (j/b + u/b, beta)`` on ``R_j``."""
    j = find_rect(point, b, k, "R")
    if j is None:
        raise ValueError("{} lies outside every R_j".format(tuple(point)))
    u, v = point
    return TapePoint(Fraction(j, b) + Fraction(u) / b, b * Fraction(v) - j)


def inverse_shift_map(point, b, k):
    """``phi^-1(j/b + alpha/b, beta) = (alpha, j/b + beta/b)`` on ``S_j``."""
    j = find_rect(point, b, k, "S")
    if j is None:
        raise ValueError("{} lies outside every S_j".format(tuple(point)))
    u, v = point
    return TapePoint(b * Fraction(u) - j, Fraction(j, b) + Fraction(v) / b)


def shift_check(tape, b, k=None):
    """Whether ``f((t_{n-1})) = phi(f(t))`` holds exactly."""
    k = max(max(tape.symbols), 1) if k is None else k
    point = encode_tape(tape, b, k)
    if find_rect(point, b, k, "R") != tape[0]:
        raise AssertionError("encoded point is not in R_{}".format(tape[0]))
    return shift_map(point, b, k) == encode_tape(tape.shift(1), b, k)


def random_tape(rng, k, width=6):
    """Eventually constant tape with a random window of ``2 width + 1`` cells."""
    cells = rng.randint(0, k + 1, size=2 * width + 1)
    left, right = rng.randint(0, k + 1, size=2)
    return Tape.from_list(cells.tolist(), origin=width, left=left, right=right)
