"""
A Turing machine compiled into a piecewise affine map of the 4-torus.
"""
import csv
from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction
from typing import Optional

import numpy as np

from .encoding import check_base
from .encoding import encode_tape
from .encoding import find_rect
from .encoding import inverse_shift_map
from .encoding import rect_R
from .encoding import rect_S
from .encoding import shift_map
from .machine import Halted
from .machine import symbolic_run
from pywell.utils import fraction_to_str


class OutsidePieces(ValueError):
    """The point lies in no box ``B_q x R_t`` where the map is defined."""


class LayoutError(RuntimeError):
    """Boxes of a compiled machine overlap."""


def _overlap(a, b):
    return all(lo1 <= hi2 and lo2 <= hi1 for (lo1, hi1), (lo2, hi2) in zip(a, b))


def _contains(outer, inner):
    return all(
        lo1 <= lo2 and hi2 <= hi1 for (lo1, hi1), (lo2, hi2) in zip(outer, inner)
    )


def _inside(point, box):
    return all(lo <= x <= hi for x, (lo, hi) in zip(point, box))


def _box(corner, side):
    return tuple((c, c + side) for c in corner)


@dataclass(frozen=True)
class Piece:
    """Affine piece on ``B_q x R_t0`` for ``delta(q, t0) = (q', t0', eps)``."""

    state: str
    symbol: int
    target: str
    written: int
    eps: int
    image_corner: tuple


class CompiledDiffeo:
    """
    The map ``(z, w) -> (L_{q,t0}(z), phi^eps(w + (0, (t0' - t0)/b)))``.

    Layout (all coordinates rational):

    * ``B_q = [i/|Q|, i/|Q| + s] x [0, s]`` with ``s = 1/(2|Q|)`` for the
      i-th state;
    * ``B'_{q,t0}`` is the square of side ``c/2`` at offset
      ``(col c + c/4, t0 c + c/4)`` inside ``B_{q'}``, with
      ``c = s / max(|Q|, k+1)`` and ``col`` the index of ``q``;
    * ``L_{q,t0}`` is the homothety of ratio ``1 / (2 max(|Q|, k+1))``
      carrying ``B_q`` onto ``B'_{q,t0}``.

    The map is evaluated only on the pieces; points elsewhere raise
    OutsidePieces.

    Parameters
    ----------
    machine : TuringMachine

    b : int, optional
        Base of the tape encoding, default ``10 k``.
    """

    def __init__(self, machine, b=None):
        self.machine = machine
        self.k = machine.k
        self.b = 10 * machine.k if b is None else b
        check_base(self.b, self.k)
        n_states = len(machine.states)
        self.side = Fraction(1, 2 * n_states)
        grid = max(n_states, self.k + 1)
        self.cell = self.side / grid
        self.ratio = Fraction(1, 2 * grid)
        self.corners = {
            q: (Fraction(i, n_states), Fraction(0))
            for i, q in enumerate(machine.states)
        }
        self.pieces = {}
        for q in machine.working_states:
            for t0 in range(self.k + 1):
                q2, t2, eps = machine.delta[(q, t0)]
                x, y = self.corners[q2]
                col = machine.index(q)
                corner = (
                    x + col * self.cell + self.cell / 4,
                    y + t0 * self.cell + self.cell / 4,
                )
                self.pieces[(q, t0)] = Piece(q, t0, q2, t2, eps, corner)
        self.check_invariants()

    @property
    def n_pieces(self):
        return len(self.pieces)

    def square(self, q):
        return _box(self.corners[q], self.side)

    def sub_square(self, q, t0):
        return _box(self.pieces[(q, t0)].image_corner, self.side * self.ratio)

    def center(self, q):
        x, y = self.corners[q]
        return (x + self.side / 2, y + self.side / 2)

    def rect_R(self, j):
        return rect_R(j, self.b, self.k)

    def rect_S(self, j):
        return rect_S(j, self.b, self.k)

    def check_invariants(self):
        """Exact disjointness and containment checks of the layout."""
        states = self.machine.states
        for i, q in enumerate(states):
            for q2 in states[i + 1 :]:
                if _overlap(self.square(q), self.square(q2)):
                    raise LayoutError("B_{} and B_{} overlap".format(q, q2))
        for rect in (self.rect_R, self.rect_S):
            for j in range(self.k + 1):
                for j2 in range(j + 1, self.k + 1):
                    if _overlap(rect(j), rect(j2)):
                        raise LayoutError("rectangles {} and {} overlap".format(j, j2))
        keys = list(self.pieces)
        for i, key in enumerate(keys):
            piece = self.pieces[key]
            if not _contains(self.square(piece.target), self.sub_square(*key)):
                raise LayoutError("B'{} leaves B_{}".format(key, piece.target))
            for key2 in keys[i + 1 :]:
                if _overlap(self.sub_square(*key), self.sub_square(*key2)):
                    raise LayoutError("B'{} and B'{} overlap".format(key, key2))

    def locate(self, z):
        """State whose square contains ``z``, else None."""
        for q in self.machine.states:
            if _inside(z, self.square(q)):
                return q
        return None

    def piece_at(self, z, w):
        q = self.locate(z)
        if q is None:
            raise OutsidePieces("z = {} is in no state square".format(_show(z)))
        if q == self.machine.halt:
            raise Halted("z = {} is in B_HALT".format(_show(z)))
        t0 = find_rect(w, self.b, self.k, "R")
        if t0 is None:
            raise OutsidePieces("w = {} is in no rectangle R_j".format(_show(w)))
        return self.pieces[(q, t0)]

    def start_point(self, tape):
        """``y_s = (center of B_START, f(s))``."""
        return self.center(self.machine.start), tuple(
            encode_tape(tape, self.b, self.k)
        )

    def __repr__(self):
        return "CompiledDiffeo(machine={!r}, b={})".format(self.machine.name, self.b)


def compile_machine(tm, b=None):
    """Compile ``tm`` into a CompiledDiffeo; the layout is checked exactly."""
    return CompiledDiffeo(tm, b)


def _show(point):
    return "(" + ", ".join(fraction_to_str(x) for x in point) + ")"


def _apply(diffeo, piece, z, w, number=Fraction):
    """The affine piece in the given number type."""
    x, y = diffeo.corners[piece.state]
    cx, cy = piece.image_corner
    r = number(diffeo.ratio)
    z2 = (
        number(cx) + r * (z[0] - number(x)),
        number(cy) + r * (z[1] - number(y)),
    )
    written = (w[0], w[1] + number(Fraction(piece.written - piece.symbol, diffeo.b)))
    if piece.eps == 0:
        return z2, written
    if number is Fraction:
        f = shift_map if piece.eps == 1 else inverse_shift_map
        return z2, tuple(f(written, diffeo.b, diffeo.k))
    b = diffeo.b
    if piece.eps == 1:
        j = piece.written
        return z2, (j / b + written[0] / b, b * written[1] - j)
    # leading digit of u; the S_j sit well inside [j/b, (j+1)/b)
    j = int(np.floor(b * written[0] + 1e-9))
    return z2, (b * written[0] - j, j / b + written[1] / b)


def step_point(diffeo, z, w):
    """
    Exact image of ``(z, w)`` under the compiled map.

    Raises
    ------
    Halted
        ``z`` lies in the HALT square.

    OutsidePieces
        ``(z, w)`` lies in no piece, or ``phi^-1`` is needed outside the
        ``S_j``.
    """
    z = tuple(Fraction(c) % 1 for c in z)
    w = tuple(Fraction(c) % 1 for c in w)
    piece = diffeo.piece_at(z, w)
    try:
        return _apply(diffeo, piece, z, w)
    except ValueError as e:
        raise OutsidePieces(str(e))


def _interval_distance(x, lo, hi):
    """Torus distance from ``x`` to ``[lo, hi]``."""
    if lo <= x <= hi:
        return Fraction(0)
    return min((lo - x) % 1, (x - hi) % 1)


@dataclass(frozen=True)
class HaltingSet:
    """
    ``U = V x W``: open boxes ``{dist(x, box) < margin}`` per coordinate.

    ``V`` surrounds ``B_HALT``; ``W`` surrounds the cylinder of tapes with
    the requested window (all of the torus when no window is given).
    """

    boxes: tuple
    margins: tuple
    window: Optional[tuple] = None

    def _gaps(self, point):
        return [
            _interval_distance(x, lo, hi) - g
            for x, (lo, hi), g in zip(point, self.boxes, self.margins)
        ]

    def contains(self, z, w):
        return all(gap < 0 for gap in self._gaps(tuple(z) + tuple(w)))

    def distance(self, z, w):
        """Exact L-infinity distance to ``U``."""
        return max(max(gap, Fraction(0)) for gap in self._gaps(tuple(z) + tuple(w)))


def halting_set(diffeo, window=None):
    """
    The open set entered exactly when the machine halts with ``window``.

    Parameters
    ----------
    diffeo : CompiledDiffeo

    window : sequence of int, optional
        Output cells ``(t_{-n}, ..., t_n)``; odd length.
    """
    b, k = diffeo.b, diffeo.k
    V = diffeo.square(diffeo.machine.halt)
    pad = diffeo.side / 4
    if window is None:
        whole = (Fraction(0), Fraction(1))
        return HaltingSet(V + (whole, whole), (pad, pad, Fraction(1), Fraction(1)))
    window = tuple(int(t) for t in window)
    if len(window) % 2 != 1:
        raise ValueError("window must have odd length 2n + 1")
    if any(not 0 <= t <= k for t in window):
        raise ValueError("window symbols must lie in 0..{}".format(k))
    n = len(window) // 2
    right = window[n + 1 :]
    left = window[: n + 1][::-1]
    spread = Fraction(k, b - 1)
    boxes, margins = [], []
    for digits in (right, left):
        lo = sum((Fraction(d, b ** (i + 1)) for i, d in enumerate(digits)), Fraction(0))
        level = Fraction(1, b ** len(digits))
        boxes.append((lo, lo + spread * level))
        margins.append((1 - spread) * level / 2)
    return HaltingSet(V + tuple(boxes), (pad, pad) + tuple(margins), window)


@dataclass(frozen=True, eq=False)
class OrbitResult:
    """Outcome of :func:`run_orbit`; ``log`` holds one row per visited point."""

    entered_U: bool
    step_index: Optional[int]
    verdict: str
    min_distance: Fraction
    log: list = field(default_factory=list)

    def to_csv(self, path):
        """Orbit log with exact coordinates written as "p/q" strings."""
        names = ["step", "state", "z1", "z2", "w1", "w2", "distance", "float_error"]
        with open(path, "w", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=names)
            writer.writeheader()
            for row in self.log:
                writer.writerow(row)


def run_orbit(diffeo, tape, max_steps=1000, window=None):
    """
    Iterate the compiled map from ``y_s`` until it enters ``U``.

    A float copy of the orbit is stepped with the same pieces and its drift
    from the exact orbit is logged. The outcome is compared with the
    symbolic run: entering ``U`` at step ``m`` must coincide with halting at
    step ``m`` with the requested window.

    Returns
    -------
    result : OrbitResult
        ``verdict`` is ``"entered"``, ``"halted-outside"`` (HALT reached
        with another window; the map stops there) or
        ``"budget-exhausted"``.
    """
    U = halting_set(diffeo, window)
    z, w = diffeo.start_point(tape)
    zf, wf = tuple(float(c) for c in z), tuple(float(c) for c in w)
    log = []
    verdict, step_index = "budget-exhausted", None
    min_distance = None
    for step in range(max_steps + 1):
        dist = U.distance(z, w)
        min_distance = dist if min_distance is None else min(min_distance, dist)
        error = max(abs(float(a) - b) for a, b in zip(z + w, zf + wf))
        state = diffeo.locate(z)
        log.append(
            {
                "step": step,
                "state": state,
                "z1": fraction_to_str(z[0]),
                "z2": fraction_to_str(z[1]),
                "w1": fraction_to_str(w[0]),
                "w2": fraction_to_str(w[1]),
                "distance": fraction_to_str(dist),
                "float_error": float(error),
            }
        )
        if U.contains(z, w):
            verdict, step_index = "entered", step
            break
        if state == diffeo.machine.halt:
            verdict, step_index = "halted-outside", step
            break
        if step == max_steps:
            break
        piece = diffeo.piece_at(z, w)
        z, w = step_point(diffeo, z, w)
        zf, wf = _apply(diffeo, piece, zf, wf, number=float)

    symbolic = symbolic_run(diffeo.machine, tape, max_steps)
    if verdict == "budget-exhausted":
        agrees = not symbolic.halted
    else:
        same_window = window is None or (
            symbolic.output_window(len(window) // 2) == U.window
        )
        agrees = (
            symbolic.halted
            and symbolic.steps == step_index
            and same_window == (verdict == "entered")
        )
    if not agrees:
        raise RuntimeError(
            "orbit and symbolic run disagree on machine {!r}".format(
                diffeo.machine.name
            )
        )
    return OrbitResult(
        entered_U=verdict == "entered",
        step_index=step_index,
        verdict=verdict,
        min_distance=min_distance,
        log=log,
    )


def orbit_distances(result):
    return np.array([float(Fraction(row["distance"])) for row in result.log])
