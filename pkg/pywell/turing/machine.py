"""
Turing machines that shift the tape instead of moving a head.
"""
from dataclasses import dataclass
from typing import Optional

from pywell.utils import load_spec
from pywell.utils import require
from pywell.utils import SpecError


class Halted(Exception):
    """A step was requested from the HALT state or the HALT region."""


@dataclass(frozen=True)
class BudgetExhausted:
    """
    Verdict of a run that did not halt within ``max_steps``.

    This is not a proof of non-halting.
    """

    max_steps: int

    def __str__(self):
        return "no halt within {} steps".format(self.max_steps)


@dataclass(frozen=True)
class Tape:
    """
    Eventually constant two-sided tape.

    ``cells[i]`` holds position ``offset + i``; every position left of the
    window holds ``left`` and every position right of it holds ``right``.
    Position 0 is the cell under the head. Tapes are kept normalized (no
    window cell equal to the fill on its side at the window edge), so
    equal tapes compare equal. An empty window with ``left != right`` keeps
    ``offset`` as the first position holding ``right``.
    """

    cells: tuple = ()
    offset: int = 0
    left: int = 0
    right: int = 0

    def __post_init__(self):
        cells = tuple(int(c) for c in self.cells)
        offset = int(self.offset)
        while cells and cells[-1] == self.right:
            cells = cells[:-1]
        while cells and cells[0] == self.left:
            cells = cells[1:]
            offset += 1
        if not cells and self.left == self.right:
            offset = 0
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "left", int(self.left))
        object.__setattr__(self, "right", int(self.right))

    @classmethod
    def from_list(cls, cells, origin=0, left=0, right=0):
        """Tape with ``cells[origin]`` under the head."""
        return cls(tuple(cells), -origin, left, right)

    @property
    def lo(self):
        return self.offset

    @property
    def hi(self):
        return self.offset + len(self.cells) - 1

    @property
    def symbols(self):
        return set(self.cells) | {self.left, self.right}

    def __getitem__(self, n):
        if n < self.offset:
            return self.left
        if n >= self.offset + len(self.cells):
            return self.right
        return self.cells[n - self.offset]

    def window(self, n):
        """``(t_{-n}, ..., t_n)``."""
        return tuple(self[i] for i in range(-n, n + 1))

    def write(self, n, symbol):
        # an empty window still marks the left/right fill boundary at offset
        lo = min(self.lo, n)
        hi = max(self.hi, n)
        cells = [symbol if i == n else self[i] for i in range(lo, hi + 1)]
        return Tape(tuple(cells), lo, self.left, self.right)

    def shift(self, eps):
        """The tape ``(t_{n - eps})``: ``eps = +1`` brings cell -1 under the head."""
        return Tape(self.cells, self.offset + eps, self.left, self.right)

    def __str__(self):
        lo, hi = min(self.lo, 0), max(self.hi, 0)
        body = " ".join(
            ("[{}]" if i == 0 else "{}").format(self[i]) for i in range(lo, hi + 1)
        )
        return "...{} {} {}...".format(self.left, body, self.right)


class TuringMachine:
    """
    Transition table ``delta: (Q - {HALT}) x {0..k} -> Q x {0..k} x {-1, 0, 1}``.

    Parameters
    ----------
    states : list of str

    start, halt : str
        Members of ``states``.

    k : int
        Largest symbol; the alphabet is ``0..k``.

    delta : dict
        ``(q, t) -> (q', t', eps)``, total on non-halting states.

    name : str, optional

    Examples
    --------
    >>> from pywell.turing import writer, symbolic_run, Tape
    >>> symbolic_run(writer(), Tape()).steps
    1
    """

    def __init__(self, states, start, halt, k, delta, name=None):
        states = [str(q) for q in states]
        if len(set(states)) != len(states):
            raise ValueError("state names must be distinct")
        if start not in states or halt not in states:
            raise ValueError("START and HALT must be states")
        if not isinstance(k, int) or k < 1:
            raise ValueError("k must be an integer >= 1")
        table = {}
        for (q, t), (q2, t2, eps) in delta.items():
            if q not in states or q == halt:
                raise ValueError("transition from invalid state {!r}".format(q))
            if q2 not in states:
                raise ValueError("transition to unknown state {!r}".format(q2))
            if not (0 <= t <= k and 0 <= t2 <= k):
                raise ValueError("symbol out of range 0..{}".format(k))
            if eps not in (-1, 0, 1):
                raise ValueError("shift must be -1, 0 or +1, got {}".format(eps))
            table[(q, int(t))] = (q2, int(t2), int(eps))
        missing = [
            (q, t)
            for q in states
            if q != halt
            for t in range(k + 1)
            if (q, t) not in table
        ]
        if missing:
            raise ValueError("delta is not total; missing {}".format(missing[:5]))
        self.states = states
        self.start = start
        self.halt = halt
        self.k = k
        self.delta = table
        self.name = name

    @property
    def working_states(self):
        return [q for q in self.states if q != self.halt]

    def index(self, q):
        return self.states.index(q)

    def to_spec(self):
        return {
            "name": self.name,
            "states": list(self.states),
            "start": self.start,
            "halt": self.halt,
            "k": self.k,
            "delta": [
                [q, t, q2, t2, eps]
                for (q, t), (q2, t2, eps) in sorted(self.delta.items())
            ],
        }

    @classmethod
    def from_spec(cls, source):
        """Machine from a dict or a JSON file ``{states, start, halt, k, delta}``."""
        spec = load_spec(source)
        states = require(spec, "states", list)
        delta = {}
        for i, row in enumerate(require(spec, "delta", list)):
            if not isinstance(row, list) or len(row) != 5:
                raise SpecError(
                    "field 'delta' entry {}: need [q, t, q', t', eps]".format(i)
                )
            q, t, q2, t2, eps = row
            if (q, t) in delta:
                raise SpecError(
                    "field 'delta' entry {}: duplicate ({}, {})".format(i, q, t)
                )
            delta[(q, t)] = (q2, t2, eps)
        try:
            return cls(
                states,
                require(spec, "start", str),
                require(spec, "halt", str),
                require(spec, "k", int),
                delta,
                name=spec.get("name"),
            )
        except ValueError as e:
            raise SpecError("machine: {}".format(e))

    def __repr__(self):
        return "TuringMachine(name={!r}, states={}, k={})".format(
            self.name, len(self.states), self.k
        )


@dataclass(frozen=True)
class RunResult:
    halted: bool
    steps: int
    state: str
    tape: Tape
    exhausted: Optional[BudgetExhausted] = None

    @property
    def verdict(self):
        return "halted" if self.halted else "budget-exhausted"

    def output_window(self, n):
        return self.tape.window(n)


def _check_tape(tm, tape):
    bad = [s for s in tape.symbols if not 0 <= s <= tm.k]
    if bad:
        raise ValueError("tape symbols {} outside 0..{}".format(sorted(bad), tm.k))


def symbolic_step(tm, q, tape):
    """One pass of the loop: look up delta, write, shift."""
    if q == tm.halt:
        raise Halted("machine {!r} is in HALT".format(tm.name))
    q2, t2, eps = tm.delta[(q, tape[0])]
    return q2, tape.write(0, t2).shift(eps)


def symbolic_run(tm, tape, max_steps=1000):
    """
    Run from START until HALT or ``max_steps`` steps.

    Returns
    -------
    result : RunResult
        ``exhausted`` carries a BudgetExhausted verdict when the budget ran
        out.
    """
    _check_tape(tm, tape)
    q = tm.start
    for step in range(max_steps + 1):
        if q == tm.halt:
            return RunResult(True, step, q, tape)
        if step == max_steps:
            break
        q, tape = symbolic_step(tm, q, tape)
    return RunResult(False, max_steps, q, tape, BudgetExhausted(max_steps))


def symbolic_trace(tm, tape, max_steps=1000):
    """Configurations ``(q, tape)`` from START up to HALT or the budget."""
    _check_tape(tm, tape)
    q = tm.start
    trace = [(q, tape)]
    while q != tm.halt and len(trace) <= max_steps:
        q, tape = symbolic_step(tm, q, tape)
        trace.append((q, tape))
    return trace
