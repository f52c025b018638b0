"""
Small machines used as a test corpus.

Moves are written as tape shifts: ``R = -1`` brings the cell to the right
under the head, ``L = +1`` the cell to the left.
"""
from .machine import TuringMachine

R, STAY, L = -1, 0, 1


def _complete(states, halt, k, delta):
    """Send every missing working entry to HALT without change."""
    for q in states:
        if q == halt:
            continue
        for t in range(k + 1):
            delta.setdefault((q, t), (halt, t, STAY))
    return delta


def writer():
    """Writes 1 under the head and halts."""
    delta = {("START", 0): ("HALT", 1, STAY), ("START", 1): ("HALT", 1, STAY)}
    return TuringMachine(["START", "HALT"], "START", "HALT", 1, delta, name="writer")


def incrementer():
    """
    Unary increment: on ``1^n`` at cells ``0..n-1`` appends a 1 and returns
    to cell 0.
    """
    delta = {
        ("START", 1): ("START", 1, R),
        ("START", 0): ("BACK", 1, L),
        ("BACK", 1): ("BACK", 1, L),
        ("BACK", 0): ("HALT", 0, R),
    }
    return TuringMachine(
        ["START", "BACK", "HALT"], "START", "HALT", 1, delta, name="incrementer"
    )


def self_loop():
    """Shifts the tape forever."""
    delta = {("START", 0): ("START", 0, L), ("START", 1): ("START", 1, L)}
    return TuringMachine(["START", "HALT"], "START", "HALT", 1, delta, name="self_loop")


def copier():
    """
    Unary copy over symbols ``{0, 1, 2}`` (2 marks a copied source cell):
    ``1^n`` at cells ``0..n-1`` becomes ``1^n 0 1^n``, head back on cell 0.
    """
    states = ["START", "SKIP1", "SKIP2", "RET2", "RET1", "RESTORE", "HALT"]
    delta = {
        ("START", 1): ("SKIP1", 2, R),
        ("START", 0): ("RESTORE", 0, L),
        ("SKIP1", 1): ("SKIP1", 1, R),
        ("SKIP1", 0): ("SKIP2", 0, R),
        ("SKIP2", 1): ("SKIP2", 1, R),
        ("SKIP2", 0): ("RET2", 1, L),
        ("RET2", 1): ("RET2", 1, L),
        ("RET2", 0): ("RET1", 0, L),
        ("RET1", 1): ("RET1", 1, L),
        ("RET1", 2): ("START", 2, R),
        ("RESTORE", 2): ("RESTORE", 1, L),
        ("RESTORE", 0): ("HALT", 0, R),
    }
    return TuringMachine(
        states, "START", "HALT", 2, _complete(states, "HALT", 2, delta), name="copier"
    )


def counter(n=3):
    """Writes ``n`` ones moving right, then halts: ``n + 1`` states."""
    if n < 1:
        raise ValueError("n must be positive")
    states = ["START"] + ["C%d" % i for i in range(1, n)] + ["HALT"]
    delta = {}
    for q, q2 in zip(states[:-1], states[1:]):
        delta[(q, 0)] = (q2, 1, R)
        delta[(q, 1)] = (q2, 1, R)
    return TuringMachine(states, "START", "HALT", 1, delta, name="counter")


MACHINES = {
    "writer": writer,
    "incrementer": incrementer,
    "self_loop": self_loop,
    "copier": copier,
    "counter": counter,
}
