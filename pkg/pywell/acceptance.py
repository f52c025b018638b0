"""
Desk-scale acceptance suite run by ``pywell verify-all``.

Every check returns a CheckResult; ``quick`` shrinks horizons and corpora
for smoke runs.
"""
import logging
import time
from dataclasses import dataclass
from dataclasses import field

import numpy as np
from sklearn.utils import check_random_state

from pywell.adapted_lp import build_lp
from pywell.adapted_lp import FEASIBLE
from pywell.adapted_lp import INFEASIBLE
from pywell.adapted_lp import solve
from pywell.feature_library import TrigPoly
from pywell.flows import check_morphism
from pywell.flows import ComposedMap
from pywell.flows import field_residual
from pywell.flows import flow_map
from pywell.flows import integrate
from pywell.flows import ProjectionMap
from pywell.flows import TorusFlow
from pywell.forms import average
from pywell.forms import canonical_form_check
from pywell.forms import check_adapted
from pywell.forms import OneForm
from pywell.forms import pullback
from pywell.hamiltonian import cotangent_lift
from pywell.hamiltonian import integrate_nlw
from pywell.hamiltonian import integrate_well
from pywell.hamiltonian import leapfrog_path
from pywell.hamiltonian import nlw_energy
from pywell.hamiltonian import nlw_state_at
from pywell.hamiltonian import NLWState
from pywell.hamiltonian import PolynomialPotential
from pywell.hamiltonian import symplectic_defect
from pywell.hamiltonian import WellState
from pywell.pywell import WellEmbedding
from pywell.turing import compile_machine
from pywell.turing import encode_tape
from pywell.turing import MACHINES
from pywell.turing import random_tape
from pywell.turing import run_orbit
from pywell.turing import shift_check
from pywell.turing import step_point
from pywell.turing import symbolic_trace

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    name: str
    passed: bool
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "seconds": round(self.seconds, 3),
            "details": self.details,
        }


def check_bryant_lp(quick, rng):
    bryant = TorusFlow.bryant()
    degrees = (0, 1) if quick else (0, 1, 2, 3)
    grid = 16 if quick else 64
    verdicts = {}
    for K in degrees:
        cert = solve(build_lp(bryant, K, 1e-3, grid_res=grid))
        verdicts["bryant K={}".format(K)] = cert.verdict
    infeasible = all(v == INFEASIBLE for v in verdicts.values())
    controls = {
        "rotation": TorusFlow.rotation([1.0, 0.5]),
        "bryant x circle": bryant.product_with_circle(),
    }
    margins_ok = True
    for name, flow in controls.items():
        cert = solve(build_lp(flow, 0, 1e-3, grid_res=8))
        verdicts[name] = cert.verdict
        margins_ok = margins_ok and (
            cert.verdict == FEASIBLE and cert.report.min_thetaY >= 0.5e-3
        )
    return infeasible and margins_ok, verdicts


def check_bryant_trajectories(quick, rng):
    bryant = TorusFlow.bryant()
    x0 = np.array([[0.1, 0.0], [0.25, 0.0], [0.4, 0.0]])
    end = flow_map(bryant, 5.0, x0)
    gap_half = float(np.max(np.abs(end[:, 0] - 0.5)))
    t = 0.5
    oracle = np.arctan(np.tan(np.pi * x0[:, 0]) * np.exp(2 * np.pi * t)) / np.pi
    gap_oracle = float(np.max(np.abs(flow_map(bryant, t, x0)[:, 0] - oracle)))
    T = 2.0 if quick else 10.0
    drift = 0.0
    for x in (0.0, 0.5):
        path = integrate(bryant, [x, 0.3], T, 1e-3).points
        drift = max(drift, float(np.max(np.abs(path[:, 0] - x))))
    residual = field_residual(bryant, integrate(bryant, [0.1, 0.2], 1.0, 1e-3))
    passed = (
        gap_half < 1e-6 and gap_oracle < 1e-8 and drift < 1e-10 and residual < 1e-4
    )
    return passed, {
        "x_gap_to_half": gap_half,
        "closed_form_gap": gap_oracle,
        "circle_drift": drift,
        "field_residual": residual,
    }


def check_canonical_form(quick, rng):
    n = 20 if quick else 100
    details = {}
    for name, V in (
        ("harmonic", PolynomialPotential.harmonic(2)),
        ("quartic", PolynomialPotential.quartic(2)),
    ):
        samples = [
            WellState(rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2)) for _ in range(n)
        ]
        details[name] = canonical_form_check(V, samples, h=1e-5)
    return max(details.values()) < 1e-6, details


def check_averaging(quick, rng):
    circle = TorusFlow.circle_shift()
    wobbly = OneForm(
        [TrigPoly.constant(1, 1.0) + TrigPoly.sin((1,), 0.5)], name="wobbly dt"
    )
    averaged = average(circle, wobbly)
    gap = averaged.components[0].max_difference(TrigPoly.constant(1, 1.0))
    circle_strong = check_adapted(circle, averaged).strong
    rotation = TorusFlow.rotation([1.0, 0.5])
    # dx + d(sin(2 pi x) / 2 pi): theta(Y) vanishes on the circle x = 1/2
    weak = OneForm(
        [TrigPoly.constant(2, 1.0) + TrigPoly.cos((1, 0), 1.0), TrigPoly.zero(2)],
        name="weak",
    )
    rotation_report = check_adapted(rotation, average(rotation, weak))
    passed = gap < 1e-8 and circle_strong and rotation_report.strong
    return passed, {
        "circle_gap": gap,
        "circle_strong": circle_strong,
        "rotation_margin": rotation_report.min_thetaY,
    }


def check_energy(quick, rng):
    V = PolynomialPotential.harmonic(1)
    T, dt = (10.0, 1e-3) if quick else (100.0, 1e-3)
    s0 = WellState([1.0], [0.0])
    traj = integrate_well(V, s0, T, dt)
    energies = traj.energies(V)
    drift = float(np.max(np.abs(energies - energies[0])) / energies[0])
    n_steps = len(traj) - 1
    h = traj.step_size
    q, p = leapfrog_path(V, traj.last_state.q, -traj.last_state.p, h, n_steps, False)
    back = float(max(np.max(np.abs(q - s0.q)), np.max(np.abs(-p - s0.p))))
    zero_section = 0.0
    flows = [
        TorusFlow.rotation([1.0, 0.5]),
        TorusFlow.bryant(),
        TorusFlow.bryant().product_with_circle(),
    ]
    for flow in flows:
        lift = cotangent_lift(flow)
        start = lift.zero_section(rng.uniform(size=flow.dim))
        path = lift.integrate(start, 2.0 if quick else 10.0, 1e-2).points
        zero_section = max(zero_section, float(np.max(np.abs(path[:, flow.dim :]))))
    quartic = PolynomialPotential.quartic(2)
    defect = max(
        symplectic_defect(
            quartic, WellState(rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2)), 0.05
        )
        for _ in range(5)
    )
    passed = (
        drift < 1e-6 and back < 1e-8 and zero_section < 1e-10 and defect < 1e-7
    )
    return passed, {
        "relative_energy_drift": drift,
        "reversibility_error": back,
        "zero_section_momentum": zero_section,
        "symplectic_defect": defect,
    }


def check_nlw(quick, rng):
    N, dt = 64, 1e-3
    T = 1.0 if quick else 5.0
    V = PolynomialPotential.quartic(1)
    s0 = WellState([0.7], [0.1])
    wave = integrate_nlw(V, NLWState.from_well(s0, N), T, dt)
    well = integrate_well(V, s0, T, dt)
    Q, P = wave.points[-1]
    gap = float(
        max(
            np.max(np.abs(Q - well.last_state.q)),
            np.max(np.abs(P - well.last_state.p)),
        )
    )
    # linear wave with V = 0: Q(t, x) = cos(2 pi t) cos(2 pi x)
    zero = PolynomialPotential.zero(1)
    x = np.arange(N) / N
    linear = integrate_nlw(
        zero, NLWState(np.cos(2 * np.pi * x), np.zeros(N)), 1.0, 1e-4
    )
    closed = np.cos(2 * np.pi * linear.times[-1]) * np.cos(2 * np.pi * x)
    linear_gap = float(np.max(np.abs(linear.points[-1][0][:, 0] - closed)))
    # discrete energy of a genuinely spatial solution, relative drift
    M = 32
    y = np.arange(M) / M
    start = NLWState(0.5 * np.sin(2 * np.pi * y), np.zeros(M))
    horizon = 1.0 if quick else 10.0
    path = integrate_nlw(V, start, horizon, 1e-4, record_every=100)
    energies = np.array(
        [nlw_energy(V, nlw_state_at(path, i)) for i in range(len(path))]
    )
    drift = float(np.max(np.abs(energies - energies[0])) / energies[0])
    passed = gap < 1e-9 and linear_gap < 1e-6 and drift < 1e-5
    return passed, {
        "constant_data_gap": gap,
        "linear_wave_gap": linear_gap,
        "relative_energy_drift": drift,
    }


def check_turing(quick, rng):
    n_tapes = 10 if quick else 50
    budget = 200 if quick else 1000
    steps_checked = 0
    orbits = {"entered": 0, "halted-outside": 0, "budget-exhausted": 0}
    min_gap = None
    for name, factory in MACHINES.items():
        tm = factory()
        diffeo = compile_machine(tm)
        for _ in range(n_tapes):
            tape = random_tape(rng, tm.k, width=3)
            trace = symbolic_trace(tm, tape, budget)
            z, w = diffeo.start_point(tape)
            for q2, tape2 in trace[1:]:
                z, w = step_point(diffeo, z, w)
                expected = tuple(encode_tape(tape2, diffeo.b, tm.k))
                if diffeo.locate(z) != q2 or w != expected:
                    return False, {"machine": name, "mismatch_at": steps_checked}
                steps_checked += 1
            result = run_orbit(diffeo, tape, budget)
            orbits[result.verdict] += 1
            if result.verdict == "budget-exhausted":
                gap = float(result.min_distance)
                min_gap = gap if min_gap is None else min(min_gap, gap)
    passed = min_gap is None or min_gap > 0
    return passed, {
        "steps_checked": steps_checked,
        "orbits": orbits,
        "min_distance_non_halting": min_gap,
    }


def check_shift(quick, rng):
    count = 0
    for k in (1, 2):
        for _ in range(100):
            if not shift_check(random_tape(rng, k), 10 * k, k):
                return False, {"k": k, "checked": count}
            count += 1
    return True, {"checked": count}


def check_embedding(quick, rng):
    details = {}
    circle = WellEmbedding().fit(
        TorusFlow.circle_shift(), OneForm.coordinate(1, 0), quiet=True
    )
    T, dt = (1.0, 1e-4) if quick else (10.0, 5e-5)
    y0 = rng.uniform(size=(4, 1))
    details["circle_deviation"] = -circle.score(y0, T, tol=1e-6, dt=dt)
    details["circle_gradient_residual"] = circle.potential_.gradient_residual_
    details["circle_duality"] = circle.metric_.duality_residual
    torus = WellEmbedding().fit(
        TorusFlow.rotation([1.0, 0.5]), OneForm.coordinate(2, 0), quiet=True
    )
    y0 = rng.uniform(size=(4, 2))
    details["torus_deviation"] = -torus.score(y0, 2.0 if quick else 10.0, dt=1e-3)
    details["torus_gradient_residual"] = torus.potential_.gradient_residual_
    passed = (
        details["circle_deviation"] < 1e-6
        and details["torus_deviation"] < 1e-4
        and details["circle_gradient_residual"] < 1e-8
        and details["torus_gradient_residual"] < 1e-8
        and details["circle_duality"] < 1e-12
    )
    return passed, details


def check_pullback(quick, rng):
    bryant = TorusFlow.bryant()
    product = bryant.product_with_circle()
    circle = TorusFlow.circle_shift()
    to_circle = ProjectionMap(3, [2])
    to_base = ProjectionMap(3, [0, 1])
    residual = max(
        check_morphism(to_circle, product, circle, grid_res=8).max_residual,
        check_morphism(to_base, product, bryant, grid_res=8).max_residual,
    )
    pulled = pullback(to_circle, OneForm.coordinate(1, 0))
    strong = check_adapted(product, pulled).strong
    theta = OneForm(
        [TrigPoly.sin((1,), 1.0) + TrigPoly.constant(1, 2.0)], name="theta"
    )
    first = ProjectionMap(3, [1, 2])
    second = ProjectionMap(2, [1])
    direct = pullback(ComposedMap(second, first), theta)
    staged = pullback(first, pullback(second, theta))
    functorial = direct == staged
    passed = residual == 0 and strong and functorial
    return passed, {
        "projection_residual": residual,
        "pullback_strong": strong,
        "functorial": functorial,
    }


CHECKS = [
    ("bryant-lp", check_bryant_lp),
    ("bryant-trajectories", check_bryant_trajectories),
    ("canonical-form", check_canonical_form),
    ("averaging", check_averaging),
    ("energy", check_energy),
    ("nlw-reduction", check_nlw),
    ("turing-conjugacy", check_turing),
    ("shift-relation", check_shift),
    ("embedding", check_embedding),
    ("pullback", check_pullback),
]


def run_acceptance(quick=False, random_state=None, only=None):
    """Run the suite, logging one line per check."""
    rng = check_random_state(random_state)
    results = []
    for name, check in CHECKS:
        if only is not None and name not in only:
            continue
        start = time.perf_counter()
        try:
            passed, details = check(quick, rng)
        except Exception as e:
            logger.exception("check %s raised", name)
            passed, details = False, {"error": "{}: {}".format(type(e).__name__, e)}
        result = CheckResult(name, bool(passed), time.perf_counter() - start, details)
        logger.info(
            "%-20s %s (%.1fs)", name, "ok" if passed else "FAILED", result.seconds
        )
        results.append(result)
    return results
