"""
Command-line entry point: ``pywell <subcommand> ...``.

Every run writes its outputs and a ``manifest.json`` into ``--out-dir``.
Exit codes: 0 ok or feasible, 1 error, 3 infeasible, 4 budget exhausted.
"""
import argparse
import json
import logging
import sys
from dataclasses import asdict
from dataclasses import dataclass
from dataclasses import field
from pathlib import Path

import numpy as np

from pywell.acceptance import CHECKS
from pywell.acceptance import run_acceptance
from pywell.adapted_lp import build_lp
from pywell.adapted_lp import GRID_FEASIBLE
from pywell.adapted_lp import INFEASIBLE
from pywell.adapted_lp import solve
from pywell.flows import field_residual
from pywell.flows import integrate
from pywell.flows import TorusFlow
from pywell.forms import average
from pywell.forms import check_adapted
from pywell.forms import OneForm
from pywell.hamiltonian import cotangent_lift
from pywell.hamiltonian import integrate_nlw
from pywell.hamiltonian import integrate_well
from pywell.hamiltonian import NLWState
from pywell.hamiltonian import nlw_energy
from pywell.hamiltonian import nlw_state_at
from pywell.hamiltonian import potential_from_spec
from pywell.hamiltonian import WellState
from pywell.pywell import WellEmbedding
from pywell.turing import compile_machine
from pywell.turing import Halted
from pywell.turing import MACHINES
from pywell.turing import run_orbit
from pywell.turing import suspend
from pywell.turing import suspension_enters
from pywell.turing import symbolic_run
from pywell.turing import Tape
from pywell.turing import TuringMachine
from pywell.utils import file_sha256
from pywell.utils import fraction_to_str
from pywell.utils import load_spec
from pywell.utils import SpecError

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 3
EXIT_BUDGET = 4

DATA_DIR = Path(__file__).parent / "data"

logger = logging.getLogger("pywell")


def _version():
    import pywell

    return getattr(pywell, "__version__", "unknown")


@dataclass
class RunManifest:
    """Record of one CLI run; enough to reproduce it."""

    subcommand: str
    parameters: dict
    seed: int
    version: str
    inputs: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)
    exit_code: int = EXIT_OK

    def add_input(self, path):
        self.inputs[str(path)] = file_sha256(path)

    def write(self, path):
        with open(path, "w") as f:
            json.dump(asdict(self), f, indent=2, sort_keys=True)


class Run:
    """Output directory plus the manifest of the current subcommand."""

    def __init__(self, args):
        self.out_dir = Path(args.out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        parameters = {
            k: (str(v) if isinstance(v, Path) else v)
            for k, v in vars(args).items()
            if k not in ("func", "out_dir", "verbose", "seed")
        }
        self.manifest = RunManifest(
            subcommand=args.command,
            parameters=parameters,
            seed=args.seed,
            version=_version(),
        )

    def read(self, path):
        """Load a JSON spec, resolving bundled names like ``bryant.flow``."""
        path = resolve_input(path)
        self.manifest.add_input(path)
        return load_spec(path)

    def output(self, name):
        path = self.out_dir / name
        self.manifest.outputs.append(str(path))
        return path

    def write_json(self, name, payload):
        with open(self.output(name), "w") as f:
            json.dump(payload, f, indent=2, default=_jsonable)

    def finish(self, code):
        self.manifest.exit_code = code
        self.manifest.write(self.out_dir / "manifest.json")
        return code


def _jsonable(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    return str(value)


def resolve_input(name):
    path = Path(name)
    if path.exists():
        return path
    for candidate in (DATA_DIR / name, DATA_DIR / (str(name) + ".json")):
        if candidate.exists():
            return candidate
    raise SpecError("no such input file or bundled spec: {}".format(name))


def parse_tape(text, origin=0, left=0, right=0):
    """``"1,1,0"`` or ``"1 1 0"``: cells from ``-origin`` on, fills elsewhere."""
    cells = [c for c in text.replace(",", " ").split()] if text else []
    try:
        cells = [int(c) for c in cells]
    except ValueError:
        raise SpecError("tape cells must be integers: {!r}".format(text))
    return Tape.from_list(cells, origin=origin, left=left, right=right)


def load_machine(run, name):
    try:
        path = resolve_input(name if name.endswith(".json") else name + ".tm.json")
    except SpecError:
        if name in MACHINES:
            return MACHINES[name]()
        path = resolve_input(name)
    run.manifest.add_input(path)
    return TuringMachine.from_spec(load_spec(path))


# subcommands ------------------------------------------------------------------


def cmd_simulate(args, run):
    spec = run.read(args.spec)
    x0 = np.array(args.x0, dtype=float)
    if args.kind == "flow":
        flow = TorusFlow.from_spec(spec)
        trajectory = integrate(flow, x0, args.T, args.dt)
        trajectory.to_csv(run.output(args.out))
        logger.info("flow %s: %d samples", flow.name, len(trajectory))
        if len(trajectory) >= 4:
            logger.info(
                "flow %s: field residual %.3e",
                flow.name,
                field_residual(flow, trajectory),
            )
        return EXIT_OK
    V = potential_from_spec(spec)
    p0 = np.zeros_like(x0) if args.p0 is None else np.array(args.p0, dtype=float)
    s0 = WellState(x0, p0)
    if args.kind == "well":
        trajectory = integrate_well(V, s0, args.T, args.dt)
        trajectory.to_csv(run.output(args.out))
        energies = trajectory.energies(V)
        drift = float(np.max(np.abs(energies - energies[0])))
        logger.info("well: energy drift %.3e over T=%g", drift, args.T)
        return EXIT_OK
    trajectory = integrate_nlw(V, NLWState.from_well(s0, args.N), args.T, args.dt)
    final = nlw_state_at(trajectory, -1)
    final.to_csv(run.output(args.out))
    e0 = nlw_energy(V, nlw_state_at(trajectory, 0))
    logger.info(
        "nlw: N=%d, energy drift %.3e", args.N, abs(nlw_energy(V, final) - e0)
    )
    return EXIT_OK


def cmd_lift(args, run):
    flow = TorusFlow.from_spec(run.read(args.flow))
    lift = cotangent_lift(flow)
    q0 = np.array(args.q0 if args.q0 is not None else np.zeros(flow.dim))
    trajectory = lift.integrate(lift.zero_section(q0), args.T, args.dt)
    trajectory.to_csv(
        run.output(args.out),
        ["q%d" % (i + 1) for i in range(flow.dim)]
        + ["p%d" % (i + 1) for i in range(flow.dim)],
    )
    max_p = float(np.max(np.abs(trajectory.points[:, flow.dim :])))
    run.write_json("lift.json", {"flow": flow.name, "max_abs_p": max_p})
    logger.info("cotangent lift: max |p| on the zero section %.3e", max_p)
    return EXIT_OK


def _report_json(report):
    return {
        "classification": report.classification,
        "min_thetaY": report.min_thetaY,
        "grid_min": report.grid_min,
        "margin": report.margin,
        "exactness_residual": report.exactness_residual,
        "eps": report.eps,
        "grid_res": report.grid_res,
    }


def cmd_check_adapted(args, run):
    flow = TorusFlow.from_spec(run.read(args.flow))
    theta = OneForm.from_spec(run.read(args.form))
    report = check_adapted(flow, theta, eps=args.eps)
    run.write_json("adapted.json", _report_json(report))
    logger.info("%s is %s adapted", theta.name, report.classification)
    return EXIT_OK


def cmd_lp(args, run):
    flow = TorusFlow.from_spec(run.read(args.flow))
    certificate = solve(build_lp(flow, args.degree, args.eps, grid_res=args.grid))
    run.write_json("certificate.json", certificate.to_json())
    logger.info(
        "lp on %s at degree %d: %s", flow.name, args.degree, certificate.verdict
    )
    if certificate.verdict == INFEASIBLE:
        return EXIT_INFEASIBLE
    if certificate.verdict == GRID_FEASIBLE:
        logger.warning("witness is positive on the grid only, not certified")
    return EXIT_OK


def cmd_average(args, run):
    flow = TorusFlow.from_spec(run.read(args.flow))
    theta = OneForm.from_spec(run.read(args.form))
    averaged = average(flow, theta, n_samples=args.samples)
    report = check_adapted(flow, averaged)
    run.write_json(
        "average.json",
        {
            "form": averaged.to_spec(),
            "fit_residual": averaged.residual,
            "report": _report_json(report),
        },
    )
    logger.info("averaged form is %s adapted", report.classification)
    return EXIT_OK if report.strong else EXIT_INFEASIBLE


def cmd_embed(args, run):
    flow = TorusFlow.from_spec(run.read(args.flow))
    theta = OneForm.from_spec(run.read(args.form))
    model = WellEmbedding(
        optimize=args.optimize,
        m=args.m,
        degree=args.degree,
        random_state=args.seed,
    ).fit(flow, theta)
    run.write_json("metric.json", model.metric_.to_spec())
    run.write_json("embedding.json", model.embedding_.to_spec())
    run.write_json("potential.json", model.potential_.to_spec())
    model.potential_.to_csv(run.output("potential.csv"))
    rng = np.random.RandomState(args.seed)
    y0 = rng.uniform(size=(args.samples, flow.dim))
    model.score(y0, args.T, tol=args.tol, dt=args.dt)
    report = model.report_
    run.write_json(
        "report.json",
        {
            "m": model.embedding_.m,
            "gram_residual": model.embedding_.residual,
            "duality_residual": model.metric_.duality_residual,
            "reach": model.potential_.reach,
            "eps": model.potential_.eps,
            "tangential_residual": model.potential_.tangential_residual_,
            "gradient_residual": model.potential_.gradient_residual_,
            "max_deviation": report.max_deviation,
            "max_q_deviation": report.max_q_deviation,
            "max_p_deviation": report.max_p_deviation,
            "energy_drift": report.energy_drift,
            "passed": report.passed,
        },
    )
    logger.info(
        "embedding into R^%d: deviation %.3e (tol %.1e)",
        model.embedding_.m,
        report.max_deviation,
        args.tol,
    )
    return EXIT_OK if report.passed else EXIT_ERROR


def _window(text):
    if text is None:
        return None
    return tuple(int(c) for c in text.replace(",", " ").split())


def cmd_tm(args, run):
    tm = load_machine(run, args.machine)
    tape = parse_tape(args.tape, args.origin, args.left, args.right)
    window = _window(args.window)
    if args.action == "run":
        result = symbolic_run(tm, tape, args.steps)
        n = len(window) // 2 if window else args.show
        run.write_json(
            "run.json",
            {
                "machine": tm.name,
                "verdict": result.verdict,
                "steps": result.steps,
                "state": result.state,
                "window": list(result.output_window(n)),
                "tape": str(result.tape),
            },
        )
        logger.info("%s: %s after %d steps", tm.name, result.verdict, result.steps)
        return EXIT_OK if result.halted else EXIT_BUDGET
    diffeo = compile_machine(tm, args.base)
    if args.action == "compile":
        run.write_json(
            "compiled.json",
            {
                "machine": tm.to_spec(),
                "b": diffeo.b,
                "side": fraction_to_str(diffeo.side),
                "ratio": fraction_to_str(diffeo.ratio),
                "squares": {
                    q: [fraction_to_str(c) for c in diffeo.corners[q]]
                    for q in tm.states
                },
                "pieces": [
                    {
                        "state": p.state,
                        "symbol": p.symbol,
                        "target": p.target,
                        "written": p.written,
                        "eps": p.eps,
                        "image_corner": [fraction_to_str(c) for c in p.image_corner],
                    }
                    for p in diffeo.pieces.values()
                ],
            },
        )
        logger.info("%s compiled into %d pieces", tm.name, diffeo.n_pieces)
        return EXIT_OK
    result = run_orbit(diffeo, tape, args.steps, window)
    if args.action == "orbit":
        result.to_csv(run.output("orbit.csv"))
        logger.info(
            "%s orbit: %s at step %s, min distance to U %s",
            tm.name,
            result.verdict,
            result.step_index,
            fraction_to_str(result.min_distance),
        )
    else:
        entry = suspension_enters(suspend(diffeo), tape, window, args.steps)
        run.write_json(
            "suspension.json",
            {"machine": tm.name, "entry_time": entry, "verdict": result.verdict},
        )
        logger.info("%s suspension: entry time %s", tm.name, entry)
    return EXIT_BUDGET if result.verdict == "budget-exhausted" else EXIT_OK


def cmd_verify_all(args, run):
    results = run_acceptance(
        quick=args.quick, random_state=args.seed, only=args.only or None
    )
    run.write_json("acceptance.json", [r.to_json() for r in results])
    failed = [r.name for r in results if not r.passed]
    if failed:
        logger.error("failed checks: %s", ", ".join(failed))
        return EXIT_ERROR
    return EXIT_OK


# parser -------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pywell",
        description="Potential wells, adapted 1-forms and compiled Turing machines.",
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="log at DEBUG level"
    )
    parser.add_argument("--seed", type=int, default=0, help="random seed")
    parser.add_argument(
        "--out-dir", type=Path, default=Path("pywell-out"), help="output directory"
    )
    sub = parser.add_subparsers(dest="command")
    sub.required = True

    p = sub.add_parser("simulate", help="integrate a flow, a well or an NLW")
    p.add_argument("kind", choices=["flow", "well", "nlw"])
    p.add_argument("--spec", required=True, help="flow or potential spec")
    p.add_argument("--x0", type=float, nargs="+", required=True)
    p.add_argument("--p0", type=float, nargs="+")
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--N", type=int, default=64, help="NLW grid size")
    p.add_argument("--out", default="trajectory.csv")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("lift", help="cotangent lift and zero-section check")
    p.add_argument("--flow", required=True)
    p.add_argument("--q0", type=float, nargs="+")
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--out", default="lift.csv")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("check-adapted", help="classify a 1-form")
    p.add_argument("--flow", required=True)
    p.add_argument("--form", required=True)
    p.add_argument("--eps", type=float, default=0.0)
    p.set_defaults(func=cmd_check_adapted)

    p = sub.add_parser("lp", help="decide existence of a strongly adapted form")
    p.add_argument("--flow", required=True)
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--grid", type=int, default=64)
    p.set_defaults(func=cmd_lp)

    p = sub.add_parser("average", help="time-average a weakly adapted form")
    p.add_argument("--flow", required=True)
    p.add_argument("--form", required=True)
    p.add_argument("--samples", type=int, default=64)
    p.set_defaults(func=cmd_average)

    p = sub.add_parser("embed", help="realize a flow as a potential well")
    p.add_argument("--flow", required=True)
    p.add_argument("--form", required=True)
    p.add_argument("--optimize", action="store_true")
    p.add_argument("--m", type=int)
    p.add_argument("--degree", type=int, default=4)
    p.add_argument("--samples", type=int, default=4, help="verification starts")
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--tol", type=float, default=1e-4)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("tm", help="run or compile a Turing machine")
    p.add_argument("action", choices=["run", "compile", "orbit", "suspend"])
    p.add_argument("--machine", required=True, help="spec file or bundled name")
    p.add_argument("--tape", default="", help='cells, e.g. "1,1"')
    p.add_argument("--origin", type=int, default=0, help="index of the head cell")
    p.add_argument("--left", type=int, default=0, help="left fill symbol")
    p.add_argument("--right", type=int, default=0, help="right fill symbol")
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--window", help='output window, e.g. "0,1,0"')
    p.add_argument("--show", type=int, default=3, help="half width of shown window")
    p.add_argument("--base", type=int, help="encoding base, default 10 k")
    p.set_defaults(func=cmd_tm)

    p = sub.add_parser("verify-all", help="run the acceptance suite")
    p.add_argument("--quick", action="store_true")
    p.add_argument(
        "--only", nargs="+", choices=[name for name, _ in CHECKS], default=None
    )
    p.set_defaults(func=cmd_verify_all)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    logging.captureWarnings(True)
    logger.debug("arguments: %s", vars(args))
    run = Run(args)
    try:
        code = args.func(args, run)
    except (SpecError, ValueError, TypeError, RuntimeError, Halted) as e:
        logger.error("%s: %s", type(e).__name__, e)
        code = EXIT_ERROR
    return run.finish(code)


if __name__ == "__main__":
    sys.exit(main())
