"""
Unit tests for the adapted-form linear program and cycle integrals.
"""
import json
from fractions import Fraction

import pytest

from pywell.adapted_lp import bryant_obstruction
from pywell.adapted_lp import build_lp
from pywell.adapted_lp import circle_average
from pywell.adapted_lp import cycle_integral
from pywell.adapted_lp import FEASIBLE
from pywell.adapted_lp import INFEASIBLE
from pywell.adapted_lp import solve
from pywell.feature_library import TrigPoly
from pywell.flows import TorusFlow
from pywell.forms import OneForm


def test_sizes():
    lp = build_lp(TorusFlow.rotation([1, 1]), 1, 1e-3, grid_res=8)
    assert lp.n_variables == 36
    # one cos slot for k = 0 and cos/sin for the four canonical k != 0
    assert lp.n_free == 18
    assert lp.n_inequalities == 128
    assert lp.eps == Fraction(1, 1000)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(K=-1, eps=1e-3),
        dict(K=1.5, eps=1e-3),
        dict(K=0, eps=0),
        dict(K=0, eps=1e-3, grid_res=0),
    ],
)
def test_build_lp_validation(rotation, kwargs):
    with pytest.raises(ValueError):
        build_lp(rotation, **kwargs)


def test_build_lp_singular_flow():
    with pytest.raises(ValueError):
        build_lp(TorusFlow.rotation([0.0, 0.0]), 0, 1e-3)


def test_constant_forms(rotation):
    lp = build_lp(rotation, 0, 1e-3, grid_res=4)
    # constant forms on a constant flow are always adapted
    assert lp.n_equalities == 0
    assert lp.nullspace() == [[1, 0], [0, 1]]
    assert lp.form([1, 0]) == OneForm.coordinate(2, 0)
    assert lp.grid_values([1, 2]) == [Fraction(2)] * 16
    assert lp.grid_row(0) == [Fraction(1), Fraction(1, 2)]


def test_rotation_is_feasible(rotation):
    cert = solve(build_lp(rotation, 0, 1e-3, grid_res=8))
    assert cert.verdict == FEASIBLE
    assert cert.feasible
    assert cert.objective >= Fraction(1, 1000)
    assert cert.report.strong
    assert cert.witness.name == "witness_K0"
    out = json.loads(cert.dumps())
    assert out["verdict"] == "feasible"
    assert out["classification"] == "strong"
    assert "farkas" not in out


@pytest.mark.parametrize("K", [0, 1])
def test_bryant_is_infeasible(bryant, K):
    lp = build_lp(bryant, K, 1e-3, grid_res=8)
    cert = solve(lp)
    assert cert.verdict == INFEASIBLE
    assert not cert.feasible
    assert cert.witness is None
    assert cert.farkas_residual == 0
    assert cert.farkas_value > 0
    assert cert.objective < lp.eps
    assert len(cert.u) == len(cert.w) == len(cert.grid_indices)
    assert len(cert.lam) == lp.n_equalities
    assert cert.certified_radius > 0
    farkas = json.loads(cert.dumps())["farkas"]
    assert Fraction(farkas["residual"]) == 0
    assert Fraction(farkas["value"]) == cert.farkas_value


def test_optimum_is_monotone_in_degree():
    # constant forms only reach min / max = 1/3 of theta(Y) on this flow
    flow = TorusFlow(
        [
            TrigPoly.constant(2, 1.0) + TrigPoly.sin((0, 1), 0.5),
            TrigPoly.constant(2, 1.0) + TrigPoly.cos((1, 0), 0.5),
        ]
    )
    previous = None
    for K in (0, 1, 2):
        cert = solve(build_lp(flow, K, 1e-3, grid_res=8))
        assert cert.verdict != INFEASIBLE
        if previous is not None:
            assert cert.objective >= previous
        previous = cert.objective
    assert previous >= Fraction(1, 3) - Fraction(1, 10 ** 6)


@pytest.mark.slow
@pytest.mark.parametrize("K", [0, 1])
def test_bryant_verdict_is_stable_under_grid_refinement(bryant, K):
    for grid_res in (32, 64, 128):
        cert = solve(build_lp(bryant, K, 1e-3, grid_res=grid_res))
        assert cert.verdict == INFEASIBLE
        assert cert.farkas_residual == 0
        assert cert.grid_res == grid_res


def test_bryant_has_exactness_rows(bryant):
    lp = build_lp(bryant, 1, 1e-3, grid_res=4)
    assert lp.n_equalities > 0
    assert 0 < len(lp.nullspace()) < lp.n_free


def test_circle_average():
    assert circle_average(TrigPoly.cos((1, 1)), 1, [0.0, 0.0]) == 0.0
    assert circle_average(TrigPoly.cos((1, 0)) + 2, 1, [0.5, 0.3]) == pytest.approx(1)
    with pytest.raises(ValueError):
        circle_average(TrigPoly.cos((1, 0)), 2, [0.0, 0.0])


def test_cycle_integral():
    theta = OneForm([TrigPoly.constant(2, 3.0), TrigPoly.cos((1, 0), 2.0)])
    assert cycle_integral(theta, 0) == 3.0
    assert cycle_integral(theta, 1, [0.0, 0.0]) == pytest.approx(2.0)
    assert cycle_integral(theta, 1, [0.5, 0.0]) == pytest.approx(-2.0)


@pytest.mark.parametrize(
    "theta, closed, contradiction",
    [
        (OneForm.coordinate(2, 1), True, True),
        (OneForm.coordinate(2, 0), True, True),
        (OneForm([TrigPoly.zero(2), TrigPoly.cos((1, 0))]), False, False),
    ],
)
def test_bryant_obstruction(theta, closed, contradiction):
    result = bryant_obstruction(theta)
    assert result.closed == closed
    assert result.contradiction == contradiction


def test_bryant_obstruction_values():
    result = bryant_obstruction(OneForm.coordinate(2, 1))
    assert result.period_c0 == result.period_c1 == 1.0
    assert result.thetaY_c0 == pytest.approx(1.0)
    assert result.thetaY_c1 == pytest.approx(-1.0)
    with pytest.raises(ValueError):
        bryant_obstruction(OneForm.coordinate(3, 0))
