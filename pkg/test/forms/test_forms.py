"""
Unit tests for 1-forms: adaptation, exact calculus, averaging and the
canonical form.
"""
from fractions import Fraction

import numpy as np
import pytest

from pywell.feature_library import TrigPoly
from pywell.flows import ProjectionMap
from pywell.flows import TorusFlow
from pywell.flows import TrigPolyMap
from pywell.forms import arc_nonvanishing
from pywell.forms import average
from pywell.forms import canonical_form_check
from pywell.forms import canonical_theta_x
from pywell.forms import check_adapted
from pywell.forms import FitResidualWarning
from pywell.forms import is_exact
from pywell.forms import lie_derivative
from pywell.forms import obstruction_hamiltonian
from pywell.forms import OneForm
from pywell.forms import pullback
from pywell.forms import UnsupportedMapError
from pywell.hamiltonian import WellState
from pywell.utils import SpecError


@pytest.fixture
def shear_form():
    # (2 + cos(2 pi y)) dx: theta(Y) > 0 on the rotation but L_Y theta is not closed
    return OneForm([TrigPoly.constant(2, 2.0) + TrigPoly.cos((0, 1)), TrigPoly.zero(2)])


def test_contract(bryant):
    theta = OneForm.coordinate(2, 1)
    assert theta.contract(bryant)([0.5, 0.0]) == pytest.approx(-1.0)
    assert theta.contract(bryant).max_difference(TrigPoly.cos((1, 0))) < 1e-15
    with pytest.raises(ValueError):
        OneForm.coordinate(3, 0).contract(bryant)


def test_construction_errors():
    with pytest.raises(ValueError):
        OneForm([])
    with pytest.raises(TypeError):
        OneForm([1.0])
    with pytest.raises(ValueError):
        OneForm([TrigPoly.zero(1), TrigPoly.zero(2)])


def test_evaluate():
    theta = OneForm([TrigPoly.sin((1, 0)), TrigPoly.constant(2, 3.0)])
    np.testing.assert_allclose(theta([0.25, 0.5]), [1.0, 3.0])
    assert theta(np.zeros((5, 2))).shape == (5, 2)


def test_closed_and_periods():
    L = TrigPoly.sin((1, 0)) + TrigPoly.cos((1, 1), 0.5)
    dL = OneForm.differential(L)
    assert dL.is_closed(1e-12)
    assert dL.periods() == [0, 0]
    shear = OneForm([TrigPoly.cos((0, 1)), TrigPoly.zero(2)])
    assert not shear.is_closed()


def test_form_algebra():
    a = OneForm.coordinate(2, 0, 2.0)
    b = OneForm.coordinate(2, 1)
    assert (a + b).periods() == [2.0, 1]
    assert (a - a).max_difference(OneForm.zero(2)) == 0.0
    assert (-b).periods() == [0, -1]
    assert a.scale(0.5).periods() == [1.0, 0]
    with pytest.raises(ValueError):
        a + OneForm.coordinate(3, 0)
    with pytest.raises(TypeError):
        a + 1.0


def test_spec():
    theta = OneForm([TrigPoly.sin((1,), 0.5) + 1.0], name="wobbly")
    assert OneForm.from_spec(theta.to_spec()) == theta
    with pytest.raises(SpecError):
        OneForm.from_spec({"kind": "flow", "dim": 1, "components": [[]]})
    with pytest.raises(SpecError):
        OneForm.from_spec({"dim": 2, "components": [[]]})


def test_lie_derivative_closed_form(rotation, weak_form):
    # dtheta = 0, so L_Y theta = d(theta(Y))
    omega = lie_derivative(rotation, weak_form)
    expected = OneForm.differential(weak_form.contract(rotation))
    assert omega.max_difference(expected) < 1e-12


def test_lie_derivative_shear(rotation, shear_form):
    omega = lie_derivative(rotation, shear_form)
    expected = TrigPoly.sin((0, 1), -np.pi)
    assert omega.components[0].max_difference(expected) < 1e-12
    assert omega.components[1].is_zero(1e-12)


def test_lie_derivative_exact_arithmetic(bryant):
    theta = OneForm(
        [TrigPoly.cos((1, 0), Fraction(1, 3)), TrigPoly.constant(2, Fraction(1))]
    )
    omega = lie_derivative(bryant.as_fractions(), theta.as_fractions(), scale=1)
    for c in omega.components:
        for a, b in c.terms.values():
            assert not isinstance(a, float) and not isinstance(b, float)


def test_is_exact_recovers_potential():
    L = TrigPoly.sin((1, 0)) + TrigPoly.cos((1, 1), 0.5) + TrigPoly.sin((0, 2), -2.0)
    result = is_exact(OneForm.differential(L), tol=1e-12)
    assert result
    assert result.potential.max_difference(L) < 1e-14
    assert result.residual < 1e-12


def test_is_exact_rejects():
    result = is_exact(OneForm.coordinate(2, 0))
    assert not result
    assert result.potential is None
    assert result.residual == 1
    curl = OneForm([TrigPoly.cos((0, 1)), TrigPoly.zero(2)])
    assert not is_exact(curl, tol=1e-12)


@pytest.mark.parametrize(
    "flow, theta, classification",
    [
        (pytest.lazy_fixture("rotation"), pytest.lazy_fixture("dx"), "strong"),
        (pytest.lazy_fixture("rotation"), pytest.lazy_fixture("weak_form"), "weak"),
        (pytest.lazy_fixture("rotation"), pytest.lazy_fixture("shear_form"), "none"),
        (pytest.lazy_fixture("bryant"), OneForm.coordinate(2, 1), "none"),
        (
            pytest.lazy_fixture("circle_shift"),
            OneForm([TrigPoly.constant(1, 1.0) + TrigPoly.sin((1,), 0.5)]),
            "strong",
        ),
    ],
)
def test_check_adapted(flow, theta, classification):
    report = check_adapted(flow, theta)
    assert report.classification == classification
    assert report.strong == (classification == "strong")
    assert report.weak == (classification != "none")


def test_check_adapted_report(rotation, dx, shear_form):
    report = check_adapted(rotation, dx)
    assert report.min_thetaY == pytest.approx(1.0)
    assert report.margin == 0
    assert report.exactness_residual == 0
    assert check_adapted(rotation, dx, eps=2.0).classification == "weak"
    assert check_adapted(rotation, shear_form).exactness_residual > 0


def test_check_adapted_singular_flow():
    with pytest.raises(ValueError):
        check_adapted(TorusFlow([TrigPoly.sin((1,))]), OneForm.coordinate(1, 0))


def test_average_of_wobbly_form(circle_shift):
    wobbly = OneForm([TrigPoly.constant(1, 1.0) + TrigPoly.sin((1,), 0.5)])
    averaged = average(circle_shift, wobbly)
    assert averaged.components[0].max_difference(TrigPoly.constant(1, 1.0)) < 1e-8
    assert averaged.residual < 1e-8
    assert averaged.name == "avg(theta)"


def test_average_turns_weak_into_strong(rotation, weak_form):
    averaged = average(rotation, weak_form)
    report = check_adapted(rotation, averaged)
    assert report.strong
    assert report.min_thetaY > 0.9


def test_average_validation(circle_shift, bryant):
    with pytest.raises(ValueError):
        average(circle_shift, OneForm.coordinate(1, 0), n_samples=0)
    with pytest.raises(ValueError):
        average(TorusFlow.rotation([0.0]), OneForm.coordinate(1, 0))


def test_average_warns_on_low_degree(bryant):
    theta = OneForm.coordinate(2, 1)
    with pytest.warns(FitResidualWarning):
        average(bryant, theta, n_samples=8, degree=1)


def test_obstruction_hamiltonian(rotation, weak_form, shear_form):
    H, residual = obstruction_hamiltonian(rotation, weak_form)
    assert H.is_constant(1e-12)
    assert residual < 1e-12
    with pytest.raises(ValueError):
        obstruction_hamiltonian(rotation, shear_form)


def test_pullback_projection(bryant_x_circle):
    pulled = pullback(ProjectionMap(3, [2]), OneForm.coordinate(1, 0))
    assert pulled == OneForm.coordinate(3, 2)
    assert check_adapted(bryant_x_circle, pulled).strong


def test_pullback_shifted_coordinates():
    theta = OneForm([TrigPoly.cos((1,))])
    swap = ProjectionMap(2, [1])
    pulled = pullback(swap, theta)
    assert pulled.components[0].is_zero()
    assert pulled.components[1] == TrigPoly.cos((0, 1))


def test_pullback_nonaffine():
    wiggle = TrigPolyMap([TrigPoly.sin((1,), 0.1)], periodic=True)
    with pytest.raises(UnsupportedMapError):
        pullback(wiggle, OneForm.coordinate(1, 0))
    pulled = pullback(wiggle, OneForm.coordinate(1, 0), approximate=True)
    # d(0.1 sin(2 pi y)) = 0.2 pi cos(2 pi y) dy
    expected = TrigPoly.cos((1,), 0.2 * np.pi)
    assert pulled.components[0].max_difference(expected) < 1e-10
    assert pulled.residual < 1e-10


def test_pullback_validation():
    with pytest.raises(ValueError):
        pullback(ProjectionMap(3, [2]), OneForm.coordinate(2, 0))
    euclidean = TrigPolyMap([TrigPoly.sin((1,))])
    with pytest.raises(ValueError):
        pullback(euclidean, OneForm.coordinate(1, 0))


def test_arc_nonvanishing(rotation, weak_form):
    report = arc_nonvanishing(rotation, weak_form, n_trajectories=20, random_state=0)
    assert report.passed
    assert report.longest_zero_arc == 0
    vertical = TorusFlow.rotation([0.0, 1.0])
    report = arc_nonvanishing(
        vertical, OneForm.coordinate(2, 0), n_trajectories=5, T=0.1, random_state=0
    )
    assert not report.passed
    assert report.longest_zero_arc == pytest.approx(0.1)


@pytest.mark.parametrize(
    "V", [pytest.lazy_fixture("harmonic"), pytest.lazy_fixture("quartic")]
)
def test_canonical_form(V, rng):
    samples = [
        WellState(rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2)) for _ in range(10)
    ]
    assert canonical_form_check(V, samples) < 1e-6


def test_canonical_form_validation(harmonic):
    with pytest.raises(ValueError):
        canonical_form_check(harmonic, [WellState([0.0], [1.0])])
    with pytest.raises(ValueError):
        canonical_form_check(harmonic, [], h=0)


def test_canonical_theta_x():
    assert canonical_theta_x(WellState([1.0, 2.0], [3.0, 4.0])) == 25.0
