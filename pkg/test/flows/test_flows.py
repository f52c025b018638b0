"""
Unit tests for torus flows, chart maps and integrators.
"""
import numpy as np
import pytest

from pywell.differentiation import FiniteDifference
from pywell.feature_library import TrigPoly
from pywell.flows import AffineMap
from pywell.flows import check_morphism
from pywell.flows import ComposedMap
from pywell.flows import eval_field
from pywell.flows import field_residual
from pywell.flows import flow_map
from pywell.flows import IdentityMap
from pywell.flows import integrate
from pywell.flows import ProductMap
from pywell.flows import ProjectionMap
from pywell.flows import RichardsonWarning
from pywell.flows import SingularPointError
from pywell.flows import step_count
from pywell.flows import TorusFlow
from pywell.flows import Trajectory
from pywell.flows import TrigPolyMap
from pywell.utils import SpecError


def test_bryant_field(bryant):
    np.testing.assert_allclose(bryant.eval_field([0.25, 0.7]), [1.0, 0.0], atol=1e-15)
    np.testing.assert_allclose(eval_field(bryant, [0.0, 0.3]), [0.0, 1.0])
    np.testing.assert_allclose(bryant([0.5, 0.9]), [0.0, -1.0], atol=1e-15)


def test_batch_evaluation(bryant):
    x = np.random.RandomState(1).uniform(size=(4, 3, 2))
    assert bryant.eval_field(x).shape == (4, 3, 2)
    assert bryant.jacobian(x).shape == (4, 3, 2, 2)


def test_jacobian(bryant):
    J = bryant.jacobian([0.0, 0.0])
    np.testing.assert_allclose(J, [[2 * np.pi, 0.0], [0.0, 0.0]], atol=1e-12)


def test_bad_components():
    with pytest.raises(ValueError):
        TorusFlow([])
    with pytest.raises(TypeError):
        TorusFlow([1.0, 2.0])
    with pytest.raises(ValueError):
        TorusFlow([TrigPoly.constant(1, 1.0), TrigPoly.constant(2, 1.0)])


def test_dimension_mismatch(bryant):
    with pytest.raises(ValueError):
        bryant.eval_field([0.1, 0.2, 0.3])


@pytest.mark.parametrize(
    "flow, nonsingular",
    [
        (pytest.lazy_fixture("bryant"), True),
        (pytest.lazy_fixture("rotation"), True),
        (pytest.lazy_fixture("circle_shift"), True),
        (TorusFlow([TrigPoly.sin((1,))]), False),
        (TorusFlow.rotation([0.0, 0.0]), False),
    ],
)
def test_nonsingular(flow, nonsingular):
    assert flow.nonsingular == nonsingular


def test_bryant_speed_is_constant(bryant):
    # sin^2 + cos^2 = 1
    assert bryant.speed_squared() == TrigPoly.constant(2, 1.0)
    ok, lower = bryant.certify_nonsingular()
    assert ok and lower == pytest.approx(1.0)


def test_product_with_circle(bryant_x_circle):
    assert bryant_x_circle.dim == 3
    np.testing.assert_allclose(
        bryant_x_circle.eval_field([0.25, 0.1, 0.6]), [1.0, 0.0, 1.0], atol=1e-15
    )


def test_rotation_constant(rotation):
    assert rotation.is_constant()
    np.testing.assert_allclose(rotation.constant_vector(), [1.0, 0.5])


def test_as_fractions(rotation):
    exact = TorusFlow.rotation([0.1]).as_fractions()
    assert exact.components[0].constant_term.denominator == 10
    assert rotation.as_fractions() == rotation


def test_spec(bryant):
    spec = bryant.to_spec()
    assert spec["kind"] == "flow"
    assert TorusFlow.from_spec(spec) == bryant
    with pytest.raises(SpecError):
        TorusFlow.from_spec({"dim": 2, "components": [[]]})
    with pytest.raises(SpecError):
        TorusFlow.from_spec({"components": []})
    with pytest.raises(SpecError):
        TorusFlow.from_spec({"dim": 1, "components": [[[[1, 0], 1.0, 0.0]]]})


def test_equations(bryant, capsys):
    eqs = bryant.equations()
    assert eqs == ["1.000 sin(2pi(x0))", "1.000 cos(2pi(x0))"]
    bryant.print()
    assert "x0' = 1.000 sin(2pi(x0))" in capsys.readouterr().out


def test_step_count():
    assert step_count(1.0, 0.1) == 10
    assert step_count(1.0, 0.3) == 4
    assert step_count(1e-9, 1.0) == 1


def test_integrate_rotation(rotation):
    traj = integrate(rotation, [0.0, 0.0], 1.5, 0.01)
    assert isinstance(traj, Trajectory)
    assert traj.times[-1] == pytest.approx(1.5)
    np.testing.assert_allclose(traj.last, [0.5, 0.75], atol=1e-12)
    assert traj.points.min() >= 0 and traj.points.max() < 1


def test_integrate_validation(rotation):
    with pytest.raises(ValueError):
        integrate(rotation, [0.0, 0.0], -1.0, 0.1)
    with pytest.raises(ValueError):
        integrate(rotation, [0.0, 0.0], 1.0, 0.0)
    with pytest.raises(ValueError):
        integrate(rotation, [[0.0, 0.0], [0.1, 0.1]], 1.0, 0.1)


def test_invariant_circles(bryant):
    for x in (0.0, 0.5):
        path = integrate(bryant, [x, 0.3], 2.0, 1e-2).points
        assert np.max(np.abs(path[:, 0] - x)) < 1e-12


def test_integrate_singular_point():
    # x' = sin(2 pi x) drives x = 1/4 into the zero of the field at x = 1/2
    sink = TorusFlow([TrigPoly.sin((1, 0), 1.0), TrigPoly.zero(2)])
    with pytest.raises(SingularPointError):
        integrate(sink, [0.25, 0.3], 10.0, 1e-2)
    with pytest.raises(SingularPointError):
        integrate(sink, [0.5, 0.3], 1.0, 1e-2)
    # the field is still nonzero after a short run
    assert len(integrate(sink, [0.25, 0.3], 0.5, 1e-2)) == 51


def test_field_residual(rotation, bryant):
    traj = integrate(rotation, [0.9, 0.95], 1.0, 1e-2)
    assert field_residual(rotation, traj) < 1e-9
    forward = FiniteDifference(order=1)
    assert field_residual(rotation, traj, differentiation_method=forward) < 1e-9

    coarse = field_residual(bryant, integrate(bryant, [0.1, 0.2], 1.0, 1e-2))
    fine = field_residual(bryant, integrate(bryant, [0.1, 0.2], 1.0, 5e-3))
    assert coarse < 1e-2
    assert coarse / fine > 3

    with pytest.raises(ValueError):
        field_residual(TorusFlow.circle_shift(), traj)
    with pytest.raises(ValueError):
        field_residual(rotation, integrate(rotation, [0.0, 0.0], 0.2, 0.1))


def test_flow_map_closed_form(bryant):
    x0 = np.array([[0.1, 0.0], [0.25, 0.0], [0.4, 0.0]])
    t = 0.5
    closed = np.arctan(np.tan(np.pi * x0[:, 0]) * np.exp(2 * np.pi * t)) / np.pi
    np.testing.assert_allclose(flow_map(bryant, t, x0)[:, 0], closed, atol=1e-8)


def test_flow_map_inverse(bryant):
    x0 = np.array([0.2, 0.6])
    forward = flow_map(bryant, 0.3, x0)
    np.testing.assert_allclose(flow_map(bryant, -0.3, forward), x0, atol=1e-9)
    np.testing.assert_allclose(flow_map(bryant, 0, x0 + 1), x0)


def test_flow_map_warns_on_stiff_transient():
    stiff = TorusFlow([TrigPoly.sin((1,), 50.0)])
    with pytest.warns(RichardsonWarning):
        flow_map(stiff, 0.01, [0.1], tol=1e-10)


def test_trajectory_validation():
    with pytest.raises(ValueError):
        Trajectory(times=np.array([0.0, 1.0]), points=np.zeros((3, 1)), step_size=1)
    with pytest.raises(ValueError):
        Trajectory(times=np.array([0.0, 0.0]), points=np.zeros((2, 1)), step_size=1)


def test_trajectory_csv(rotation, tmp_path):
    traj = integrate(rotation, [0.0, 0.0], 0.1, 0.05)
    path = tmp_path / "traj.csv"
    traj.to_csv(path)
    table = np.loadtxt(path, delimiter=",", skiprows=1)
    assert path.read_text().splitlines()[0] == "t,x1,x2"
    np.testing.assert_allclose(table[:, 0], traj.times)


def test_affine_maps():
    A = AffineMap([[1, 1], [0, 1]], [0.5, 0.0])
    np.testing.assert_allclose(A([0.75, 0.25]), [0.5, 0.25])
    np.testing.assert_allclose(A.jacobian([0.0, 0.0]), [[1, 1], [0, 1]])
    with pytest.raises(ValueError):
        AffineMap([[0.5]])
    with pytest.raises(ValueError):
        AffineMap([[1, 0]], b=[0.0, 0.0])
    np.testing.assert_allclose(IdentityMap(2)([1.25, 0.5]), [0.25, 0.5])


def test_projection_map():
    P = ProjectionMap(3, [2, 0])
    np.testing.assert_allclose(P([0.1, 0.2, 0.3]), [0.3, 0.1])
    with pytest.raises(ValueError):
        ProjectionMap(2, [2])
    with pytest.raises(ValueError):
        ProjectionMap(2, [])


def test_product_map():
    P = ProductMap([IdentityMap(1), ProjectionMap(2, [1])])
    assert (P.source_dim, P.target_dim) == (3, 2)
    np.testing.assert_allclose(P([0.1, 0.2, 0.3]), [0.1, 0.3])
    np.testing.assert_allclose(P.jacobian([0.1, 0.2, 0.3]), [[1, 0, 0], [0, 0, 1]])
    A, b = P.affine_part()
    np.testing.assert_allclose(A, [[1, 0, 0], [0, 0, 1]])
    with pytest.raises(ValueError):
        ProductMap([IdentityMap(1), TrigPolyMap([TrigPoly.sin((1,))])])


def test_composed_map():
    first = ProjectionMap(3, [1, 2])
    second = ProjectionMap(2, [1])
    composed = ComposedMap(second, first)
    np.testing.assert_allclose(composed([0.1, 0.2, 0.3]), [0.3])
    A, _ = composed.affine_part()
    np.testing.assert_allclose(A, [[0, 0, 1]])
    assert (second @ first).target_dim == 1
    with pytest.raises(ValueError):
        ComposedMap(first, second)


def test_trig_poly_map_jacobian():
    circle = TrigPolyMap([TrigPoly.cos((1,)), TrigPoly.sin((1,))])
    y = np.array([0.125])
    J = circle.jacobian(y)
    expected = 2 * np.pi * np.array([[-np.sin(np.pi / 4)], [np.cos(np.pi / 4)]])
    np.testing.assert_allclose(J, expected)
    assert circle.affine_part() is None


def test_check_morphism(bryant_x_circle, bryant, circle_shift):
    report = check_morphism(ProjectionMap(3, [2]), bryant_x_circle, circle_shift)
    assert report.passed and report.max_residual == 0
    report = check_morphism(ProjectionMap(3, [0, 1]), bryant_x_circle, bryant)
    assert report.passed
    # the second coordinate does not carry the circle flow
    bad = check_morphism(ProjectionMap(3, [1]), bryant_x_circle, circle_shift)
    assert not bad.passed
    with pytest.raises(ValueError):
        check_morphism(ProjectionMap(3, [2]), bryant, circle_shift)
