"""
Unit tests for adapted metrics, embeddings and extended potentials.
"""
import numpy as np
import pytest

from pywell.embedder import build_metric
from pywell.embedder import build_potential
from pywell.embedder import cutoff
from pywell.embedder import EmbeddingError
from pywell.embedder import estimate_reach
from pywell.embedder import ExtendedPotential
from pywell.embedder import flat_embedding
from pywell.embedder import generates_lattice
from pywell.embedder import MetricField
from pywell.embedder import NotStronglyAdaptedError
from pywell.embedder import optimize_embedding
from pywell.embedder import tautological_form
from pywell.embedder import verify_embedding
from pywell.feature_library import TrigPoly
from pywell.forms import OneForm
from pywell.hamiltonian import PolynomialPotential
from pywell.hamiltonian import potential_from_spec

RADIUS = 1 / (2 * np.pi)


@pytest.fixture
def circle_metric(circle_shift):
    return build_metric(circle_shift, OneForm.coordinate(1, 0))


@pytest.fixture
def circle_embedding(circle_metric):
    return flat_embedding(circle_metric)


@pytest.fixture
def circle_potential(circle_embedding):
    return build_potential(circle_embedding)


def test_metric_field_identity():
    g = MetricField.identity(2)
    assert g.is_constant()
    np.testing.assert_array_equal(g.constant_part(), np.eye(2))
    assert g(np.zeros((5, 2))).shape == (5, 2, 2)
    assert g.min_eigenvalue() == (1.0, 0.0)
    assert g.to_spec()["kind"] == "metric"


def test_metric_field_validation():
    with pytest.raises(ValueError):
        MetricField([])
    with pytest.raises(ValueError):
        MetricField([[TrigPoly.constant(1, 1.0), TrigPoly.constant(1, 0.0)]])
    one, zero = TrigPoly.constant(2, 1.0), TrigPoly.zero(2)
    with pytest.raises(ValueError):
        MetricField([[one, TrigPoly.sin((1, 0))], [zero, one]])
    with pytest.raises(ValueError):
        MetricField([[one, zero], [zero, TrigPoly.constant(1, 1.0)]])


def test_metric_duality(rotation, dx):
    metric = build_metric(rotation, dx)
    assert metric.C == 1.0
    assert metric.duality_residual < 1e-12
    assert metric.is_constant(1e-12)
    np.testing.assert_allclose(metric.constant_part() @ [1.0, 0.5], [1.0, 0.0])
    assert metric.certified_min_eigenvalue() >= 1e-3


def test_metric_with_varying_theta(circle_shift):
    wobbly = OneForm([TrigPoly.constant(1, 1.0) + TrigPoly.sin((1,), 0.5)])
    metric = build_metric(circle_shift, wobbly)
    assert not metric.is_constant()
    assert metric.duality_residual < 1e-12
    assert metric.entries[0][0].max_difference(wobbly.components[0]) < 1e-12


def test_metric_on_product(bryant_x_circle):
    metric = build_metric(bryant_x_circle, OneForm.coordinate(3, 2))
    assert metric.dim == 3
    assert metric.duality_residual < 1e-12
    assert metric.certified_min_eigenvalue() >= 1e-3


def test_metric_needs_strong_form(rotation, weak_form, dx):
    with pytest.raises(NotStronglyAdaptedError):
        build_metric(rotation, weak_form)
    with pytest.raises(ValueError):
        build_metric(rotation, dx, g0=MetricField.identity(3))


@pytest.mark.parametrize(
    "freqs, expected",
    [
        ([(1, 0), (0, 1)], True),
        ([(2, 0), (0, 1)], False),
        ([(1, 1), (1, -1)], False),
        ([(1, 1), (1, -1), (1, 0)], True),
        ([], False),
    ],
)
def test_generates_lattice(freqs, expected):
    assert generates_lattice(freqs) == expected


def test_flat_embedding_of_square_torus():
    q = flat_embedding(MetricField.identity(2))
    assert q.m == 4
    assert q.residual < 1e-12
    assert q.immersion_bound() == pytest.approx(1.0)
    assert q.injectivity_gap() > 0


def test_flat_embedding_of_circle(circle_embedding):
    assert circle_embedding.m == 2
    assert circle_embedding.flow is not None
    np.testing.assert_allclose(circle_embedding.gram([[0.3]]), [[[1.0]]])
    norms = np.linalg.norm(circle_embedding(np.linspace(0, 1, 5)[:, None]), axis=-1)
    np.testing.assert_allclose(norms, RADIUS)


def test_flat_embedding_skew_metric(rotation, dx):
    q = flat_embedding(build_metric(rotation, dx))
    # two coordinate circles and one diagonal circle
    assert q.m == 6
    assert q.residual < 1e-12


def test_flat_embedding_errors(circle_shift):
    wobbly = OneForm([TrigPoly.constant(1, 1.0) + TrigPoly.sin((1,), 0.5)])
    with pytest.raises(ValueError):
        flat_embedding(build_metric(circle_shift, wobbly))
    with pytest.raises(EmbeddingError):
        flat_embedding(MetricField.constant([[1.0, 2.0], [2.0, 1.0]]))
    # not diagonally dominant and not reachable with frequencies up to 1
    with pytest.raises(EmbeddingError):
        flat_embedding(MetricField.constant([[1.0, 1.5], [1.5, 3.0]]), max_frequency=1)


def test_momentum_along_flow(circle_embedding, circle_shift):
    y = np.array([[0.0], [0.25], [0.7]])
    s = circle_embedding.state(y)
    np.testing.assert_allclose(np.linalg.norm(s.p, axis=-1), 1.0)
    # p is tangent to the circle
    np.testing.assert_allclose(np.sum(s.q * s.p, axis=-1), 0.0, atol=1e-15)
    bare = flat_embedding(MetricField.identity(1))
    with pytest.raises(ValueError):
        bare.p
    assert len(bare.with_flow(circle_shift).p) == 2


def test_tautological_form(circle_embedding):
    taut = tautological_form(circle_embedding)
    assert taut.components[0].max_difference(TrigPoly.constant(1, 1.0)) < 1e-12


def test_optimize_embedding():
    q = optimize_embedding(MetricField.identity(1), m=4)
    assert q.m == 4
    assert q.converged
    assert q.residual < 1e-10
    with pytest.raises(ValueError):
        optimize_embedding(MetricField.identity(1), m=3)


def test_cutoff():
    s = np.array([0.0, 1 / 3, 0.5, 2 / 3, 1.0])
    np.testing.assert_allclose(cutoff(s), [1.0, 1.0, 0.5, 0.0, 0.0])


def test_estimate_reach(circle_embedding):
    assert estimate_reach(circle_embedding) == pytest.approx(RADIUS, rel=1e-9)


def test_extended_potential(circle_potential):
    V = circle_potential
    assert V.dim == 2
    assert V.reach == pytest.approx(RADIUS, rel=1e-9)
    assert V.eps == pytest.approx(RADIUS / 2, rel=1e-9)
    assert V.gradient_residual_ < 1e-8
    assert V.tangential_residual_ < 1e-10
    # far from the circle only the quadratic tail is left
    assert V.value([10.0, 0.0]) == pytest.approx(100.0)
    np.testing.assert_allclose(V.gradient([10.0, 0.0]), [20.0, 0.0])
    assert V.coercive
    y = np.array([[0.2]])
    np.testing.assert_allclose(V.project(V.embedding(y) * 1.1, y + 0.01), y)


def test_extended_potential_spec(circle_potential, tmp_path):
    rebuilt = potential_from_spec(circle_potential.to_spec())
    assert isinstance(rebuilt, ExtendedPotential)
    z = np.array([0.1, 0.12])
    assert rebuilt.value(z) == pytest.approx(circle_potential.value(z))
    path = tmp_path / "potential.csv"
    circle_potential.to_csv(path)
    assert path.read_text().splitlines()[0] == "y1,z1,z2,V0,n1,n2"


def test_verify_embedding(circle_shift, circle_embedding, circle_potential):
    y0 = np.array([[0.1], [0.6]])
    report = verify_embedding(
        circle_shift, circle_embedding, circle_potential, y0, 0.5, n_checkpoints=5
    )
    assert report.deviation.shape == (2, 6)
    assert report.times[-1] == pytest.approx(0.5)
    assert report.passed
    assert report.max_deviation == max(report.max_q_deviation, report.max_p_deviation)
    assert report.energy_drift < 1e-4


def test_verify_embedding_initial_checkpoint(
    circle_shift, circle_embedding, circle_potential
):
    # samples off [0, 1) start on the same image point
    y0 = np.array([[1.1], [-0.4]])
    report = verify_embedding(
        circle_shift, circle_embedding, circle_potential, y0, 0.2, n_checkpoints=2
    )
    assert report.times[0] == 0.0
    assert len(report.times) == report.deviation.shape[1] == 3
    np.testing.assert_array_equal(report.deviation[:, 0], 0.0)
    assert np.all(report.deviation[:, 1:] < 1e-4)


def test_verify_embedding_dimension_mismatch(circle_shift, circle_embedding):
    with pytest.raises(ValueError):
        verify_embedding(
            circle_shift,
            circle_embedding,
            PolynomialPotential.harmonic(3),
            [[0.1]],
            1.0,
        )
