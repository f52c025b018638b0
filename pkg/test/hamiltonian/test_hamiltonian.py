"""
Unit tests for potential wells, cotangent lifts and the wave equation.
"""
import numpy as np
import pytest

from pywell.differentiation import FiniteDifference
from pywell.feature_library import TrigPoly
from pywell.flows import integrate
from pywell.hamiltonian import cotangent_lift
from pywell.hamiltonian import energy
from pywell.hamiltonian import integrate_nlw
from pywell.hamiltonian import integrate_well
from pywell.hamiltonian import laplacian
from pywell.hamiltonian import leapfrog_path
from pywell.hamiltonian import leapfrog_step
from pywell.hamiltonian import max_stable_step
from pywell.hamiltonian import nlw_energy
from pywell.hamiltonian import nlw_state_at
from pywell.hamiltonian import NLWState
from pywell.hamiltonian import PolynomialPotential
from pywell.hamiltonian import potential_from_spec
from pywell.hamiltonian import RBFPotential
from pywell.hamiltonian import smoothstep
from pywell.hamiltonian import smoothstep_derivative
from pywell.hamiltonian import StabilityError
from pywell.hamiltonian import symplectic_defect
from pywell.hamiltonian import TrigPotential
from pywell.hamiltonian import WellState
from pywell.utils import SpecError


@pytest.fixture
def rbf():
    return RBFPotential(
        [[0.0, 0.0], [1.0, -0.5]], [1.0, -0.3], 0.7, tau=2.0, radius=1.0
    )


def test_polynomial_values(harmonic, quartic):
    assert harmonic.value([1.0, 0.0]) == 0.5
    np.testing.assert_allclose(harmonic.gradient([1.0, 2.0]), [1.0, 2.0])
    assert quartic([1.0, 1.0]) == pytest.approx(1.5)
    np.testing.assert_allclose(quartic.gradient([1.0, 0.0]), [2.0, 0.0])
    assert harmonic.value(np.ones((4, 3, 2))).shape == (4, 3)


def test_polynomial_validation():
    with pytest.raises(ValueError):
        PolynomialPotential(2, [((1,), 1.0)])
    with pytest.raises(ValueError):
        PolynomialPotential(1, [((-1,), 1.0)])
    with pytest.raises(ValueError):
        PolynomialPotential(0)
    with pytest.raises(ValueError):
        PolynomialPotential.harmonic(2).value([1.0])


def test_zero_potential():
    V = PolynomialPotential.zero(2)
    assert V.value([3.0, 4.0]) == 0.0
    np.testing.assert_array_equal(V.gradient([3.0, 4.0]), [0.0, 0.0])
    assert not V.coercive


@pytest.mark.parametrize(
    "V, constants",
    [
        (PolynomialPotential.harmonic(2, omega=2.0), (2.0, 0.0)),
        (PolynomialPotential.quartic(3), (0.5, 0.0)),
        (PolynomialPotential(1, [((3,), 1.0)]), None),
        (PolynomialPotential(1, [((2,), -1.0)]), None),
        (PolynomialPotential(2, [((2, 0), 1.0)]), None),
        (PolynomialPotential(2, [((2, 0), 1.0), ((1, 1), 0.1), ((0, 2), 1.0)]), None),
    ],
)
def test_coercivity(V, constants):
    assert V.coercivity_constants() == constants
    assert V.coercive == (constants is not None)


def test_trig_potential():
    V = TrigPotential(TrigPoly.cos((1,)))
    assert V.value([0.0]) == pytest.approx(1.0)
    np.testing.assert_allclose(V.gradient([0.25]), [-2 * np.pi])
    assert not V.coercive
    with pytest.raises(TypeError):
        TrigPotential(1.0)


def test_smoothstep():
    s = np.array([-1.0, 0.0, 0.5, 1.0, 2.0])
    np.testing.assert_allclose(smoothstep(s), [0.0, 0.0, 0.5, 1.0, 1.0])
    np.testing.assert_allclose(smoothstep_derivative(s), [0.0, 0.0, 30 / 16, 0.0, 0.0])


def test_rbf_value_and_coercivity(rbf):
    bump = RBFPotential([[0.0, 0.0]], [1.0], 1.0)
    assert bump.value([0.0, 0.0]) == pytest.approx(1.0)
    assert not bump.coercive
    assert rbf.coercive
    tau, K = rbf.coercivity_constants()
    assert tau == 2.0
    assert K == pytest.approx(1.3 + 2.0 * 4.0)


@pytest.mark.parametrize("q", [[0.3, 0.2], [1.2, -0.7], [2.5, 1.0]])
def test_rbf_gradient(rbf, q):
    q = np.array(q)
    h = 1e-6
    numeric = [
        (rbf.value(q + h * e) - rbf.value(q - h * e)) / (2 * h) for e in np.eye(2)
    ]
    np.testing.assert_allclose(rbf.gradient(q), numeric, atol=1e-6)


def test_rbf_validation():
    with pytest.raises(ValueError):
        RBFPotential([[0.0]], [1.0, 2.0], 1.0)
    with pytest.raises(ValueError):
        RBFPotential([[0.0]], [1.0], 0.0)
    with pytest.raises(ValueError):
        RBFPotential([[0.0]], [1.0], 1.0, tau=-1.0)
    with pytest.raises(ValueError):
        RBFPotential([[0.0]], [1.0], 1.0, transition=0.0)


@pytest.mark.parametrize(
    "V",
    [
        pytest.lazy_fixture("quartic"),
        pytest.lazy_fixture("rbf"),
        TrigPotential(TrigPoly.sin((1, 2), 0.5) + 1.0),
    ],
)
def test_potential_from_spec(V):
    rebuilt = potential_from_spec(V.to_spec())
    q = np.array([0.3, -1.1])
    assert type(rebuilt) is type(V)
    assert rebuilt.value(q) == pytest.approx(V.value(q))
    np.testing.assert_allclose(rebuilt.gradient(q), V.gradient(q))


@pytest.mark.parametrize(
    "spec",
    [
        {"kind": "cubic", "dim": 1},
        {"dim": 1, "terms": []},
        {"kind": "polynomial", "dim": 2, "terms": [[[1], 1.0]]},
        {"kind": "rbf", "centers": [[0.0]], "weights": [1.0], "width": -1.0},
    ],
)
def test_potential_from_spec_errors(spec):
    with pytest.raises(SpecError):
        potential_from_spec(spec)


def test_well_state():
    s = WellState([1.0, 2.0], [3.0, 4.0])
    assert s.dim == 2
    np.testing.assert_array_equal(s.reversed().p, [-3.0, -4.0])
    np.testing.assert_array_equal(s.as_array(), [1.0, 2.0, 3.0, 4.0])
    assert WellState(1.0, 0.5).dim == 1
    with pytest.raises(ValueError):
        WellState([1.0, 2.0], [3.0])
    with pytest.raises(ValueError):
        WellState([np.nan], [0.0])


def test_energy(harmonic):
    assert energy(harmonic, WellState([1.0, 0.0], [0.0, 2.0])) == 2.5
    with pytest.raises(ValueError):
        energy(harmonic, WellState([1.0], [0.0]))


def test_leapfrog_step_matches_path(quartic):
    q0, p0 = np.array([0.4, -0.2]), np.array([0.1, 0.3])
    q, p = q0, p0
    for _ in range(5):
        q, p = leapfrog_step(quartic, q, p, 0.01)
    q_path, p_path = leapfrog_path(quartic, q0, p0, 0.01, 5, record=False)
    np.testing.assert_allclose(q, q_path, atol=1e-15)
    np.testing.assert_allclose(p, p_path, atol=1e-15)


def test_leapfrog_jacobian_harmonic():
    V = PolynomialPotential.harmonic(1)
    dt = 0.1
    fd = FiniteDifference(step=1e-6)

    def step(z):
        return np.concatenate(leapfrog_step(V, z[:1], z[1:], dt))

    J = fd.jacobian(step, [0.3, -0.2])
    expected = [[1 - dt ** 2 / 2, dt], [-dt * (1 - dt ** 2 / 4), 1 - dt ** 2 / 2]]
    np.testing.assert_allclose(J, expected, atol=1e-8)
    assert np.linalg.det(J) == pytest.approx(1.0, abs=1e-8)
    assert symplectic_defect(V, WellState([0.3], [-0.2]), dt) < 1e-8


@pytest.mark.parametrize("dt", [1e-3, 0.05, 0.2])
def test_leapfrog_is_symplectic(quartic, rng, dt):
    for _ in range(5):
        s = WellState(rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2))
        assert symplectic_defect(quartic, s, dt) < 1e-7


def test_symplectic_defect_validation(quartic):
    with pytest.raises(ValueError):
        symplectic_defect(quartic, WellState([0.1], [0.2]), 0.1)
    with pytest.raises(ValueError):
        symplectic_defect(quartic, WellState([0.1, 0.0], [0.2, 0.0]), 0.0)


def test_harmonic_oscillator():
    V = PolynomialPotential.harmonic(1)
    traj = integrate_well(V, WellState([1.0], [0.0]), 1.0, 1e-3)
    assert traj.times[-1] == pytest.approx(1.0)
    assert traj.last_state.q[0] == pytest.approx(np.cos(1.0), abs=1e-6)
    assert traj.last_state.p[0] == pytest.approx(-np.sin(1.0), abs=1e-6)


@pytest.mark.parametrize(
    "V", [pytest.lazy_fixture("harmonic"), pytest.lazy_fixture("quartic")]
)
def test_energy_conservation(V):
    s0 = WellState([1.0, -0.5], [0.2, 0.7])
    traj = integrate_well(V, s0, 10.0, 1e-2)
    energies = traj.energies(V)
    assert np.max(np.abs(energies - energy(V, s0))) < 1e-3 * energy(V, s0)


def test_time_reversibility(quartic):
    q0, p0 = np.array([0.8, -0.3]), np.array([0.5, 0.1])
    q, p = leapfrog_path(quartic, q0, p0, 0.01, 500, record=False)
    q_back, p_back = leapfrog_path(quartic, q, -p, 0.01, 500, record=False)
    np.testing.assert_allclose(q_back, q0, atol=1e-10)
    np.testing.assert_allclose(-p_back, p0, atol=1e-10)


def test_well_trajectory(harmonic, tmp_path):
    traj = integrate_well(harmonic, WellState([1.0, 0.0], [0.0, 1.0]), 0.1, 0.05)
    assert traj.q.shape == traj.p.shape == (3, 2)
    assert traj.state(0).dim == 2
    path = tmp_path / "well.csv"
    traj.to_csv(path)
    assert path.read_text().splitlines()[0] == "t,q1,q2,p1,p2"
    with pytest.raises(ValueError):
        integrate_well(harmonic, WellState([1.0], [0.0]), 1.0, 0.1)
    with pytest.raises(ValueError):
        integrate_well(harmonic, WellState([1.0, 0.0], [0.0, 1.0]), 0.0, 0.1)


def test_lift_zero_section(bryant):
    lift = cotangent_lift(bryant)
    q0 = np.array([0.1, 0.3])
    s0 = lift.zero_section(q0)
    np.testing.assert_array_equal(s0, [0.1, 0.3, 0.0, 0.0])
    traj = lift.integrate(s0, 1.0, 1e-2)
    base = integrate(bryant, q0, 1.0, 1e-2)
    np.testing.assert_allclose(traj.points[:, 2:], 0.0)
    np.testing.assert_allclose(traj.points[:, :2], base.points, atol=1e-14)


def test_lift_conserves_hamiltonian(bryant):
    lift = cotangent_lift(bryant)
    traj = lift.integrate([0.1, 0.3, 0.5, -1.0], 0.5, 1e-3)
    H = lift.hamiltonian(traj.points[:, :2], traj.points[:, 2:])
    assert np.max(np.abs(H - H[0])) < 1e-7


def test_lift_of_rotation_keeps_momentum(rotation):
    lift = cotangent_lift(rotation)
    assert lift.dim == 4
    np.testing.assert_allclose(lift.field([0.2, 0.4, 3.0, -1.0]), [1.0, 0.5, 0, 0])
    traj = lift.integrate([0.0, 0.0, 3.0, -1.0], 0.5, 0.1)
    np.testing.assert_allclose(traj.points[-1], [0.5, 0.25, 3.0, -1.0], atol=1e-14)


def test_nlw_state_validation():
    with pytest.raises(ValueError):
        NLWState(np.zeros(6), np.zeros(6))
    with pytest.raises(ValueError):
        NLWState(np.zeros((8, 2)), np.zeros((8, 1)))
    with pytest.raises(NotImplementedError):
        NLWState(np.zeros(8), np.zeros(8), d=2)
    state = NLWState(np.zeros(8), np.ones(8))
    assert (state.N, state.dim) == (8, 1)
    assert state.sample(3).p[0] == 1.0


def test_max_stable_step():
    assert max_stable_step(16) == pytest.approx(1 / (16 * np.pi))


def test_stability_error(harmonic):
    s0 = NLWState.from_well(WellState([1.0, 0.0], [0.0, 0.0]), 16)
    with pytest.raises(StabilityError):
        integrate_nlw(harmonic, s0, 1.0, 0.1)


def test_spectral_derivatives():
    x = np.arange(16) / 16
    Q = np.sin(2 * np.pi * x)[:, None]
    np.testing.assert_allclose(laplacian(Q), -((2 * np.pi) ** 2) * Q, atol=1e-10)
    np.testing.assert_array_equal(laplacian(np.full((8, 2), 3.0)), 0.0)


def test_constant_data_reduces_to_well(quartic):
    s = WellState([0.6, -0.2], [0.1, 0.4])
    N, dt = 8, max_stable_step(8) / 2
    traj = integrate_nlw(quartic, NLWState.from_well(s, N), 0.5, dt)
    final = nlw_state_at(traj, -1)
    assert final.is_constant(1e-12)
    q, p = leapfrog_path(quartic, s.q, s.p, traj.step_size, len(traj) - 1, False)
    np.testing.assert_allclose(final.Q[0], q, atol=1e-12)
    np.testing.assert_allclose(final.P[0], p, atol=1e-12)


def test_linear_wave():
    x = np.arange(16) / 16
    s0 = NLWState(np.sin(2 * np.pi * x), np.zeros(16))
    V = PolynomialPotential.zero(1)
    dt = max_stable_step(16) / 2
    traj = integrate_nlw(V, s0, 0.25, dt, record_every=10)
    # u(t, x) = cos(2 pi t) sin(2 pi x) vanishes at t = 1/4
    assert traj.times[-1] == pytest.approx(0.25)
    np.testing.assert_allclose(nlw_state_at(traj, -1).Q, 0.0, atol=1e-3)
    assert nlw_energy(V, s0) == pytest.approx(np.pi ** 2)
    energies = [nlw_energy(V, nlw_state_at(traj, i)) for i in range(len(traj))]
    np.testing.assert_allclose(energies, np.pi ** 2, rtol=1e-2)


def test_nlw_energy_includes_nyquist_mode():
    N = 8
    zigzag = (-1.0) ** np.arange(N)
    np.testing.assert_allclose(
        laplacian(zigzag[:, None])[:, 0], -((np.pi * N) ** 2) * zigzag, atol=1e-9
    )
    s = NLWState(zigzag, np.zeros(N))
    assert nlw_energy(PolynomialPotential.zero(1), s) == pytest.approx(
        (np.pi * N) ** 2 / 2
    )


def _nlw_relative_drift(T):
    N = 32
    x = np.arange(N) / N
    s0 = NLWState(0.5 * np.sin(2 * np.pi * x), np.zeros(N))
    V = PolynomialPotential.quartic(1)
    traj = integrate_nlw(V, s0, T, 1e-4, record_every=100)
    energies = np.array(
        [nlw_energy(V, nlw_state_at(traj, i)) for i in range(len(traj))]
    )
    return float(np.max(np.abs(energies - energies[0])) / energies[0])


def test_nlw_energy_drift():
    assert _nlw_relative_drift(1.0) < 1e-5


@pytest.mark.slow
def test_nlw_energy_drift_long_run():
    assert _nlw_relative_drift(10.0) < 1e-5
