import numpy as np
import pytest

from bosonic_regression.dynamics import exact_spectrum
from bosonic_regression.errors import DimensionMismatchError, ScheduleError
from bosonic_regression.fock import ModeSpace, commutator, expectation, number_operator, quadrature, vacuum
from bosonic_regression.hamiltonians import (
    AnnealSchedule,
    build_driver_hamiltonian,
    build_hamiltonian_set,
    build_kerr_hamiltonian,
    build_problem_hamiltonian,
    hamiltonian_at,
    hamiltonian_derivative,
)
from bosonic_regression.regression import RegressionProblem, least_squares_solution, random_problem


def _prob(A, B):
    return RegressionProblem(np.array(A, float), np.array(B, float))


def test_pure_quadratic_is_number_operator():
    space = ModeSpace(1, 6)
    H = build_problem_hamiltonian(_prob([[1]], [0]), space)
    np.testing.assert_allclose(H.toarray(), number_operator(space, 0).toarray(), atol=0)


def test_direct_assembly_d2():
    H = build_problem_hamiltonian(_prob([[1]], [2]), ModeSpace(1, 2))
    np.testing.assert_allclose(H.toarray(), [[0, -1], [-1, 1]], atol=1e-15)


def test_problem_hamiltonian_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        build_problem_hamiltonian(_prob([[1]], [2]), ModeSpace(2, 3))


def test_two_mode_ground_state_displacement():
    p = _prob([[1, 0.3], [0.3, 1]], [1, 1])
    space = ModeSpace(2, 14)
    ground = exact_spectrum(build_problem_hamiltonian(p, space)).ground_state
    x = [expectation(quadrature(space, m), ground) for m in range(2)]
    # A alpha = B/2 -> alpha = 0.5 / 1.3 in both modes
    np.testing.assert_allclose(x, [0.5 / 1.3, 0.5 / 1.3], atol=1e-3)
    np.testing.assert_allclose(x, least_squares_solution(p), atol=1e-3)


def test_cross_terms_follow_substitution_rule():
    # theta_1 theta_2 coefficient: A_12 + A_21 = 2 * 0.3 -> 0.3 (a1 a2^+ + a1^+ a2)
    space = ModeSpace(2, 3)
    H = build_problem_hamiltonian(_prob([[1, 0.3], [0.3, 1]], [0, 0]), space).toarray()
    i01, i10 = space.index_of((0, 1)), space.index_of((1, 0))
    assert H[i01, i10] == pytest.approx(0.3)
    assert H[i10, i01] == pytest.approx(0.3)


def test_driver_hamiltonian():
    np.testing.assert_allclose(build_driver_hamiltonian(ModeSpace(1, 3)).diagonal().real, [0, 1, 2])
    np.testing.assert_allclose(build_driver_hamiltonian(ModeSpace(2, 2)).diagonal().real, [0, 1, 1, 2])
    with pytest.raises(ScheduleError):
        build_driver_hamiltonian(ModeSpace(1, 3), 0.0)


@pytest.mark.parametrize("M,d", [(1, 2), (1, 5), (2, 3), (3, 3)])
def test_vacuum_is_driver_ground_state(M, d):
    space = ModeSpace(M, d)
    Hd = build_driver_hamiltonian(space)
    spec = exact_spectrum(Hd)
    assert spec.ground_energy == 0.0
    assert expectation(Hd, vacuum(space)) == 0.0
    assert spec.gap == pytest.approx(1.0)


def test_kerr_hamiltonian():
    assert build_kerr_hamiltonian(ModeSpace(2, 3), 0.0).matrix.nnz == 0
    np.testing.assert_allclose(build_kerr_hamiltonian(ModeSpace(1, 3), 1.0).diagonal().real, [0, 1, 4])
    np.testing.assert_allclose(build_kerr_hamiltonian(ModeSpace(2, 2), 0.5).diagonal().real, [0, 0.5, 0.5, 1])


@pytest.fixture
def hset():
    p = _prob([[1.2, 0.2], [0.2, 0.8]], [0.7, -0.4])
    sched = AnnealSchedule(7.0, kerr_strength=0.5)
    return build_hamiltonian_set(p, ModeSpace(2, 4), sched), sched


def test_schedule_endpoints_and_midpoint(hset):
    H, sched = hset
    np.testing.assert_array_equal(hamiltonian_at(H, sched, 0.0).toarray(), H.driver.toarray())
    np.testing.assert_array_equal(hamiltonian_at(H, sched, 7.0).toarray(), H.problem.toarray())
    mid = 0.5 * H.driver.toarray() + 0.5 * H.problem.toarray() + 0.25 * H.catalyst.toarray()
    np.testing.assert_allclose(hamiltonian_at(H, sched, 3.5).toarray(), mid, atol=1e-15)
    with pytest.raises(ScheduleError):
        hamiltonian_at(H, sched, 7.5)
    with pytest.raises(ScheduleError):
        hamiltonian_at(H, sched, -0.1)


def test_hermitian_on_grid(hset):
    H, sched = hset
    for t in np.linspace(0, sched.total_time, 101):
        m = hamiltonian_at(H, sched, t).toarray()
        assert np.abs(m - m.conj().T).max() <= 1e-12


def test_diagonal_terms_commute(hset):
    H, _ = hset
    assert H.driver.is_diagonal() and H.catalyst.is_diagonal()
    assert commutator(H.driver.matrix, H.catalyst.matrix).nnz == 0


def test_derivative_at_zero_without_catalyst():
    p = _prob([[1]], [2])
    sched = AnnealSchedule(4.0)
    H = build_hamiltonian_set(p, ModeSpace(1, 5), sched)
    expected = (H.problem.toarray() - H.driver.toarray()) / 4.0
    np.testing.assert_array_equal(hamiltonian_derivative(H, sched, 0.0).toarray(), expected)


def test_derivative_matches_finite_difference(hset):
    H, sched = hset
    t, h = 2.3, 1e-5
    fd = (hamiltonian_at(H, sched, t + h).toarray() - hamiltonian_at(H, sched, t - h).toarray()) / (2 * h)
    np.testing.assert_allclose(hamiltonian_derivative(H, sched, t).toarray(), fd, atol=1e-8)


@pytest.mark.parametrize("seed", range(6))
def test_ground_energy_matches_minimum_cost(seed):
    rng = np.random.default_rng(seed)
    M = seed % 3 + 1
    p = random_problem(rng, M)
    d = 16 if M < 3 else 14
    e0 = exact_spectrum(build_problem_hamiltonian(p, ModeSpace(M, d))).ground_energy
    closed = -0.25 * p.moment @ np.linalg.solve(p.gram, p.moment)
    assert e0 == pytest.approx(closed, rel=1e-3)


def test_schedule_validation():
    with pytest.raises(ScheduleError):
        AnnealSchedule(0.0)
    with pytest.raises(ScheduleError):
        AnnealSchedule(1.0, time_step=2.0)
    with pytest.raises(ScheduleError):
        AnnealSchedule(1.0, driver_frequency=2.0)
    assert AnnealSchedule(1.0, driver_frequency=2.0, omega_override=True).driver_frequency == 2.0


def test_default_step_rule():
    assert AnnealSchedule(1000.0).dt == pytest.approx(0.005)
    assert AnnealSchedule(1000.0).num_steps == 200_000
    assert AnnealSchedule(10.0).dt == pytest.approx(10.0 / 20000)


def test_long_run_step_cap():
    with pytest.warns(RuntimeWarning):
        sched = AnnealSchedule(20000.0)
        assert sched.num_steps == 2_000_000
