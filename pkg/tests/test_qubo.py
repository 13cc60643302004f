import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bosonic_regression.errors import CapacityError
from bosonic_regression.experiments import exact_quadratures
from bosonic_regression.qubo import (
    PrecisionVector,
    discretization_report,
    encode,
    solve_exact,
)
from bosonic_regression.regression import RegressionProblem, cost, least_squares_solution, random_problem


def _prob(A, B):
    return RegressionProblem(np.array(A, float), np.array(B, float))


def test_precision_vector_validation():
    assert PrecisionVector((-2, 1, 0.5, 0.125)).bits_per_parameter == 4
    for bad in [(0,), (3,), (1, 0.3), ()]:
        with pytest.raises(ValueError):
            PrecisionVector(bad)


def test_default_family():
    assert PrecisionVector.descending(4).entries == (2.0, 1.0, 0.5, 0.25)
    assert PrecisionVector.descending(3, signed=True).entries == (-4.0, 2.0, 1.0)


def test_single_bit_objective_table():
    q = encode(_prob([[1]], [2]), PrecisionVector((1,)))
    assert q.objective([0]) == 0.0
    assert q.objective([1]) == -1.0
    assignment, obj, theta = solve_exact(q)
    assert obj == -1.0 and theta.tolist() == [1.0] and assignment.tolist() == [1]


def test_decode_all_zeros():
    q = encode(random_problem(np.random.default_rng(0), 2), PrecisionVector.descending(3))
    zeros = np.zeros(q.num_bits)
    assert q.decode(zeros).tolist() == [0.0, 0.0]
    assert q.objective(zeros) == 0.0


def test_objective_equals_cost_on_random_assignments(rng):
    p = random_problem(rng, 3)
    q = encode(p, PrecisionVector((-2, 1, 0.5, 0.25, 0.125)))
    for _ in range(100):
        bits = rng.integers(0, 2, q.num_bits)
        assert q.objective(bits) == pytest.approx(cost(p, q.decode(bits)), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_objective_identity_exhaustive(M, K, seed):
    p = random_problem(np.random.default_rng(seed), M)
    q = encode(p, PrecisionVector.descending(K, signed=True))
    for bits in itertools.product((0, 1), repeat=q.num_bits):
        assert q.objective(bits) == pytest.approx(cost(p, q.decode(bits)), abs=1e-12)


def test_decode_is_weighted_bit_sum():
    pv = PrecisionVector((2, -1, 0.25))
    q = encode(random_problem(np.random.default_rng(1), 2), pv)
    bits = np.array([1, 1, 0, 0, 1, 1])
    np.testing.assert_array_equal(q.decode(bits), [2 - 1, -1 + 0.25])
    assert q.variable_index(1, 2) == 5


def test_capacity():
    p = random_problem(np.random.default_rng(0), 3)
    with pytest.raises(CapacityError):
        encode(p, PrecisionVector.descending(9))


def test_tie_break_lowest_binary_value():
    # theta in {0, 1, 1} via P = [1, 1]: both single-bit assignments tie
    q = encode(_prob([[1]], [2]), PrecisionVector((1, 1)))
    assignment, obj, _ = solve_exact(q)
    assert obj == -1.0
    assert assignment.tolist() == [0, 1]


def test_iris_grid_matches_direct_enumeration(iris_m1):
    pv = PrecisionVector((1, 0.5, 0.25, 0.125))
    _, obj, theta = solve_exact(encode(iris_m1, pv))
    grid = [k / 8 for k in range(16)]
    best = min(grid, key=lambda t: cost(iris_m1, [t]))
    assert theta[0] == best
    assert obj == pytest.approx(cost(iris_m1, [best]), abs=1e-12)
    assert obj >= cost(iris_m1, least_squares_solution(iris_m1))


def test_exactly_representable_optimum_has_zero_gap():
    p = RegressionProblem.from_design(np.ones((2, 1)), np.full(2, 0.8125))
    assert least_squares_solution(p)[0] == pytest.approx(0.8125, abs=1e-15)
    # 0.8125 = 1/2 + 1/4 + 1/16: first reachable at K=4 for [1/2, ..., 2^-K]
    halves = discretization_report(p, [PrecisionVector(tuple(2.0 ** -(k + 1) for k in range(K))) for K in range(1, 7)])
    by_K = {r.K: r for r in halves}
    assert by_K[4].gap == pytest.approx(0.0, abs=1e-15)
    assert by_K[4].theta[0] == 0.8125
    assert by_K[3].gap > 0
    # and at K=5 for [1, ..., 2^(1-K)]
    ones = {r.K: r for r in discretization_report(p, [PrecisionVector(tuple(2.0**-k for k in range(K))) for K in range(1, 7)])}
    assert ones[4].gap > 0
    assert ones[5].gap == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("seed", range(5))
def test_gap_non_increasing_and_bounded(seed):
    p = random_problem(np.random.default_rng(seed), 2)
    rows = discretization_report(p, [PrecisionVector.descending(K, signed=True) for K in range(1, 9)])
    gaps = [r.gap for r in rows]
    assert all(g >= 0 for g in gaps)
    assert all(b <= a + 1e-15 for a, b in zip(gaps, gaps[1:]))
    assert [r.K for r in rows] == list(range(1, 9))


def test_continuous_beats_coarse_discrete(iris_m1):
    c = cost(iris_m1, exact_quadratures(iris_m1, 12))
    for r in discretization_report(iris_m1, [PrecisionVector.descending(K) for K in (1, 2, 3)]):
        assert c < r.objective
