import math

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from bosonic_regression.errors import (
    DimensionMismatchError,
    InvalidDimensionError,
    ModeIndexError,
    NonHermitianError,
)
from bosonic_regression.fock import (
    HermitianOperator,
    ModeSpace,
    StateVector,
    build_annihilation,
    build_creation,
    coherent_state,
    commutator,
    expectation,
    fock_state,
    identity,
    lift_to_mode,
    number_operator,
    quadrature,
    vacuum,
)


def test_mode_space_dimension():
    assert ModeSpace(3, 4).dim == 64
    assert ModeSpace(1, 1).dim == 1
    with pytest.raises(InvalidDimensionError):
        ModeSpace(0, 3)


def test_occupation_ordering_mode0_slowest():
    space = ModeSpace(2, 3)
    assert space.occupations[:4].tolist() == [[0, 0], [0, 1], [0, 2], [1, 0]]
    assert space.index_of((1, 2)) == 5


def test_annihilation_small_cases():
    assert build_annihilation(1).toarray().tolist() == [[0]]
    np.testing.assert_array_equal(build_annihilation(2).toarray(), [[0, 1], [0, 0]])
    a3 = build_annihilation(3).toarray()
    expected = np.zeros((3, 3))
    expected[0, 1] = 1.0
    expected[1, 2] = math.sqrt(2)
    np.testing.assert_allclose(a3, expected, atol=0)


def test_annihilation_rejects_zero_dimension():
    with pytest.raises(InvalidDimensionError):
        build_annihilation(0)


@given(st.integers(min_value=1, max_value=25))
def test_annihilation_ladder(d):
    a = build_annihilation(d)
    for n in range(d):
        e = np.zeros(d)
        e[n] = 1.0
        out = a @ e
        expected = np.zeros(d)
        if n >= 1:
            expected[n - 1] = math.sqrt(n)
        np.testing.assert_allclose(out, expected, atol=1e-15)


@pytest.mark.parametrize("d", [1, 2, 3, 7, 12])
def test_truncated_commutator(d):
    a = build_annihilation(d)
    c = commutator(a, build_creation(d)).toarray()
    expected = np.eye(d)
    expected[d - 1, d - 1] = 1 - d
    np.testing.assert_allclose(c, expected, atol=1e-12)


def test_lift_identity_and_kron():
    space = ModeSpace(2, 2)
    I2 = sp.identity(2)
    for m in range(2):
        np.testing.assert_array_equal(lift_to_mode(I2, m, space).toarray(), np.eye(4))
    a = build_annihilation(2)
    np.testing.assert_array_equal(lift_to_mode(a, 0, space).toarray(), np.kron(a.toarray(), np.eye(2)))
    np.testing.assert_array_equal(lift_to_mode(a, 1, space).toarray(), np.kron(np.eye(2), a.toarray()))


def test_lift_errors():
    space = ModeSpace(2, 3)
    with pytest.raises(ModeIndexError):
        lift_to_mode(build_annihilation(3), 2, space)
    with pytest.raises(DimensionMismatchError):
        lift_to_mode(build_annihilation(4), 0, space)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 3), st.integers(2, 5), st.data())
def test_distinct_modes_commute(M, d, data):
    space = ModeSpace(M, d)
    m = data.draw(st.integers(0, M - 1))
    l = data.draw(st.integers(0, M - 1).filter(lambda x: x != m))
    x = lift_to_mode(build_annihilation(d), m, space)
    y = lift_to_mode(build_creation(d), l, space)
    assert abs(commutator(x, y)).max() == 0


def test_expectation_trivial_values():
    space = ModeSpace(1, 6)
    assert expectation(number_operator(space, 0), vacuum(space)) == 0.0
    assert expectation(quadrature(space, 0), fock_state(space, (1,))) == 0.0


def test_quadrature_on_coherent_state_matches_amplitude():
    # coherent amplitudes built independently of the library helper
    d, alpha = 16, 0.5
    n = np.arange(d)
    amps = np.exp(-(alpha**2) / 2) * alpha**n / np.sqrt([math.factorial(k) for k in n])
    amps = amps / np.linalg.norm(amps)
    space = ModeSpace(1, d)
    psi = StateVector(space, amps)
    assert expectation(quadrature(space, 0), psi) == pytest.approx(0.5, abs=1e-6)
    np.testing.assert_allclose(coherent_state(space, [alpha]).amplitudes, amps, atol=1e-14)


def test_quadrature_small_matrix():
    np.testing.assert_allclose(quadrature(ModeSpace(1, 2), 0).toarray(), [[0, 0.5], [0.5, 0]])


@pytest.mark.parametrize("M", [1, 2, 3])
@pytest.mark.parametrize("d", range(2, 9))
def test_quadrature_is_hermitian_and_zero_on_vacuum(M, d):
    space = ModeSpace(M, d)
    for m in range(M):
        x = quadrature(space, m)
        assert (x.matrix != x.matrix.conj().T).nnz == 0
        assert expectation(x, vacuum(space)) == 0.0


def test_quadrature_bad_index():
    with pytest.raises(ModeIndexError):
        quadrature(ModeSpace(2, 3), 5)


def test_hermitian_operator_rejects_bare_annihilation():
    with pytest.raises(NonHermitianError):
        HermitianOperator(ModeSpace(1, 3), build_annihilation(3))


def test_hermitian_operator_arithmetic():
    space = ModeSpace(1, 3)
    n = number_operator(space, 0)
    np.testing.assert_allclose((2.0 * n + identity(space)).diagonal().real, [1, 3, 5])
    with pytest.raises(NonHermitianError):
        n * 1j


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(2, 5), st.integers(0, 2**32 - 1))
def test_expectation_real_on_random_states(M, d, seed):
    rng = np.random.default_rng(seed)
    space = ModeSpace(M, d)
    raw = rng.standard_normal((space.dim, space.dim)) + 1j * rng.standard_normal((space.dim, space.dim))
    op = HermitianOperator(space, (raw + raw.conj().T) / 2)
    psi = StateVector.normalized(space, rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim))
    value = expectation(op, psi)
    assert isinstance(value, float)


def test_state_vector_norm_checked():
    space = ModeSpace(1, 2)
    with pytest.raises(ValueError):
        StateVector(space, [1.0, 1.0])
    with pytest.raises(DimensionMismatchError):
        StateVector(space, [1.0])


def test_expectation_space_mismatch():
    with pytest.raises(DimensionMismatchError):
        expectation(number_operator(ModeSpace(1, 3), 0), vacuum(ModeSpace(1, 4)))


def test_expectation_rejects_imaginary_residual():
    from bosonic_regression.fock import expectation_raw

    psi = np.array([1.0, 1.0j]) / np.sqrt(2)
    with pytest.raises(NonHermitianError):
        expectation_raw(build_annihilation(2), psi)
