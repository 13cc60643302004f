"""Operators and states on truncated multi-mode bosonic Fock spaces.

Mode ordering: mode 0 is the leftmost Kronecker factor, i.e. the slowest
varying index of a flattened basis state.  The basis state
``(n_0, ..., n_{M-1})`` therefore sits at flat index
``sum_m n_m * d**(M - 1 - m)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .errors import (
    DimensionMismatchError,
    InvalidDimensionError,
    ModeIndexError,
    NonHermitianError,
)

HERMITIAN_TOL = 1e-12
IMAG_TOL = 1e-9
NORM_TOL = 1e-9


@dataclass(frozen=True)
class ModeSpace:
    """``num_modes`` bosonic modes, each truncated to ``levels_per_mode`` levels."""

    num_modes: int
    levels_per_mode: int

    def __post_init__(self):
        if int(self.num_modes) != self.num_modes or self.num_modes < 1:
            raise InvalidDimensionError(f"num_modes must be a positive integer, got {self.num_modes}")
        if int(self.levels_per_mode) != self.levels_per_mode or self.levels_per_mode < 1:
            raise InvalidDimensionError(
                f"levels_per_mode must be a positive integer, got {self.levels_per_mode}"
            )

    @property
    def dim(self) -> int:
        return self.levels_per_mode**self.num_modes

    @cached_property
    def occupations(self) -> np.ndarray:
        """(dim, M) integer array of occupation numbers for each flat index."""
        d, M = self.levels_per_mode, self.num_modes
        idx = np.arange(self.dim)
        occ = np.empty((self.dim, M), dtype=np.int64)
        for m in range(M):
            occ[:, m] = (idx // d ** (M - 1 - m)) % d
        return occ

    def index_of(self, occupation) -> int:
        occupation = tuple(occupation)
        if len(occupation) != self.num_modes:
            raise DimensionMismatchError("occupation tuple length must equal num_modes")
        d = self.levels_per_mode
        flat = 0
        for n in occupation:
            if not 0 <= n < d:
                raise InvalidDimensionError(f"occupation {n} outside truncation 0..{d - 1}")
            flat = flat * d + int(n)
        return flat

    def check_mode(self, mode_index: int) -> None:
        if not 0 <= mode_index < self.num_modes:
            raise ModeIndexError(f"mode index {mode_index} out of range for {self.num_modes} modes")


def _max_antihermitian(matrix) -> float:
    diff = matrix - matrix.conj().T
    if sp.issparse(diff):
        return float(abs(diff).max()) if diff.nnz else 0.0
    return float(np.abs(diff).max()) if diff.size else 0.0


@dataclass(frozen=True)
class HermitianOperator:
    """Sparse complex Hermitian matrix acting on ``space``."""

    space: ModeSpace
    matrix: sp.csr_matrix = field(repr=False)

    def __post_init__(self):
        mat = sp.csr_matrix(self.matrix, dtype=np.complex128)
        n = self.space.dim
        if mat.shape != (n, n):
            raise DimensionMismatchError(f"operator shape {mat.shape} does not match space dimension {n}")
        err = _max_antihermitian(mat)
        if err > HERMITIAN_TOL:
            raise NonHermitianError(f"matrix differs from its adjoint by {err:.3e}")
        mat.sum_duplicates()
        mat.eliminate_zeros()
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.space.dim

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()

    def is_diagonal(self) -> bool:
        coo = self.matrix.tocoo()
        return bool(np.all(coo.row == coo.col))

    def diagonal(self) -> np.ndarray:
        return self.matrix.diagonal()

    def _same_space(self, other: HermitianOperator) -> None:
        if other.space != self.space:
            raise DimensionMismatchError("operators live on different mode spaces")

    def __add__(self, other: HermitianOperator) -> HermitianOperator:
        self._same_space(other)
        return HermitianOperator(self.space, self.matrix + other.matrix)

    def __sub__(self, other: HermitianOperator) -> HermitianOperator:
        self._same_space(other)
        return HermitianOperator(self.space, self.matrix - other.matrix)

    def __mul__(self, scalar: float) -> HermitianOperator:
        if np.iscomplexobj(scalar) and np.imag(scalar) != 0:
            raise NonHermitianError("only real scalars preserve Hermiticity")
        return HermitianOperator(self.space, self.matrix * float(np.real(scalar)))

    __rmul__ = __mul__

    def __neg__(self) -> HermitianOperator:
        return self * -1.0

    def apply(self, psi: StateVector) -> np.ndarray:
        if psi.space != self.space:
            raise DimensionMismatchError("operator and state live on different mode spaces")
        return self.matrix @ psi.amplitudes


@dataclass(frozen=True)
class StateVector:
    """Dense complex state on ``space``; normalized at construction."""

    space: ModeSpace
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (self.space.dim,):
            raise DimensionMismatchError(
                f"state of length {amps.shape} does not match space dimension {self.space.dim}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm!r} differs from 1 by more than {NORM_TOL}")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, space: ModeSpace, amplitudes) -> StateVector:
        amps = np.asarray(amplitudes, dtype=np.complex128)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(space, amps / norm)

    @classmethod
    def unchecked(cls, space: ModeSpace, amplitudes) -> StateVector:
        """Wrap amplitudes without the norm check (integrator output keeps its drift)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "space", space)
        object.__setattr__(obj, "amplitudes", np.asarray(amplitudes, dtype=np.complex128))
        return obj

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def build_annihilation(d: int) -> sp.csr_matrix:
    """Single-mode lowering operator, ``a|n> = sqrt(n)|n-1>``."""
    if int(d) != d or d < 1:
        raise InvalidDimensionError(f"truncation dimension must be >= 1, got {d}")
    d = int(d)
    n = np.arange(1, d)
    return sp.csr_matrix(
        (np.sqrt(n).astype(np.complex128), (n - 1, n)), shape=(d, d), dtype=np.complex128
    )


def build_creation(d: int) -> sp.csr_matrix:
    return build_annihilation(d).T.conj().tocsr()


def build_number(d: int) -> sp.csr_matrix:
    if int(d) != d or d < 1:
        raise InvalidDimensionError(f"truncation dimension must be >= 1, got {d}")
    return sp.diags(np.arange(int(d), dtype=np.complex128), format="csr")


def lift_to_mode(op, mode_index: int, space: ModeSpace) -> sp.csr_matrix:
    """Embed a single-mode operator as ``I^(x)m (x) op (x) I^(x)(M-1-m)``."""
    space.check_mode(mode_index)
    op = sp.csr_matrix(op, dtype=np.complex128)
    d = space.levels_per_mode
    if op.shape != (d, d):
        raise DimensionMismatchError(f"single-mode operator shape {op.shape} != ({d}, {d})")
    left = sp.identity(d**mode_index, dtype=np.complex128, format="csr")
    right = sp.identity(d ** (space.num_modes - 1 - mode_index), dtype=np.complex128, format="csr")
    return sp.kron(sp.kron(left, op, format="csr"), right, format="csr")


def annihilation(space: ModeSpace, mode_index: int) -> sp.csr_matrix:
    return lift_to_mode(build_annihilation(space.levels_per_mode), mode_index, space)


def creation(space: ModeSpace, mode_index: int) -> sp.csr_matrix:
    return lift_to_mode(build_creation(space.levels_per_mode), mode_index, space)


def number_operator(space: ModeSpace, mode_index: int) -> HermitianOperator:
    return HermitianOperator(space, lift_to_mode(build_number(space.levels_per_mode), mode_index, space))


def quadrature(space: ModeSpace, mode_index: int) -> HermitianOperator:
    """The readout observable ``(a_m + a_m^dagger) / 2`` on the full space."""
    space.check_mode(mode_index)
    a = build_annihilation(space.levels_per_mode)
    x = (a + a.T.conj()) * 0.5
    return HermitianOperator(space, lift_to_mode(x, mode_index, space))


def identity(space: ModeSpace) -> HermitianOperator:
    return HermitianOperator(space, sp.identity(space.dim, dtype=np.complex128, format="csr"))


def commutator(x, y):
    return x @ y - y @ x


def expectation_raw(matrix, amplitudes: np.ndarray) -> float:
    """``<psi|op|psi>`` on bare arrays, checking the imaginary residual."""
    value = np.vdot(amplitudes, matrix @ amplitudes)
    if abs(value.imag) > IMAG_TOL:
        raise NonHermitianError(f"expectation has imaginary part {value.imag:.3e}")
    return float(value.real)


def expectation(op: HermitianOperator, psi: StateVector) -> float:
    if op.space != psi.space:
        raise DimensionMismatchError("operator and state live on different mode spaces")
    return expectation_raw(op.matrix, psi.amplitudes)


def fock_state(space: ModeSpace, occupation) -> StateVector:
    amps = np.zeros(space.dim, dtype=np.complex128)
    amps[space.index_of(occupation)] = 1.0
    return StateVector(space, amps)


def vacuum(space: ModeSpace) -> StateVector:
    return fock_state(space, (0,) * space.num_modes)


def coherent_state(space: ModeSpace, alphas) -> StateVector:
    """Product of truncated coherent states, renormalized after truncation."""
    alphas = np.atleast_1d(np.asarray(alphas, dtype=np.complex128))
    if alphas.shape != (space.num_modes,):
        raise DimensionMismatchError("need one amplitude per mode")
    d = space.levels_per_mode
    n = np.arange(d)
    log_fact = np.array([math.lgamma(k + 1) for k in n])
    amps = np.ones(1, dtype=np.complex128)
    for alpha in alphas:
        if alpha == 0:
            single = np.zeros(d, dtype=np.complex128)
            single[0] = 1.0
        else:
            single = np.exp(-abs(alpha) ** 2 / 2 - 0.5 * log_fact) * alpha**n
        amps = np.kron(amps, single)
    return StateVector.normalized(space, amps)
