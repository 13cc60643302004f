"""Binary-expansion (QUBO) encoding of the regression cost, solved by enumeration.

Each parameter is written as ``theta_m = sum_k p_k q_mk`` with bits
``q_mk`` and power-of-two weights ``p_k``.  Substituting into
``theta^T A theta - B^T theta`` and using ``q^2 = q`` gives an objective
``q^T Q q`` with the linear terms on the diagonal of ``Q``.  Flat variable
index ``m * K + k``; for tie-breaking an assignment is read as a binary
number with flat index 0 as the most significant bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CapacityError, DimensionMismatchError
from .regression import RegressionProblem, cost, least_squares_solution

MAX_BITS = 24
_CHUNK_BITS = 16


@dataclass(frozen=True)
class PrecisionVector:
    entries: tuple[float, ...]

    def __post_init__(self):
        entries = tuple(float(p) for p in self.entries)
        if not entries:
            raise ValueError("precision vector needs at least one entry")
        for p in entries:
            if p == 0 or not math.isfinite(p):
                raise ValueError(f"precision entry {p} is not a signed power of two")
            mantissa, _ = math.frexp(abs(p))
            if mantissa != 0.5:
                raise ValueError(f"precision entry {p} is not a signed power of two")
        object.__setattr__(self, "entries", entries)

    @property
    def bits_per_parameter(self) -> int:
        return len(self.entries)

    @classmethod
    def descending(cls, K: int, top: float = 2.0, signed: bool = False) -> PrecisionVector:
        """``[top, top/2, ...]`` with ``K`` entries; ``signed`` prepends ``-2*top``.

        The unsigned family reaches ``[0, 2*top)``; the signed one reaches
        ``[-2*top, 2*top)`` at the resolution of ``K - 1`` unsigned bits.
        """
        if K < 1:
            raise ValueError("K must be >= 1")
        if signed:
            return cls((-2.0 * top,) + tuple(top * 2.0**-k for k in range(K - 1)))
        return cls(tuple(top * 2.0**-k for k in range(K)))

    def describe(self) -> str:
        return "[" + ", ".join(f"{p:g}" for p in self.entries) + "]"


@dataclass(frozen=True)
class QuboProblem:
    matrix: np.ndarray
    precision: PrecisionVector
    num_parameters: int

    @property
    def num_bits(self) -> int:
        return self.matrix.shape[0]

    def variable_index(self, m: int, k: int) -> int:
        return m * self.precision.bits_per_parameter + k

    def objective(self, assignment) -> float:
        q = np.asarray(assignment, dtype=float)
        if q.shape != (self.num_bits,):
            raise DimensionMismatchError(f"assignment must have {self.num_bits} bits")
        return float(q @ self.matrix @ q)

    def decode(self, assignment) -> np.ndarray:
        q = np.asarray(assignment, dtype=float).reshape(self.num_parameters, -1)
        return q @ np.asarray(self.precision.entries)


def encode(problem: RegressionProblem, precision: PrecisionVector) -> QuboProblem:
    M = problem.num_parameters
    K = precision.bits_per_parameter
    if K * M > MAX_BITS:
        raise CapacityError(f"K*M = {K * M} bits exceeds the enumeration limit {MAX_BITS} (K={K})")
    p = np.asarray(precision.entries)
    # embedding theta = E q with E of shape (M, K*M)
    E = np.kron(np.eye(M), p[None, :])
    Q = E.T @ problem.symmetric_gram @ E
    Q[np.diag_indices_from(Q)] -= E.T @ problem.moment
    Q = (Q + Q.T) / 2
    return QuboProblem(Q, precision, M)


def _bits(values: np.ndarray, n: int) -> np.ndarray:
    shifts = np.arange(n - 1, -1, -1)
    return ((values[:, None] >> shifts) & 1).astype(float)


def _best_in_range(Q: np.ndarray, start: int, stop: int) -> tuple[float, int]:
    n = Q.shape[0]
    values = np.arange(start, stop, dtype=np.int64)
    X = _bits(values, n)
    obj = ((X @ Q) * X).sum(axis=1)
    i = int(np.argmin(obj))
    return float(obj[i]), int(values[i])


def solve_exact(qubo: QuboProblem) -> tuple[np.ndarray, float, np.ndarray]:
    """Global minimum over all assignments; ties go to the smallest binary value."""
    n = qubo.num_bits
    if n > MAX_BITS:
        raise CapacityError(f"{n} bits exceeds the enumeration limit {MAX_BITS}")
    total = 1 << n
    chunk = 1 << min(n, _CHUNK_BITS)
    best_obj, best_val = math.inf, -1
    for start in range(0, total, chunk):
        obj, val = _best_in_range(qubo.matrix, start, min(start + chunk, total))
        if obj < best_obj:
            best_obj, best_val = obj, val
    assignment = _bits(np.array([best_val], dtype=np.int64), n)[0].astype(np.int8)
    return assignment, qubo.objective(assignment), qubo.decode(assignment)


@dataclass(frozen=True)
class DiscretizationRow:
    K: int
    theta: np.ndarray
    objective: float
    gap: float
    precision: PrecisionVector


def discretization_report(
    problem: RegressionProblem, precisions: Sequence[PrecisionVector]
) -> list[DiscretizationRow]:
    """Best discrete solution per precision vector, with its cost gap to the optimum."""
    optimum = cost(problem, least_squares_solution(problem))
    rows = []
    for pv in precisions:
        _, obj, theta = solve_exact(encode(problem, pv))
        gap = obj - optimum
        if -1e-12 < gap < 0:
            gap = 0.0
        rows.append(DiscretizationRow(pv.bits_per_parameter, theta, obj, gap, pv))
    rows.sort(key=lambda r: r.K)
    return rows
