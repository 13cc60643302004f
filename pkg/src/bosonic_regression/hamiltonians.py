"""Problem, driver and Kerr-catalyst Hamiltonians and the annealing schedule.

The annealing Hamiltonian at fraction ``s = t / T`` is

    H(s) = (1 - s) H_d + s H_p + s (1 - s) H_ns

so it equals the driver at ``t = 0`` and the problem Hamiltonian at ``t = T``.
The catalyst acts on the bosonic modes (one Kerr term per mode).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import DimensionMismatchError, ScheduleError
from .fock import HermitianOperator, ModeSpace, annihilation, creation
from .regression import RegressionProblem

DEFAULT_MAX_STEP = 0.005
STEPS_PER_T = 20000
MAX_STEPS = 2_000_000
LONG_T = 500.0


@dataclass(frozen=True)
class AnnealSchedule:
    total_time: float
    kerr_strength: float = 0.0
    driver_frequency: float = 1.0
    time_step: float | None = None
    omega_override: bool = False

    def __post_init__(self):
        if not self.total_time > 0:
            raise ScheduleError(f"annealing time must be positive, got {self.total_time}")
        if self.time_step is not None:
            if not self.time_step > 0:
                raise ScheduleError(f"time step must be positive, got {self.time_step}")
            if self.time_step > self.total_time:
                raise ScheduleError("time step exceeds the annealing time")
        if self.driver_frequency != 1.0 and not self.omega_override:
            raise ScheduleError("driver frequency is fixed at 1; pass omega_override=True to change it")

    @property
    def num_steps(self) -> int:
        """Fixed step count; the step actually used is ``total_time / num_steps``."""
        T = float(self.total_time)
        dt = self.time_step if self.time_step is not None else min(DEFAULT_MAX_STEP, T / STEPS_PER_T)
        n = max(1, math.ceil(T / dt - 1e-9))
        if n > MAX_STEPS and T >= LONG_T:
            warnings.warn(
                f"T={T:g} needs {n} steps; capping at {MAX_STEPS} (dt={T / MAX_STEPS:.3g})",
                RuntimeWarning,
                stacklevel=2,
            )
            n = MAX_STEPS
        return n

    @property
    def dt(self) -> float:
        return float(self.total_time) / self.num_steps

    def fraction(self, t: float) -> float:
        T = float(self.total_time)
        if t < 0 or t > T * (1 + 1e-12):
            raise ScheduleError(f"t={t} outside [0, {T}]")
        return min(t / T, 1.0)


def coefficients(s: float) -> tuple[float, float, float]:
    """(driver, problem, catalyst) weights at annealing fraction ``s``."""
    return 1.0 - s, s, s * (1.0 - s)


@dataclass(frozen=True)
class HamiltonianSet:
    problem: HermitianOperator
    driver: HermitianOperator
    catalyst: HermitianOperator
    space: ModeSpace
    kerr_strength: float = 0.0

    def __post_init__(self):
        for op in (self.problem, self.driver, self.catalyst):
            if op.space != self.space:
                raise DimensionMismatchError("all Hamiltonians must share one mode space")


def build_problem_hamiltonian(problem: RegressionProblem, space: ModeSpace) -> HermitianOperator:
    """Bosonic image of ``theta^T A theta - B^T theta``.

    theta_m^2 -> a_m^+ a_m, theta_m -> (a_m + a_m^+)/2 and, for m != l,
    theta_m theta_l -> (a_m a_l^+ + a_m^+ a_l)/2.
    """
    M = problem.num_parameters
    if space.num_modes != M:
        raise DimensionMismatchError(f"space has {space.num_modes} modes, problem has {M} parameters")
    A = problem.symmetric_gram
    B = problem.moment
    a = [annihilation(space, m) for m in range(M)]
    ad = [creation(space, m) for m in range(M)]
    H = sp.csr_matrix((space.dim, space.dim), dtype=np.complex128)
    for m in range(M):
        H = H + A[m, m] * (ad[m] @ a[m]) - B[m] * 0.5 * (a[m] + ad[m])
        for l in range(M):
            if l != m and A[m, l] != 0:
                H = H + A[m, l] * 0.5 * (a[m] @ ad[l] + ad[m] @ a[l])
    return HermitianOperator(space, H)


def build_driver_hamiltonian(space: ModeSpace, omega: float = 1.0) -> HermitianOperator:
    if not omega > 0:
        raise ScheduleError(f"driver frequency must be positive, got {omega}")
    total = space.occupations.sum(axis=1).astype(float)
    return HermitianOperator(space, sp.diags(omega * total, format="csr"))


def build_kerr_hamiltonian(space: ModeSpace, chi: float) -> HermitianOperator:
    squares = (space.occupations.astype(float) ** 2).sum(axis=1)
    return HermitianOperator(space, sp.diags(chi * squares, format="csr"))


def build_hamiltonian_set(
    problem: RegressionProblem, space: ModeSpace, schedule: AnnealSchedule
) -> HamiltonianSet:
    return HamiltonianSet(
        problem=build_problem_hamiltonian(problem, space),
        driver=build_driver_hamiltonian(space, schedule.driver_frequency),
        catalyst=build_kerr_hamiltonian(space, schedule.kerr_strength),
        space=space,
        kerr_strength=schedule.kerr_strength,
    )


def hamiltonian_at(hams: HamiltonianSet, schedule: AnnealSchedule, t: float) -> HermitianOperator:
    s = schedule.fraction(t)
    cd, cp, cn = coefficients(s)
    matrix = cd * hams.driver.matrix + cp * hams.problem.matrix
    if cn:
        matrix = matrix + cn * hams.catalyst.matrix
    return HermitianOperator(hams.space, matrix)


def hamiltonian_derivative(hams: HamiltonianSet, schedule: AnnealSchedule, t: float) -> HermitianOperator:
    """``dH/dt = (H_p - H_d)/T + (1 - 2t/T)/T * H_ns``."""
    s = schedule.fraction(t)
    T = float(schedule.total_time)
    matrix = (hams.problem.matrix - hams.driver.matrix) / T
    if hams.kerr_strength:
        matrix = matrix + ((1.0 - 2.0 * s) / T) * hams.catalyst.matrix
    return HermitianOperator(hams.space, matrix)
