"""Schrodinger integration of the anneal, exact spectra and adiabaticity checks."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    CapacityError,
    DimensionMismatchError,
    IntegrationUnstableError,
    ScheduleError,
    TruncationNotConvergedError,
)
from .fock import (
    HermitianOperator,
    ModeSpace,
    StateVector,
    expectation_raw,
    quadrature,
    vacuum,
)
from .hamiltonians import (
    AnnealSchedule,
    HamiltonianSet,
    build_hamiltonian_set,
    coefficients,
    hamiltonian_at,
    hamiltonian_derivative,
)
from .regression import RegressionProblem

log = logging.getLogger(__name__)

MAX_NORM_DRIFT = 1e-6
MAX_DENSE_DIM = 2**14
DEGENERATE_GAP = 1e-12
DEFAULT_CHECKPOINTS = 50


@dataclass(frozen=True)
class Sample:
    t: float
    quadratures: tuple[float, ...]
    problem_energy: float


@dataclass(frozen=True)
class AnnealResult:
    final_state: StateVector = field(repr=False)
    quadratures: np.ndarray
    problem_energy: float
    norm_drift: float
    samples: list[Sample] = field(default_factory=list, repr=False)
    num_steps: int = 0
    dt: float = 0.0

    @property
    def valid(self) -> bool:
        return self.norm_drift < MAX_NORM_DRIFT


@dataclass(frozen=True)
class SpectrumReport:
    ground_energy: float
    first_excited_energy: float
    ground_state: StateVector = field(repr=False)
    energies: np.ndarray = field(repr=False, default=None)
    states: np.ndarray = field(repr=False, default=None)

    @property
    def gap(self) -> float:
        return self.first_excited_energy - self.ground_energy


@dataclass(frozen=True)
class DiagnosticPoint:
    t: float
    gap: float
    adiabatic_ratio: float


def initial_state(space: ModeSpace) -> StateVector:
    """Multimode vacuum, the unique ground state of the driver."""
    return vacuum(space)


def _checkpoint_steps(num_steps: int, num_checkpoints: int) -> set[int]:
    if num_checkpoints <= 0:
        return set()
    if num_checkpoints == 1:
        return {num_steps}
    return set(np.rint(np.linspace(0, num_steps, num_checkpoints)).astype(int).tolist())


def evolve(
    hams: HamiltonianSet,
    schedule: AnnealSchedule,
    psi0: StateVector,
    num_checkpoints: int = DEFAULT_CHECKPOINTS,
    raise_on_unstable: bool = True,
) -> AnnealResult:
    """Integrate ``i dpsi/dt = H(t) psi`` with fixed-step classical RK4.

    The final state is not renormalized; ``norm_drift`` is the largest
    ``|1 - ||psi|| |`` seen after any step.
    """
    space = hams.space
    if psi0.space != space:
        raise DimensionMismatchError("initial state is not on the Hamiltonian's mode space")
    if abs(psi0.norm - 1.0) > 1e-9:
        raise ValueError("initial state must be normalized")
    if schedule.kerr_strength != hams.kerr_strength:
        raise ScheduleError(
            f"schedule chi={schedule.kerr_strength} but Hamiltonians were built with chi={hams.kerr_strength}"
        )

    n_steps = schedule.num_steps
    T = float(schedule.total_time)
    dt = T / n_steps
    hd = hams.driver.diagonal().real.copy()
    hns = hams.catalyst.diagonal().real.copy()
    hp = hams.problem.matrix
    quads = [quadrature(space, m).matrix for m in range(space.num_modes)]
    hp_obs = hams.problem.matrix

    def rhs(s: float, psi: np.ndarray) -> np.ndarray:
        cd, cp, cn = coefficients(s)
        diag = cd * hd + cn * hns if cn else cd * hd
        return -1j * (diag * psi + cp * (hp @ psi))

    def observe(t: float, psi: np.ndarray) -> Sample:
        unit = psi / np.linalg.norm(psi)
        return Sample(
            t=t,
            quadratures=tuple(expectation_raw(q, unit) for q in quads),
            problem_energy=expectation_raw(hp_obs, unit),
        )

    checkpoints = _checkpoint_steps(n_steps, num_checkpoints)
    samples: list[Sample] = []
    psi = psi0.amplitudes.copy()
    if 0 in checkpoints:
        samples.append(observe(0.0, psi))
    drift = 0.0
    half = 0.5 * dt
    for k in range(n_steps):
        t = k * dt
        s0 = t / T
        sh = (t + half) / T
        s1 = min((k + 1) * dt / T, 1.0)
        k1 = rhs(s0, psi)
        k2 = rhs(sh, psi + half * k1)
        k3 = rhs(sh, psi + half * k2)
        k4 = rhs(s1, psi + dt * k3)
        psi = psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        drift = max(drift, abs(1.0 - math.sqrt(np.vdot(psi, psi).real)))
        if k + 1 in checkpoints and k + 1 != n_steps:
            samples.append(observe((k + 1) * dt, psi))

    final = observe(T, psi)
    if n_steps in checkpoints:
        samples.append(final)
    result = AnnealResult(
        final_state=StateVector.unchecked(space, psi),
        quadratures=np.array(final.quadratures),
        problem_energy=final.problem_energy,
        norm_drift=drift,
        samples=samples,
        num_steps=n_steps,
        dt=dt,
    )
    if not result.valid and raise_on_unstable:
        raise IntegrationUnstableError(
            f"norm drift {drift:.3e} >= {MAX_NORM_DRIFT:g} at T={T:g}, dt={dt:.3g}; use a smaller time step",
            result=result,
        )
    return result


def _dense(op: HermitianOperator) -> np.ndarray:
    if op.dim > MAX_DENSE_DIM:
        raise CapacityError(f"dimension {op.dim} exceeds the dense eigensolver limit {MAX_DENSE_DIM}")
    mat = op.toarray()
    if not np.any(mat.imag):
        mat = mat.real
    return mat


def exact_spectrum(op: HermitianOperator, num_levels: int = 2) -> SpectrumReport:
    """Lowest ``num_levels`` eigenpairs by a dense symmetric solve."""
    mat = _dense(op)
    n = op.dim
    k = max(1, min(num_levels, n))
    vals, vecs = scipy.linalg.eigh(mat, subset_by_index=[0, k - 1])
    ground = StateVector.normalized(op.space, vecs[:, 0])
    e1 = vals[1] if k > 1 else vals[0]
    return SpectrumReport(float(vals[0]), float(e1), ground, vals, vecs)


def adiabatic_diagnostic(
    hams: HamiltonianSet,
    schedule: AnnealSchedule,
    grid_points: int = 51,
    degeneracy_tol: float = 1e-9,
) -> list[DiagnosticPoint]:
    """Gap and ``|<E1|dH/dt|E0>| / (E1 - E0)^2`` on an even time grid.

    A degenerate first-excited level is handled by using the norm of the
    projection of ``dH/dt |E0>`` onto the whole level.
    """
    if grid_points < 2:
        raise ValueError("grid_points must be >= 2")
    T = float(schedule.total_time)
    levels = min(hams.space.dim, hams.space.num_modes + 3)
    points = []
    for t in np.linspace(0.0, T, grid_points):
        t = float(t)
        spec = exact_spectrum(hamiltonian_at(hams, schedule, t), levels)
        e = spec.energies
        gap = spec.gap
        if gap < DEGENERATE_GAP:
            points.append(DiagnosticPoint(t, gap, math.inf))
            continue
        dH = hamiltonian_derivative(hams, schedule, t).matrix
        v = dH @ spec.states[:, 0]
        level = np.abs(e - e[1]) <= degeneracy_tol * max(1.0, abs(e[1]))
        level[0] = False
        proj = spec.states[:, level].conj().T @ v
        points.append(DiagnosticPoint(t, gap, float(np.linalg.norm(proj)) / gap**2))
    return points


def anneal(
    problem: RegressionProblem,
    schedule: AnnealSchedule,
    d: int,
    num_checkpoints: int = DEFAULT_CHECKPOINTS,
    raise_on_unstable: bool = True,
) -> AnnealResult:
    """Build the Hamiltonians at truncation ``d`` and evolve from the vacuum."""
    space = ModeSpace(problem.num_parameters, d)
    hams = build_hamiltonian_set(problem, space, schedule)
    return evolve(hams, schedule, initial_state(space), num_checkpoints, raise_on_unstable)


def converge_truncation(
    problem: RegressionProblem,
    schedule: AnnealSchedule,
    d_start: int = 10,
    d_max: int = 16,
    tol: float = 1e-3,
    num_checkpoints: int = 0,
) -> tuple[int, AnnealResult]:
    """Raise ``d`` in steps of 2 until every quadrature moves by less than ``tol``.

    Returns the smaller truncation of the first agreeing pair.
    """
    if d_start < 2 or d_max < d_start:
        raise ValueError("need 2 <= d_start <= d_max")
    current = anneal(problem, schedule, d_start, num_checkpoints)
    if math.isinf(tol):
        return d_start, current
    d = d_start
    delta = None
    while d + 2 <= d_max:
        nxt = anneal(problem, schedule, d + 2, num_checkpoints)
        delta = float(np.max(np.abs(nxt.quadratures - current.quadratures)))
        log.debug("truncation %d -> %d: max quadrature change %.3e", d, d + 2, delta)
        if delta < tol:
            return d, current
        d, current = d + 2, nxt
    raise TruncationNotConvergedError(
        f"quadratures did not converge to {tol:g} by d={d_max} (last change {delta})",
        last_delta=delta,
        last_d=d,
    )
