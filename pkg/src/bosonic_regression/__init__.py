"""Linear regression by bosonic quantum annealing on truncated Fock spaces."""

from .dynamics import (
    AnnealResult,
    SpectrumReport,
    adiabatic_diagnostic,
    anneal,
    converge_truncation,
    evolve,
    exact_spectrum,
    initial_state,
)
from .fock import (
    HermitianOperator,
    ModeSpace,
    StateVector,
    build_annihilation,
    expectation,
    lift_to_mode,
    quadrature,
)
from .hamiltonians import (
    AnnealSchedule,
    HamiltonianSet,
    build_driver_hamiltonian,
    build_hamiltonian_set,
    build_kerr_hamiltonian,
    build_problem_hamiltonian,
    hamiltonian_at,
)
from .qubo import PrecisionVector, QuboProblem, discretization_report, encode, solve_exact
from .regression import (
    Dataset,
    ModelSpec,
    RegressionProblem,
    build_problem,
    cost,
    least_squares_solution,
    load_csv,
    predict,
)

__version__ = "0.1.0"

__all__ = [
    "AnnealResult",
    "AnnealSchedule",
    "Dataset",
    "HamiltonianSet",
    "HermitianOperator",
    "ModeSpace",
    "ModelSpec",
    "PrecisionVector",
    "QuboProblem",
    "RegressionProblem",
    "SpectrumReport",
    "StateVector",
    "adiabatic_diagnostic",
    "anneal",
    "build_annihilation",
    "build_driver_hamiltonian",
    "build_hamiltonian_set",
    "build_kerr_hamiltonian",
    "build_problem",
    "build_problem_hamiltonian",
    "converge_truncation",
    "cost",
    "discretization_report",
    "encode",
    "evolve",
    "exact_spectrum",
    "expectation",
    "hamiltonian_at",
    "initial_state",
    "least_squares_solution",
    "lift_to_mode",
    "load_csv",
    "predict",
    "quadrature",
    "solve_exact",
]
