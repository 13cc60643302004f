"""Datasets, design matrices and the closed-form least-squares oracle."""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
import scipy.linalg

from .errors import DimensionMismatchError, EmptyDatasetError, IllConditionedError, SchemaError

log = logging.getLogger(__name__)

MIN_EIGENVALUE = 1e-10


@dataclass(frozen=True)
class Dataset:
    """Named numeric columns of equal length, free of missing values."""

    name: str
    columns: dict[str, np.ndarray]
    dropped: int = 0

    def __post_init__(self):
        lengths = {len(v) for v in self.columns.values()}
        if len(lengths) > 1:
            raise SchemaError("dataset columns have unequal lengths")

    def __len__(self) -> int:
        return len(next(iter(self.columns.values()))) if self.columns else 0

    @property
    def rows(self) -> list[dict[str, float]]:
        names = list(self.columns)
        return [dict(zip(names, vals)) for vals in zip(*(self.columns[n].tolist() for n in names))]

    def column(self, name: str) -> np.ndarray:
        try:
            return self.columns[name]
        except KeyError:
            raise SchemaError(f"dataset {self.name!r} has no column {name!r}") from None

    def take(self, order: Sequence[int]) -> Dataset:
        order = np.asarray(order)
        return Dataset(self.name, {k: v[order] for k, v in self.columns.items()}, self.dropped)


def _parse_float(cell: str) -> float | None:
    cell = cell.strip()
    if not cell:
        return None
    try:
        value = float(cell)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def load_csv(
    path: str | Path,
    columns: Sequence[str],
    where: Mapping[str, str] | None = None,
    name: str | None = None,
) -> Dataset:
    """Read the requested numeric ``columns`` from a headed CSV file.

    ``where`` keeps only rows whose (string) cell equals the given value,
    e.g. ``{"species": "setosa"}``. Rows with an empty or unparseable cell
    in any requested column are dropped and counted.
    """
    path = Path(path)
    where = dict(where or {})
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in list(columns) + list(where) if c not in header]
        if missing:
            raise SchemaError(f"{path.name}: missing column(s) {missing}; header is {header}")
        values: dict[str, list[float]] = {c: [] for c in columns}
        dropped = 0
        for row in reader:
            if any((row.get(k) or "").strip() != v for k, v in where.items()):
                continue
            parsed = [_parse_float(row.get(c) or "") for c in columns]
            if any(p is None for p in parsed):
                dropped += 1
                continue
            for c, p in zip(columns, parsed):
                values[c].append(p)
    if not values or not values[columns[0]]:
        raise EmptyDatasetError(f"{path.name}: no usable rows (dropped {dropped})")
    if dropped:
        log.info("%s: dropped %d incomplete row(s)", path.name, dropped)
    return Dataset(name or path.stem, {c: np.array(v, dtype=float) for c, v in values.items()}, dropped)


@dataclass(frozen=True)
class BasisFunction:
    """``kind`` is ``"identity"`` (the raw feature) or ``"intercept"`` (constant one)."""

    kind: str
    feature: str | None = None

    def __post_init__(self):
        if self.kind not in ("identity", "intercept"):
            raise SchemaError(f"unknown basis function kind {self.kind!r}")
        if self.kind == "identity" and not self.feature:
            raise SchemaError("identity basis needs a feature name")

    @property
    def label(self) -> str:
        return "intercept" if self.kind == "intercept" else self.feature

    def evaluate(self, values) -> np.ndarray:
        if self.kind == "intercept":
            return np.ones_like(np.asarray(values, dtype=float))
        return np.asarray(values, dtype=float)


@dataclass(frozen=True)
class ModelSpec:
    basis: tuple[BasisFunction, ...]
    target: str
    parameter_names: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        if not self.basis:
            raise SchemaError("model needs at least one basis function")
        names = tuple(self.parameter_names) or tuple(f"theta_{i + 1}" for i in range(len(self.basis)))
        if len(names) != len(self.basis):
            raise SchemaError("parameter_names must match the number of basis functions")
        object.__setattr__(self, "parameter_names", names)

    @classmethod
    def linear(cls, features: Sequence[str], target: str, intercept: bool = False) -> ModelSpec:
        basis = [BasisFunction("identity", f) for f in features]
        if intercept:
            basis.append(BasisFunction("intercept"))
        return cls(tuple(basis), target)

    @property
    def num_parameters(self) -> int:
        return len(self.basis)

    @property
    def features(self) -> list[str]:
        return [b.feature for b in self.basis if b.kind == "identity"]


@dataclass(frozen=True)
class Affine:
    """Standardized value is ``(raw - offset) / scale``."""

    offset: float
    scale: float

    def forward(self, raw):
        return (np.asarray(raw, dtype=float) - self.offset) / self.scale

    def inverse(self, standardized):
        return np.asarray(standardized, dtype=float) * self.scale + self.offset


@dataclass(frozen=True)
class RegressionProblem:
    """Gram matrix ``A = c Phi^T Phi`` and moment ``B = 2 c Phi^T y``.

    ``cost_scale`` (``c``) is 1 for the plain sum-of-squares cost and 1/N
    for the per-sample cost; the minimizer is the same for either.
    """

    gram: np.ndarray
    moment: np.ndarray
    design: np.ndarray | None = field(default=None, repr=False)
    targets: np.ndarray | None = field(default=None, repr=False)
    spec: ModelSpec | None = None
    standardization: dict[str, Affine] | None = None
    cost_scale: float = 1.0

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.gram, dtype=float))
        B = np.atleast_1d(np.asarray(self.moment, dtype=float))
        if A.shape != (B.size, B.size):
            raise DimensionMismatchError(f"gram {A.shape} incompatible with moment of length {B.size}")
        object.__setattr__(self, "gram", A)
        object.__setattr__(self, "moment", B)
        eig = np.linalg.eigvalsh((A + A.T) / 2)
        if eig[0] <= MIN_EIGENVALUE:
            cond = np.inf if eig[0] <= 0 else eig[-1] / eig[0]
            raise IllConditionedError(
                f"gram matrix is not positive definite (min eigenvalue {eig[0]:.3e})", condition=cond
            )

    @classmethod
    def from_design(cls, design, targets, cost_scale: float = 1.0, **kwargs) -> RegressionProblem:
        Phi = np.atleast_2d(np.asarray(design, dtype=float))
        y = np.asarray(targets, dtype=float).ravel()
        if Phi.shape[0] != y.size:
            raise DimensionMismatchError("design rows must match the number of targets")
        return cls(
            gram=cost_scale * (Phi.T @ Phi),
            moment=cost_scale * 2.0 * (Phi.T @ y),
            design=Phi,
            targets=y,
            cost_scale=cost_scale,
            **kwargs,
        )

    @property
    def num_parameters(self) -> int:
        return self.moment.size

    @property
    def symmetric_gram(self) -> np.ndarray:
        return (self.gram + self.gram.T) / 2

    @property
    def minimum_cost(self) -> float:
        """``-B^T A^{-1} B / 4``, the value of :func:`cost` at the optimum."""
        theta = least_squares_solution(self)
        return -0.25 * float(self.moment @ (2.0 * theta))


def design_matrix(spec: ModelSpec, data: Dataset | Mapping[str, np.ndarray]) -> np.ndarray:
    columns = data.columns if isinstance(data, Dataset) else data
    n = len(next(iter(columns.values())))
    cols = []
    for b in spec.basis:
        if b.kind == "intercept":
            cols.append(np.ones(n))
        else:
            if b.feature not in columns:
                raise SchemaError(f"missing feature column {b.feature!r}")
            cols.append(np.asarray(columns[b.feature], dtype=float))
    return np.column_stack(cols)


def build_problem(
    data: Dataset, spec: ModelSpec, standardize: bool = True, normalize: bool = False
) -> RegressionProblem:
    """Assemble Phi, y, A and B for ``spec`` over ``data``.

    With ``standardize`` every feature column and the target are z-scored
    (population standard deviation). With ``normalize`` the cost is divided
    by the number of rows.
    """
    if len(data) == 0:
        raise EmptyDatasetError("dataset is empty")
    if len(data) < spec.num_parameters + 1:
        raise EmptyDatasetError(
            f"need at least {spec.num_parameters + 1} rows for {spec.num_parameters} parameters, got {len(data)}"
        )
    columns = {f: data.column(f) for f in spec.features}
    y = data.column(spec.target)
    transforms = None
    if standardize:
        transforms = {}
        for name, raw in list(columns.items()) + [(spec.target, y)]:
            scale = float(np.std(raw))
            if scale == 0:
                raise IllConditionedError(f"column {name!r} is constant and cannot be standardized")
            transforms[name] = Affine(float(np.mean(raw)), scale)
        columns = {f: transforms[f].forward(v) for f, v in columns.items()}
        y = transforms[spec.target].forward(y)
    Phi = design_matrix(spec, columns)
    scale = 1.0 / Phi.shape[0] if normalize else 1.0
    return RegressionProblem.from_design(Phi, y, cost_scale=scale, spec=spec, standardization=transforms)


def cost(problem: RegressionProblem, theta) -> float:
    """``theta^T A theta - B^T theta`` (the constant ``y^T y`` term dropped)."""
    theta = np.asarray(theta, dtype=float).ravel()
    if theta.size != problem.num_parameters:
        raise DimensionMismatchError(f"theta has length {theta.size}, expected {problem.num_parameters}")
    return float(theta @ problem.gram @ theta - problem.moment @ theta)


def least_squares_solution(problem: RegressionProblem) -> np.ndarray:
    A = problem.symmetric_gram
    half_b = problem.moment / 2.0
    try:
        factor = scipy.linalg.cho_factor(A)
    except np.linalg.LinAlgError:
        raise IllConditionedError("gram matrix is not positive definite", condition=np.inf) from None
    theta = scipy.linalg.cho_solve(factor, half_b)
    residual = np.linalg.norm(A @ theta - half_b)
    if residual > 1e-10 * np.linalg.norm(problem.moment):
        cond = float(np.linalg.cond(A))
        raise IllConditionedError(f"normal-equation residual {residual:.3e} (cond {cond:.3e})", cond)
    return theta


def predict(spec: ModelSpec, theta, x: Mapping[str, float] | float) -> float:
    """Evaluate ``sum_m theta_m phi_m(x)`` for a single record.

    A bare number is accepted for models with a single feature.
    """
    theta = np.asarray(theta, dtype=float).ravel()
    if theta.size != spec.num_parameters:
        raise DimensionMismatchError(f"theta has length {theta.size}, expected {spec.num_parameters}")
    if not isinstance(x, Mapping):
        feats = spec.features
        if len(feats) != 1:
            raise SchemaError("a scalar input needs a model with exactly one feature")
        x = {feats[0]: x}
    total = 0.0
    for t, b in zip(theta, spec.basis):
        total += t * (1.0 if b.kind == "intercept" else float(x[b.feature]))
    return float(total)


def predict_rows(spec: ModelSpec, theta, data: Dataset | Mapping[str, np.ndarray]) -> np.ndarray:
    return design_matrix(spec, data) @ np.asarray(theta, dtype=float)


def predict_original_units(problem: RegressionProblem, theta, data: Dataset) -> np.ndarray:
    """Predictions for raw dataset rows, undoing any recorded standardization."""
    spec = problem.spec
    if spec is None:
        raise SchemaError("problem carries no model spec")
    transforms = problem.standardization
    if not transforms:
        return predict_rows(spec, theta, data)
    columns = {f: transforms[f].forward(data.column(f)) for f in spec.features}
    return transforms[spec.target].inverse(predict_rows(spec, theta, columns))


def original_coefficients(problem: RegressionProblem, theta) -> tuple[np.ndarray, float]:
    """Map standardized parameters to raw-unit slopes and an intercept."""
    spec = problem.spec
    theta = np.asarray(theta, dtype=float)
    transforms = problem.standardization or {}
    ty = transforms.get(spec.target, Affine(0.0, 1.0))
    slopes = []
    intercept = 0.0
    for t, b in zip(theta, spec.basis):
        if b.kind == "intercept":
            intercept += t * ty.scale
        else:
            tx = transforms.get(b.feature, Affine(0.0, 1.0))
            slope = t * ty.scale / tx.scale
            slopes.append(slope)
            intercept -= slope * tx.offset
    return np.array(slopes), intercept + ty.offset


def random_problem(rng: np.random.Generator, num_parameters: int, theta_bound: float = 1.5,
                   eig_range: tuple[float, float] = (0.5, 2.0)) -> RegressionProblem:
    """Random positive-definite ``A`` with a known optimum in ``[-bound, bound]^M``."""
    M = num_parameters
    q, _ = np.linalg.qr(rng.standard_normal((M, M)))
    A = q @ np.diag(rng.uniform(*eig_range, size=M)) @ q.T
    A = (A + A.T) / 2
    theta = rng.uniform(-theta_bound, theta_bound, size=M)
    return RegressionProblem(gram=A, moment=2.0 * A @ theta)
