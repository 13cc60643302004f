"""Config-driven experiment runners producing CSV tables and JSON summaries.

Config files are TOML; nested tables are flattened to dotted keys
(``anneal.T_grid``) and only the keys in :data:`CONFIG_KEYS` are accepted.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import datasets
from .dynamics import anneal, converge_truncation, exact_spectrum
from .errors import ConfigError, IntegrationUnstableError, TruncationNotConvergedError
from .fock import ModeSpace, expectation, quadrature
from .hamiltonians import AnnealSchedule, build_problem_hamiltonian
from .qubo import PrecisionVector, discretization_report
from .regression import (
    Dataset,
    ModelSpec,
    RegressionProblem,
    build_problem,
    cost,
    least_squares_solution,
    original_coefficients,
    predict_original_units,
    random_problem,
)

WORKERS_ENV = "BOSONIC_REGRESSION_WORKERS"
DEFAULT_T_GRID = (1.0, 5.0, 10.0, 50.0, 100.0, 500.0, 1000.0)
DEFAULT_CHI_GRID = (0.0, 0.1, 0.5, 1.0)

# dotted config key -> ExperimentConfig attribute
CONFIG_KEYS = {
    "preset": "preset",
    "dataset.path": "dataset_path",
    "dataset.features": "features",
    "dataset.target": "target",
    "dataset.filter": "filter",
    "model.intercept": "intercept",
    "random.num_parameters": "random_num_parameters",
    "standardize": "standardize",
    "normalize": "normalize",
    "truncation.d": "truncation",
    "truncation.d_start": "d_start",
    "truncation.d_max": "d_max",
    "truncation.tol": "truncation_tol",
    "anneal.T_grid": "T_grid",
    "anneal.chi_grid": "chi_grid",
    "anneal.time_step": "time_step",
    "anneal.checkpoints": "checkpoints",
    "anneal.omega": "omega",
    "overlay.T": "overlay_T",
    "overlay.chi": "overlay_chi",
    "catalyst.small_T": "small_T",
    "qubo.K_min": "qubo_K_min",
    "qubo.K_max": "qubo_K_max",
    "qubo.top": "qubo_top",
    "qubo.signed": "qubo_signed",
    "seed": "seed",
    "workers": "workers",
    "output_dir": "output_dir",
}


@dataclass(frozen=True)
class ExperimentConfig:
    preset: str = "iris-m1"
    dataset_path: str | None = None
    features: tuple[str, ...] | None = None
    target: str | None = None
    filter: str | None = None
    intercept: bool | None = None
    random_num_parameters: int = 2
    standardize: bool = True
    normalize: bool = True
    truncation: int | str = 12
    d_start: int = 10
    d_max: int = 16
    truncation_tol: float = 1e-3
    T_grid: tuple[float, ...] = DEFAULT_T_GRID
    chi_grid: tuple[float, ...] = DEFAULT_CHI_GRID
    time_step: float | None = None
    checkpoints: int = 50
    omega: float = 1.0
    overlay_T: float = 1000.0
    overlay_chi: float = 0.0
    small_T: float = 10.0
    qubo_K_min: int = 1
    qubo_K_max: int = 8
    qubo_top: float = 2.0
    qubo_signed: bool = False
    seed: int = 0
    workers: int = 1
    output_dir: str = "results"

    def __post_init__(self):
        if self.features is not None:
            feats = (self.features,) if isinstance(self.features, str) else tuple(self.features)
            object.__setattr__(self, "features", feats)
        try:
            object.__setattr__(self, "T_grid", tuple(float(t) for t in self.T_grid))
            object.__setattr__(self, "chi_grid", tuple(float(c) for c in self.chi_grid))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"grids must be lists of numbers: {exc}") from None
        if not self.T_grid:
            raise ConfigError("anneal.T_grid must not be empty")
        if not self.chi_grid:
            raise ConfigError("anneal.chi_grid must not be empty")
        if any(not t > 0 for t in self.T_grid):
            raise ConfigError("annealing times must be positive")
        if len(set(self.T_grid)) != len(self.T_grid) or len(set(self.chi_grid)) != len(self.chi_grid):
            raise ConfigError("grid values must be distinct")
        if self.truncation != "auto":
            if isinstance(self.truncation, bool) or not isinstance(self.truncation, int) or self.truncation < 2:
                raise ConfigError(f"truncation.d must be an integer >= 2 or 'auto', got {self.truncation!r}")
        if not 2 <= self.d_start <= self.d_max:
            raise ConfigError("need 2 <= truncation.d_start <= truncation.d_max")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.preset != "random":
            datasets.get_preset(self.preset)
        if self.omega != 1.0 and not self.omega > 0:
            raise ConfigError("anneal.omega must be positive")

    @classmethod
    def from_flat(cls, values: Mapping[str, Any]) -> ExperimentConfig:
        unknown = sorted(set(values) - set(CONFIG_KEYS))
        if unknown:
            raise ConfigError(f"unknown config key(s): {unknown}")
        kwargs = {CONFIG_KEYS[k]: v for k, v in values.items()}
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    def flat(self) -> dict[str, Any]:
        out = {}
        for key, attr in CONFIG_KEYS.items():
            value = getattr(self, attr)
            out[key] = list(value) if isinstance(value, tuple) else value
        return out

    def override(self, values: Mapping[str, Any]) -> ExperimentConfig:
        merged = self.flat()
        merged.update(values)
        return ExperimentConfig.from_flat(merged)

    @property
    def where(self) -> dict[str, str] | None:
        if not self.filter:
            return None
        out = {}
        for clause in self.filter.split(","):
            if "=" not in clause:
                raise ConfigError(f"dataset.filter clause {clause!r} is not of the form column=value")
            k, v = clause.split("=", 1)
            out[k.strip()] = v.strip()
        return out


def _flatten(tree: Mapping[str, Any], prefix: str = "") -> dict[str, Any]:
    out = {}
    for k, v in tree.items():
        key = f"{prefix}{k}"
        if isinstance(v, Mapping):
            out.update(_flatten(v, key + "."))
        else:
            out[key] = v
    return out


def parse_value(text: str) -> Any:
    """Parse a ``--set`` value as a TOML literal, falling back to a bare string."""
    try:
        return tomllib.loads(f"v = {text}")["v"]
    except tomllib.TOMLDecodeError:
        return text


def load_config(path: str | Path | None = None, overrides: Mapping[str, Any] | None = None) -> ExperimentConfig:
    values: dict[str, Any] = {}
    if path is not None:
        try:
            with open(path, "rb") as fh:
                values = _flatten(tomllib.load(fh))
        except FileNotFoundError:
            raise ConfigError(f"config file {path} not found") from None
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    values.update(overrides or {})
    cfg = ExperimentConfig.from_flat(values)
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            cfg = replace(cfg, workers=int(env))
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV} must be an integer, got {env!r}") from None
    return cfg


# ---------------------------------------------------------------- problems


def dataset_and_spec(cfg: ExperimentConfig) -> tuple[Dataset, ModelSpec]:
    if cfg.preset == "random":
        raise ConfigError("the random preset has no dataset")
    p = datasets.get_preset(cfg.preset)
    features = cfg.features or p.features
    target = cfg.target or p.target
    intercept = p.intercept if cfg.intercept is None else bool(cfg.intercept)
    where = cfg.where if cfg.filter is not None else p.where
    source = cfg.dataset_path or p.dataset
    data = datasets.load_dataset(source, features, target, where)
    return data, ModelSpec.linear(features, target, intercept=intercept)


def load_problem(cfg: ExperimentConfig) -> tuple[Dataset | None, RegressionProblem]:
    if cfg.preset == "random":
        rng = np.random.default_rng(cfg.seed)
        return None, random_problem(rng, cfg.random_num_parameters)
    data, spec = dataset_and_spec(cfg)
    return data, build_problem(data, spec, standardize=cfg.standardize, normalize=cfg.normalize)


def ground_energy(problem: RegressionProblem, d: int) -> float:
    space = ModeSpace(problem.num_parameters, d)
    return exact_spectrum(build_problem_hamiltonian(problem, space)).ground_energy


# ------------------------------------------------------------------ sweeps


@dataclass(frozen=True)
class SweepRecord:
    T: float
    chi: float
    d: int
    quadratures: tuple[float, ...]
    problem_energy: float
    ground_energy_exact: float
    theta_star: tuple[float, ...]
    norm_drift: float
    status: str = "ok"
    wall_time: float = field(default=0.0, compare=False)
    samples: tuple = field(default=(), compare=False, repr=False)


@dataclass(frozen=True)
class _PointOutcome:
    T: float
    chi: float
    d: int
    quadratures: tuple[float, ...]
    problem_energy: float
    norm_drift: float
    status: str
    wall_time: float
    samples: tuple = ()


def _schedule(cfg: ExperimentConfig, T: float, chi: float) -> AnnealSchedule:
    return AnnealSchedule(
        total_time=T,
        kerr_strength=chi,
        driver_frequency=cfg.omega,
        time_step=cfg.time_step,
        omega_override=cfg.omega != 1.0,
    )


def _run_point(problem: RegressionProblem, cfg: ExperimentConfig, T: float, chi: float) -> _PointOutcome:
    start = time.perf_counter()
    schedule = _schedule(cfg, T, chi)
    M = problem.num_parameters
    nan = (math.nan,) * M
    try:
        if cfg.truncation == "auto":
            d, result = converge_truncation(
                problem, schedule, cfg.d_start, cfg.d_max, cfg.truncation_tol, cfg.checkpoints
            )
        else:
            d = cfg.truncation
            result = anneal(problem, schedule, d, num_checkpoints=cfg.checkpoints)
        status = "ok"
    except IntegrationUnstableError as exc:
        result, status = exc.result, "unstable"
        d = result.final_state.space.levels_per_mode
    except TruncationNotConvergedError as exc:
        wall = time.perf_counter() - start
        return _PointOutcome(T, chi, exc.last_d or cfg.d_max, nan, math.nan, math.nan, "not_converged", wall)
    wall = time.perf_counter() - start
    return _PointOutcome(
        T,
        chi,
        d,
        tuple(float(x) for x in result.quadratures),
        result.problem_energy,
        result.norm_drift,
        status,
        wall,
        tuple(result.samples),
    )


def _run_points(problem: RegressionProblem, cfg: ExperimentConfig, points: Sequence[tuple[float, float]]):
    if cfg.workers > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            futures = [pool.submit(_run_point, problem, cfg, T, chi) for T, chi in points]
            return [f.result() for f in futures]
    return [_run_point(problem, cfg, T, chi) for T, chi in points]


def sweep_records(
    problem: RegressionProblem, cfg: ExperimentConfig, points: Iterable[tuple[float, float]] | None = None
) -> list[SweepRecord]:
    """One record per (T, chi) point, sorted by (chi, T)."""
    if points is None:
        points = [(T, chi) for chi in cfg.chi_grid for T in cfg.T_grid]
    points = sorted(set(points), key=lambda p: (p[1], p[0]))
    outcomes = _run_points(problem, cfg, points)
    theta_star = tuple(float(v) for v in least_squares_solution(problem))
    e0_cache: dict[int, float] = {}
    records = []
    for o in outcomes:
        if o.d not in e0_cache:
            e0_cache[o.d] = ground_energy(problem, o.d)
        e0 = e0_cache[o.d]
        status = o.status
        if status == "ok" and o.problem_energy < e0 - 1e-9:
            status = "below_ground_energy"
        records.append(
            SweepRecord(
                o.T, o.chi, o.d, o.quadratures, o.problem_energy, e0, theta_star, o.norm_drift, status, o.wall_time,
                o.samples,
            )
        )
    records.sort(key=lambda r: (r.chi, r.T))
    return records


# ---------------------------------------------------------------- CSV I/O


def _fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if value is None:
        return ""
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]], comments: Sequence[str] = ()) -> Path:
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(buf.getvalue(), encoding="utf-8")
    return path


def read_csv(path: Path) -> tuple[list[str], list[dict[str, str]]]:
    """Parse a CSV written by :func:`write_csv`; returns (comment lines, rows)."""
    comments, body = [], []
    for line in Path(path).read_text(encoding="utf-8").splitlines(keepends=True):
        if line.startswith("# ") and not body:
            comments.append(line[2:].rstrip("\n"))
        else:
            body.append(line)
    return comments, list(csv.DictReader(body))


def sweep_header(M: int) -> list[str]:
    return (
        ["T", "chi", "d"]
        + [f"x_{m + 1}" for m in range(M)]
        + [f"theta_star_{m + 1}" for m in range(M)]
        + ["problem_energy", "ground_energy_exact", "norm_drift", "status"]
    )


def sweep_row(r: SweepRecord) -> list[Any]:
    return [r.T, r.chi, r.d, *r.quadratures, *r.theta_star, r.problem_energy, r.ground_energy_exact, r.norm_drift, r.status]


def parse_sweep_csv(path: Path) -> list[SweepRecord]:
    _, rows = read_csv(path)
    records = []
    for row in rows:
        M = sum(1 for k in row if k.startswith("x_"))
        records.append(
            SweepRecord(
                T=float(row["T"]),
                chi=float(row["chi"]),
                d=int(row["d"]),
                quadratures=tuple(float(row[f"x_{m + 1}"]) for m in range(M)),
                problem_energy=float(row["problem_energy"]),
                ground_energy_exact=float(row["ground_energy_exact"]),
                theta_star=tuple(float(row[f"theta_star_{m + 1}"]) for m in range(M)),
                norm_drift=float(row["norm_drift"]),
                status=row["status"],
            )
        )
    return records


def _transforms_json(problem: RegressionProblem) -> dict[str, dict[str, float]] | None:
    if not problem.standardization:
        return None
    return {k: {"offset": a.offset, "scale": a.scale} for k, a in problem.standardization.items()}


def _problem_summary(problem: RegressionProblem, data: Dataset | None) -> dict[str, Any]:
    out = {
        "theta_star": least_squares_solution(problem).tolist(),
        "minimum_cost": problem.minimum_cost,
        "gram": problem.gram.tolist(),
        "moment": problem.moment.tolist(),
        "cost_scale": problem.cost_scale,
        "standardization": _transforms_json(problem),
    }
    if problem.spec is not None:
        out["parameters"] = [b.label for b in problem.spec.basis]
    if data is not None:
        out["dataset"] = {"name": data.name, "rows": len(data), "dropped_rows": data.dropped}
    return out


def _write_json(path: Path, payload: Mapping[str, Any]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True, allow_nan=True) + "\n", encoding="utf-8")
    return path


# -------------------------------------------------------------- commands


def run_sweep(cfg: ExperimentConfig) -> dict[str, Path]:
    """Parameter-vs-T sweep over the (T, chi) grid."""
    data, problem = load_problem(cfg)
    records = sweep_records(problem, cfg)
    out = Path(cfg.output_dir)
    M = problem.num_parameters
    csv_path = write_csv(out / "sweep.csv", sweep_header(M), map(sweep_row, records))
    paths = {"csv": csv_path}
    if cfg.checkpoints > 0:
        header = ["T", "chi", "t"] + [f"x_{m + 1}" for m in range(M)] + ["problem_energy"]
        rows = [[r.T, r.chi, s.t, *s.quadratures, s.problem_energy] for r in records for s in r.samples]
        paths["trajectories"] = write_csv(out / "trajectories.csv", header, rows)
    summary = _problem_summary(problem, data)
    summary["ground_energy_exact"] = {str(r.d): r.ground_energy_exact for r in records}
    summary["wall_time"] = [{"T": r.T, "chi": r.chi, "seconds": r.wall_time} for r in records]
    summary["config"] = cfg.flat()
    paths["summary"] = _write_json(out / "sweep_summary.json", summary)
    return paths


@dataclass(frozen=True)
class OverlayTable:
    header: list[str]
    rows: list[list[float]]
    theta_annealed: np.ndarray
    theta_star: np.ndarray


def overlay_table(
    data: Dataset, problem: RegressionProblem, theta_annealed, theta_star=None
) -> OverlayTable:
    spec = problem.spec
    theta_star = least_squares_solution(problem) if theta_star is None else np.asarray(theta_star)
    theta_annealed = np.asarray(theta_annealed, dtype=float)
    pred_a = predict_original_units(problem, theta_annealed, data)
    pred_c = predict_original_units(problem, theta_star, data)
    cols = spec.features + [spec.target]
    header = cols + ["predicted_annealed", "predicted_classical"]
    rows = [
        [*(float(data.column(c)[i]) for c in cols), float(pred_a[i]), float(pred_c[i])] for i in range(len(data))
    ]
    return OverlayTable(header, rows, theta_annealed, theta_star)


def run_overlay(
    cfg: ExperimentConfig, T: float | None = None, chi: float | None = None, theta=None
) -> dict[str, Path]:
    """Dataset rows with predictions from annealed and classical parameters (raw units).

    ``theta`` bypasses the anneal and uses the given standardized parameters.
    """
    T = cfg.overlay_T if T is None else T
    chi = cfg.overlay_chi if chi is None else chi
    data, problem = load_problem(cfg)
    if data is None:
        raise ConfigError("overlay needs a dataset preset")
    record = None
    if theta is None:
        (record,) = sweep_records(problem, cfg, [(T, chi)])
        if record.status != "ok":
            raise IntegrationUnstableError(f"overlay run at T={T}, chi={chi} failed with status {record.status}")
        theta = record.quadratures
    table = overlay_table(data, problem, theta)
    out = Path(cfg.output_dir)
    csv_path = write_csv(out / "overlay.csv", table.header, table.rows)
    slopes_a, icpt_a = original_coefficients(problem, table.theta_annealed)
    slopes_c, icpt_c = original_coefficients(problem, table.theta_star)
    summary = _problem_summary(problem, data)
    summary.update(
        T=T,
        chi=chi,
        d=record.d if record else None,
        theta_annealed=table.theta_annealed.tolist(),
        original_units={
            "annealed": {"slopes": slopes_a.tolist(), "intercept": icpt_a},
            "classical": {"slopes": slopes_c.tolist(), "intercept": icpt_c},
        },
        config=cfg.flat(),
    )
    return {"csv": csv_path, "summary": _write_json(out / "overlay_summary.json", summary)}


CATALYST_HEADER = [
    "T",
    "chi",
    "d",
    "problem_energy",
    "ground_energy_exact",
    "excess_energy",
    "small_T",
    "catalyst_improves",
    "status",
]


def catalyst_rows(records: Sequence[SweepRecord], small_T: float) -> list[list[Any]]:
    """Excess energy per (T, chi), sorted by (T, chi), with the small-T improvement flag."""
    by_T: dict[float, dict[float, SweepRecord]] = {}
    for r in records:
        by_T.setdefault(r.T, {})[r.chi] = r
    rows = []
    for T in sorted(by_T):
        group = by_T[T]
        is_small = T <= small_T
        flag = None
        if is_small and 0.0 in group and group[0.0].status == "ok":
            base = group[0.0].problem_energy - group[0.0].ground_energy_exact
            flag = any(
                r.problem_energy - r.ground_energy_exact < base
                for chi, r in group.items()
                if chi > 0 and r.status == "ok"
            )
        for chi in sorted(group):
            r = group[chi]
            excess = r.problem_energy - r.ground_energy_exact
            rows.append([r.T, r.chi, r.d, r.problem_energy, r.ground_energy_exact, excess, is_small, flag, r.status])
    return rows


def run_catalyst_comparison(cfg: ExperimentConfig) -> dict[str, Path]:
    if len(cfg.chi_grid) < 2 or 0.0 not in cfg.chi_grid:
        raise ConfigError("catalyst comparison needs at least two chi values including 0")
    data, problem = load_problem(cfg)
    records = sweep_records(problem, cfg)
    out = Path(cfg.output_dir)
    csv_path = write_csv(out / "catalyst.csv", CATALYST_HEADER, catalyst_rows(records, cfg.small_T))
    summary = _problem_summary(problem, data)
    summary["wall_time"] = [{"T": r.T, "chi": r.chi, "seconds": r.wall_time} for r in records]
    summary["config"] = cfg.flat()
    return {"csv": csv_path, "summary": _write_json(out / "catalyst_summary.json", summary)}


QUBO_HEADER = ["K", "theta_decoded", "objective", "gap_vs_continuous"]


def precision_family(cfg: ExperimentConfig) -> list[PrecisionVector]:
    return [
        PrecisionVector.descending(K, top=cfg.qubo_top, signed=cfg.qubo_signed)
        for K in range(cfg.qubo_K_min, cfg.qubo_K_max + 1)
    ]


def exact_quadratures(problem: RegressionProblem, d: int) -> np.ndarray:
    """Ground-state readout of the problem Hamiltonian by exact diagonalization."""
    space = ModeSpace(problem.num_parameters, d)
    ground = exact_spectrum(build_problem_hamiltonian(problem, space)).ground_state
    return np.array([expectation(quadrature(space, m), ground) for m in range(space.num_modes)])


def qubo_report_rows(
    problem: RegressionProblem, precisions: Sequence[PrecisionVector], d: int
) -> list[list[Any]]:
    optimum = cost(problem, least_squares_solution(problem))
    rows = [
        [r.K, ";".join(repr(float(t)) for t in r.theta), r.objective, r.gap]
        for r in discretization_report(problem, precisions)
    ]
    theta_c = exact_quadratures(problem, d)
    c = cost(problem, theta_c)
    gap = c - optimum
    if -1e-12 < gap < 0:
        gap = 0.0
    rows.append(["continuous", ";".join(repr(float(t)) for t in theta_c), c, gap])
    return rows


def run_qubo_report(cfg: ExperimentConfig, precisions: Sequence[PrecisionVector] | None = None) -> dict[str, Path]:
    _, problem = load_problem(cfg)
    precisions = precision_family(cfg) if precisions is None else list(precisions)
    d = cfg.d_max if cfg.truncation == "auto" else cfg.truncation
    rows = qubo_report_rows(problem, precisions, d)
    sign = "signed" if cfg.qubo_signed else "unsigned"
    comments = [
        f"precision_family: descending powers of two from {cfg.qubo_top:g} ({sign})",
        "precisions: " + " ".join(pv.describe() for pv in precisions),
        f"continuous_row: exact diagonalization at d={d}",
    ]
    path = write_csv(Path(cfg.output_dir) / "qubo.csv", QUBO_HEADER, rows, comments)
    return {"csv": path}


SPECTRUM_HEADER_BASE = ["d", "ground_energy", "first_excited_energy", "gap", "minimum_cost"]


def run_spectrum(cfg: ExperimentConfig) -> dict[str, Path]:
    data, problem = load_problem(cfg)
    d = cfg.d_max if cfg.truncation == "auto" else cfg.truncation
    M = problem.num_parameters
    space = ModeSpace(M, d)
    report = exact_spectrum(build_problem_hamiltonian(problem, space))
    x = [expectation(quadrature(space, m), report.ground_state) for m in range(M)]
    theta = least_squares_solution(problem)
    header = SPECTRUM_HEADER_BASE + [f"x_{m + 1}" for m in range(M)] + [f"theta_star_{m + 1}" for m in range(M)]
    row = [d, report.ground_energy, report.first_excited_energy, report.gap, problem.minimum_cost, *x, *theta]
    out = Path(cfg.output_dir)
    csv_path = write_csv(out / "spectrum.csv", header, [row])
    summary = _problem_summary(problem, data)
    summary["config"] = cfg.flat()
    return {"csv": csv_path, "summary": _write_json(out / "spectrum_summary.json", summary)}


LSQ_HEADER = ["parameter", "theta_standardized", "coefficient_original"]


def run_lsq(cfg: ExperimentConfig) -> dict[str, Path]:
    data, problem = load_problem(cfg)
    theta = least_squares_solution(problem)
    rows = []
    if problem.spec is None:
        rows = [[f"theta_{m + 1}", t, t] for m, t in enumerate(theta)]
    else:
        slopes, intercept = original_coefficients(problem, theta)
        slope_iter = iter(slopes)
        for b, t in zip(problem.spec.basis, theta):
            if b.kind == "intercept":
                continue
            rows.append([b.label, t, next(slope_iter)])
        icpt = [t for b, t in zip(problem.spec.basis, theta) if b.kind == "intercept"]
        rows.append(["intercept", icpt[0] if icpt else 0.0, intercept])
    out = Path(cfg.output_dir)
    csv_path = write_csv(out / "lsq.csv", LSQ_HEADER, rows)
    summary = _problem_summary(problem, data)
    summary["config"] = cfg.flat()
    return {"csv": csv_path, "summary": _write_json(out / "lsq_summary.json", summary)}
