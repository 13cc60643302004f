"""Vendored datasets and the three model presets used by the experiments.

``data/iris.csv`` is Fisher's Iris data as distributed with scikit-learn.
``data/penguins.csv`` is the Palmer Penguins data from the
``palmerpenguins`` package (CC0); two rows carry ``NA`` measurements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import ConfigError
from .regression import Dataset, ModelSpec, load_csv


def data_path(filename: str) -> Path:
    return Path(str(resources.files("bosonic_regression") / "data" / filename))


VENDORED = {
    "iris": "iris.csv",
    "penguins": "penguins.csv",
}


@dataclass(frozen=True)
class Preset:
    name: str
    dataset: str
    features: tuple[str, ...]
    target: str
    intercept: bool
    where: dict[str, str] = field(default_factory=dict)

    @property
    def spec(self) -> ModelSpec:
        return ModelSpec.linear(self.features, self.target, intercept=self.intercept)

    @property
    def num_parameters(self) -> int:
        return len(self.features) + int(self.intercept)


PRESETS = {
    # f(x) = theta_1 x, sepal width -> sepal length on setosa
    "iris-m1": Preset("iris-m1", "iris", ("sepal_width",), "sepal_length", False, {"species": "setosa"}),
    # f(x) = theta_1 x + theta_2
    "iris-m2": Preset("iris-m2", "iris", ("sepal_width",), "sepal_length", True, {"species": "setosa"}),
    # f(x) = theta_1 x_1 + theta_2 x_2 + theta_3, all species
    "penguins-m3": Preset(
        "penguins-m3", "penguins", ("body_mass_g", "bill_depth_mm"), "flipper_length_mm", True
    ),
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


def resolve_dataset_path(dataset: str) -> Path:
    if dataset in VENDORED:
        return data_path(VENDORED[dataset])
    return Path(dataset)


def load_dataset(dataset: str, features, target: str, where=None) -> Dataset:
    path = resolve_dataset_path(dataset)
    name = dataset if dataset in VENDORED else path.stem
    return load_csv(path, list(features) + [target], where=where, name=name)


def load_preset(name: str) -> tuple[Dataset, ModelSpec]:
    p = get_preset(name)
    return load_dataset(p.dataset, p.features, p.target, p.where), p.spec
