import numpy as np
import pytest

from bosonic_regression.datasets import load_preset
from bosonic_regression.regression import build_problem

_ACCEPTANCE_LINES: list[tuple[int, str]] = []


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def acceptance_report():
    def record(number, name, status, detail=""):
        line = f"[{status}] criterion {number}: {name}"
        if detail:
            line += f" -- {detail}"
        _ACCEPTANCE_LINES.append((number, line))
        print(line)

    return record


@pytest.fixture(scope="session")
def presets():
    out = {}
    for name in ("iris-m1", "iris-m2", "penguins-m3"):
        data, spec = load_preset(name)
        out[name] = (data, build_problem(data, spec, standardize=True, normalize=True))
    return out


@pytest.fixture(scope="session")
def iris_m1(presets):
    return presets["iris-m1"][1]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def anneal_cache(presets):
    """Memoized ``anneal`` on the shipped presets, keyed by (preset, T, chi, d)."""
    from bosonic_regression.dynamics import anneal
    from bosonic_regression.hamiltonians import AnnealSchedule

    cache = {}

    def run(preset, T, chi=0.0, d=12):
        key = (preset, float(T), float(chi), int(d))
        if key not in cache:
            cache[key] = anneal(presets[preset][1], AnnealSchedule(T, kerr_strength=chi), d, num_checkpoints=0)
        return cache[key]

    return run
