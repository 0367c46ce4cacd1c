"""Shared fixtures: the 16-node example data set and its fitted model table."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from arimamerge import ArimaModel, Series
from arimamerge.tables import ModelRow, parse_models_csv, parse_readings_csv

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def example_readings_csv() -> str:
    return (DATA_DIR / "example16_readings.csv").read_text()


@pytest.fixture(scope="session")
def example_models_csv() -> str:
    return (DATA_DIR / "example16_models.csv").read_text()


@pytest.fixture(scope="session")
def example_readings(example_readings_csv) -> list[Series]:
    return parse_readings_csv(example_readings_csv)


@pytest.fixture(scope="session")
def example_model_rows(example_models_csv) -> list[ModelRow]:
    return parse_models_csv(example_models_csv)


@pytest.fixture(scope="session")
def example_models(example_model_rows) -> dict[str, ArimaModel]:
    return {r.node_ids[0]: r.model for r in example_model_rows}


def zero_sum_ar_series(roots, n: int, level: float) -> tuple[list[float], np.ndarray]:
    """Noiseless AR(p) trajectory whose deviations sum exactly to zero, so the
    sample mean equals ``level`` and the mean-form regression is exact.

    The deviation signal is a combination of the characteristic solutions
    a_j * r_j^t with the last amplitude solved from sum_t x(t) = 0. Returns
    (series values, generator coefficients).
    """
    roots = np.asarray(roots, dtype=float)
    k = len(roots)
    geo = np.array([(1 - r**n) / (1 - r) for r in roots])
    a = np.ones(k)
    a[-1] = -geo[:-1].sum() / geo[-1]
    t = np.arange(n)
    x = sum(a[j] * roots[j] ** t for j in range(k))
    poly = np.poly(roots)
    phi = -poly[1:]
    return [level + v for v in x], phi
