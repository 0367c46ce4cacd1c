"""Autoregressive model representation, least-squares fitting, one-step
forecasting and residual diagnostics.

The model is kept in mean form::

    Y(t) = mu + sum_i ar_i * (Y(t-i) - mu) + sum_j ma_j * e(t-j)

on the d-times differenced scale, with ``constant`` playing the role of mu.
Fitting estimates the AR part only: mu is the sample mean of the differenced
series and the ar coefficients solve the ordinary least-squares problem over
all rows with full lag history. Moving-average coefficients are carried,
forecast and merged, but never estimated here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateDataError,
    InsufficientHistoryError,
    SeriesTooShortError,
    UnsupportedSpecError,
)
from .series import Series, diff_values

# Pivot magnitudes below this are treated as an exactly singular system.
PIVOT_TOL = 1e-10


@dataclass(frozen=True)
class ModelSpec:
    """Order triple: p autoregressive lags, d differencing levels, q
    moving-average lags."""

    p: int
    d: int = 0
    q: int = 0

    def __post_init__(self) -> None:
        if min(self.p, self.d, self.q) < 0:
            raise ValueError("model orders must be >= 0")


@dataclass(frozen=True)
class ArimaModel:
    spec: ModelSpec
    constant: float
    ar_coeffs: tuple[float, ...] = ()
    ma_coeffs: tuple[float, ...] = ()
    error_value: float = 0.0
    weight: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "ar_coeffs", tuple(float(v) for v in self.ar_coeffs))
        object.__setattr__(self, "ma_coeffs", tuple(float(v) for v in self.ma_coeffs))
        if len(self.ar_coeffs) != self.spec.p or len(self.ma_coeffs) != self.spec.q:
            raise ValueError("coefficient counts must match the model spec")
        coeffs = (self.constant, self.error_value, *self.ar_coeffs, *self.ma_coeffs)
        if not all(math.isfinite(v) for v in coeffs):
            raise ValueError("model parameters must be finite")
        if self.error_value < 0:
            raise ValueError("error_value must be >= 0")
        if self.weight < 1:
            raise ValueError("weight must be >= 1")


@dataclass(frozen=True)
class ResidualTrace:
    """One-step residuals e(t) aligned to source-series indices; indices
    before ``start_index`` have no residual and read as zero."""

    residuals: tuple[float, ...]
    start_index: int

    def at(self, source_index: int) -> float:
        j = source_index - self.start_index
        if j < 0 or j >= len(self.residuals):
            return 0.0
        return self.residuals[j]


def solve_linear_system(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Gaussian elimination with partial pivoting for the small dense normal
    equations; a pivot below PIVOT_TOL means the system is singular."""
    a = np.array(matrix, dtype=float)
    b = np.array(rhs, dtype=float)
    n = a.shape[0]
    for k in range(n):
        pivot_row = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[pivot_row, k]) < PIVOT_TOL:
            raise DegenerateDataError(
                "normal equations are singular (zero-variance regressors?)"
            )
        if pivot_row != k:
            a[[k, pivot_row]] = a[[pivot_row, k]]
            b[[k, pivot_row]] = b[[pivot_row, k]]
        for i in range(k + 1, n):
            f = a[i, k] / a[k, k]
            a[i, k:] -= f * a[k, k:]
            b[i] -= f * b[k]
    x = np.zeros(n)
    for k in range(n - 1, -1, -1):
        x[k] = (b[k] - a[k, k + 1:] @ x[k + 1:]) / a[k, k]
    return x


def fit_ar(s: Series, spec: ModelSpec) -> ArimaModel:
    """Fit an AR(p) model (optionally on the d-times differenced series).

    Raises UnsupportedSpecError for q > 0 or p == 0, SeriesTooShortError when
    fewer than 2p+1 differenced values remain, and DegenerateDataError when
    the normal equations are singular.
    """
    if spec.q > 0:
        raise UnsupportedSpecError("moving-average estimation is not supported")
    if spec.p == 0:
        raise UnsupportedSpecError("need at least one autoregressive lag to fit")
    w = diff_values(s.values, spec.d)
    n, p = len(w), spec.p
    if n < 2 * p + 1:
        raise SeriesTooShortError(
            f"need at least {2 * p + 1} values after differencing, got {n}"
        )
    w = np.asarray(w)
    mu = float(w.mean())
    z = w - mu
    design = np.column_stack([z[p - i: n - i] for i in range(1, p + 1)])
    target = z[p:]
    gram = design.T @ design
    moment = design.T @ target
    phi = solve_linear_system(gram, moment)
    resid = target - design @ phi
    rmse = float(np.sqrt(np.mean(resid**2)))
    return ArimaModel(
        spec=spec,
        constant=mu,
        ar_coeffs=tuple(float(v) for v in phi),
        error_value=rmse,
    )


def _predict_one(
    m: ArimaModel, w: list[float], t: int, resid: list[float] | ResidualTrace, d_offset: int
) -> float:
    """Prediction on the differenced scale for differenced index t."""
    mu = m.constant
    acc = mu
    for i, phi in enumerate(m.ar_coeffs, start=1):
        acc += phi * (w[t - i] - mu)
    for j, psi in enumerate(m.ma_coeffs, start=1):
        k = t - j
        if isinstance(resid, ResidualTrace):
            acc += psi * resid.at(k + d_offset)
        else:
            acc += psi * (resid[k - m.spec.p] if k >= m.spec.p else 0.0)
    return acc


def forecast_next(
    m: ArimaModel, history: Series, e: ResidualTrace | None = None
) -> float:
    """One-step-ahead forecast on the original scale.

    The prediction is formed on the differenced scale and then integrated d
    times by adding back the trailing value of each differencing level.
    """
    d, p = m.spec.d, m.spec.p
    if history.length < p + d:
        raise InsufficientHistoryError(
            f"need at least {p + d} history values, got {history.length}"
        )
    levels = [list(history.values)]
    for _ in range(d):
        prev = levels[-1]
        levels.append([prev[i + 1] - prev[i] for i in range(len(prev) - 1)])
    w = levels[-1]
    trace = e if e is not None else ResidualTrace((), p + d)
    pred = _predict_one(m, w, len(w), trace, d_offset=d)
    for level in reversed(levels[:-1]):
        pred += level[-1]
    return pred


def residuals(m: ArimaModel, s: Series) -> ResidualTrace:
    """In-sample one-step residuals; residuals needed by MA terms before the
    first full-lag index are taken as zero."""
    d, p = m.spec.d, m.spec.p
    if s.length < p + d + 1:
        raise SeriesTooShortError(
            f"need at least {p + d + 1} values for one residual, got {s.length}"
        )
    w = diff_values(s.values, d)
    out: list[float] = []
    for t in range(p, len(w)):
        pred = _predict_one(m, w, t, out, d_offset=d)
        out.append(w[t] - pred)
    return ResidualTrace(tuple(out), start_index=p + d)


def model_rmse(m: ArimaModel, s: Series) -> float:
    """Root-mean-square of the in-sample one-step residuals."""
    trace = residuals(m, s)
    return float(np.sqrt(np.mean(np.square(trace.residuals))))
