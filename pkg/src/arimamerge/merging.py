"""Pairwise model merging: coefficient averaging, deviation tracking,
single-step error propagation and approximate child recovery.

Two sibling models are replaced by their coefficient-wise mean (optionally
weighted by the number of leaf nodes each side represents). Alongside the
merged coefficients we keep, per child, the maximum absolute gap to the
merged value within each coefficient family; those sigmas are what make
:func:`recover_children` intervals guaranteed to contain the true children.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .arima import ArimaModel
from .errors import SpecMismatchError, WindowLengthMismatchError


@dataclass(frozen=True)
class DeviationRecord:
    """Per-child deviation sigmas from the merged model, one per family."""

    child_id: str
    sigma_constant: float
    sigma_phi: float
    sigma_psi: float


@dataclass(frozen=True)
class MergedModel:
    model: ArimaModel
    deviations: tuple[DeviationRecord, DeviationRecord]
    merge_error: float


@dataclass(frozen=True)
class IntervalModel:
    """Closed per-coefficient intervals recovered for one child."""

    constant: tuple[float, float]
    ar: tuple[tuple[float, float], ...]
    ma: tuple[tuple[float, float], ...]


def _clamp(v: float, a: float, b: float) -> float:
    # float rounding of a weighted mean must not escape the child bracket
    lo, hi = (a, b) if a <= b else (b, a)
    return min(max(v, lo), hi)


def _deviation(child: ArimaModel, merged_const: float, merged_ar, merged_ma,
               child_id: str) -> DeviationRecord:
    sig_phi = max((abs(c - m) for c, m in zip(child.ar_coeffs, merged_ar)), default=0.0)
    sig_psi = max((abs(c - m) for c, m in zip(child.ma_coeffs, merged_ma)), default=0.0)
    return DeviationRecord(
        child_id=child_id,
        sigma_constant=abs(child.constant - merged_const),
        sigma_phi=sig_phi,
        sigma_psi=sig_psi,
    )


def _merge(m1: ArimaModel, m2: ArimaModel, w1: float, w2: float,
           child_ids: tuple[str, str]) -> MergedModel:
    if m1.spec != m2.spec:
        raise SpecMismatchError(f"cannot merge orders {m1.spec} and {m2.spec}")
    if w1 == w2:
        # equal weights must reproduce the plain average bit for bit
        w1 = w2 = 1.0
    total = w1 + w2

    def comb(a: float, b: float) -> float:
        return _clamp((w1 * a + w2 * b) / total, a, b)

    const = comb(m1.constant, m2.constant)
    ar = tuple(comb(a, b) for a, b in zip(m1.ar_coeffs, m2.ar_coeffs))
    ma = tuple(comb(a, b) for a, b in zip(m1.ma_coeffs, m2.ma_coeffs))
    err = (w1 * m1.error_value + w2 * m2.error_value) / total
    model = ArimaModel(
        spec=m1.spec,
        constant=const,
        ar_coeffs=ar,
        ma_coeffs=ma,
        error_value=err,
        weight=m1.weight + m2.weight,
    )
    deviations = (
        _deviation(m1, const, ar, ma, child_ids[0]),
        _deviation(m2, const, ar, ma, child_ids[1]),
    )
    return MergedModel(model=model, deviations=deviations, merge_error=err)


def average_merge(m1: ArimaModel, m2: ArimaModel,
                  child_ids: tuple[str, str] = ("1", "2")) -> MergedModel:
    """Plain coefficient-wise mean of two same-order models; the stored error
    is the mean of the children's errors (the data-driven aggregate is
    computed by the simulator, which has the histories)."""
    return _merge(m1, m2, 1.0, 1.0, child_ids)


def weighted_merge(m1: ArimaModel, m2: ArimaModel,
                   child_ids: tuple[str, str] = ("1", "2")) -> MergedModel:
    """Mean weighted by the number of leaf nodes each model represents, so a
    10-node average does not count the same as a 2-node one."""
    return _merge(m1, m2, float(m1.weight), float(m2.weight), child_ids)


def merge_error_ar1(phi1: float, phi2: float, eps1: float, eps2: float,
                    y1_prev: float, y2_prev: float) -> float:
    """Single-step error of the averaged AR(1) model:
    (eps1+eps2)/2 + (phi1-phi2)*(y1_prev-y2_prev)/4."""
    return (eps1 + eps2) / 2.0 + (phi1 - phi2) * (y1_prev - y2_prev) / 4.0


def _check_windows(m1: ArimaModel, m2: ArimaModel,
                   hist1: Sequence[float], hist2: Sequence[float],
                   res1: Sequence[float], res2: Sequence[float]) -> None:
    if m1.spec != m2.spec:
        raise SpecMismatchError(f"cannot combine orders {m1.spec} and {m2.spec}")
    p, q = m1.spec.p, m1.spec.q
    if len(hist1) != p or len(hist2) != p:
        raise WindowLengthMismatchError(
            f"lag windows must hold {p} values, got {len(hist1)} and {len(hist2)}"
        )
    if len(res1) != q or len(res2) != q:
        raise WindowLengthMismatchError(
            f"residual windows must hold {q} values, got {len(res1)} and {len(res2)}"
        )


def merge_error_general(m1: ArimaModel, m2: ArimaModel, eps1: float, eps2: float,
                        hist1: Sequence[float], hist2: Sequence[float],
                        res1: Sequence[float] = (), res2: Sequence[float] = ()) -> float:
    """Single-step error of the averaged model for arbitrary orders.

    ``hist``/``res`` windows are most-recent-first: hist[i-1] is Y(t-i) and
    res[j-1] is e(t-j). With p = 1, q = 0 this reduces to merge_error_ar1.
    """
    _check_windows(m1, m2, hist1, hist2, res1, res2)
    val = (eps1 + eps2) / 2.0
    for a, b, y1, y2 in zip(m1.ar_coeffs, m2.ar_coeffs, hist1, hist2):
        val += (a - b) * (y1 - y2) / 4.0
    for a, b, e1, e2 in zip(m1.ma_coeffs, m2.ma_coeffs, res1, res2):
        val += (a - b) * (e1 - e2) / 4.0
    return val


def propagated_error_bound(m1: ArimaModel, m2: ArimaModel, eps1: float, eps2: float,
                           hist1: Sequence[float], hist2: Sequence[float],
                           res1: Sequence[float] = (), res2: Sequence[float] = ()) -> float:
    """Worst-case-alignment variant of :func:`merge_error_general`: same
    terms, magnitudes accumulated, so opposite-signed coefficient gaps cannot
    cancel. Always >= |merge_error_general| on the same inputs; this is the
    per-timestep quantity the simulator aggregates into a merged model's
    error value."""
    _check_windows(m1, m2, hist1, hist2, res1, res2)
    val = (eps1 + eps2) / 2.0
    for a, b, y1, y2 in zip(m1.ar_coeffs, m2.ar_coeffs, hist1, hist2):
        val += abs((a - b) * (y1 - y2)) / 4.0
    for a, b, e1, e2 in zip(m1.ma_coeffs, m2.ma_coeffs, res1, res2):
        val += abs((a - b) * (e1 - e2)) / 4.0
    return val


def _interval(center: float, sigma: float) -> tuple[float, float]:
    if sigma == 0.0:
        return (center, center)
    # one ulp of padding makes sigma >= the real child gap even when the
    # stored float rounded down, and monotone rounding then keeps the child
    # inside both endpoints
    pad = math.nextafter(sigma, math.inf)
    return (center - pad, center + pad)


def recover_children(mm: MergedModel) -> tuple[IntervalModel, IntervalModel]:
    """Approximate the two children from the merged model and the stored
    sigmas: every coefficient of child k lies in [avg - sigma_k, avg + sigma_k]
    with that child's family sigma."""
    out = []
    for dev in mm.deviations:
        out.append(
            IntervalModel(
                constant=_interval(mm.model.constant, dev.sigma_constant),
                ar=tuple(_interval(c, dev.sigma_phi) for c in mm.model.ar_coeffs),
                ma=tuple(_interval(c, dev.sigma_psi) for c in mm.model.ma_coeffs),
            )
        )
    return out[0], out[1]
