"""End-to-end pipeline: fit or load leaf models, merge them up the tree,
attach data-driven error values and percentage errors per level, and account
for the scalar values transmitted versus a raw-forwarding network.

A merged node's error value is the RMS, over the timesteps where every lag is
defined, of the per-timestep worst-case propagation value
(:func:`arimamerge.merging.propagated_error_bound`), with the children's
error values feeding in as the eps terms. Each node's representative signal
is the mean of the leaf series beneath it, so the bound is evaluated against
the histories the merged model actually stands for.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .arima import ArimaModel, ModelSpec, fit_ar, residuals
from .errors import (
    DegenerateDataError,
    EmptyInputError,
    EmptySubtreeError,
    InconsistentColumnsError,
)
from .grouping import MergeNode, MergeTree, build_merge_tree
from .merging import MergedModel, propagated_error_bound
from .series import Series, diff_values


@dataclass(frozen=True)
class SuppressionPolicy:
    """No-transmit band: a node stays silent while the current reading is
    within +-beta of the last transmitted one. beta may be +infinity."""

    beta: float

    def __post_init__(self) -> None:
        if math.isnan(self.beta) or self.beta < 0:
            raise ValueError("beta must be >= 0 (or +infinity)")


@dataclass(frozen=True)
class ReportRow:
    node_ids: tuple[str, ...]
    constant: float
    ar_coeffs: tuple[float, ...]
    ma_coeffs: tuple[float, ...]
    error_value: float
    error_percent: float
    reference_used: float
    weight: int


@dataclass(frozen=True)
class LevelReport:
    level: int
    rows: tuple[ReportRow, ...]


@dataclass(frozen=True)
class SimulationReport:
    levels: tuple[LevelReport, ...]
    messages_raw: int
    messages_model: int
    suppression_events: int


def should_transmit(last_sent: float, current: float, policy: SuppressionPolicy) -> bool:
    return abs(current - last_sent) > policy.beta


def message_cost(model: ArimaModel | MergedModel) -> int:
    """Scalar values sent upstream to establish one model: constant, the p+q
    coefficients, error value, weight, one initial state value, plus the two
    family sigmas for merged models."""
    if isinstance(model, MergedModel):
        inner = model.model
        return inner.spec.p + inner.spec.q + 6
    return model.spec.p + model.spec.q + 4


def count_suppression_events(values: Sequence[float], policy: SuppressionPolicy) -> int:
    """Retransmissions of the state value after its initial send."""
    last = values[0]
    events = 0
    for v in values[1:]:
        if should_transmit(last, v, policy):
            events += 1
            last = v
    return events


def percentage_error(
    error_value: float, subtree: MergeNode, leaf_models: Mapping[str, ArimaModel]
) -> float:
    """Error as a percentage of the smallest leaf-model constant beneath the
    subtree (the reference the per-level tables use)."""
    if not subtree.leaf_ids:
        raise EmptySubtreeError("subtree covers no leaves")
    reference = min(leaf_models[i].constant for i in subtree.leaf_ids)
    if reference == 0:
        raise DegenerateDataError("reference constant is zero")
    return 100.0 * error_value / reference


def _node_error_pass(tree: MergeTree, work: dict[int, np.ndarray],
                     traces: dict[int, np.ndarray], errs: dict[int, float],
                     series_by_id: Mapping[str, Series]) -> None:
    """Bottom-up pass filling work signals, residual traces and error values
    for internal nodes; leaf entries must already be present."""
    for level in tree.levels[1:]:
        for node in level:
            if node.is_leaf or id(node) in errs:
                continue
            p, q = node.model.spec.p, node.model.spec.q
            a, b = node.children
            wa, wb = work[id(a)], work[id(b)]
            ta, tb = traces[id(a)], traces[id(b)]
            wm = (wa + wb) / 2.0
            vals = []
            for t in range(p, len(wm)):
                hist1 = [wa[t - i] for i in range(1, p + 1)]
                hist2 = [wb[t - i] for i in range(1, p + 1)]
                res1 = [ta[t - j - p] if t - j >= p else 0.0 for j in range(1, q + 1)]
                res2 = [tb[t - j - p] if t - j >= p else 0.0 for j in range(1, q + 1)]
                vals.append(
                    propagated_error_bound(
                        a.model, b.model, errs[id(a)], errs[id(b)],
                        hist1, hist2, res1, res2,
                    )
                )
            err = float(np.sqrt(np.mean(np.square(vals))))
            node.model = dataclasses.replace(node.model, error_value=err)
            node.merged = dataclasses.replace(
                node.merged, model=node.model, merge_error=err
            )
            work[id(node)] = wm
            mean_series = Series(
                ";".join(node.leaf_ids),
                tuple(
                    np.mean([series_by_id[i].values for i in node.leaf_ids], axis=0)
                ),
            )
            trace = residuals(node.model, mean_series)
            traces[id(node)] = np.asarray(trace.residuals)
            errs[id(node)] = err


def run_pipeline(
    readings: Sequence[Series],
    spec: ModelSpec,
    strategy: str = "adjacent",
    policy: SuppressionPolicy = SuppressionPolicy(math.inf),
    leaf_models: Mapping[str, ArimaModel] | None = None,
) -> SimulationReport:
    """Fit (or load) one model per node, merge up the tree, and report
    per-level model tables plus the message accounting.

    ``leaf_models`` bypasses fitting: useful to drive the merge arithmetic
    from an externally fitted model table.
    """
    if not readings:
        raise EmptyInputError("no node series supplied")
    lengths = {s.length for s in readings}
    if len(lengths) > 1:
        raise InconsistentColumnsError(f"column lengths differ: {sorted(lengths)}")
    ids = [s.node_id for s in readings]
    series_by_id = {s.node_id: s for s in readings}
    if len(series_by_id) != len(ids):
        raise InconsistentColumnsError("duplicate node identifiers")

    if leaf_models is None:
        models = {s.node_id: fit_ar(s, spec) for s in readings}
    else:
        missing = [i for i in ids if i not in leaf_models]
        if missing:
            raise EmptyInputError(f"no model provided for nodes: {missing}")
        models = {i: leaf_models[i] for i in ids}

    tree = build_merge_tree([models[i] for i in ids], strategy=strategy, ids=ids)

    if not tree.root.is_leaf:
        work: dict[int, np.ndarray] = {}
        traces: dict[int, np.ndarray] = {}
        errs: dict[int, float] = {}
        for node in tree.leaves:
            s = series_by_id[node.leaf_ids[0]]
            work[id(node)] = np.asarray(diff_values(s.values, node.model.spec.d))
            traces[id(node)] = np.asarray(residuals(node.model, s).residuals)
            errs[id(node)] = node.model.error_value
        _node_error_pass(tree, work, traces, errs, series_by_id)

    levels = []
    for depth, level_nodes in enumerate(tree.levels):
        rows = []
        for node in level_nodes:
            pct = percentage_error(node.model.error_value, node, models)
            reference = min(models[i].constant for i in node.leaf_ids)
            rows.append(
                ReportRow(
                    node_ids=node.leaf_ids,
                    constant=node.model.constant,
                    ar_coeffs=node.model.ar_coeffs,
                    ma_coeffs=node.model.ma_coeffs,
                    error_value=node.model.error_value,
                    error_percent=pct,
                    reference_used=reference,
                    weight=node.model.weight,
                )
            )
        levels.append(LevelReport(level=depth, rows=tuple(rows)))

    timesteps = readings[0].length
    messages_raw = len(readings) * timesteps
    suppression_events = sum(
        count_suppression_events(s.values, policy) for s in readings
    )

    seen: set[int] = set()
    cost = 0

    def walk(node: MergeNode) -> None:
        nonlocal cost
        if id(node) in seen:
            return
        seen.add(id(node))
        cost += message_cost(node.merged if node.merged is not None else node.model)
        for child in node.children:
            walk(child)

    walk(tree.root)
    messages_model = cost + suppression_events

    return SimulationReport(
        levels=tuple(levels),
        messages_raw=messages_raw,
        messages_model=messages_model,
        suppression_events=suppression_events,
    )
