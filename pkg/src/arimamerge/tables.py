"""CSV wire formats: readings tables, model tables and simulation reports.

Readings CSV: header row of node identifiers, then one row per timestep.
Model CSV: one row per model with columns
``node_ids,p,d,q,constant,ar_1..ar_p,ma_1..ma_q,error_value,weight``; merged
rows append ``merge_error`` plus per-child id and sigma columns. Multiple
node ids within one cell are joined with ';'.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from .arima import ArimaModel, ModelSpec
from .errors import InconsistentColumnsError, SpecMismatchError
from .grouping import MergeNode, MergeTree
from .merging import DeviationRecord, MergedModel
from .series import Series
from .simulate import SimulationReport

ID_JOIN = ";"


@dataclass(frozen=True)
class ModelRow:
    """One serialised model: which nodes it covers, the model itself, and the
    merge bookkeeping when it came out of a merge."""

    node_ids: tuple[str, ...]
    model: ArimaModel
    merged: MergedModel | None = None


def parse_readings_csv(text: str) -> list[Series]:
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if len(rows) < 2:
        raise InconsistentColumnsError("need a header row and at least one data row")
    header = [c.strip() for c in rows[0]]
    if len(set(header)) != len(header):
        raise InconsistentColumnsError("duplicate node identifiers in header")
    columns: list[list[float]] = [[] for _ in header]
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise InconsistentColumnsError(
                f"row {lineno} has {len(row)} cells, header has {len(header)}"
            )
        for j, cell in enumerate(row):
            try:
                columns[j].append(float(cell))
            except ValueError as exc:
                raise InconsistentColumnsError(
                    f"row {lineno}, column {header[j]!r}: {cell!r} is not a number"
                ) from exc
    return [Series(node_id, tuple(col)) for node_id, col in zip(header, columns)]


def readings_to_csv(series_list: list[Series]) -> str:
    lengths = {s.length for s in series_list}
    if len(lengths) != 1:
        raise InconsistentColumnsError("all series must have equal length")
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([s.node_id for s in series_list])
    for t in range(series_list[0].length):
        writer.writerow([repr(s.values[t]) for s in series_list])
    return out.getvalue()


def _model_header(spec: ModelSpec, merged: bool) -> list[str]:
    cols = ["node_ids", "p", "d", "q", "constant"]
    cols += [f"ar_{i}" for i in range(1, spec.p + 1)]
    cols += [f"ma_{i}" for i in range(1, spec.q + 1)]
    cols += ["error_value", "weight"]
    if merged:
        cols += ["merge_error"]
        for k in (1, 2):
            cols += [
                f"child{k}_ids",
                f"child{k}_sigma_constant",
                f"child{k}_sigma_phi",
                f"child{k}_sigma_psi",
            ]
    return cols


def models_to_csv(rows: list[ModelRow]) -> str:
    if not rows:
        raise InconsistentColumnsError("no model rows to write")
    spec = rows[0].model.spec
    if any(r.model.spec != spec for r in rows):
        raise SpecMismatchError("all rows in one model table must share (p, d, q)")
    merged = any(r.merged is not None for r in rows)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(_model_header(spec, merged))
    for r in rows:
        m = r.model
        cells = [ID_JOIN.join(r.node_ids), spec.p, spec.d, spec.q, repr(m.constant)]
        cells += [repr(c) for c in m.ar_coeffs]
        cells += [repr(c) for c in m.ma_coeffs]
        cells += [repr(m.error_value), m.weight]
        if merged:
            if r.merged is None:
                cells += [""] * 9
            else:
                cells.append(repr(r.merged.merge_error))
                for dev in r.merged.deviations:
                    cells += [
                        dev.child_id,
                        repr(dev.sigma_constant),
                        repr(dev.sigma_phi),
                        repr(dev.sigma_psi),
                    ]
        writer.writerow(cells)
    return out.getvalue()


def parse_models_csv(text: str) -> list[ModelRow]:
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if len(rows) < 2:
        raise InconsistentColumnsError("need a header row and at least one model row")
    header = [c.strip() for c in rows[0]]
    try:
        p_idx = header.index("p")
        const_idx = header.index("constant")
        err_idx = header.index("error_value")
        weight_idx = header.index("weight")
    except ValueError as exc:
        raise InconsistentColumnsError(f"missing model column: {exc}") from exc
    has_merge = "merge_error" in header

    out: list[ModelRow] = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise InconsistentColumnsError(
                f"row {lineno} has {len(row)} cells, header has {len(header)}"
            )
        cell = dict(zip(header, row))
        try:
            spec = ModelSpec(p=int(cell["p"]), d=int(cell["d"]), q=int(cell["q"]))
            ar = tuple(float(cell[f"ar_{i}"]) for i in range(1, spec.p + 1))
            ma = tuple(float(cell[f"ma_{i}"]) for i in range(1, spec.q + 1))
            model = ArimaModel(
                spec=spec,
                constant=float(cell["constant"]),
                ar_coeffs=ar,
                ma_coeffs=ma,
                error_value=float(cell["error_value"]),
                weight=int(cell["weight"]),
            )
        except (KeyError, ValueError) as exc:
            raise InconsistentColumnsError(f"row {lineno}: {exc}") from exc
        merged = None
        if has_merge and cell.get("merge_error", "").strip():
            deviations = tuple(
                DeviationRecord(
                    child_id=cell[f"child{k}_ids"],
                    sigma_constant=float(cell[f"child{k}_sigma_constant"]),
                    sigma_phi=float(cell[f"child{k}_sigma_phi"]),
                    sigma_psi=float(cell[f"child{k}_sigma_psi"]),
                )
                for k in (1, 2)
            )
            merged = MergedModel(
                model=model,
                deviations=deviations,
                merge_error=float(cell["merge_error"]),
            )
        node_ids = tuple(i for i in cell["node_ids"].split(ID_JOIN) if i)
        out.append(ModelRow(node_ids=node_ids, model=model, merged=merged))
    # a model table is only meaningful with one shared order triple
    if len({r.model.spec for r in out}) != 1:
        raise SpecMismatchError("model table mixes different (p, d, q) orders")
    return out


def tree_to_rows(tree: MergeTree) -> list[ModelRow]:
    """Flatten a merge tree into model rows, leaves first, each node once."""
    seen: set[int] = set()
    rows: list[ModelRow] = []
    for level in tree.levels:
        for node in level:
            if id(node) in seen:
                continue
            seen.add(id(node))
            rows.append(
                ModelRow(node_ids=node.leaf_ids, model=node.model, merged=node.merged)
            )
    return rows


def report_to_dict(report: SimulationReport) -> dict:
    return {
        "levels": [
            {
                "level": lvl.level,
                "rows": [
                    {
                        "node_ids": list(r.node_ids),
                        "constant": r.constant,
                        "ar_coeffs": list(r.ar_coeffs),
                        "ma_coeffs": list(r.ma_coeffs),
                        "error_value": r.error_value,
                        "error_percent": r.error_percent,
                        "reference_used": r.reference_used,
                        "weight": r.weight,
                    }
                    for r in lvl.rows
                ],
            }
            for lvl in report.levels
        ],
        "messages_raw": report.messages_raw,
        "messages_model": report.messages_model,
        "suppression_events": report.suppression_events,
    }


def report_to_json(report: SimulationReport) -> str:
    return json.dumps(report_to_dict(report), indent=2)


def report_to_csv(report: SimulationReport) -> str:
    """One table per level separated by blank lines, then the message counts."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    for lvl in report.levels:
        writer.writerow([f"level {lvl.level}"])
        if lvl.rows:
            p = len(lvl.rows[0].ar_coeffs)
            q = len(lvl.rows[0].ma_coeffs)
            header = ["node_ids", "constant"]
            header += [f"ar_{i}" for i in range(1, p + 1)]
            header += [f"ma_{i}" for i in range(1, q + 1)]
            header += ["error_value", "error_percent", "reference_used", "weight"]
            writer.writerow(header)
            for r in lvl.rows:
                cells = [ID_JOIN.join(r.node_ids), repr(r.constant)]
                cells += [repr(c) for c in r.ar_coeffs]
                cells += [repr(c) for c in r.ma_coeffs]
                cells += [
                    repr(r.error_value),
                    repr(r.error_percent),
                    repr(r.reference_used),
                    r.weight,
                ]
                writer.writerow(cells)
        writer.writerow([])
    writer.writerow(["messages_raw", report.messages_raw])
    writer.writerow(["messages_model", report.messages_model])
    writer.writerow(["suppression_events", report.suppression_events])
    return out.getvalue()
