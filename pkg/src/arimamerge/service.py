"""HTTP service wrapping the package: the base-station side of the system.

Request and response bodies carry the same CSV payloads the CLI reads and
writes, plus structured JSON mirrors. Domain errors map to HTTP 400 with a
``category`` of "input" or "numeric" so clients can distinguish bad requests
from numeric failures.
"""

from __future__ import annotations

import math

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .arima import ArimaModel, ModelSpec, fit_ar
from .errors import ArimaMergeError
from .grouping import build_merge_tree, count_pairings, count_trees, render_tree, tree_to_dict
from .merging import average_merge, weighted_merge
from .simulate import SuppressionPolicy, run_pipeline
from .tables import (
    ModelRow,
    models_to_csv,
    parse_models_csv,
    parse_readings_csv,
    report_to_csv,
    report_to_dict,
    tree_to_rows,
)


class SpecIn(BaseModel):
    p: int = Field(ge=0)
    d: int = Field(default=0, ge=0)
    q: int = Field(default=0, ge=0)

    def to_spec(self) -> ModelSpec:
        return ModelSpec(p=self.p, d=self.d, q=self.q)


class DeviationOut(BaseModel):
    child_id: str
    sigma_constant: float
    sigma_phi: float
    sigma_psi: float


class ModelOut(BaseModel):
    node_ids: list[str]
    p: int
    d: int
    q: int
    constant: float
    ar_coeffs: list[float]
    ma_coeffs: list[float]
    error_value: float
    weight: int
    merge_error: float | None = None
    deviations: list[DeviationOut] | None = None


def _model_out(row: ModelRow) -> ModelOut:
    m = row.model
    out = ModelOut(
        node_ids=list(row.node_ids),
        p=m.spec.p,
        d=m.spec.d,
        q=m.spec.q,
        constant=m.constant,
        ar_coeffs=list(m.ar_coeffs),
        ma_coeffs=list(m.ma_coeffs),
        error_value=m.error_value,
        weight=m.weight,
    )
    if row.merged is not None:
        out.merge_error = row.merged.merge_error
        out.deviations = [
            DeviationOut(
                child_id=d.child_id,
                sigma_constant=d.sigma_constant,
                sigma_phi=d.sigma_phi,
                sigma_psi=d.sigma_psi,
            )
            for d in row.merged.deviations
        ]
    return out


class FitRequest(BaseModel):
    readings_csv: str
    spec: SpecIn


class ModelsResponse(BaseModel):
    models: list[ModelOut]
    models_csv: str


class MergeRequest(BaseModel):
    models_csv: str
    weighted: bool = False


class TreeRequest(BaseModel):
    models_csv: str
    strategy: str = Field(default="adjacent", pattern="^(adjacent|similarity)$")


class TreeResponse(BaseModel):
    levels: list[dict]
    text: str
    models_csv: str


class SimulateRequest(BaseModel):
    readings_csv: str
    spec: SpecIn
    models_csv: str | None = None
    beta: float | None = Field(default=None, ge=0, description="None means +infinity")
    strategy: str = Field(default="adjacent", pattern="^(adjacent|similarity)$")


class SimulateResponse(BaseModel):
    report: dict
    report_csv: str


class CountResponse(BaseModel):
    n: int
    value: int


app = FastAPI(title="arimamerge", version=__version__)


@app.exception_handler(ArimaMergeError)
async def domain_error_handler(request: Request, exc: ArimaMergeError) -> JSONResponse:
    return JSONResponse(
        status_code=400,
        content={
            "error": type(exc).__name__,
            "message": str(exc),
            "category": exc.category,
        },
    )


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/fit", response_model=ModelsResponse)
def fit(req: FitRequest) -> ModelsResponse:
    series_list = parse_readings_csv(req.readings_csv)
    spec = req.spec.to_spec()
    rows = [ModelRow(node_ids=(s.node_id,), model=fit_ar(s, spec)) for s in series_list]
    return ModelsResponse(models=[_model_out(r) for r in rows], models_csv=models_to_csv(rows))


@app.post("/merge", response_model=ModelsResponse)
def merge(req: MergeRequest) -> ModelsResponse:
    """One round of pairwise merging over consecutive rows of the table; an
    odd trailing row passes through unchanged."""
    rows = parse_models_csv(req.models_csv)
    merge_fn = weighted_merge if req.weighted else average_merge
    out: list[ModelRow] = []
    for i in range(0, len(rows) - 1, 2):
        a, b = rows[i], rows[i + 1]
        mm = merge_fn(a.model, b.model,
                      child_ids=(";".join(a.node_ids), ";".join(b.node_ids)))
        out.append(ModelRow(node_ids=a.node_ids + b.node_ids, model=mm.model, merged=mm))
    if len(rows) % 2 == 1:
        out.append(rows[-1])
    return ModelsResponse(models=[_model_out(r) for r in out], models_csv=models_to_csv(out))


@app.post("/tree", response_model=TreeResponse)
def tree(req: TreeRequest) -> TreeResponse:
    rows = parse_models_csv(req.models_csv)
    built = build_merge_tree(
        [r.model for r in rows],
        strategy=req.strategy,
        ids=[";".join(r.node_ids) for r in rows],
    )
    return TreeResponse(
        levels=tree_to_dict(built)["levels"],
        text=render_tree(built),
        models_csv=models_to_csv(tree_to_rows(built)),
    )


@app.post("/simulate", response_model=SimulateResponse)
def simulate(req: SimulateRequest) -> SimulateResponse:
    series_list = parse_readings_csv(req.readings_csv)
    leaf_models: dict[str, ArimaModel] | None = None
    if req.models_csv is not None:
        leaf_models = {}
        for row in parse_models_csv(req.models_csv):
            for node_id in row.node_ids:
                leaf_models[node_id] = row.model
    beta = math.inf if req.beta is None else req.beta
    report = run_pipeline(
        series_list,
        spec=req.spec.to_spec(),
        strategy=req.strategy,
        policy=SuppressionPolicy(beta),
        leaf_models=leaf_models,
    )
    return SimulateResponse(report=report_to_dict(report), report_csv=report_to_csv(report))


@app.get("/count/pairings", response_model=CountResponse)
def pairings(n: int = Query(description="even node count 2n")) -> CountResponse:
    return CountResponse(n=n, value=count_pairings(n))


@app.get("/count/trees", response_model=CountResponse)
def trees(n: int = Query(description="even node count")) -> CountResponse:
    return CountResponse(n=n, value=count_trees(n))
