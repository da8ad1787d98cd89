"""HTTP front end: one POST endpoint per workbench operation.

Run with ``uvicorn kfl.service:app``.  Semantic errors (bad formulas,
unknown names, budget violations) come back as 422 with a detail message.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import __version__, ops
from .schemas import (
    AxiomRequest, AxiomResponse, CheckRequest, CheckResponse, EnumerateRequest,
    EnumerateResponse, PropsRequest, PropsResponse, SchemeInfo, VerifyRequest,
    VerifyResponse, WitnessRequest, WitnessResponse,
)

app = FastAPI(
    title="kfl",
    version=__version__,
    description="Kripke-semantics workbench for fuzzy and superintuitionistic logics",
)


def _run(fn, *args):
    try:
        return fn(*args)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.get("/schemes", response_model=list[SchemeInfo])
def schemes():
    return ops.list_schemes()


@app.get("/theorems")
def theorems() -> dict:
    return {"verify": list(ops.verify_theorem_ids()),
            "witness": list(ops.witness_theorem_ids())}


@app.post("/check", response_model=CheckResponse)
def check(request: CheckRequest):
    return _run(ops.run_check, request)


@app.post("/props", response_model=PropsResponse)
def props(request: PropsRequest):
    return _run(ops.run_props, request.model)


@app.post("/axiom", response_model=AxiomResponse)
def axiom(request: AxiomRequest):
    return _run(ops.run_axiom, request)


@app.post("/verify", response_model=VerifyResponse)
def verify(request: VerifyRequest):
    return _run(ops.run_verify, request)


@app.post("/witness", response_model=WitnessResponse)
def witness(request: WitnessRequest):
    return _run(ops.run_witness, request)


@app.post("/enumerate", response_model=EnumerateResponse)
def enumerate_(request: EnumerateRequest):
    return _run(ops.run_enumerate, request)
