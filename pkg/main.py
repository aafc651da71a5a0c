#!/usr/bin/env python3
"""
FastAPI application exposing the arcs toolkit: exact search, certificate
verification, normalization, lifts, bounds, lines and LP export.
"""

import logging
from typing import List, Optional

import uvicorn
from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse, Response
from pydantic import BaseModel

from arc_model import alpha2_lift, alphap_lift, is_complete, normalize_2p, upper_bounds
from certificates import Certificate, VerifyReport, fixture_witnesses, from_arcset, to_arcset, verify_certificate
from config import HOST, PORT, configure_logging, validate_modulus
from errors import ArcError, InvalidMode, MalformedCertificate, ModulusOutOfRange
from geometry import enumerate_lines
from ilp_export import build_model, write_lp
from render import render_ascii, render_svg
from solver import SearchOptions, certify, solve

configure_logging()
logger = logging.getLogger(__name__)

app = FastAPI(title="Arcs", description="Maximum arcs in Z_n^2: search, certificates and bounds")

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


class TauResponse(BaseModel):
    n: int
    size: int
    proven: bool
    exhausted: bool
    nodes: int
    mode: str
    certificate: Certificate


class NormalizeResponse(BaseModel):
    matrix: List[List[int]]
    translation: List[int]
    certificate: Certificate


class LiftRequest(BaseModel):
    certificate: Certificate
    map: str = "alpha2"
    p: Optional[int] = None


class BoundsResponse(BaseModel):
    n: int
    lower: int
    upper: int
    exact: bool
    provenance: List[str]
    witness: Optional[List[List[int]]] = None


class LinesResponse(BaseModel):
    n: int
    count: int
    lines: List[List[List[int]]]


def _http_error(e: ArcError) -> HTTPException:
    """Bad input -> 400, well-formed input the mathematics rejects -> 422"""
    status = 400 if isinstance(e, (InvalidMode, MalformedCertificate, ModulusOutOfRange)) else 422
    return HTTPException(status_code=status, detail=str(e))


def _arcset(cert: Certificate):
    validate_modulus(cert.n)
    return to_arcset(cert)


@app.get("/health")
async def health():
    return {"status": "ok"}


@app.get("/api/tau", response_model=TauResponse)
def api_tau(n: int = Query(..., description="modulus"),
            mode: str = Query("generic", description="generic or seeded_2p"),
            budget: Optional[int] = Query(None, description="node budget")):
    try:
        validate_modulus(n)
        result = solve(n, SearchOptions(mode=mode, threads=1, node_budget=budget))
        return TauResponse(n=n, size=result.size, proven=result.proven, exhausted=result.exhausted,
                           nodes=result.nodes, mode=result.mode, certificate=certify(result))
    except ArcError as e:
        raise _http_error(e)


@app.post("/api/verify", response_model=VerifyReport)
def api_verify(cert: Certificate):
    try:
        validate_modulus(cert.n)
        return verify_certificate(cert)
    except ArcError as e:
        raise _http_error(e)


@app.post("/api/normalize", response_model=NormalizeResponse)
def api_normalize(cert: Certificate):
    try:
        f, image = normalize_2p(_arcset(cert))
        return NormalizeResponse(matrix=[list(row) for row in f.matrix], translation=[f.tx, f.ty],
                                 certificate=from_arcset(image, arc=True, complete=is_complete(image)))
    except ArcError as e:
        raise _http_error(e)


@app.post("/api/lift", response_model=Certificate)
def api_lift(request: LiftRequest):
    try:
        X = _arcset(request.certificate)
        if request.map == "alpha2":
            image = alpha2_lift(X)
        elif request.map == "alphap":
            if request.p is None:
                raise HTTPException(status_code=400, detail="map alphap needs p")
            validate_modulus(2 * request.p)
            image = alphap_lift(X, request.p)
        else:
            raise HTTPException(status_code=400, detail=f"unknown map {request.map!r}")
        return from_arcset(image, arc=True, complete=is_complete(image))
    except ArcError as e:
        raise _http_error(e)


@app.get("/api/bounds", response_model=BoundsResponse)
def api_bounds(n: int = Query(...), chain_composites: bool = Query(False)):
    try:
        validate_modulus(n)
        bounds = upper_bounds(n, witnesses=fixture_witnesses(), chain_composites=chain_composites)
    except ArcError as e:
        raise _http_error(e)
    return BoundsResponse(n=n, lower=bounds.lower, upper=bounds.upper, exact=bounds.exact,
                          provenance=bounds.provenance,
                          witness=bounds.witness.coords() if bounds.witness else None)


@app.get("/api/lines", response_model=LinesResponse)
def api_lines(n: int = Query(...)):
    try:
        validate_modulus(n)
    except ArcError as e:
        raise _http_error(e)
    table = enumerate_lines(n)
    return LinesResponse(n=n, count=len(table),
                         lines=[[[p.x, p.y] for p in line.points] for line in table.lines])


@app.get("/api/export-lp", response_class=PlainTextResponse)
def api_export_lp(n: int = Query(...)):
    try:
        validate_modulus(n)
    except ArcError as e:
        raise _http_error(e)
    return PlainTextResponse(write_lp(build_model(n)))


@app.post("/api/render")
def api_render(cert: Certificate, format: str = Query("ascii")):
    try:
        X = _arcset(cert)
    except ArcError as e:
        raise _http_error(e)
    if format == "ascii":
        return PlainTextResponse(render_ascii(X))
    if format == "svg":
        return Response(content=render_svg(X), media_type="image/svg+xml")
    raise HTTPException(status_code=400, detail=f"unknown format {format!r}")


if __name__ == "__main__":
    uvicorn.run("main:app", host=HOST, port=PORT, log_level="info")
