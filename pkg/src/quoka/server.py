"""JSON API over the index and shoebox, plus static hosting for the UI.

Every non-2xx response body is {"status": int, "code": str, "message": str}.
Query endpoints are pure functions of the immutable index snapshot;
shoebox writes go through the store's single-writer lock.
"""

from __future__ import annotations

from dataclasses import asdict

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import aggregate, scoring
from .errors import EntryNotFoundError, InvalidResolutionError
from .index import SearchIndex
from .scoring import YearRange
from .shoebox import Shoebox

DEFAULT_INSTITUTION_LIMIT = 100
DEFAULT_DOCUMENT_LIMIT = 20
MAX_LIMIT = 1000


class ApiException(Exception):
    def __init__(self, status: int, code: str, message: str):
        self.status = status
        self.code = code
        self.message = message


def _error_response(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"status": status, "code": code, "message": message},
    )


def _require_query(q: str | None) -> str:
    if q is None or not q.strip():
        raise ApiException(400, "missing_query", "query parameter 'q' is required")
    return q


def _parse_year(value: str | None, name: str, default: int) -> int:
    if value is None or value == "":
        return default
    try:
        return int(value)
    except ValueError:
        raise ApiException(400, "bad_parameter", f"'{name}' must be an integer")


def _parse_limit(value: str | None, default: int) -> int:
    if value is None or value == "":
        return default
    try:
        limit = int(value)
    except ValueError:
        raise ApiException(400, "bad_parameter", "'limit' must be an integer")
    if limit < 1:
        raise ApiException(400, "bad_parameter", "'limit' must be >= 1")
    return min(limit, MAX_LIMIT)


class ShoeboxCreate(BaseModel):
    doi: str
    title: str = ""
    query: str = ""
    institution_id: str = ""
    year_from: int = 0
    year_to: int = 0


class ShoeboxPatch(BaseModel):
    notes: str


def create_app(
    index: SearchIndex,
    shoebox: Shoebox,
    cors_origin: str | None = None,
    static_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="quoka", docs_url=None, redoc_url=None)

    if cors_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(ApiException)
    async def api_exception_handler(_req: Request, exc: ApiException):
        return _error_response(exc.status, exc.code, exc.message)

    @app.exception_handler(RequestValidationError)
    async def validation_handler(_req: Request, exc: RequestValidationError):
        return _error_response(400, "invalid_body", str(exc.errors()[:1]))

    @app.exception_handler(Exception)
    async def fallback_handler(_req: Request, exc: Exception):
        return _error_response(500, "internal_error", str(exc))

    span_lo, span_hi = index.institution_year.year_span()

    def parse_range(year_from: str | None, year_to: str | None) -> YearRange:
        lo = _parse_year(year_from, "year_from", span_lo)
        hi = _parse_year(year_to, "year_to", span_hi)
        if lo > hi:
            raise ApiException(400, "bad_parameter", "year_from must be <= year_to")
        return YearRange(lo, hi)

    def query_for(q: str) -> scoring.Query:
        return scoring.analyze_query(q, index.analyzer)

    @app.get("/api/institutions")
    def institutions(
        q: str | None = None,
        year_from: str | None = None,
        year_to: str | None = None,
        limit: str | None = None,
    ):
        raw = _require_query(q)
        years = parse_range(year_from, year_to)
        top = _parse_limit(limit, DEFAULT_INSTITUTION_LIMIT)
        ranked = scoring.rank_institutions(query_for(raw), years, top, index)
        return {
            "query": raw,
            "year_from": years.year_from,
            "year_to": years.year_to,
            "results": [
                {
                    "institution_id": r.institution_id,
                    "name": r.name,
                    "latitude": r.latitude,
                    "longitude": r.longitude,
                    "score": r.score,
                    "per_year": {str(year): s for year, s in r.per_year.items()},
                }
                for r in ranked
            ],
        }

    @app.get("/api/documents")
    def documents(
        q: str | None = None,
        institution: str | None = None,
        year_from: str | None = None,
        year_to: str | None = None,
        limit: str | None = None,
    ):
        raw = _require_query(q)
        years = parse_range(year_from, year_to)
        top = _parse_limit(limit, DEFAULT_DOCUMENT_LIMIT)
        ranked = scoring.rank_documents(
            query_for(raw), top, index,
            institution_id=institution, year_range=years,
        )
        return {
            "query": raw,
            "institution": institution,
            "year_from": years.year_from,
            "year_to": years.year_to,
            "results": [
                {
                    "doi": r.doi,
                    "title": r.title,
                    "year": r.year,
                    "institution_ids": list(r.institution_ids),
                    "score": r.score,
                    "citation_count": r.citation_count,
                    "open_access": r.open_access,
                }
                for r in ranked
            ],
        }

    @app.get("/api/timeline")
    def timeline_endpoint(q: str | None = None):
        raw = _require_query(q)
        buckets = aggregate.timeline(query_for(raw), index)
        return {
            "query": raw,
            "buckets": [asdict(b) for b in buckets],
        }

    @app.get("/api/heatmap")
    def heatmap_endpoint(
        q: str | None = None,
        year_from: str | None = None,
        year_to: str | None = None,
        cells: str | None = None,
    ):
        raw = _require_query(q)
        years = parse_range(year_from, year_to)
        try:
            resolution = float(cells) if cells not in (None, "") else 1.0
        except ValueError:
            raise ApiException(400, "bad_resolution", "'cells' must be a number")
        try:
            cell_list = aggregate.heatmap(query_for(raw), years, resolution, index)
        except InvalidResolutionError as exc:
            raise ApiException(400, "bad_resolution", str(exc))
        return {
            "query": raw,
            "year_from": years.year_from,
            "year_to": years.year_to,
            "cell_degrees": resolution,
            "cells": [asdict(c) for c in cell_list],
        }

    @app.get("/api/shoebox")
    def shoebox_list():
        return {"entries": [e.to_dict() for e in shoebox.list_entries()]}

    @app.post("/api/shoebox", status_code=201)
    def shoebox_add(body: ShoeboxCreate):
        try:
            entry = shoebox.add_entry(
                doi=body.doi,
                title=body.title,
                query=body.query,
                institution_id=body.institution_id,
                year_from=body.year_from,
                year_to=body.year_to,
            )
        except ValueError:
            raise ApiException(400, "missing_doi", "doi must be non-empty")
        return entry.to_dict()

    @app.patch("/api/shoebox/{entry_id}")
    def shoebox_patch(entry_id: str, body: ShoeboxPatch):
        try:
            return shoebox.update_notes(entry_id, body.notes).to_dict()
        except EntryNotFoundError:
            raise ApiException(404, "not_found", f"no shoebox entry {entry_id}")

    @app.delete("/api/shoebox/{entry_id}", status_code=204)
    def shoebox_delete(entry_id: str):
        try:
            shoebox.delete_entry(entry_id)
        except EntryNotFoundError:
            raise ApiException(404, "not_found", f"no shoebox entry {entry_id}")
        return Response(status_code=204)

    if static_dir:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="static")

    return app
