"""HTTP wrapper around job execution, for multi-client use.

POST /run takes the same JSON shape as a job file plus the command name and
returns the report.  Invalid payloads map to 422.

Run with:  uvicorn checkergram.service:app
"""
from __future__ import annotations

import logging
import os
from typing import Optional, Union

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .errors import InsufficientMoments, OddTruncation, ParseError, PatternViolation
from .jobs import parse_config, run

logging.basicConfig(
    level=getattr(logging, os.environ.get("CHECKERBOARD_LOG", "warning").upper(),
                  logging.WARNING))

app = FastAPI(title="checkergram", version="0.1.0")

_USAGE_ERRORS = (ParseError, PatternViolation, OddTruncation, InsufficientMoments)


class JobRequest(BaseModel):
    scalar: str = "rational"
    n: int = 1
    m: int
    command: str = "verify"
    tolerance: Optional[float] = None
    nmax: Optional[int] = None
    emit_matrices: bool = False
    condensed_moments: Optional[list] = None
    unwrapped_moments: Optional[list] = None
    gram_entries: Optional[list] = None


class RecordModel(BaseModel):
    name: str
    indices: list[int]
    passed: bool
    residual: Union[str, float, None] = None
    detail: str = ""


class ReportModel(BaseModel):
    command: str
    passed: bool
    elapsed: float
    records: list[RecordModel]
    matrices: Optional[dict] = None


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/run", response_model=ReportModel)
def run_job(req: JobRequest):
    data = req.model_dump(exclude_none=True)
    try:
        config = parse_config(data)
        report = run(config)
    except _USAGE_ERRORS as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return report.to_dict()
