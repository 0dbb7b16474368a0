import logging

from fastapi import APIRouter, HTTPException
from fastapi.concurrency import run_in_threadpool

from app.core.exceptions import (
    InternalConsistencyError,
    LICQFailureError,
    TangencyError,
    TruncationExhaustedError,
)
from app.models.requests import AnalysisRequest
from app.models.response import AnalysisResponse, HealthResponse
from app.services.analysis_service import AnalysisService

logger = logging.getLogger(__name__)

router = APIRouter()


def _status_for(error: TangencyError) -> int:
    if isinstance(error, TruncationExhaustedError):
        return 409
    if isinstance(error, InternalConsistencyError):
        return 500
    return 422


def _detail(error: TangencyError) -> dict:
    detail = {"error": type(error).__name__, "message": error.message}
    if isinstance(error, LICQFailureError) and error.witness_box is not None:
        detail["witness_box"] = [list(side) for side in error.witness_box]
    if isinstance(error, TruncationExhaustedError):
        detail["prefix"] = error.prefix
    return detail


@router.post("/", response_model=AnalysisResponse)
async def analyze_problem(request: AnalysisRequest):
    service = AnalysisService(max_order=request.max_order, precision=request.precision)
    try:
        outcome = await run_in_threadpool(
            service.run,
            request.objective,
            request.constraint,
            request.sublevel,
            request.stability,
        )
    except TangencyError as e:
        logger.error(f"Analysis of '{request.objective}' failed: {e.message}")
        raise HTTPException(status_code=_status_for(e), detail=_detail(e)) from e
    return AnalysisResponse(**outcome.document.model_dump())


@router.get("/health", response_model=HealthResponse)
async def health():
    return HealthResponse(status="ok")
