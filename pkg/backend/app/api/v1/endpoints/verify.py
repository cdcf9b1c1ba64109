"""
Verification Endpoints - Run a verification suite and return its report
"""

from fastapi import APIRouter, HTTPException

from app.models.algebra import SuiteReportOut, SuiteRequest, report_out
from app.services.laurent import QValue
from app.services.verification import SuiteBounds, SuiteName, run_suite

router = APIRouter()


@router.post("", response_model=SuiteReportOut)
async def verify(request: SuiteRequest):
    try:
        suite = SuiteName(request.suite)
    except ValueError:
        raise HTTPException(status_code=400, detail=f"unknown suite {request.suite!r}")
    bounds = SuiteBounds.from_settings(
        request.max_word_len,
        request.max_d,
        QValue.parse(request.q) if request.q else None,
    )
    report = await run_suite(suite, bounds)
    return report_out(report)
