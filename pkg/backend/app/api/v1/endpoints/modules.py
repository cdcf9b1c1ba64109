"""
Module Endpoints - Action matrices of L(d, eps) and L(d), and classification of user modules
"""

import asyncio
from typing import Optional

from fastapi import APIRouter, HTTPException, Query

from app.core.config import settings
from app.models.algebra import HWDataOut, MatrixOut, ModulePayload, hw_out
from app.services import modules
from app.services.laurent import QValue
from app.services.ncpoly import Alphabet, Gen

router = APIRouter()


@router.get("/{d}", response_model=MatrixOut)
async def module_matrix(
    d: int,
    gen: str = Query(..., description="x, y, z or nx, ny, nz, x2, y2, z2"),
    eps: Optional[int] = Query(None, description="Type 1 or -1 for the x, y, z module"),
    q: Optional[str] = Query(None, description="Rational q for numeric mode"),
):
    if not 0 <= d <= settings.MAX_D * 4:
        raise HTTPException(status_code=400, detail=f"d must lie in [0, {settings.MAX_D * 4}]")
    if eps not in (None, 1, -1):
        raise HTTPException(status_code=400, detail="eps must be 1 or -1")
    try:
        generator = Gen.from_name(gen)
    except ValueError:
        raise HTTPException(status_code=400, detail=f"unknown generator {gen!r}")
    q_value = QValue.parse(q) if q else None

    if eps is None and generator.alphabet == Alphabet.U:
        raise HTTPException(status_code=400, detail=f"{generator.value} needs eps")

    def build():
        if eps is None:
            return modules.build_L(d, q_value)
        m = modules.build_L_eps(d, eps, q_value)
        return modules.restrict(m) if generator.alphabet == Alphabet.A else m

    m = await asyncio.to_thread(build)
    return MatrixOut(d=d, gen=generator.value, eps=eps, q=q,
                     matrix=modules.matrix_to_json(m.matrix(generator)))


@router.post("/classify", response_model=HWDataOut, response_model_by_alias=True)
async def classify_module(payload: ModulePayload):
    """Highest-weight data plus an explicit isomorphism check against L(d)"""
    q_value = QValue.parse(payload.q) if payload.q else None
    m = modules.module_from_payload(payload.dim, payload.actions, q_value)
    result = await asyncio.to_thread(modules.classify, m)
    return hw_out(result.hw, result.verified)
