"""
Algebra Endpoints - Normal forms, reduction, rule table and allowed words
"""

import asyncio
from typing import List

from fastapi import APIRouter, Query

from app.models.algebra import (
    AllowedWordsResponse,
    AlphabetChoice,
    ExpressionRequest,
    NormalizeResponse,
    ReduceResponse,
    RuleOut,
    rule_out,
)
from app.services.expression_parser import parse_expr
from app.services.ncpoly import Alphabet
from app.services.presentation import ReductionOrder, enumerate_allowed, pbw_normal_form, reduce, rule_table

router = APIRouter()


@router.post("/normalize", response_model=NormalizeResponse)
async def normalize_expression(request: ExpressionRequest):
    """PBW normal form; nu/square expressions are mapped through phi first"""
    alphabet = None if request.alphabet == AlphabetChoice.AUTO else Alphabet(request.alphabet.value)
    form = await asyncio.to_thread(lambda: pbw_normal_form(parse_expr(request.expr, alphabet)))
    return NormalizeResponse(input=request.expr, text=str(form), terms=form.to_json())


@router.post("/reduce", response_model=ReduceResponse)
async def reduce_expression(
    request: ExpressionRequest,
    order: ReductionOrder = Query(ReductionOrder.LEFTMOST),
):
    result = await asyncio.to_thread(lambda: reduce(parse_expr(request.expr, Alphabet.A), order))
    return ReduceResponse(input=request.expr, text=str(result), terms=result.to_json())


@router.get("/rules", response_model=List[RuleOut])
async def list_rules(check: bool = Query(False, description="Verify each rule against the oracle")):
    statuses = await asyncio.to_thread(rule_table, check)
    return [rule_out(status) for status in statuses]


@router.get("/allowed", response_model=AllowedWordsResponse)
async def allowed_words(max_len: int = Query(2, ge=0, le=6)):
    words = [w.text() for w in await asyncio.to_thread(enumerate_allowed, max_len)]
    return AllowedWordsResponse(max_len=max_len, count=len(words), words=words)
