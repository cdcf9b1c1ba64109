"""
Algebra Models - Pydantic models for requests, responses and JSON artifacts
"""

from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, field_validator

from app.core.exceptions import InvalidQValue
from app.services.laurent import QValue


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"


class AlphabetChoice(str, Enum):
    U = "U"
    A = "A"
    AUTO = "auto"


def _validate_q(v: Optional[str]) -> Optional[str]:
    if v is None or v == "":
        return None
    try:
        return str(QValue.parse(v))
    except InvalidQValue as e:
        raise ValueError(e.message) from e


class ExpressionRequest(BaseModel):
    """Single expression to normalize or reduce"""
    expr: str = Field(..., min_length=1, description="Expression text, e.g. 'y*x' or 'nx*nx'")
    alphabet: AlphabetChoice = Field(AlphabetChoice.AUTO, description="U, A, or auto-detect")


class PBWTermOut(BaseModel):
    r: int = Field(..., ge=0, description="Exponent of x")
    s: int = Field(..., ge=0, description="Exponent of y")
    t: int = Field(..., ge=0, description="Exponent of z")
    coeff: str = Field(..., description="Laurent coefficient text")


class WordTermOut(BaseModel):
    word: str = Field(..., description="Word text, '1' for the empty word")
    coeff: str = Field(..., description="Laurent coefficient text")


class NormalizeResponse(BaseModel):
    input: str
    text: str = Field(..., description="PBW normal form")
    terms: List[PBWTermOut]


class ReduceResponse(BaseModel):
    input: str
    text: str = Field(..., description="Normal form over allowed words")
    terms: List[WordTermOut]


class RuleOut(BaseModel):
    rule_id: str
    lhs: str
    rhs: str
    tilde: str = Field(..., description="Distinguished allowed word on the right-hand side")
    swap: bool
    verified: Optional[bool] = Field(None, description="Oracle soundness, when checked")


class AllowedWordsResponse(BaseModel):
    max_len: int
    count: int
    words: List[str]


class ModulePayload(BaseModel):
    """Module given by one square matrix per generator; entries are Laurent text"""
    dim: int = Field(..., ge=1, description="Dimension of the module")
    actions: Dict[str, List[List[str]]] = Field(..., description="Generator name -> rows of entries")
    q: Optional[str] = Field(None, description="Rational q for numeric mode")

    @field_validator("actions", mode="before")
    @classmethod
    def stringify_entries(cls, v):
        if isinstance(v, dict):
            return {k: [[str(x) for x in row] for row in rows] for k, rows in v.items()}
        return v

    @field_validator("q", mode="before")
    @classmethod
    def validate_q(cls, v):
        return _validate_q(None if v is None else str(v))


class MatrixOut(BaseModel):
    d: int
    gen: str
    eps: Optional[int] = None
    q: Optional[str] = None
    matrix: List[List[str]]


class HWDataOut(BaseModel):
    d: int
    lam: str = Field(..., alias="lambda")
    alpha: List[str]
    basis_matrix: Optional[List[List[str]]] = None
    q: Optional[str] = None
    isomorphic_to_L: Optional[bool] = Field(None, description="Explicit intertwiner onto L(d) verified")

    model_config = {"populate_by_name": True}


class SuiteRequest(BaseModel):
    suite: str = Field("all", description="relations, rules, presentation, modules, classification or all")
    max_word_len: Optional[int] = Field(None, ge=0, le=8)
    max_d: Optional[int] = Field(None, ge=0, le=12)
    q: Optional[str] = None

    @field_validator("q", mode="before")
    @classmethod
    def validate_q(cls, v):
        return _validate_q(None if v is None else str(v))


class SuiteBoundsOut(BaseModel):
    max_word_len: int
    max_d: int
    q: Optional[str] = None


class CheckResult(BaseModel):
    check_id: str
    location: str
    status: str
    witness: Optional[str] = None
    detail: Optional[str] = None
    literal: Optional[str] = None
    corrected: Optional[str] = None


class SuiteReportOut(BaseModel):
    suite: str
    bounds: SuiteBoundsOut
    counts: Dict[str, int]
    elapsed: float
    results: List[CheckResult]


# Conversions from service objects


def rule_out(status) -> RuleOut:
    rule = status.rule
    return RuleOut(
        rule_id=rule.rule_id,
        lhs=rule.lhs.text(),
        rhs=str(rule.rhs),
        tilde=rule.tilde.text(),
        swap=rule.swap,
        verified=status.verified,
    )


def hw_out(hw, isomorphic: Optional[bool] = None) -> HWDataOut:
    payload = hw.to_json()
    return HWDataOut(
        d=payload["d"],
        lam=payload["lambda"],
        alpha=payload["alpha"],
        basis_matrix=payload["basis_matrix"],
        q=payload["q"],
        isomorphic_to_L=isomorphic,
    )


def report_out(report) -> SuiteReportOut:
    return SuiteReportOut(
        suite=report.suite,
        bounds=SuiteBoundsOut(
            max_word_len=report.bounds.max_word_len,
            max_d=report.bounds.max_d,
            q=None if report.bounds.q is None else str(report.bounds.q),
        ),
        counts=report.counts,
        elapsed=report.elapsed,
        results=[
            CheckResult(
                check_id=r.check_id,
                location=r.location,
                status=r.status.value,
                witness=r.witness,
                detail=r.detail,
                literal=r.literal,
                corrected=r.corrected,
            )
            for r in report.results
        ],
    )
