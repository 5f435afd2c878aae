"""Structured output documents written by ``--json``."""

from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field

# [numerator, denominator, monomial]; a monomial is an exponent list for
# commutative stages and a list of 1-based letter indices for free stages
Term = Tuple[int, int, List[int]]


class StageDocument(BaseModel):
    """One stage basis."""

    name: str = Field(..., description="Stage name")
    kind: str = Field(..., description="pbw, commutative or free")
    basis: List[List[Term]] = Field(default_factory=list, description="Monic polynomials")
    seconds: float = Field(0.0, description="Elapsed time of the stage")
    extra: Dict[str, Any] = Field(default_factory=dict, description="Stage-specific metadata")


class WitnessDocument(BaseModel):
    """Unresolved ambiguity reported by the diamond-lemma check."""

    kind: str
    word: List[int]
    elements: Tuple[int, int]
    offsets: Tuple[int, int]
    left_form: List[Term]
    right_form: List[Term]


class VerificationDocument(BaseModel):
    status: str = Field(..., description="verified, failed or unverified")
    checks: Dict[str, bool] = Field(default_factory=dict)
    failures: Dict[str, Any] = Field(default_factory=dict)
    witness: Optional[WitnessDocument] = None
    ambiguities_checked: int = 0


class ProblemDocument(BaseModel):
    field: str
    variables: List[str]
    mode: str
    order: str
    word_order: str


class TraceDocument(BaseModel):
    """Result document of every subcommand."""

    command: str
    problem: ProblemDocument
    stages: List[StageDocument] = Field(default_factory=list)
    verification: VerificationDocument
    complete: Optional[bool] = Field(None, description="Completeness flag of bounded completion")
    notes: List[str] = Field(default_factory=list)
    basis_change: Optional[List[List[Tuple[int, int]]]] = None


class ErrorDocument(BaseModel):
    error: str
    kind: str
    stage: Optional[str] = None
    exit_code: int
    data: Dict[str, Any] = Field(default_factory=dict)
