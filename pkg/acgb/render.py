"""Text and structured rendering of polynomials and command outcomes."""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from .freealg import Ambiguity, GroebnerCertificate, NcPoly
from .kernel import Field, ModP, OrderSpec, Scalar, SparsePoly, Word
from .liftkit import Stage
from .models import (
    ProblemDocument,
    StageDocument,
    Term,
    TraceDocument,
    VerificationDocument,
    WitnessDocument,
)

VERIFIED = "verified"
NOT_GROEBNER = "not_groebner"
FAILED = "failed"
UNVERIFIED = "unverified"


@dataclass
class Outcome:
    """What a subcommand computed; the renderers turn it into output."""

    command: str
    stages: List[Stage] = field(default_factory=list)
    checks: Optional[Dict[str, bool]] = None
    certificate: Optional[GroebnerCertificate] = None
    failures: Dict[str, Any] = field(default_factory=dict)
    complete: Optional[bool] = None
    notes: List[str] = field(default_factory=list)
    basis_change: Optional[Sequence[Sequence[Scalar]]] = None

    @property
    def status(self) -> str:
        if self.checks is None:
            return UNVERIFIED
        if self.certificate is not None and not self.certificate:
            return NOT_GROEBNER
        return VERIFIED if all(self.checks.values()) else FAILED


def _is_negative(c: Scalar) -> bool:
    return not isinstance(c, ModP) and Fraction(c) < 0


def format_scalar(c: Scalar) -> str:
    if isinstance(c, ModP):
        return str(c.value)
    return str(Fraction(c))


def format_word(word: Word, names: Sequence[str]) -> str:
    """``e*e*f`` style word with runs of a letter collapsed to powers."""
    parts: List[str] = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        run = j - i
        parts.append(names[word[i]] if run == 1 else f"{names[word[i]]}^{run}")
        i = j
    return "*".join(parts)


def format_exponents(a: Sequence[int], names: Sequence[str]) -> str:
    return "*".join(names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(a) if e)


def format_poly(poly: SparsePoly, names: Sequence[str], order: OrderSpec) -> str:
    """Largest term first; coefficient 1 is left out."""
    if not poly:
        return "0"
    monomial = format_word if isinstance(poly, NcPoly) else format_exponents
    out: List[str] = []
    for m, c in poly.sorted_terms(order):
        negative = _is_negative(c)
        magnitude = -c if negative else c
        text = monomial(m, names)
        if not text:
            body = format_scalar(magnitude)
        elif magnitude == 1:
            body = text
        else:
            body = f"{format_scalar(magnitude)}*{text}"
        if not out:
            out.append(f"-{body}" if negative else body)
        else:
            out.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(out)


def poly_terms(poly: SparsePoly, field_: Field, order: OrderSpec) -> List[Term]:
    """``[numerator, denominator, monomial]`` triples, largest term first.

    Free-algebra monomials are lists of 1-based letter indices.
    """
    free = isinstance(poly, NcPoly)
    terms: List[Term] = []
    for m, c in poly.sorted_terms(order):
        num, den = field_.to_pair(c)
        terms.append((num, den, [x + 1 for x in m] if free else list(m)))
    return terms


def _witness(cert: GroebnerCertificate, field_: Field, order: OrderSpec) -> Optional[WitnessDocument]:
    if cert is None or cert.is_groebner or cert.ambiguity is None:
        return None
    amb: Ambiguity = cert.ambiguity
    return WitnessDocument(
        kind=amb.kind,
        word=[x + 1 for x in amb.word],
        elements=(amb.left + 1, amb.right + 1),
        offsets=(amb.left_offset, amb.right_offset),
        left_form=poly_terms(cert.left_form, field_, order),
        right_form=poly_terms(cert.right_form, field_, order),
    )


def build_document(outcome: Outcome, problem: Any) -> TraceDocument:
    """Structured document for ``--json``."""
    field_, order = problem.field, problem.order
    stages = [
        StageDocument(
            name=s.name,
            kind=s.kind,
            basis=[poly_terms(p, field_, order) for p in s.basis],
            seconds=round(s.seconds, 6),
            extra=s.extra,
        )
        for s in outcome.stages
    ]
    verification = VerificationDocument(
        status=outcome.status,
        checks=outcome.checks or {},
        failures=outcome.failures,
        witness=_witness(outcome.certificate, field_, order),
        ambiguities_checked=outcome.certificate.checked if outcome.certificate is not None else 0,
    )
    basis_change = None
    if outcome.basis_change is not None:
        basis_change = [[field_.to_pair(c) for c in row] for row in outcome.basis_change]
    return TraceDocument(
        command=outcome.command,
        problem=ProblemDocument(
            field=field_.name,
            variables=list(problem.variables),
            mode=problem.mode,
            order=order.kind.value,
            word_order=order.word.value,
        ),
        stages=stages,
        verification=verification,
        complete=outcome.complete,
        notes=outcome.notes,
        basis_change=basis_change,
    )


def render_json(outcome: Outcome, problem: Any) -> str:
    return build_document(outcome, problem).model_dump_json(indent=2)


def render_text(outcome: Outcome, problem: Any) -> str:
    """Human-readable output: every stage as monic polynomials in the declared names."""
    names, order = problem.variables, problem.order
    lines: List[str] = []
    for s in outcome.stages:
        lines.append(f"stage {s.name} ({len(s.basis)} elements, {s.seconds:.3f} s)")
        lines.extend(f"  {format_poly(p, names, order)}" for p in s.basis)
        if s.name == "u_sets" and "u_sets" in s.extra:
            for entry in s.extra["u_sets"]:
                members = ", ".join(format_exponents(u, names) or "1" for u in entry["members"])
                lines.append(f"  U({format_exponents(entry['monomial'], names) or '1'}) = {{{members}}}")
    if outcome.complete is not None:
        lines.append(f"completion: {'complete' if outcome.complete else 'incomplete (degree bound reached)'}")
    status = outcome.status
    if status == NOT_GROEBNER:
        lines.append("verdict: not a Groebner basis")
    lines.append(f"verification: {status}")
    for name, ok in (outcome.checks or {}).items():
        lines.append(f"  {name}: {'ok' if ok else 'FAILED'}")
    cert = outcome.certificate
    if cert is not None and not cert and cert.ambiguity is not None:
        amb = cert.ambiguity
        lines.append(
            f"witness: {amb.kind} {format_word(amb.word, names)} "
            f"of elements {amb.left + 1} and {amb.right + 1}"
        )
        lines.append(f"  left:  {format_poly(cert.left_form, names, order)}")
        lines.append(f"  right: {format_poly(cert.right_form, names, order)}")
    if outcome.basis_change is not None:
        rows = ["[" + ", ".join(format_scalar(c) for c in row) + "]" for row in outcome.basis_change]
        lines.append("basis change: " + " ".join(rows))
    lines.extend(f"note: {note}" for note in outcome.notes)
    return "\n".join(lines) + "\n"
