"""From a two-sided ideal of U(g) to a finite Groebner basis in the free algebra.

The pipeline runs six stages:

``two_sided_basis``
    reduced two-sided Groebner basis of ``I`` in ``U(g)``;
``symbols``
    the symbols of those elements, spanning the graded ideal ``G(I)``;
``graded_basis``
    reduced commutative basis of ``G(I)``;
``u_sets``
    the products ``u*g`` for ``g`` in that basis and ``u`` in its U-set;
``homogeneous_lift``
    their lexicographic splittings plus all commutators, a Groebner basis of
    the ideal of leading homogeneous parts;
``final_basis``
    the same elements with lower-order tails attached, a Groebner basis of
    the preimage of ``I`` in the free algebra.
"""

import random
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from .compoly import CPoly, MonomialIdeal, USet, c_buchberger, random_invertible_matrix, u_set
from .config import Settings
from .envalg import (
    LieStructure,
    PbwPoly,
    change_lie_basis,
    free_to_pbw,
    left_normal_form,
    ordered_word,
    pbw_mul,
    pbw_section,
    rewrite_in_new_basis,
    sigma,
    tailed_commutators,
    two_sided_groebner,
    validate_lie,
)
from .exceptions import AcgbError, InfiniteUSetError, OrderError, SymbolMismatchError, VerificationError
from .freealg import (
    GroebnerCertificate,
    NcPoly,
    commutator,
    graded_quotient_is_commutative,
    lh,
    nc_interreduce,
    nc_normal_form,
    nc_is_groebner,
)
from .kernel import (
    QQ,
    ExpVec,
    Field,
    OrderSpec,
    Scalar,
    SparsePoly,
    WordOrderKind,
    abelianize,
    add_into,
    exp_add,
    exp_divides,
    exp_sub,
)
from .logging_config import get_logger, struct_message

logger = get_logger(__name__)

STAGES = (
    "two_sided_basis",
    "symbols",
    "graded_basis",
    "u_sets",
    "homogeneous_lift",
    "final_basis",
)


def gamma(f: NcPoly) -> CPoly:
    """Abelianization: ``X_i -> x_i``."""
    acc: Dict[ExpVec, Scalar] = {}
    for w, c in f.items():
        add_into(acc, {abelianize(w, f.nvars): c})
    return CPoly(f.nvars, acc)


def delta(f: CPoly) -> NcPoly:
    """Lexicographic splitting: each monomial becomes its nondecreasing word."""
    return NcPoly(f.nvars, {ordered_word(a): c for a, c in f.items()})


def _require_lift_order(order: OrderSpec) -> None:
    order.require_graded("the lift")
    if order.word is not WordOrderKind.ET:
        raise OrderError("the lift is a Groebner basis for the et word ordering only")
    if not order.has_identity_ranks:
        raise OrderError("the lift needs variables listed smallest first (identity ranks)")


def lift_u_sets(Gamma: Sequence[CPoly], order: OrderSpec, degree_cap: int = 8) -> List[USet]:
    """The U-set of every leading monomial of ``Gamma``; all must be finite."""
    n = order.nvars
    ideal = MonomialIdeal.of(n, [g.leading_monomial(order) for g in Gamma])
    sets = []
    for g in Gamma:
        m = g.leading_monomial(order)
        if not any(m):
            sets.append(USet(m, True, ((0,) * n,)))
            continue
        U = u_set(ideal, m, degree_cap, order)
        if not U.finite:
            raise InfiniteUSetError(
                f"the U-set of leading monomial {m} is infinite; "
                "a random change of Lie basis usually avoids this",
                element=g,
                monomial=m,
                data={"unbounded": list(U.unbounded), "witnesses": [list(u) for u in U.monomials[:10]]},
            )
        sets.append(U)
    return sets


def eps_lift(Gamma: Sequence[CPoly], order: OrderSpec, degree_cap: int = 8,
             u_sets: Optional[Sequence[USet]] = None, field: Field = QQ) -> List[NcPoly]:
    """Homogeneous lift of a reduced commutative basis.

    All commutators ``X_j X_i - X_i X_j`` (``i < j`` in lexicographic order)
    followed by the monic splittings ``delta(u*g)``, ``g`` in ``Gamma`` and
    ``u`` in its U-set.
    """
    _require_lift_order(order)
    if u_sets is None:
        u_sets = lift_u_sets(Gamma, order, degree_cap)
    n = order.nvars
    result = [commutator(n, i, j, field) for i in range(n) for j in range(i + 1, n)]
    for g, U in zip(Gamma, u_sets):
        for u in U.monomials:
            result.append(delta(g.mul_monomial(u)).monic(order))
    return result


def pair_preimages(Gamma: Sequence[CPoly], calG: Sequence[PbwPoly], L: LieStructure,
                   order: OrderSpec) -> List[Tuple[CPoly, PbwPoly]]:
    """Pair every element of ``Gamma`` with an element of ``U(g)`` of exactly that symbol.

    A basis element with the right symbol is used when there is one;
    otherwise a preimage is assembled by dividing the target by the symbols.
    """
    symbols = [(sigma(g), g) for g in calG if g]
    pairs = []
    for target in Gamma:
        match = None
        for s, g in symbols:
            if s.monic(order) == target.monic(order):
                match = g.scale(target.leading_coefficient(order) / s.leading_coefficient(order))
                break
        if match is None:
            match = _assemble_preimage(target, symbols, L, order)
        pairs.append((target, match))
    return pairs


def _assemble_preimage(target: CPoly, symbols: Sequence[Tuple[CPoly, PbwPoly]], L: LieStructure,
                       order: OrderSpec) -> PbwPoly:
    p = dict(target.terms)
    acc: Dict[ExpVec, Scalar] = {}
    while p:
        m = max(p, key=order.c_key)
        c = p[m]
        for s, g in symbols:
            lm, lc = s.leading_term(order)
            if exp_divides(lm, m):
                q = exp_sub(m, lm)
                add_into(p, s.terms, -c / lc, shift=lambda t: exp_add(t, q))
                add_into(acc, pbw_mul(L, PbwPoly(L.dim, {q: c / lc}), g).terms)
                break
        else:
            raise SymbolMismatchError(
                f"no element of the two-sided basis has symbol dividing monomial {m}",
                data={"target": str(target)},
            )
    preimage = PbwPoly(L.dim, acc)
    if sigma(preimage) != target:
        raise SymbolMismatchError(f"assembled preimage has symbol {sigma(preimage)}, expected {target}")
    return preimage


def filtered_lift(L: LieStructure, pairs: Sequence[Tuple[CPoly, PbwPoly]], order: OrderSpec,
                  degree_cap: int = 8, u_sets: Optional[Sequence[USet]] = None) -> List[NcPoly]:
    """Attach lower-order tails to the homogeneous lift.

    Commutators become the defining relations of ``U(g)`` and each
    ``delta(u*g)`` becomes the ordered-word section of ``x^u * g``, where
    ``g`` is the preimage paired with the basis element.
    """
    _require_lift_order(order)
    for target, g in pairs:
        if sigma(g) != target:
            raise SymbolMismatchError(f"preimage symbol {sigma(g)} differs from {target}")
    Gamma = [target for target, _ in pairs]
    if u_sets is None:
        u_sets = lift_u_sets(Gamma, order, degree_cap)
    result = [r.monic(order) for r in tailed_commutators(L)]
    for (_, g), U in zip(pairs, u_sets):
        for u in U.monomials:
            lifted = pbw_mul(L, PbwPoly(L.dim, {u: L.field.one}), g)
            result.append(pbw_section(lifted).monic(order))
    return result


@dataclass
class Stage:
    """One basis of the trace; ``kind`` is ``pbw``, ``commutative`` or ``free``."""

    name: str
    kind: str
    basis: List[SparsePoly]
    seconds: float = 0.0
    extra: Dict[str, Any] = field(default_factory=dict)


@dataclass
class Verification:
    checks: Dict[str, bool] = field(default_factory=dict)
    certificate: Optional[GroebnerCertificate] = None
    failures: Dict[str, Any] = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


@dataclass
class PipelineTrace:
    """Ordered record of the stage bases; ``verification`` is None when skipped."""

    lie: LieStructure
    generators: List[NcPoly]
    order: OrderSpec
    stages: List[Stage] = field(default_factory=list)
    u_sets: List[USet] = field(default_factory=list)
    verification: Optional[Verification] = None
    notes: List[str] = field(default_factory=list)
    basis_change: Optional[Tuple[Tuple[Scalar, ...], ...]] = None
    reduced_final: List[NcPoly] = field(default_factory=list)

    def stage(self, name: str) -> Stage:
        for s in self.stages:
            if s.name == name:
                return s
        raise KeyError(name)

    @property
    def final_basis(self) -> List[NcPoly]:
        return list(self.stage("final_basis").basis)

    @property
    def verified(self) -> bool:
        return self.verification is not None and self.verification.passed


@contextmanager
def stage_errors(name: str) -> Iterator[None]:
    """Tag library errors escaping the block with the stage name."""
    try:
        yield
    except AcgbError as exc:
        if exc.stage is None:
            exc.stage = name
        raise


class _Recorder:
    def __init__(self, trace: PipelineTrace):
        self.trace = trace

    @contextmanager
    def stage(self, name: str, kind: str) -> Iterator[Stage]:
        record = Stage(name, kind, [])
        start = time.perf_counter()
        with stage_errors(name):
            yield record
        record.seconds = time.perf_counter() - start
        self.trace.stages.append(record)
        logger.info("%s", struct_message(
            "stage done", stage=name, elements=len(record.basis), seconds=round(record.seconds, 4)))


def verify_final_basis(L: LieStructure, generators: Sequence[NcPoly], calG: Sequence[PbwPoly],
                       Gamma: Sequence[CPoly], eps: Sequence[NcPoly], final: Sequence[NcPoly],
                       order: OrderSpec, workers: int = 1, term_cap: Optional[int] = None) -> Verification:
    """Certify the lifted bases.

    Checks the diamond lemma on both lifts, commutativity of the graded
    quotient, that leading homogeneous parts of the final basis are the
    homogeneous lift, membership both ways, and that abelianizing the
    homogeneous lift gives back ``Gamma``.
    """
    start = time.perf_counter()
    result = Verification()
    eps_cert = nc_is_groebner(eps, order, workers, term_cap)
    result.checks["homogeneous_lift_is_groebner"] = eps_cert.is_groebner
    final_cert = nc_is_groebner(final, order, workers, term_cap)
    result.checks["final_basis_is_groebner"] = final_cert.is_groebner
    result.certificate = final_cert
    if final_cert and not eps_cert:
        result.certificate = eps_cert
    result.checks["graded_quotient_commutative"] = graded_quotient_is_commutative(eps, order, term_cap)

    mismatched = [i for i, (f, e) in enumerate(zip(final, eps)) if lh(f) != e]
    result.checks["leading_parts_match"] = len(final) == len(eps) and not mismatched
    if mismatched:
        result.failures["leading_parts_match"] = mismatched

    outside = [
        i for i, f in enumerate(final) if left_normal_form(L, free_to_pbw(L, f), calG, order, term_cap)
    ]
    result.checks["final_basis_in_ideal"] = not outside
    if outside:
        result.failures["final_basis_in_ideal"] = outside

    relations = list(tailed_commutators(L)) + list(generators)
    unreduced = [i for i, r in enumerate(relations) if nc_normal_form(r, final, order, term_cap)]
    result.checks["generators_reduce_to_zero"] = not unreduced
    if unreduced:
        result.failures["generators_reduce_to_zero"] = unreduced

    abelianized = [g for g in (gamma(e) for e in eps) if g]
    result.checks["graded_basis_recovered"] = c_buchberger(abelianized, order, True, term_cap) == list(Gamma)
    result.seconds = time.perf_counter() - start
    logger.info("%s", struct_message("verification", passed=result.passed, seconds=round(result.seconds, 4)))
    return result


def pipeline(L: LieStructure, S: Sequence[NcPoly], order: OrderSpec,
             settings: Optional[Settings] = None) -> PipelineTrace:
    """Run all six stages for the ideal of ``U(g)`` generated by the images of ``S``.

    With ``settings.random_basis_change`` an infinite U-set triggers one
    retry after a seeded random change of Lie basis; the trace then records
    the matrix and describes everything in the new basis.
    """
    settings = settings or Settings()
    with stage_errors("input"):
        _require_lift_order(order)
        if order.nvars != L.dim:
            raise OrderError(f"ordering on {order.nvars} variables for a {L.dim}-dimensional algebra")
        validate_lie(L)
    try:
        return _run(L, list(S), order, settings)
    except InfiniteUSetError as exc:
        if not settings.random_basis_change:
            raise
        rng = random.Random(settings.seed)
        M = random_invertible_matrix(L.dim, rng, L.field)
        logger.warning("%s", struct_message(
            "infinite U-set, retrying after a random change of Lie basis",
            monomial=exc.monomial, seed=settings.seed))
        changed = change_lie_basis(L, M)
        trace = _run(changed, [rewrite_in_new_basis(f, M, L.field) for f in S], order, settings)
        trace.basis_change = M
        trace.notes.append(
            f"U-set of {exc.monomial} was infinite; everything below is in the basis Y = M X "
            f"with M from seed {settings.seed}"
        )
        return trace


def _run(L: LieStructure, S: List[NcPoly], order: OrderSpec, settings: Settings) -> PipelineTrace:
    trace = PipelineTrace(L, S, order)
    rec = _Recorder(trace)
    caps = {"term_cap": settings.term_cap}

    with rec.stage("two_sided_basis", "pbw") as st:
        F = [free_to_pbw(L, f) for f in S]
        calG = two_sided_groebner(L, F, order, basis_cap=settings.basis_cap, **caps)
        st.basis = list(calG)

    with rec.stage("symbols", "commutative") as st:
        symbols = [sigma(g) for g in calG]
        st.basis = list(symbols)

    with rec.stage("graded_basis", "commutative") as st:
        Gamma = c_buchberger(symbols, order, True, settings.term_cap)
        st.basis = list(Gamma)
        if Gamma != [s.monic(order) for s in symbols]:
            trace.notes.append("the symbols of the two-sided basis were not a reduced basis")

    with rec.stage("u_sets", "commutative") as st:
        u_sets = lift_u_sets(Gamma, order, settings.u_set_degree_cap)
        trace.u_sets = u_sets
        st.basis = [g.mul_monomial(u) for g, U in zip(Gamma, u_sets) for u in U.monomials]
        st.extra["u_sets"] = [
            {"element": i, "monomial": list(U.monomial), "members": [list(u) for u in U.monomials]}
            for i, U in enumerate(u_sets)
        ]

    with rec.stage("homogeneous_lift", "free") as st:
        eps = eps_lift(Gamma, order, u_sets=u_sets, field=L.field)
        st.basis = list(eps)

    with rec.stage("final_basis", "free") as st:
        pairs = pair_preimages(Gamma, calG, L, order)
        final = filtered_lift(L, pairs, order, u_sets=u_sets)
        st.basis = list(final)
        trace.reduced_final = nc_interreduce(final, order, settings.term_cap)
        n = L.dim
        brackets = [(i, j) for i in range(n) for j in range(i + 1, n)]
        for (i, j), rel in zip(brackets, final):
            if rel != lh(rel):
                trace.notes.append(f"commutator of letters {j + 1} and {i + 1} carries a lower-order tail")

    if settings.verify:
        with stage_errors("verification"):
            trace.verification = verify_final_basis(
                L, S, calG, Gamma, eps, final, order, settings.workers, settings.term_cap)
            if not trace.verification.passed:
                failed = sorted(k for k, ok in trace.verification.checks.items() if not ok)
                raise VerificationError(
                    "verification failed: " + ", ".join(failed),
                    witness=trace.verification.certificate,
                    data=trace,
                )
    return trace
