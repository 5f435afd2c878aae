"""Enveloping algebras of finite-dimensional Lie algebras on the PBW basis.

An element of ``U(g)`` is a :class:`PbwPoly`: exponent tuple ``a`` stands for
the ordered monomial ``X_1^a_1 ... X_n^a_n``. Products are brought back to
PBW order with the rewriting ``X_j X_i -> X_i X_j + [X_j, X_i]`` for
``j > i``. On top of that arithmetic sit left division, left Buchberger and
the two-sided closure that yields a two-sided Groebner basis.
"""

import threading
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Set, Tuple

from .compoly import CPoly, matrix_inverse
from .exceptions import (
    BasisCapExceeded,
    DimensionMismatchError,
    JacobiError,
    MathDomainError,
    TermCapExceeded,
)
from .freealg import NcPoly, substitute_letters
from .kernel import (
    QQ,
    ExpVec,
    Field,
    OrderSpec,
    Scalar,
    SparsePoly,
    Word,
    add_into,
    exp_add,
    exp_divides,
    exp_lcm,
    exp_sub,
    exp_unit,
)
from .logging_config import get_logger, struct_message

logger = get_logger(__name__)

Bracket = Dict[int, Scalar]


class PbwPoly(SparsePoly[ExpVec]):
    """Element of ``U(g)`` in PBW normal form; the degree is the filtration degree."""

    __slots__ = ()

    @staticmethod
    def monomial_degree(m: ExpVec) -> int:
        return sum(m)

    @staticmethod
    def order_key(order: OrderSpec) -> Callable[[ExpVec], Any]:
        return order.c_key


class LieStructure:
    """Structure constants ``[X_j, X_i] = sum_k c(j, i, k) X_k`` of a Lie algebra.

    ``brackets`` may list either ``(j, i)`` or ``(i, j)``; antisymmetry fills
    in the rest. The PBW product memo is shared by all threads using the
    structure and guarded by a lock.
    """

    def __init__(self, dim: int, brackets: Optional[Mapping[Tuple[int, int], Mapping[int, Any]]] = None,
                 field: Field = QQ):
        self.dim = dim
        self.field = field
        table: Dict[Tuple[int, int], Bracket] = {}
        for (a, b), form in (brackets or {}).items():
            if not (0 <= a < dim and 0 <= b < dim):
                raise DimensionMismatchError(f"bracket [{a},{b}] outside a {dim}-dimensional algebra")
            values = {k: field(c) for k, c in form.items() if field(c) != 0}
            if any(not 0 <= k < dim for k in values):
                raise DimensionMismatchError(f"bracket [{a},{b}] names a basis element out of range")
            if a == b:
                if values:
                    raise MathDomainError(f"bracket [{a},{a}] must vanish")
                continue
            key = (a, b) if a > b else (b, a)
            if a < b:
                values = {k: -c for k, c in values.items()}
            if key in table and table[key] != values:
                raise MathDomainError(f"conflicting values for bracket [{key[0]},{key[1]}]")
            if values:
                table[key] = values
        self._table = table
        self._memo: Dict[Tuple[ExpVec, int], Dict[ExpVec, Scalar]] = {}
        self._lock = threading.RLock()

    @classmethod
    def abelian(cls, dim: int, field: Field = QQ) -> "LieStructure":
        return cls(dim, {}, field)

    @property
    def table(self) -> Mapping[Tuple[int, int], Bracket]:
        """Nonzero brackets ``[X_j, X_i]`` with ``j > i``."""
        return dict(self._table)

    @property
    def is_abelian(self) -> bool:
        return not self._table

    def bracket(self, a: int, b: int) -> Bracket:
        """``[X_a, X_b]`` as a sparse coordinate vector."""
        if a > b:
            return dict(self._table.get((a, b), {}))
        if a < b:
            return {k: -c for k, c in self._table.get((b, a), {}).items()}
        return {}

    def bracket_vectors(self, u: Mapping[int, Scalar], v: Mapping[int, Scalar]) -> Bracket:
        acc: Bracket = {}
        for a, ca in u.items():
            for b, cb in v.items():
                add_into(acc, self.bracket(a, b), ca * cb)
        return acc

    # -- PBW product ------------------------------------------------------
    def mono_times_gen(self, a: ExpVec, k: int) -> Mapping[ExpVec, Scalar]:
        """PBW normal form of ``X^a * X_k``."""
        key = (a, k)
        with self._lock:
            cached = self._memo.get(key)
            if cached is not None:
                return cached
            result = self._mono_times_gen(a, k)
            self._memo[key] = result
            return result

    def _mono_times_gen(self, a: ExpVec, k: int) -> Dict[ExpVec, Scalar]:
        last = max((i for i, e in enumerate(a) if e), default=-1)
        if last <= k:
            return {exp_add(a, exp_unit(self.dim, k)): self.field.one}
        # X^a X_k = X^a' X_j X_k = (X^a' X_k) X_j + X^a' [X_j, X_k]
        j = last
        rest = exp_sub(a, exp_unit(self.dim, j))
        acc: Dict[ExpVec, Scalar] = {}
        for m, c in self.mono_times_gen(rest, k).items():
            add_into(acc, self.mono_times_gen(m, j), c)
        for l, c in self.bracket(j, k).items():
            add_into(acc, self.mono_times_gen(rest, l), c)
        return acc

    def mono_times_mono(self, a: ExpVec, b: ExpVec) -> Dict[ExpVec, Scalar]:
        current: Dict[ExpVec, Scalar] = {a: self.field.one}
        for k, e in enumerate(b):
            for _ in range(e):
                nxt: Dict[ExpVec, Scalar] = {}
                for m, c in current.items():
                    add_into(nxt, self.mono_times_gen(m, k), c)
                current = nxt
        return current

    def memo_size(self) -> int:
        with self._lock:
            return len(self._memo)


def validate_lie(L: LieStructure) -> bool:
    """Check the Jacobi identity on all triples; raise :class:`JacobiError` on failure."""
    n = L.dim
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                acc: Bracket = {}
                for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                    add_into(acc, L.bracket_vectors(L.bracket(a, b), {c: L.field.one}))
                if acc:
                    raise JacobiError(
                        f"Jacobi identity fails for basis elements ({i + 1}, {j + 1}, {k + 1})",
                        witness=(i, j, k),
                        data={"residue": {k_: str(c) for k_, c in sorted(acc.items())}},
                    )
    return True


def pbw_one(L: LieStructure) -> PbwPoly:
    return PbwPoly(L.dim, {(0,) * L.dim: L.field.one})


def pbw_generator(L: LieStructure, i: int) -> PbwPoly:
    return PbwPoly(L.dim, {exp_unit(L.dim, i): L.field.one})


def _check(L: LieStructure, *polys: SparsePoly) -> None:
    for p in polys:
        if p.nvars != L.dim:
            raise DimensionMismatchError(
                f"element over {p.nvars} variables in U of a {L.dim}-dimensional algebra")


def pbw_mul(L: LieStructure, p: PbwPoly, q: PbwPoly) -> PbwPoly:
    """Product ``p * q`` in ``U(g)``."""
    _check(L, p, q)
    acc: Dict[ExpVec, Scalar] = {}
    for a, ca in p.items():
        for b, cb in q.items():
            add_into(acc, L.mono_times_mono(a, b), ca * cb)
    return PbwPoly(L.dim, acc)


def _mono_times(L: LieStructure, q: ExpVec, g: PbwPoly) -> Dict[ExpVec, Scalar]:
    acc: Dict[ExpVec, Scalar] = {}
    for b, c in g.items():
        add_into(acc, L.mono_times_mono(q, b), c)
    return acc


def left_normal_form(L: LieStructure, f: PbwPoly, G: Sequence[PbwPoly], order: OrderSpec,
                     term_cap: Optional[int] = None) -> PbwPoly:
    """Left division of ``f`` by ``G``: no remaining term is divisible by a leading monomial."""
    order.require_graded("left reduction in an enveloping algebra")
    _check(L, f, *G)
    leads = [(g.leading_monomial(order), g.leading_coefficient(order), g) for g in G if g]
    key = order.c_key
    p = dict(f.terms)
    r: Dict[ExpVec, Scalar] = {}
    while p:
        m = max(p, key=key)
        c = p[m]
        for lm, lc, g in leads:
            if exp_divides(lm, m):
                add_into(p, _mono_times(L, exp_sub(m, lm), g), -c / lc)
                break
        else:
            r[m] = c
            del p[m]
        if term_cap is not None and len(p) > term_cap:
            raise TermCapExceeded(f"PBW reduction exceeded {term_cap} terms")
    return PbwPoly(L.dim, r)


def left_spoly(L: LieStructure, f: PbwPoly, g: PbwPoly, order: OrderSpec) -> PbwPoly:
    (a, ca), (b, cb) = f.leading_term(order), g.leading_term(order)
    lcm = exp_lcm(a, b)
    acc: Dict[ExpVec, Scalar] = {}
    add_into(acc, _mono_times(L, exp_sub(lcm, a), f), 1 / ca)
    add_into(acc, _mono_times(L, exp_sub(lcm, b), g), -1 / cb)
    return PbwPoly(L.dim, acc)


def left_interreduce(L: LieStructure, G: Sequence[PbwPoly], order: OrderSpec,
                     term_cap: Optional[int] = None) -> List[PbwPoly]:
    """Reduced left Groebner basis: minimal, tail-reduced, monic, sorted by leading monomial."""
    minimal: List[PbwPoly] = []
    for g in sorted((g.monic(order) for g in G if g), key=lambda h: order.c_key(h.leading_monomial(order))):
        lm = g.leading_monomial(order)
        if not any(exp_divides(h.leading_monomial(order), lm) for h in minimal):
            minimal.append(g)
    reduced = list(minimal)
    for i in range(len(reduced)):
        others = reduced[:i] + reduced[i + 1:]
        reduced[i] = left_normal_form(L, reduced[i], others, order, term_cap).monic(order)
    return reduced


def two_sided_groebner(L: LieStructure, F: Sequence[PbwPoly], order: OrderSpec,
                       term_cap: Optional[int] = None, basis_cap: Optional[int] = None) -> List[PbwPoly]:
    """Two-sided Groebner basis of the ideal of ``U(g)`` generated by ``F``.

    Alternates left Buchberger (normal strategy) with a sweep adjoining the
    left normal forms of ``g * X_i`` until nothing new appears. The result
    is the reduced basis, monic and sorted by leading monomial.
    """
    order.require_graded("two-sided Groebner bases")
    _check(L, *F)
    G: List[PbwPoly] = []
    leads: List[ExpVec] = []
    pairs: List[Tuple[int, int]] = []
    swept: Set[Tuple[int, int]] = set()

    def add(h: PbwPoly) -> None:
        G.append(h.monic(order))
        leads.append(G[-1].leading_monomial(order))
        k = len(G) - 1
        pairs.extend((i, k) for i in range(k))
        if basis_cap is not None and len(G) > basis_cap:
            raise BasisCapExceeded(f"two-sided basis grew past {basis_cap} elements")

    def pair_key(pair: Tuple[int, int]) -> Tuple[Any, ...]:
        lcm = exp_lcm(leads[pair[0]], leads[pair[1]])
        return (sum(lcm), order.c_key(lcm), pair[1], pair[0])

    for f in F:
        h = left_normal_form(L, f, G, order, term_cap)
        if h:
            add(h)

    sweeps = 0
    while True:
        while pairs:
            pair = min(pairs, key=pair_key)
            pairs.remove(pair)
            h = left_normal_form(L, left_spoly(L, G[pair[0]], G[pair[1]], order), G, order, term_cap)
            if h:
                add(h)
        sweeps += 1
        grown = False
        for idx in range(len(G)):
            for i in range(L.dim):
                if (idx, i) in swept:
                    continue
                swept.add((idx, i))
                h = left_normal_form(L, pbw_mul(L, G[idx], pbw_generator(L, i)), G, order, term_cap)
                if h:
                    add(h)
                    grown = True
        if not grown:
            break
    result = left_interreduce(L, G, order, term_cap)
    logger.debug("%s", struct_message("two-sided basis", size=len(result), generated=len(G), sweeps=sweeps))
    return result


def sigma(g: PbwPoly) -> CPoly:
    """Symbol of ``g``: its top filtration-degree part in the commutative ring."""
    return CPoly(g.nvars, g.top_part().terms)


def free_to_pbw(L: LieStructure, f: NcPoly) -> PbwPoly:
    """Image of a free-algebra element in ``U(g)``."""
    _check(L, f)
    one = (0,) * L.dim
    words: Dict[Word, Mapping[ExpVec, Scalar]] = {(): {one: L.field.one}}

    def evaluate(w: Word) -> Mapping[ExpVec, Scalar]:
        if w not in words:
            acc: Dict[ExpVec, Scalar] = {}
            for m, c in evaluate(w[:-1]).items():
                add_into(acc, L.mono_times_gen(m, w[-1]), c)
            words[w] = acc
        return words[w]

    acc: Dict[ExpVec, Scalar] = {}
    for w, c in f.items():
        add_into(acc, evaluate(w), c)
    return PbwPoly(L.dim, acc)


def ordered_word(a: ExpVec) -> Word:
    """The nondecreasing word ``X_1^a_1 ... X_n^a_n``."""
    return tuple(i for i, e in enumerate(a) for _ in range(e))


def pbw_section(p: SparsePoly) -> NcPoly:
    """Lift a PBW element (or commutative polynomial) to nondecreasing words."""
    return NcPoly(p.nvars, {ordered_word(a): c for a, c in p.items()})


def tailed_commutators(L: LieStructure) -> List[NcPoly]:
    """Defining relations ``X_j X_i - X_i X_j - [X_j, X_i]`` of ``U(g)``, ``i < j`` in lexicographic order."""
    n, one = L.dim, L.field.one
    result = []
    for i in range(n):
        for j in range(i + 1, n):
            terms: Dict[Word, Scalar] = {(j, i): one, (i, j): -one}
            add_into(terms, {(k,): c for k, c in L.bracket(j, i).items()}, -1)
            result.append(NcPoly(n, terms))
    return result


def linear_letters(M: Sequence[Sequence[Scalar]], field: Field = QQ) -> List[NcPoly]:
    """Free-algebra images ``sum_j M[i][j] X_j`` of the letters."""
    n = len(M)
    return [NcPoly(n, {(j,): field(M[i][j]) for j in range(n)}) for i in range(n)]


def change_lie_basis(L: LieStructure, M: Sequence[Sequence[Scalar]]) -> LieStructure:
    """Structure constants in the basis ``Y_i = sum_j M[i][j] X_j``."""
    n = L.dim
    if len(M) != n:
        raise DimensionMismatchError(f"{len(M)}x{len(M)} matrix for a {n}-dimensional algebra")
    inverse = matrix_inverse(M, L.field)
    brackets: Dict[Tuple[int, int], Bracket] = {}
    rows = [{j: L.field(M[i][j]) for j in range(n) if M[i][j] != 0} for i in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            in_x = L.bracket_vectors(rows[b], rows[a])
            in_y: Bracket = {}
            for k, c in in_x.items():
                add_into(in_y, {l: inverse[k][l] for l in range(n)}, c)
            if in_y:
                brackets[(b, a)] = in_y
    return LieStructure(n, brackets, L.field)


def rewrite_in_new_basis(f: NcPoly, M: Sequence[Sequence[Scalar]], field: Field = QQ) -> NcPoly:
    """Express an element written in the letters ``X`` in the letters ``Y = M X``."""
    return substitute_letters(f, linear_letters(matrix_inverse(M, field), field))


def rewrite_in_old_basis(f: NcPoly, M: Sequence[Sequence[Scalar]], field: Field = QQ) -> NcPoly:
    """Express an element written in the letters ``Y = M X`` in the letters ``X``."""
    return substitute_letters(f, linear_letters(M, field))
