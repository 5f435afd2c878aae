"""Noncommutative polynomials in the free associative algebra.

Two-sided reduction rewrites ``u*LW(g)*v`` to ``u*(LW(g) - g/lc(g))*v``.
Ambiguities (overlaps and inclusions of leading words) drive both the
diamond-lemma check :func:`nc_is_groebner` and the degree-bounded
completion :func:`nc_complete_bounded`.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Set, Tuple

from .exceptions import BasisCapExceeded, MathDomainError, TermCapExceeded
from .kernel import QQ, Field, OrderSpec, Scalar, SparsePoly, Word, add_into
from .logging_config import get_logger, struct_message

logger = get_logger(__name__)

OVERLAP = "overlap"
INCLUSION = "inclusion"


class NcPoly(SparsePoly[Word]):
    """Sparse polynomial in ``K<X_1, ..., X_n>``; words are 0-based letter tuples."""

    __slots__ = ()

    @staticmethod
    def monomial_degree(m: Word) -> int:
        return len(m)

    @staticmethod
    def order_key(order: OrderSpec) -> Callable[[Word], Any]:
        return order.w_key

    @classmethod
    def letter(cls, nvars: int, i: int, field: Field = QQ) -> "NcPoly":
        return cls(nvars, {(i,): field.one})

    @classmethod
    def constant(cls, nvars: int, c: Scalar) -> "NcPoly":
        return cls(nvars, {(): c})

    def leading_word(self, order: OrderSpec) -> Word:
        return self.leading_monomial(order)

    def lmul(self, u: Word, c: Scalar = 1) -> "NcPoly":
        """``c * u * self`` for a word ``u``."""
        return NcPoly(self.nvars, {u + w: c * v for w, v in self._terms.items()})

    def rmul(self, u: Word, c: Scalar = 1) -> "NcPoly":
        """``c * self * u`` for a word ``u``."""
        return NcPoly(self.nvars, {w + u: c * v for w, v in self._terms.items()})

    def __mul__(self, other: "NcPoly") -> "NcPoly":
        self._check_compatible(other)
        acc: Dict[Word, Scalar] = {}
        for u, c in self._terms.items():
            add_into(acc, other._terms, c, shift=lambda w, u=u: u + w)
        return NcPoly(self.nvars, acc)


def lh(f: NcPoly) -> NcPoly:
    """Leading homogeneous part: the component of top degree."""
    return f.top_part()


def find_subword(word: Word, sub: Word, start: int = 0) -> int:
    """Leftmost position ``>= start`` where ``sub`` occurs in ``word``, or -1."""
    k = len(sub)
    for pos in range(start, len(word) - k + 1):
        if word[pos:pos + k] == sub:
            return pos
    return -1


def occurrences(word: Word, sub: Word) -> List[int]:
    found = []
    pos = find_subword(word, sub)
    while pos >= 0:
        found.append(pos)
        pos = find_subword(word, sub, pos + 1)
    return found


@dataclass(frozen=True)
class Reduction:
    """One step ``coefficient * left * G[index] * right`` subtracted during reduction."""

    coefficient: Scalar
    left: Word
    index: int
    right: Word


class _Reducer:
    """Leading data of a fixed basis, in index order."""

    def __init__(self, G: Sequence[NcPoly], order: OrderSpec):
        self.order = order
        self.polys = list(G)
        self.leads = [
            (i, g.leading_word(order), g.leading_coefficient(order), g)
            for i, g in enumerate(self.polys) if g
        ]

    def match(self, w: Word) -> Optional[Tuple[int, int, Word, Scalar, NcPoly]]:
        for i, lw, lc, g in self.leads:
            pos = find_subword(w, lw)
            if pos >= 0:
                return i, pos, lw, lc, g
        return None

    def reduce(self, f: NcPoly, term_cap: Optional[int] = None,
               track: bool = False) -> Tuple[NcPoly, List[Reduction]]:
        key = self.order.w_key
        p = dict(f.terms)
        r: Dict[Word, Scalar] = {}
        steps: List[Reduction] = []
        while p:
            w = max(p, key=key)
            c = p[w]
            hit = self.match(w)
            if hit is None:
                r[w] = c
                del p[w]
                continue
            i, pos, lw, lc, g = hit
            u, v = w[:pos], w[pos + len(lw):]
            coef = c / lc
            add_into(p, g.terms, -coef, shift=lambda t: u + t + v)
            if track:
                steps.append(Reduction(coef, u, i, v))
            if term_cap is not None and len(p) > term_cap:
                raise TermCapExceeded(f"free-algebra reduction exceeded {term_cap} terms")
        return NcPoly(f.nvars, r), steps


def nc_reduce(f: NcPoly, G: Sequence[NcPoly], order: OrderSpec,
              term_cap: Optional[int] = None) -> Tuple[NcPoly, List[Reduction]]:
    """Normal form of ``f`` together with the reduction steps taken.

    ``f - normal_form == sum(c * u * G[i] * v for c, u, i, v in steps)``.
    """
    return _Reducer(G, order).reduce(f, term_cap, track=True)


def nc_normal_form(f: NcPoly, G: Sequence[NcPoly], order: OrderSpec,
                   term_cap: Optional[int] = None) -> NcPoly:
    """Two-sided normal form of ``f`` modulo ``G``.

    Strategy: the largest reducible term is rewritten at its leftmost
    occurrence by the basis element of smallest index.
    """
    return _Reducer(G, order).reduce(f, term_cap)[0]


@dataclass(frozen=True)
class Ambiguity:
    """The leading words of ``G[left]`` and ``G[right]`` sit in ``word`` at the two offsets."""

    left: int
    right: int
    kind: str
    word: Word
    left_offset: int
    right_offset: int


def ambiguities(G: Sequence[NcPoly], order: OrderSpec) -> List[Ambiguity]:
    """All proper overlaps (self-overlaps included) and inclusions of leading words.

    An overlap of ``(i, j)`` glues a proper suffix of ``LW(G[i])`` to a
    prefix of ``LW(G[j])``. An inclusion of ``(i, j)`` places ``LW(G[j])``
    inside ``LW(G[i])``, once per occurrence; equal leading words give one
    inclusion, for ``i < j``.
    """
    words = [g.leading_word(order) if g else None for g in G]
    found: List[Ambiguity] = []
    for i, a in enumerate(words):
        if a is None:
            continue
        for j, b in enumerate(words):
            if b is None:
                continue
            for k in range(1, min(len(a), len(b))):
                if a[len(a) - k:] == b[:k]:
                    found.append(Ambiguity(i, j, OVERLAP, a + b[k:], 0, len(a) - k))
            if i == j or len(b) > len(a) or (a == b and i > j):
                continue
            for pos in occurrences(a, b):
                found.append(Ambiguity(i, j, INCLUSION, a, 0, pos))
    return found


def _one_step(word: Word, g: NcPoly, order: OrderSpec, offset: int) -> NcPoly:
    lw, lc = g.leading_term(order)
    u, v = word[:offset], word[offset + len(lw):]
    reduct = NcPoly(g.nvars, {word: lc})
    return (reduct - g.lmul(u).rmul(v)).scale(1 / lc)


def _resolve(amb: Ambiguity, G: Sequence[NcPoly], reducer: _Reducer, order: OrderSpec,
             term_cap: Optional[int]) -> Tuple[NcPoly, NcPoly]:
    left = reducer.reduce(_one_step(amb.word, G[amb.left], order, amb.left_offset), term_cap)[0]
    right = reducer.reduce(_one_step(amb.word, G[amb.right], order, amb.right_offset), term_cap)[0]
    return left, right


@dataclass(frozen=True)
class GroebnerCertificate:
    """Outcome of the diamond-lemma check.

    On failure, ``ambiguity`` is the first unresolved one and ``left_form`` /
    ``right_form`` are the normal forms of its two one-step reducts.
    """

    is_groebner: bool
    checked: int
    ambiguity: Optional[Ambiguity] = None
    left_form: Optional[NcPoly] = None
    right_form: Optional[NcPoly] = None

    def __bool__(self) -> bool:
        return self.is_groebner

    @property
    def difference(self) -> Optional[NcPoly]:
        if self.left_form is None or self.right_form is None:
            return None
        return self.left_form - self.right_form

    @property
    def witness(self) -> Optional[Tuple[NcPoly, NcPoly]]:
        if self.is_groebner:
            return None
        return self.left_form, self.right_form


def nc_is_groebner(G: Sequence[NcPoly], order: OrderSpec, workers: int = 1,
                   term_cap: Optional[int] = None) -> GroebnerCertificate:
    """Check that every ambiguity of ``G`` resolves.

    Ambiguities are independent, so with ``workers > 1`` they are resolved on
    a thread pool; the reported witness is still the first failure in
    enumeration order.
    """
    G = [g for g in G if g]
    reducer = _Reducer(G, order)
    ambs = ambiguities(G, order)

    def check(amb: Ambiguity) -> Tuple[NcPoly, NcPoly]:
        return _resolve(amb, G, reducer, order, term_cap)

    if workers > 1 and len(ambs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(check, ambs))
    else:
        results = []
        for amb in ambs:
            pair = check(amb)
            results.append(pair)
            if pair[0] != pair[1]:
                break
    for amb, (left, right) in zip(ambs, results):
        if left != right:
            logger.debug("%s", struct_message("unresolved ambiguity", kind=amb.kind, word=amb.word))
            return GroebnerCertificate(False, len(results), amb, left, right)
    logger.debug("%s", struct_message("diamond lemma holds", size=len(G), ambiguities=len(ambs)))
    return GroebnerCertificate(True, len(ambs))


def nc_interreduce(G: Sequence[NcPoly], order: OrderSpec,
                   term_cap: Optional[int] = None) -> List[NcPoly]:
    """Reduced generating set of the same ideal: minimal, tail-reduced, monic, sorted by leading word.

    An element whose leading word contains another leading word is replaced
    by its normal form and put back when that is nonzero. On a Groebner
    basis this gives the unique reduced Groebner basis.
    """
    key = order.w_key
    pending = [g.monic(order) for g in G if g]
    basis: List[NcPoly] = []
    while pending:
        pending.sort(key=lambda h: key(h.leading_word(order)))
        h = nc_normal_form(pending.pop(0), basis, order, term_cap)
        if not h:
            continue
        h = h.monic(order)
        lw = h.leading_word(order)
        pending.extend(g for g in basis if find_subword(g.leading_word(order), lw) >= 0)
        basis = [g for g in basis if find_subword(g.leading_word(order), lw) < 0]
        basis.append(h)
    basis.sort(key=lambda h: key(h.leading_word(order)))
    for i in range(len(basis)):
        others = basis[:i] + basis[i + 1:]
        basis[i] = nc_normal_form(basis[i], others, order, term_cap).monic(order)
    return basis


@dataclass
class CompletionResult:
    """Basis from :func:`nc_complete_bounded` and whether it is known to be complete."""

    basis: List[NcPoly]
    complete: bool
    added: int = 0
    rounds: int = 0
    unresolved: List[Ambiguity] = field(default_factory=list)

    def __iter__(self) -> Iterator[Any]:
        yield self.basis
        yield self.complete


def nc_complete_bounded(F: Sequence[NcPoly], order: OrderSpec, max_degree: int,
                        term_cap: Optional[int] = None,
                        basis_cap: Optional[int] = None) -> CompletionResult:
    """Buchberger-style completion restricted to ambiguities of degree ``<= max_degree``.

    Unresolved ambiguities add the monic normal form of their difference and
    the basis is inter-reduced after each round. ``complete`` is false when an
    ambiguity beyond the bound is still unresolved at the end.
    """
    G = [f.monic(order) for f in F if f]
    top = max((g.degree for g in G), default=0)
    if max_degree < top:
        raise MathDomainError(f"degree bound {max_degree} is below the input degree {top}")
    resolved: Set[Tuple[NcPoly, NcPoly, Word, int, int]] = set()
    added = rounds = 0

    def key(amb: Ambiguity) -> Tuple[NcPoly, NcPoly, Word, int, int]:
        return (G[amb.left], G[amb.right], amb.word, amb.left_offset, amb.right_offset)

    while True:
        rounds += 1
        reducer = _Reducer(G, order)
        ambs = ambiguities(G, order)
        new: List[NcPoly] = []
        for amb in ambs:
            if len(amb.word) > max_degree or key(amb) in resolved:
                continue
            left, right = _resolve(amb, G, reducer, order, term_cap)
            if left == right:
                resolved.add(key(amb))
                continue
            h = nc_normal_form(left - right, G + new, order, term_cap)
            if h:
                new.append(h.monic(order))
        if not new:
            break
        added += len(new)
        G = nc_interreduce(G + new, order, term_cap)
        logger.debug("%s", struct_message("completion round", round=rounds, added=len(new), size=len(G)))
        if basis_cap is not None and len(G) > basis_cap:
            raise BasisCapExceeded(f"completion basis grew past {basis_cap} elements")

    unresolved = []
    for amb in ambs:
        if len(amb.word) <= max_degree or key(amb) in resolved:
            continue
        left, right = _resolve(amb, G, reducer, order, term_cap)
        if left == right:
            resolved.add(key(amb))
        else:
            unresolved.append(amb)
    logger.debug("%s", struct_message(
        "completion finished", size=len(G), added=added, unresolved=len(unresolved)))
    return CompletionResult(G, not unresolved, added, rounds, unresolved)


def graded_quotient_is_commutative(G_lh: Sequence[NcPoly], order: OrderSpec,
                                   term_cap: Optional[int] = None) -> bool:
    """True iff every commutator ``X_j X_i - X_i X_j`` reduces to zero modulo ``G_lh``."""
    n = order.nvars
    reducer = _Reducer(G_lh, order)
    for i in range(n):
        for j in range(i + 1, n):
            if reducer.reduce(commutator(n, i, j), term_cap)[0]:
                return False
    return True


def commutator(nvars: int, i: int, j: int, field: Field = QQ) -> NcPoly:
    """``X_j X_i - X_i X_j``."""
    return NcPoly(nvars, {(j, i): field.one, (i, j): -field.one})


def substitute_letters(f: NcPoly, images: Sequence[NcPoly]) -> NcPoly:
    """Image of ``f`` under the algebra map ``X_i -> images[i]``."""
    if len(images) != f.nvars:
        raise MathDomainError(f"{len(images)} images for {f.nvars} letters")
    nvars = images[0].nvars if images else f.nvars
    cache: Dict[Word, NcPoly] = {(): NcPoly(nvars, {(): 1})}

    def image(w: Word) -> NcPoly:
        if w not in cache:
            cache[w] = image(w[:-1]) * images[w[-1]]
        return cache[w]

    acc: Dict[Word, Scalar] = {}
    for w, c in f.items():
        add_into(acc, image(w).terms, c)
    return NcPoly(nvars, acc)
