"""Commutative polynomials, Buchberger's algorithm and monomial ideals.

Besides the usual division algorithm and Buchberger completion this module
computes the U-sets of the noncommutative lift: for a monomial ideal ``L`` and
a monomial ``m`` in ``L`` with smallest variable ``x_a`` and largest variable
``x_b``, ``U_L(m)`` is the set of monomials ``u`` in the variables strictly
between ``x_a`` and ``x_b`` with neither ``u*m/x_a`` nor ``u*m/x_b`` in ``L``.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import sympy

from .exceptions import DimensionMismatchError, MathDomainError, SingularMatrixError, TermCapExceeded
from .kernel import (
    QQ,
    ExpVec,
    Field,
    ModP,
    OrderSpec,
    Scalar,
    SparsePoly,
    add_into,
    exp_add,
    exp_divides,
    exp_lcm,
    exp_sub,
    exp_unit,
)
from .logging_config import get_logger, struct_message

logger = get_logger(__name__)

Matrix = Sequence[Sequence[Scalar]]


class CPoly(SparsePoly[ExpVec]):
    """Sparse polynomial in ``K[x_1, ..., x_n]``."""

    __slots__ = ()

    @staticmethod
    def monomial_degree(m: ExpVec) -> int:
        return sum(m)

    @staticmethod
    def order_key(order: OrderSpec) -> Callable[[ExpVec], Any]:
        return order.c_key

    @classmethod
    def variable(cls, nvars: int, i: int, field: Field = QQ) -> "CPoly":
        return cls(nvars, {exp_unit(nvars, i): field.one})

    @classmethod
    def constant(cls, nvars: int, c: Scalar) -> "CPoly":
        return cls(nvars, {(0,) * nvars: c})

    def mul_monomial(self, a: ExpVec, c: Scalar = 1) -> "CPoly":
        return CPoly(self.nvars, {exp_add(m, a): c * v for m, v in self._terms.items()})

    def __mul__(self, other: "CPoly") -> "CPoly":
        self._check_compatible(other)
        acc: Dict[ExpVec, Scalar] = {}
        for a, c in self._terms.items():
            add_into(acc, other._terms, c, shift=lambda m, a=a: exp_add(m, a))
        return CPoly(self.nvars, acc)

    def __pow__(self, k: int) -> "CPoly":
        if k < 0:
            raise ValueError("negative exponent")
        result = CPoly(self.nvars, {(0,) * self.nvars: 1})
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result


@dataclass(frozen=True)
class MonomialIdeal:
    """Monomial ideal given by its minimal generators."""

    nvars: int
    generators: Tuple[ExpVec, ...]

    @classmethod
    def of(cls, nvars: int, monomials: Iterable[ExpVec]) -> "MonomialIdeal":
        minimal: List[ExpVec] = []
        for m in sorted(set(map(tuple, monomials)), key=lambda a: (sum(a), a)):
            if len(m) != nvars:
                raise DimensionMismatchError(f"monomial {m} in {nvars} variables")
            if not any(exp_divides(g, m) for g in minimal):
                minimal.append(m)
        return cls(nvars, tuple(minimal))

    def contains(self, m: ExpVec) -> bool:
        return any(exp_divides(g, m) for g in self.generators)

    def colon(self, m: ExpVec) -> "MonomialIdeal":
        """The ideal quotient ``(self : m)``."""
        return MonomialIdeal.of(
            self.nvars, (tuple(max(x - y, 0) for x, y in zip(g, m)) for g in self.generators)
        )

    def __add__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return MonomialIdeal.of(self.nvars, self.generators + other.generators)

    def restricted(self, variables: Iterable[int]) -> "MonomialIdeal":
        """Generators involving only ``variables``."""
        allowed = set(variables)
        return MonomialIdeal(
            self.nvars,
            tuple(g for g in self.generators if all(e == 0 or i in allowed for i, e in enumerate(g))),
        )

    @property
    def is_unit(self) -> bool:
        return any(sum(g) == 0 for g in self.generators)

    def standard_monomials(self, variables: Sequence[int], degree_cap: int) -> List[ExpVec]:
        """Monomials in ``variables`` of degree at most ``degree_cap`` outside the ideal."""
        return [
            a for a in _monomials_in(self.nvars, variables, lambda v: degree_cap + 1)
            if sum(a) <= degree_cap and not self.contains(a)
        ]


@dataclass(frozen=True)
class USet:
    """Result of :func:`u_set`.

    When ``finite`` is false, ``monomials`` holds the members up to the
    requested degree cap and ``unbounded`` the variables whose powers are
    never excluded.
    """

    monomial: ExpVec
    finite: bool
    monomials: Tuple[ExpVec, ...]
    unbounded: Tuple[int, ...] = ()


def c_normal_form(f: CPoly, G: Sequence[CPoly], order: OrderSpec,
                  term_cap: Optional[int] = None) -> CPoly:
    """Fully reduce ``f`` modulo ``G``."""
    leads = [(g.leading_monomial(order), g.leading_coefficient(order), g) for g in G if g]
    key = order.c_key
    p = dict(f.terms)
    r: Dict[ExpVec, Scalar] = {}
    while p:
        m = max(p, key=key)
        c = p[m]
        for lm, lc, g in leads:
            if exp_divides(lm, m):
                q = exp_sub(m, lm)
                add_into(p, g.terms, -c / lc, shift=lambda t: exp_add(t, q))
                break
        else:
            r[m] = c
            del p[m]
        if term_cap is not None and len(p) > term_cap:
            raise TermCapExceeded(f"commutative reduction exceeded {term_cap} terms")
    return CPoly(f.nvars, r)


def c_spoly(f: CPoly, g: CPoly, order: OrderSpec) -> CPoly:
    """S-polynomial of ``f`` and ``g``."""
    (a, ca), (b, cb) = f.leading_term(order), g.leading_term(order)
    lcm = exp_lcm(a, b)
    return f.mul_monomial(exp_sub(lcm, a), 1 / ca) - g.mul_monomial(exp_sub(lcm, b), 1 / cb)


def c_interreduce(G: Sequence[CPoly], order: OrderSpec,
                  term_cap: Optional[int] = None) -> List[CPoly]:
    """Reduced Groebner basis from a Groebner basis: minimal, tail-reduced, monic."""
    minimal: List[CPoly] = []
    for g in sorted((g.monic(order) for g in G if g), key=lambda h: order.c_key(h.leading_monomial(order))):
        lm = g.leading_monomial(order)
        if not any(exp_divides(h.leading_monomial(order), lm) for h in minimal):
            minimal.append(g)
    reduced = list(minimal)
    for i in range(len(reduced)):
        others = reduced[:i] + reduced[i + 1:]
        reduced[i] = c_normal_form(reduced[i], others, order, term_cap).monic(order)
    return reduced


def c_buchberger(F: Sequence[CPoly], order: OrderSpec, reduce: bool = True,
                 term_cap: Optional[int] = None) -> List[CPoly]:
    """Groebner basis of the ideal generated by ``F``.

    Pairs are taken by the normal strategy (smallest lcm first) and pairs with
    coprime leading monomials are skipped. With ``reduce`` the unique reduced
    basis is returned, sorted by leading monomial.
    """
    G: List[CPoly] = []
    leads: List[ExpVec] = []
    pairs: List[Tuple[int, int]] = []

    def add(h: CPoly) -> None:
        G.append(h.monic(order))
        leads.append(G[-1].leading_monomial(order))
        k = len(G) - 1
        pairs.extend((i, k) for i in range(k))

    for f in F:
        if f:
            add(f)

    def pair_key(pair: Tuple[int, int]) -> Tuple[Any, ...]:
        lcm = exp_lcm(leads[pair[0]], leads[pair[1]])
        return (sum(lcm), order.c_key(lcm), pair[1], pair[0])

    reductions = 0
    while pairs:
        pair = min(pairs, key=pair_key)
        pairs.remove(pair)
        i, j = pair
        if exp_add(leads[i], leads[j]) == exp_lcm(leads[i], leads[j]):
            continue
        h = c_normal_form(c_spoly(G[i], G[j], order), G, order, term_cap)
        reductions += 1
        if h:
            add(h)
    logger.debug("%s", struct_message("buchberger done", size=len(G), reductions=reductions))
    if reduce:
        return c_interreduce(G, order, term_cap)
    return G


def mi_member(L: MonomialIdeal, m: ExpVec) -> bool:
    """True iff some generator of ``L`` divides ``m``."""
    if len(m) != L.nvars:
        raise DimensionMismatchError(f"monomial {m} in {L.nvars} variables")
    return L.contains(tuple(m))


def _default_u_key(a: ExpVec) -> Tuple[Any, ...]:
    return (sum(a), tuple(reversed(a)))


def u_set(L: MonomialIdeal, m: ExpVec, degree_cap: int = 8,
          order: Optional[OrderSpec] = None) -> USet:
    """Compute ``U_L(m)`` exactly.

    ``U`` is the set of standard monomials of ``(L : m/x_a) + (L : m/x_b)``
    in the variables strictly between ``x_a`` and ``x_b``, the smallest and
    largest variables of ``m``; it is finite iff that ideal contains a pure
    power of every such variable. Variables are compared by the ranks of
    ``order`` when given and by index otherwise. Members are sorted by
    degree, then by ``order`` when given.
    """
    m = tuple(m)
    if len(m) != L.nvars:
        raise DimensionMismatchError(f"monomial {m} in {L.nvars} variables")
    ranked = order.by_rank if order is not None else tuple(range(L.nvars))
    support = [k for k, v in enumerate(ranked) if m[v]]
    if not support:
        raise MathDomainError("U-sets are defined for non-constant monomials")
    if not L.contains(m):
        raise MathDomainError(f"monomial {m} does not lie in the ideal")
    first, last = ranked[support[0]], ranked[support[-1]]
    between = list(ranked[support[0] + 1:support[-1]])
    J = (L.colon(exp_sub(m, exp_unit(L.nvars, first))) + L.colon(exp_sub(m, exp_unit(L.nvars, last))))
    J = J.restricted(between)

    def sort(monomials: Iterable[ExpVec]) -> Tuple[ExpVec, ...]:
        if order is None:
            return tuple(sorted(monomials, key=_default_u_key))
        return tuple(sorted(monomials, key=lambda a: (sum(a), order.c_key(a))))

    if J.is_unit:
        return USet(m, True, ())
    bounds: Dict[int, int] = {}
    for g in J.generators:
        support_g = [i for i, e in enumerate(g) if e]
        if len(support_g) == 1:
            v = support_g[0]
            bounds[v] = min(bounds.get(v, g[v]), g[v])
    unbounded = tuple(v for v in between if v not in bounds)
    if unbounded:
        found = sort(J.standard_monomials(between, degree_cap))
        logger.debug("%s", struct_message("infinite U-set", monomial=m, unbounded=unbounded))
        return USet(m, False, found, unbounded)
    members = sort(a for a in _monomials_in(L.nvars, between, lambda v: bounds[v]) if not J.contains(a))
    return USet(m, True, members)


def _monomials_in(nvars: int, variables: Sequence[int], bound: Callable[[int], int]) -> Iterable[ExpVec]:
    """All monomials in ``variables`` with exponent of ``v`` below ``bound(v)``."""
    ranges = [range(bound(v)) for v in variables]
    for exps in itertools.product(*ranges):
        a = [0] * nvars
        for v, e in zip(variables, exps):
            a[v] = e
        yield tuple(a)


def _to_sympy(c: Scalar) -> sympy.Rational:
    if isinstance(c, ModP):
        return sympy.Integer(c.value)
    q = Fraction(c)
    return sympy.Rational(q.numerator, q.denominator)


def _sympy_matrix(M: Matrix) -> sympy.Matrix:
    rows = [list(r) for r in M]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionMismatchError("linear change of variables needs a square matrix")
    return sympy.Matrix([[_to_sympy(c) for c in r] for r in rows])


def is_invertible(M: Matrix, field: Field = QQ) -> bool:
    det = _sympy_matrix(M).det()
    if field.characteristic:
        return int(det) % field.characteristic != 0
    return det != 0


def matrix_inverse(M: Matrix, field: Field = QQ) -> Tuple[Tuple[Scalar, ...], ...]:
    """Exact inverse of a square matrix over ``field``."""
    if not is_invertible(M, field):
        raise SingularMatrixError("matrix is singular")
    A = _sympy_matrix(M)
    inv = A.inv_mod(field.characteristic) if field.characteristic else A.inv()
    return tuple(
        tuple(field(Fraction(int(sympy.fraction(e)[0]), int(sympy.fraction(e)[1]))) for e in inv.row(i))
        for i in range(inv.rows)
    )


def random_invertible_matrix(n: int, rng: Any, field: Field = QQ, bound: int = 2,
                             attempts: int = 1000) -> Tuple[Tuple[Scalar, ...], ...]:
    """Seeded random invertible matrix with small integer entries."""
    for _ in range(attempts):
        M = tuple(tuple(field(rng.randint(-bound, bound)) for _ in range(n)) for _ in range(n))
        if is_invertible(M, field):
            return M
    raise SingularMatrixError(f"no invertible {n}x{n} matrix found in {attempts} attempts")


def apply_linear_change(F: Sequence[CPoly], M: Matrix, field: Field = QQ) -> List[CPoly]:
    """Substitute ``x_i`` by ``sum_j M[i][j] x_j`` in every polynomial of ``F``."""
    n = len(M)
    if not is_invertible(M, field):
        raise SingularMatrixError("linear change of variables with a singular matrix")
    forms = [CPoly(n, {exp_unit(n, j): M[i][j] for j in range(n)}) for i in range(n)]
    powers: Dict[Tuple[int, int], CPoly] = {}

    def power(i: int, e: int) -> CPoly:
        if (i, e) not in powers:
            powers[(i, e)] = forms[i] ** e
        return powers[(i, e)]

    result = []
    for f in F:
        if f.nvars != n:
            raise DimensionMismatchError(f"polynomial in {f.nvars} variables, matrix of size {n}")
        acc: Dict[ExpVec, Scalar] = {}
        for a, c in f.items():
            term = CPoly(n, {(0,) * n: c})
            for i, e in enumerate(a):
                if e:
                    term = term * power(i, e)
            add_into(acc, term.terms)
        result.append(CPoly(n, acc))
    return result
