"""Exact scalars, monomials and monomial orderings.

Commutative monomials (``ExpVec``) are exponent tuples of length ``n``; free
monomials (``Word``) are tuples of 0-based letter indices, the empty tuple
being the word 1. Orderings are described by an immutable :class:`OrderSpec`
whose ``c_key`` / ``w_key`` sort keys realize the comparators ``cmp_c`` and
``cmp_w``; every leading-term computation in the package goes through them.
"""

from dataclasses import dataclass, field
from enum import Enum, IntEnum
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import (
    Any,
    Callable,
    Dict,
    Generic,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Tuple,
    TypeVar,
    Union,
)

import sympy

from .exceptions import DimensionMismatchError, MathDomainError, OrderError, ZeroPolynomialError

ExpVec = Tuple[int, ...]
Word = Tuple[int, ...]


class ModP:
    """Residue class modulo a prime ``modulus``, stored in ``[0, modulus)``."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: int):
        self.value = value % modulus
        self.modulus = modulus

    def _coerce(self, other: Any) -> Optional[int]:
        if isinstance(other, ModP):
            if other.modulus != self.modulus:
                raise MathDomainError(f"mixed moduli {self.modulus} and {other.modulus}")
            return other.value
        if isinstance(other, int):
            return other % self.modulus
        if isinstance(other, Fraction):
            if other.denominator % self.modulus == 0:
                raise ZeroDivisionError(f"{other} has no residue modulo {self.modulus}")
            return other.numerator * pow(other.denominator, -1, self.modulus) % self.modulus
        return None

    def __add__(self, other: Any) -> "ModP":
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return ModP(self.value + v, self.modulus)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "ModP":
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return ModP(self.value - v, self.modulus)

    def __rsub__(self, other: Any) -> "ModP":
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return ModP(v - self.value, self.modulus)

    def __mul__(self, other: Any) -> "ModP":
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return ModP(self.value * v, self.modulus)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "ModP":
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        if v == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.modulus)
        return ModP(self.value * pow(v, -1, self.modulus), self.modulus)

    def __rtruediv__(self, other: Any) -> "ModP":
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        if self.value == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.modulus)
        return ModP(v * pow(self.value, -1, self.modulus), self.modulus)

    def __neg__(self) -> "ModP":
        return ModP(-self.value, self.modulus)

    def __eq__(self, other: Any) -> bool:
        try:
            v = self._coerce(other)
        except (MathDomainError, ZeroDivisionError):
            return False
        if v is None:
            return NotImplemented
        return self.value == v

    def __hash__(self) -> int:
        return hash(self.value)

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"ModP({self.value}, {self.modulus})"

    def __str__(self) -> str:
        return str(self.value)


Scalar = Union[Fraction, ModP]


@dataclass(frozen=True)
class Field:
    """Coefficient field: ``QQ`` (characteristic 0) or ``GF(p)``.

    The pipeline assumes an infinite field; prime fields are accepted for the
    individual algorithms but a random change of coordinates over a small
    field may fail to reach general position.
    """

    characteristic: int = 0

    def __post_init__(self) -> None:
        p = self.characteristic
        if p < 0 or (p and not sympy.isprime(p)):
            raise MathDomainError(f"GF({p}): modulus must be prime")

    @property
    def name(self) -> str:
        return "QQ" if self.characteristic == 0 else f"GF {self.characteristic}"

    @property
    def zero(self) -> Scalar:
        return self(0)

    @property
    def one(self) -> Scalar:
        return self(1)

    def __call__(self, value: Union[int, str, Fraction, ModP]) -> Scalar:
        if isinstance(value, ModP):
            if value.modulus != self.characteristic:
                raise MathDomainError(f"{value!r} is not an element of {self.name}")
            return value
        q = Fraction(value)
        if self.characteristic == 0:
            return q
        if q.denominator % self.characteristic == 0:
            raise ZeroDivisionError(f"{value} has no residue modulo {self.characteristic}")
        return ModP(q.numerator * pow(q.denominator, -1, self.characteristic), self.characteristic)

    def to_pair(self, c: Scalar) -> Tuple[int, int]:
        """Return ``(numerator, denominator)`` of a field element."""
        c = self(c)
        if isinstance(c, ModP):
            return c.value, 1
        return c.numerator, c.denominator


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


class MonomialOrderKind(str, Enum):
    LEX = "lex"
    GRLEX = "grlex"
    GREVLEX = "grevlex"


class WordOrderKind(str, Enum):
    DEGLEX = "deglex"
    ET = "et"


class Ordering(IntEnum):
    LT = -1
    EQ = 0
    GT = 1


@dataclass(frozen=True)
class OrderSpec:
    """A commutative monomial ordering and its word-ordering companion.

    ``ranks[i]`` is the rank of variable ``i`` (rank 1 is the smallest), so
    ``e < f < h`` is the identity ranking of the variables ``e, f, h``.
    ``word`` selects either degree-lexicographic order on words or the
    lexicographic extension ``et`` of the commutative order: compare
    abelianizations first, then the words lexicographically.
    """

    nvars: int
    kind: MonomialOrderKind = MonomialOrderKind.GREVLEX
    word: WordOrderKind = WordOrderKind.ET
    ranks: Tuple[int, ...] = ()
    by_rank: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", MonomialOrderKind(self.kind))
        object.__setattr__(self, "word", WordOrderKind(self.word))
        ranks = tuple(self.ranks) or tuple(range(1, self.nvars + 1))
        if sorted(ranks) != list(range(1, self.nvars + 1)):
            raise OrderError(f"ranks {ranks} are not a permutation of 1..{self.nvars}")
        object.__setattr__(self, "ranks", ranks)
        object.__setattr__(
            self, "by_rank", tuple(sorted(range(self.nvars), key=lambda v: ranks[v]))
        )
        if self.word is WordOrderKind.ET and self.kind is MonomialOrderKind.LEX:
            raise OrderError("the et extension needs a graded commutative ordering")

    @property
    def is_graded(self) -> bool:
        return self.kind is not MonomialOrderKind.LEX

    @property
    def has_identity_ranks(self) -> bool:
        return self.ranks == tuple(range(1, self.nvars + 1))

    def c_key(self, a: ExpVec) -> Tuple[Any, ...]:
        """Sort key of a commutative monomial: larger key, larger monomial."""
        return _c_key(self, a)

    def w_key(self, u: Word) -> Tuple[Any, ...]:
        """Sort key of a word: larger key, larger word."""
        return _w_key(self, u)

    def require_graded(self, what: str) -> None:
        if not self.is_graded:
            raise OrderError(f"{what} needs a graded ordering, got {self.kind.value}")


@lru_cache(maxsize=1 << 16)
def _c_key(order: OrderSpec, a: ExpVec) -> Tuple[Any, ...]:
    ranked = tuple(a[v] for v in order.by_rank)
    if order.kind is MonomialOrderKind.LEX:
        return tuple(reversed(ranked))
    degree = sum(a)
    if order.kind is MonomialOrderKind.GRLEX:
        return (degree,) + tuple(reversed(ranked))
    # grevlex: the first nonzero entry of a - b from the smallest variable up
    # decides, and a negative entry means a is larger
    return (degree,) + tuple(-e for e in ranked)


@lru_cache(maxsize=1 << 16)
def _w_key(order: OrderSpec, u: Word) -> Tuple[Any, ...]:
    letters = tuple(order.ranks[x] for x in u)
    if order.word is WordOrderKind.DEGLEX:
        return (len(u), letters)
    return (_c_key(order, abelianize(u, order.nvars)), letters)


def abelianize(u: Word, nvars: int) -> ExpVec:
    """Exponent vector of the letters of ``u``."""
    counts = [0] * nvars
    for x in u:
        counts[x] += 1
    return tuple(counts)


def _verdict(ka: Any, kb: Any) -> Ordering:
    if ka < kb:
        return Ordering.LT
    if ka > kb:
        return Ordering.GT
    return Ordering.EQ


def cmp_c(order: OrderSpec, a: ExpVec, b: ExpVec) -> Ordering:
    """Compare two commutative monomials."""
    if len(a) != order.nvars or len(b) != order.nvars:
        raise DimensionMismatchError(
            f"monomials of length {len(a)} and {len(b)} in {order.nvars} variables"
        )
    return _verdict(order.c_key(tuple(a)), order.c_key(tuple(b)))


def cmp_w(order: OrderSpec, u: Word, v: Word) -> Ordering:
    """Compare two words."""
    for x in (*u, *v):
        if not 0 <= x < order.nvars:
            raise DimensionMismatchError(f"letter {x} outside alphabet of size {order.nvars}")
    return _verdict(order.w_key(tuple(u)), order.w_key(tuple(v)))


def exp_add(a: ExpVec, b: ExpVec) -> ExpVec:
    return tuple(x + y for x, y in zip(a, b))


def exp_sub(a: ExpVec, b: ExpVec) -> ExpVec:
    return tuple(x - y for x, y in zip(a, b))


def exp_divides(a: ExpVec, b: ExpVec) -> bool:
    """True iff the monomial ``a`` divides ``b``."""
    return all(x <= y for x, y in zip(a, b))


def exp_lcm(a: ExpVec, b: ExpVec) -> ExpVec:
    return tuple(max(x, y) for x, y in zip(a, b))


def exp_unit(nvars: int, i: int, power: int = 1) -> ExpVec:
    return tuple(power if k == i else 0 for k in range(nvars))


M = TypeVar("M")
P = TypeVar("P", bound="SparsePoly[Any]")


class SparsePoly(Generic[M]):
    """Immutable sparse linear combination of monomials.

    Subclasses fix the monomial type, how its degree is measured and which
    sort key of an :class:`OrderSpec` ranks it.
    """

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Optional[Mapping[M, Scalar]] = None):
        self.nvars = nvars
        self._terms: Dict[M, Scalar] = {m: c for m, c in (terms or {}).items() if c != 0}
        self._hash: Optional[int] = None

    # -- subclass hooks -------------------------------------------------
    @staticmethod
    def monomial_degree(m: Any) -> int:
        raise NotImplementedError

    @staticmethod
    def order_key(order: OrderSpec) -> Callable[[Any], Any]:
        raise NotImplementedError

    # -- construction -----------------------------------------------------
    @classmethod
    def zero(cls: "type[P]", nvars: int) -> P:
        return cls(nvars)

    @classmethod
    def monomial(cls: "type[P]", nvars: int, m: M, coefficient: Scalar) -> P:
        return cls(nvars, {m: coefficient})

    def _new(self: P, terms: Mapping[M, Scalar]) -> P:
        return type(self)(self.nvars, terms)

    # -- container protocol ---------------------------------------------
    @property
    def terms(self) -> Mapping[M, Scalar]:
        return MappingProxyType(self._terms)

    def items(self) -> Iterable[Tuple[M, Scalar]]:
        return self._terms.items()

    def coefficient(self, m: M) -> Scalar:
        return self._terms.get(m, 0)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[M]:
        return iter(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, int) and other == 0:
            return not self._terms
        if type(other) is not type(self):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((type(self).__name__, self.nvars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(f"{m}: {c}" for m, c in self._terms.items())
        return f"{type(self).__name__}({self.nvars}, {{{inner}}})"

    # -- linear structure -------------------------------------------------
    def _check_compatible(self, other: "SparsePoly[M]") -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.nvars != self.nvars:
            raise DimensionMismatchError(
                f"polynomials over {self.nvars} and {other.nvars} variables"
            )

    def __add__(self: P, other: P) -> P:
        self._check_compatible(other)
        terms = dict(self._terms)
        add_into(terms, other._terms)
        return self._new(terms)

    def __sub__(self: P, other: P) -> P:
        self._check_compatible(other)
        terms = dict(self._terms)
        add_into(terms, other._terms, -1)
        return self._new(terms)

    def __neg__(self: P) -> P:
        return self._new({m: -c for m, c in self._terms.items()})

    def scale(self: P, c: Scalar) -> P:
        if c == 0:
            return self._new({})
        return self._new({m: c * v for m, v in self._terms.items()})

    # -- degrees ----------------------------------------------------------
    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(self.monomial_degree(m) for m in self._terms)

    def homogeneous_part(self: P, d: int) -> P:
        return self._new({m: c for m, c in self._terms.items() if self.monomial_degree(m) == d})

    def top_part(self: P) -> P:
        """The homogeneous component of highest degree."""
        if not self._terms:
            raise ZeroPolynomialError("the zero polynomial has no leading homogeneous part")
        return self.homogeneous_part(self.degree)

    def is_homogeneous(self) -> bool:
        return len({self.monomial_degree(m) for m in self._terms}) <= 1

    # -- leading terms ----------------------------------------------------
    def leading_term(self, order: OrderSpec) -> Tuple[M, Scalar]:
        if not self._terms:
            raise ZeroPolynomialError("the zero polynomial has no leading term")
        key = self.order_key(order)
        m = max(self._terms, key=key)
        return m, self._terms[m]

    def leading_monomial(self, order: OrderSpec) -> M:
        return self.leading_term(order)[0]

    def leading_coefficient(self, order: OrderSpec) -> Scalar:
        return self.leading_term(order)[1]

    def monic(self: P, order: OrderSpec) -> P:
        if not self._terms:
            return self
        lc = self.leading_coefficient(order)
        if lc == 1:
            return self
        return self.scale(1 / lc)

    def sorted_terms(self, order: OrderSpec, descending: bool = True) -> List[Tuple[M, Scalar]]:
        key = self.order_key(order)
        return sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=descending)


def add_into(acc: Dict[Any, Scalar], terms: Mapping[Any, Scalar], c: Any = 1,
             shift: Optional[Callable[[Any], Any]] = None) -> None:
    """``acc += c * shift(terms)`` in place, dropping cancelled monomials."""
    for m, v in terms.items():
        if shift is not None:
            m = shift(m)
        s = acc.get(m, 0) + c * v
        if s == 0:
            acc.pop(m, None)
        else:
            acc[m] = s
