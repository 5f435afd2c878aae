"""Shared structures and known bases for the test suites."""

import os
import random
import sys
from fractions import Fraction
from typing import List

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from acgb.cli import parse_problem  # noqa: E402
from acgb.compoly import CPoly  # noqa: E402
from acgb.envalg import LieStructure, PbwPoly, free_to_pbw  # noqa: E402
from acgb.freealg import NcPoly  # noqa: E402
from acgb.kernel import OrderSpec  # noqa: E402
from acgb.liftkit import gamma  # noqa: E402

PROBLEMS = os.path.abspath(os.path.join(os.path.dirname(__file__), '..', 'problems'))

GREVLEX3 = OrderSpec(3)

# e < f < h with [e,f] = h, [h,e] = 2e, [h,f] = -2f
SL2 = LieStructure(3, {(0, 1): {2: 1}, (2, 0): {0: 2}, (2, 1): {1: -2}})

# [x,y] = z, z central
HEISENBERG = LieStructure(3, {(0, 1): {2: 1}})

# [y,x] = x
NONABELIAN2 = LieStructure(2, {(1, 0): {0: 1}})

# [z,x] = x, [z,y] = y
SOLVABLE3 = LieStructure(3, {(2, 0): {0: 1}, (2, 1): {1: 1}})


def nc(names: str, text: str) -> List[NcPoly]:
    """Parse a list of free-algebra polynomials over the given variable names."""
    return list(parse_problem(f"vars {names}\nmode free\nideal {text}\n").generators)


def nc1(names: str, text: str) -> NcPoly:
    (poly,) = nc(names, text)
    return poly


def com(names: str, text: str) -> List[CPoly]:
    return [gamma(f) for f in nc(names, text)]


def com1(names: str, text: str) -> CPoly:
    (poly,) = com(names, text)
    return poly


def pbw(L: LieStructure, names: str, text: str) -> List[PbwPoly]:
    """PBW elements written as ordered products, e.g. ``e^2*f - e*h``."""
    return [free_to_pbw(L, f) for f in nc(names, text)]


def pbw1(L: LieStructure, names: str, text: str) -> PbwPoly:
    (poly,) = pbw(L, names, text)
    return poly


SL2_TWO_SIDED = (
    "e^3, f^3, h^3 - 4h, e*h^2 + 2e*h, f*h^2 - 2f*h, e*f*h - 1/2 h^2 - h, "
    "e^2*f - e*h - 2e, e*f^2 - f*h, e^2*h + 2e^2, f^2*h - 2f^2"
)

SL2_SYMBOLS = "x^3, y^3, z^3, x*z^2, y*z^2, x*y*z, x^2*y, x*y^2, x^2*z, y^2*z"

SL2_HOMOGENEOUS_LIFT = (
    "y*x - x*y, z*x - x*z, z*y - y*z, x^3, y^3, z^3, x*z^2, y*z^2, x*y*z, "
    "x^2*y, x*y^2, x^2*z, y^2*z"
)

SL2_FINAL = (
    "y*x - x*y + z, z*x - x*z - 2x, z*y - y*z + 2y, x^3, y^3, z^3 - 4z, "
    "x*z^2 + 2x*z, y*z^2 - 2y*z, x*y*z - 1/2 z^2 - z, x^2*y - x*z - 2x, "
    "x*y^2 - y*z, x^2*z + 2x^2, y^2*z - 2y^2"
)

CATALOG = {
    "abelian2": LieStructure.abelian(2),
    "abelian3": LieStructure.abelian(3),
    "heisenberg": HEISENBERG,
    "nonabelian2": NONABELIAN2,
    "sl2": SL2,
    "solvable3": SOLVABLE3,
}


def random_exponents(rng: random.Random, n: int, max_degree: int) -> tuple:
    degree = rng.randint(0, max_degree)
    a = [0] * n
    for _ in range(degree):
        a[rng.randrange(n)] += 1
    return tuple(a)


def random_word(rng: random.Random, n: int, max_length: int, min_length: int = 0) -> tuple:
    return tuple(rng.randrange(n) for _ in range(rng.randint(min_length, max_length)))


def random_coefficient(rng: random.Random, bound: int = 3) -> Fraction:
    c = 0
    while c == 0:
        c = rng.randint(-bound, bound)
    return Fraction(c, rng.choice([1, 1, 1, 2]))


def random_cpoly(rng: random.Random, n: int, max_degree: int, terms: int = 3) -> CPoly:
    return CPoly(n, {random_exponents(rng, n, max_degree): random_coefficient(rng) for _ in range(terms)})


def random_pbw(rng: random.Random, n: int, max_degree: int, terms: int = 3) -> PbwPoly:
    return PbwPoly(n, {random_exponents(rng, n, max_degree): random_coefficient(rng) for _ in range(terms)})


def random_ncpoly(rng: random.Random, n: int, max_length: int, terms: int = 3) -> NcPoly:
    return NcPoly(n, {random_word(rng, n, max_length): random_coefficient(rng) for _ in range(terms)})
