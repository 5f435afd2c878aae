"""Tests for scalars, orderings and the sparse polynomial base class."""

import itertools
import random
import unittest
from fractions import Fraction

import pytest
from sympy.polys.orderings import grevlex, grlex, lex

from helpers import random_exponents, random_word  # noqa: F401  (sets sys.path)

from acgb.compoly import CPoly
from acgb.exceptions import DimensionMismatchError, MathDomainError, OrderError, ZeroPolynomialError
from acgb.freealg import NcPoly
from acgb.kernel import (
    GF,
    QQ,
    ModP,
    MonomialOrderKind,
    Ordering,
    OrderSpec,
    WordOrderKind,
    abelianize,
    cmp_c,
    cmp_w,
    exp_divides,
    exp_lcm,
)

SYMPY_ORDERS = {
    MonomialOrderKind.LEX: lex,
    MonomialOrderKind.GRLEX: grlex,
    MonomialOrderKind.GREVLEX: grevlex,
}

X, Y, Z = 0, 1, 2


class TestScalars(unittest.TestCase):
    """Test exact field arithmetic."""

    def test_modp_arithmetic(self):
        """Test that residues wrap and divide modulo p."""
        a = ModP(5, 7)
        self.assertEqual(a + 4, ModP(2, 7))
        self.assertEqual(a * 3, ModP(1, 7))
        self.assertEqual(1 / a, ModP(3, 7))
        self.assertEqual(-a, 2)
        self.assertEqual(a - ModP(6, 7), ModP(6, 7))
        self.assertFalse(ModP(14, 7))

    def test_modp_division_by_zero(self):
        """Test that dividing by the zero residue raises."""
        with self.assertRaises(ZeroDivisionError):
            ModP(3, 5) / ModP(0, 5)

    def test_mixed_moduli(self):
        """Test that residues of different moduli do not combine."""
        with self.assertRaises(MathDomainError):
            ModP(1, 5) + ModP(1, 7)

    def test_field_coercion(self):
        """Test coercion of integers, strings and fractions."""
        self.assertEqual(QQ("3/4"), Fraction(3, 4))
        self.assertEqual(GF(7)(Fraction(1, 2)), ModP(4, 7))
        self.assertEqual(QQ.to_pair(Fraction(-2, 6)), (-1, 3))
        self.assertEqual(GF(5).to_pair(ModP(7, 5)), (2, 1))
        self.assertEqual(QQ.name, "QQ")
        self.assertEqual(GF(13).name, "GF 13")

    def test_nonprime_modulus(self):
        """Test that GF of a composite number is rejected."""
        with self.assertRaises(MathDomainError):
            GF(4)

    def test_denominator_divisible_by_p(self):
        """Test that 1/7 has no residue modulo 7."""
        with self.assertRaises(ZeroDivisionError):
            GF(7)(Fraction(1, 7))


class TestOrderSpec(unittest.TestCase):
    """Test construction of orderings."""

    def test_identity_ranks_by_default(self):
        """Test that variables are ranked smallest first by default."""
        order = OrderSpec(3)
        self.assertEqual(order.ranks, (1, 2, 3))
        self.assertTrue(order.has_identity_ranks)
        self.assertTrue(order.is_graded)
        self.assertIs(order.word, WordOrderKind.ET)

    def test_strings_are_accepted(self):
        """Test that kinds may be given by name."""
        order = OrderSpec(2, "grlex", "deglex", (2, 1))
        self.assertIs(order.kind, MonomialOrderKind.GRLEX)
        self.assertIs(order.word, WordOrderKind.DEGLEX)
        self.assertEqual(order.by_rank, (1, 0))
        self.assertFalse(order.has_identity_ranks)

    def test_invalid_ranks(self):
        """Test that ranks must be a permutation."""
        with self.assertRaises(OrderError):
            OrderSpec(3, ranks=(1, 1, 2))

    def test_et_needs_graded_order(self):
        """Test that lex has no et extension."""
        with self.assertRaises(OrderError):
            OrderSpec(2, MonomialOrderKind.LEX, WordOrderKind.ET)
        with self.assertRaises(OrderError):
            OrderSpec(2, MonomialOrderKind.LEX, WordOrderKind.DEGLEX).require_graded("this")


class TestCommutativeComparison(unittest.TestCase):
    """Test cmp_c."""

    def setUp(self):
        self.order = OrderSpec(3)

    def test_examples(self):
        """Test the hand-checked grevlex comparisons for x < y < z."""
        self.assertEqual(cmp_c(self.order, (1, 0, 0), (2, 0, 0)), Ordering.LT)
        self.assertEqual(cmp_c(self.order, (2, 1, 0), (1, 0, 2)), Ordering.LT)
        self.assertEqual(cmp_c(self.order, (2, 1, 0), (2, 1, 0)), Ordering.EQ)
        self.assertEqual(cmp_c(self.order, (0, 2, 0), (1, 0, 1)), Ordering.GT)

    def test_lex_and_grlex(self):
        """Test that lex ignores degree and grlex does not."""
        lex_order = OrderSpec(3, MonomialOrderKind.LEX, WordOrderKind.DEGLEX)
        grlex_order = OrderSpec(3, MonomialOrderKind.GRLEX)
        self.assertEqual(cmp_c(lex_order, (3, 0, 0), (0, 0, 1)), Ordering.LT)
        self.assertEqual(cmp_c(grlex_order, (3, 0, 0), (0, 0, 1)), Ordering.GT)
        self.assertEqual(cmp_c(grlex_order, (1, 0, 2), (0, 2, 1)), Ordering.GT)

    def test_length_mismatch(self):
        """Test that monomials must have one entry per variable."""
        with self.assertRaises(DimensionMismatchError):
            cmp_c(self.order, (1, 0), (1, 0, 0))

    def test_agrees_with_sympy(self):
        """Test every kind and ranking against sympy's monomial orders."""
        rng = random.Random(11)
        for n in (2, 3, 4):
            for kind, ranks in itertools.product(MonomialOrderKind, itertools.permutations(range(1, n + 1))):
                word = WordOrderKind.DEGLEX if kind is MonomialOrderKind.LEX else WordOrderKind.ET
                order = OrderSpec(n, kind, word, ranks)
                reference = SYMPY_ORDERS[kind]

                def sympy_key(a):
                    # sympy lists the largest variable first
                    return reference(tuple(a[v] for v in reversed(order.by_rank)))

                for _ in range(10):
                    a = random_exponents(rng, n, 4)
                    b = random_exponents(rng, n, 4)
                    ka, kb = sympy_key(a), sympy_key(b)
                    expected = Ordering.LT if ka < kb else Ordering.GT if ka > kb else Ordering.EQ
                    self.assertEqual(cmp_c(order, a, b), expected, (kind, ranks, a, b))

    def test_total_and_multiplicative(self):
        """Test antisymmetry, transitivity and compatibility with multiplication."""
        rng = random.Random(5)
        for _ in range(250):
            n = rng.randint(1, 4)
            order = OrderSpec(n, rng.choice(list(MonomialOrderKind)), WordOrderKind.DEGLEX)
            a, b, c = (random_exponents(rng, n, 4) for _ in range(3))
            self.assertEqual(cmp_c(order, a, b), -cmp_c(order, b, a))
            self.assertEqual(cmp_c(order, a, b) == Ordering.EQ, a == b)
            if cmp_c(order, a, b) < 0 and cmp_c(order, b, c) < 0:
                self.assertEqual(cmp_c(order, a, c), Ordering.LT)
            shifted = (tuple(x + y for x, y in zip(a, c)), tuple(x + y for x, y in zip(b, c)))
            self.assertEqual(cmp_c(order, *shifted), cmp_c(order, a, b))


class TestWordComparison(unittest.TestCase):
    """Test cmp_w."""

    def setUp(self):
        self.order = OrderSpec(3)

    def test_examples(self):
        """Test the et extension of grevlex with X < Y < Z."""
        self.assertEqual(cmp_w(self.order, (X, Y), (Y, X)), Ordering.LT)
        self.assertEqual(cmp_w(self.order, (X,), (Y, X)), Ordering.LT)
        self.assertEqual(cmp_w(self.order, (X, Z, Z), (Z, X, Y)), Ordering.GT)
        self.assertEqual(cmp_w(self.order, (), ()), Ordering.EQ)

    def test_deglex(self):
        """Test that deglex compares letters after length."""
        order = OrderSpec(3, MonomialOrderKind.GREVLEX, WordOrderKind.DEGLEX)
        self.assertEqual(cmp_w(order, (Z, X, X), (X, Z, Z)), Ordering.GT)
        self.assertEqual(cmp_w(self.order, (Z, X, X), (X, Z, Z)), Ordering.LT)

    def test_letter_out_of_range(self):
        """Test that letters must belong to the alphabet."""
        with self.assertRaises(DimensionMismatchError):
            cmp_w(self.order, (3,), (0,))

    def test_properties(self):
        """Test totality, degree compatibility and two-sided multiplicativity."""
        rng = random.Random(17)
        for _ in range(300):
            n = rng.randint(1, 4)
            kind = rng.choice([MonomialOrderKind.GRLEX, MonomialOrderKind.GREVLEX])
            ranks = tuple(rng.sample(range(1, n + 1), n))
            order = OrderSpec(n, kind, rng.choice(list(WordOrderKind)), ranks)
            u, v, w = (random_word(rng, n, 4) for _ in range(3))
            verdict = cmp_w(order, u, v)
            self.assertEqual(verdict, -cmp_w(order, v, u))
            self.assertEqual(verdict == Ordering.EQ, u == v)
            if len(u) < len(v):
                self.assertEqual(verdict, Ordering.LT)
            self.assertEqual(cmp_w(order, w + u, w + v), verdict)
            self.assertEqual(cmp_w(order, u + w, v + w), verdict)

    def test_no_infinite_descent_in_a_degree_bound(self):
        """Test that sorting all words of length <= 3 gives a strict chain."""
        words = [w for k in range(4) for w in itertools.product(range(2), repeat=k)]
        chain = sorted(words, key=OrderSpec(2).w_key)
        for smaller, larger in zip(chain, chain[1:]):
            self.assertEqual(cmp_w(OrderSpec(2), smaller, larger), Ordering.LT)


class TestMonomials(unittest.TestCase):
    """Test exponent helpers."""

    def test_abelianize(self):
        """Test that a word becomes its letter counts."""
        self.assertEqual(abelianize((Z, X, Z), 3), (1, 0, 2))
        self.assertEqual(abelianize((), 2), (0, 0))

    def test_divides_and_lcm(self):
        """Test divisibility and lcm of exponent vectors."""
        self.assertTrue(exp_divides((1, 0, 2), (1, 1, 2)))
        self.assertFalse(exp_divides((0, 2, 0), (1, 1, 2)))
        self.assertEqual(exp_lcm((2, 0, 1), (1, 3, 0)), (2, 3, 1))


class TestSparsePoly(unittest.TestCase):
    """Test the linear structure shared by all polynomial kinds."""

    def setUp(self):
        self.order = OrderSpec(2)

    def test_cancellation_drops_terms(self):
        """Test that cancelled and zero coefficients are not stored."""
        p = CPoly(2, {(1, 0): 1, (0, 1): 0})
        self.assertEqual(len(p), 1)
        self.assertEqual(p - p, 0)
        self.assertFalse(p - p)

    def test_leading_term_and_monic(self):
        """Test leading data under grevlex."""
        p = CPoly(2, {(1, 1): 2, (0, 2): 4, (1, 0): 3})
        self.assertEqual(p.leading_term(self.order), ((0, 2), 4))
        self.assertEqual(p.monic(self.order).coefficient((1, 1)), Fraction(1, 2))
        self.assertEqual(p.degree, 2)
        self.assertEqual(p.top_part(), CPoly(2, {(1, 1): 2, (0, 2): 4}))
        self.assertFalse(p.is_homogeneous())

    def test_zero_polynomial_has_no_leading_term(self):
        """Test the zero polynomial edge case."""
        with self.assertRaises(ZeroPolynomialError):
            CPoly.zero(2).leading_term(self.order)
        with self.assertRaises(ZeroPolynomialError):
            NcPoly.zero(2).top_part()
        self.assertEqual(CPoly.zero(2).degree, -1)

    def test_incompatible_operands(self):
        """Test that sizes and kinds must match."""
        with self.assertRaises(DimensionMismatchError):
            CPoly(2, {(1, 0): 1}) + CPoly(3, {(1, 0, 0): 1})
        with self.assertRaises(TypeError):
            CPoly(2, {(1, 0): 1}) + NcPoly(2, {(0,): 1})

    def test_sorted_terms(self):
        """Test that terms come out largest first."""
        p = NcPoly(2, {(0, 1): 1, (1, 0): 1, (): 5})
        self.assertEqual([w for w, _ in p.sorted_terms(self.order)], [(1, 0), (0, 1), ()])


if __name__ == "__main__":
    pytest.main([__file__])
