"""
Unit tests for factorization functions and their mean values.
"""

from ffcorr import (algebra, arithfun)
from ffcorr.errors import DomainError
from fractions import Fraction
from tests import fixture
import io
import math
import unittest


class Builtins(unittest.TestCase):
    """Tests for the builtin factorization functions."""
    def test_against_definitions(self):
        """Confirm table evaluation agrees with the direct definitions."""
        table = fixture.table(3, 3)
        functions = [arithfun.VonMangoldt(), arithfun.Mobius(), arithfun.DivisorK(2),
                     arithfun.DivisorK(3)]
        for d in range(1, 4):
            for f in algebra.enumerate_monic(table.spec, d):
                for alpha in functions:
                    self.assertEqual(arithfun.evaluate(alpha, f, table),
                                     arithfun.evaluate_direct(alpha, f), '{0} {1}'.format(
                                         alpha, f))

    def test_even(self):
        """Confirm scalar multiples share every value."""
        f = fixture.poly(5, 'T^3 + 2*T + 1')
        for alpha in [arithfun.VonMangoldt(), arithfun.Mobius(), arithfun.DivisorK(3)]:
            for c in range(1, 5):
                self.assertEqual(alpha(f * c), alpha(f))

    def test_von_mangoldt_prime_power(self):
        """Confirm Lambda(P^k) = deg P."""
        p = fixture.poly(3, 'T^2 + 1')
        self.assertEqual(arithfun.VonMangoldt()(p ** 2), 2)
        self.assertEqual(arithfun.VonMangoldt()(p * fixture.poly(3, 'T')), 0)

    def test_divisor_small_k(self):
        """Ensure divisor functions of order below two are rejected."""
        with self.assertRaises(DomainError):
            arithfun.DivisorK(1)

    def test_zero(self):
        """Ensure evaluation at zero raises an exception."""
        with self.assertRaises(DomainError):
            arithfun.Mobius()(algebra.Poly(fixture.field(3)))

    def test_sn_character_degree(self):
        """Ensure S_n characters reject other degrees."""
        chi = arithfun.SnCharacter((2, 1))
        with self.assertRaises(DomainError):
            chi.value(algebra.ExtFactType([(1, 1)]))

    def test_sn_character_squarefree(self):
        """Confirm S_n characters vanish off the squarefree types."""
        chi = arithfun.SnCharacter((2, 1))
        self.assertEqual(chi.value(algebra.ExtFactType([(1, 1), (1, 1), (1, 1)])), 2)
        self.assertEqual(chi.value(algebra.ExtFactType([(1, 1), (2, 1)])), 0)
        self.assertEqual(chi.value(algebra.ExtFactType([(3, 1)])), -1)
        self.assertEqual(chi.value(algebra.ExtFactType([(1, 3)])), 0)

    def test_max_abs(self):
        """Confirm max(alpha; n) on a few functions."""
        self.assertEqual(arithfun.max_abs(arithfun.Mobius(), 3), 1)
        self.assertEqual(arithfun.max_abs(arithfun.VonMangoldt(), 3), 3)
        self.assertEqual(arithfun.max_abs(arithfun.DivisorK(2), 3), 8)


class ParseFunction(unittest.TestCase):
    """Tests for function names."""
    def test_names(self):
        """Confirm every builtin name resolves."""
        self.assertIsInstance(arithfun.parse_function('Lambda'), arithfun.VonMangoldt)
        self.assertIsInstance(arithfun.parse_function('mu'), arithfun.Mobius)
        self.assertIsInstance(arithfun.parse_function('one'), arithfun.Constant)
        self.assertEqual(arithfun.parse_function('d3').k, 3)
        self.assertEqual(arithfun.parse_function('chi(2,1)').partition, (2, 1))
        self.assertEqual(arithfun.parse_function('ind(1,2)').eft,
                         algebra.ExtFactType([(1, 2)]))

    def test_unknown(self):
        """Ensure unknown names raise an exception."""
        with self.assertRaises(DomainError):
            arithfun.parse_function('zeta')


class UserTable(unittest.TestCase):
    """Tests for user-supplied value tables."""
    def test_load(self):
        """Confirm values are read and missing types default to zero."""
        buf = io.StringIO(u'# degree two\n'
                          u'EFT := (1,1)(1,1) ; value := 2\n'
                          u'EFT := (2,1) ; value := -1/2\n')
        with self.assertLogs('ffcorr.arithfun', 'WARNING'):
            table = arithfun.UserTable.load(buf)
        self.assertEqual(table.n, 2)
        self.assertEqual(table.value(algebra.ExtFactType([(2, 1)])), Fraction(-1, 2))
        self.assertEqual(table.value(algebra.ExtFactType([(1, 2)])), 0)
        self.assertTrue(table.exact)

    def test_complex_value(self):
        """Confirm complex values are accepted."""
        buf = io.StringIO(u'EFT := (1,1) ; value := 1+2i\n')
        table = arithfun.UserTable.load(buf)
        self.assertEqual(table.value(algebra.ExtFactType([(1, 1)])), 1 + 2j)
        self.assertFalse(table.exact)

    def test_malformed(self):
        """Ensure malformed lines raise an exception."""
        with self.assertRaises(DomainError):
            arithfun.UserTable.load(io.StringIO(u'EFT = (1,1), value = 2\n'))

    def test_mixed_degrees(self):
        """Ensure tables spanning several degrees are rejected."""
        buf = io.StringIO(u'EFT := (1,1) ; value := 1\nEFT := (2,1) ; value := 1\n')
        with self.assertRaises(DomainError):
            arithfun.UserTable.load(buf)


class Means(unittest.TestCase):
    """Tests for exact mean values over monic polynomials."""
    def test_von_mangoldt(self):
        """Confirm the prime polynomial theorem E Lambda = 1."""
        for q in [2, 3, 4, 5]:
            table = fixture.table(q, 3)
            for n in range(1, 4):
                self.assertEqual(arithfun.mean(arithfun.VonMangoldt(), n, table), 1)

    def test_mobius(self):
        """Confirm E mu = 0 for n >= 2 and -1 for n = 1."""
        table = fixture.table(3, 4)
        self.assertEqual(arithfun.mean(arithfun.Mobius(), 1, table), -1)
        for n in range(2, 5):
            self.assertEqual(arithfun.mean(arithfun.Mobius(), n, table), 0)

    def test_divisor(self):
        """Confirm E d_k = binom(n + k - 1, n)."""
        table = fixture.table(5, 3)
        for k in [2, 3, 4]:
            for n in range(1, 4):
                self.assertEqual(arithfun.mean(arithfun.DivisorK(k), n, table),
                                 math.comb(n + k - 1, n))

    def test_monic_associates(self):
        """Confirm associate indices match Poly.monic for every leading
        coefficient."""
        spec = fixture.field(5)
        index = algebra.PolyIndex(spec)
        digits = index.digits(2)
        for lead in range(1, 5):
            found = arithfun.monic_normalized_indices(spec, 2, lead)
            for row, codes in enumerate(digits):
                f = algebra.Poly.from_codes(spec, list(codes) + [lead])
                self.assertEqual(int(found[row]), index.monic_index(f.monic()))

    def test_all_direct(self):
        """Confirm the mean over all polynomials agrees with evaluating
        every polynomial of degree n through its monic associate."""
        spec = fixture.field(5)
        table = fixture.table(5, 2)
        alpha = arithfun.IndicatorEFT(algebra.ExtFactType.parse('(1,1)(1,1)'))
        polys = list(algebra.enumerate_all(spec, 2))
        self.assertEqual(len(polys), 4 * 25)
        total = sum(arithfun.evaluate(alpha, f.monic(), table) for f in polys)
        self.assertEqual(arithfun.mean(alpha, 2, table, 'all'), Fraction(total, len(polys)))
        self.assertEqual(arithfun.mean(alpha, 2, table, 'all'),
                         arithfun.mean(alpha, 2, table, 'monic'))

    def test_exact(self):
        """Confirm rational functions give Fraction means."""
        mean = arithfun.mean(arithfun.DivisorK(2), 2, fixture.table(3, 2))
        self.assertIsInstance(mean, Fraction)

    def test_unknown_domain(self):
        """Ensure an unknown domain raises an exception."""
        with self.assertRaises(DomainError):
            arithfun.mean(arithfun.Mobius(), 2, fixture.table(3, 2), 'some')

    def test_linear_factor_mean(self):
        """Confirm E Lambda(f T) over A_{n-1} is q^(1-n): only scalar
        multiples of T^(n-1) contribute."""
        table = fixture.table(3, 3)
        self.assertEqual(arithfun.shifted_mean_with_linear_factor(
            arithfun.VonMangoldt(), 3, table), Fraction(1, 9))


class Coprimality(unittest.TestCase):
    """Tests for residues and coprimality masks."""
    def test_coprime_count(self):
        """Confirm q^n phi(Delta) / |Delta| monic polynomials are coprime."""
        spec = fixture.field(5)
        delta = fixture.poly(5, 'T^2 - 1')
        mask = arithfun.coprime_mask(spec, 3, delta)
        self.assertEqual(int(mask.sum()), 5 ** 3 * algebra.euler_phi(delta) // 25)

    def test_residues(self):
        """Confirm residue indices agree with polynomial remainders."""
        spec = fixture.field(3)
        delta = fixture.poly(3, 'T^2 + T + 2')
        residues = arithfun.residue_indices(spec, 3, delta)
        index = algebra.PolyIndex(spec)
        for i, f in enumerate(algebra.enumerate_monic(spec, 3)):
            self.assertEqual(int(residues[i]), index.encode(f % delta))

    def test_split(self):
        """Confirm the coprime and non-coprime sums add up to the total."""
        table = fixture.table(3, 3)
        delta = fixture.poly(3, 'T^2 + 2')
        alpha = arithfun.DivisorK(2)
        coprime = arithfun.coprime_mean(alpha, 3, delta, table) * int(
            arithfun.coprime_mask(table.spec, 3, delta).sum())
        rest = arithfun.noncoprime_sum(alpha, 3, delta, table)
        total = arithfun.Values.tabulate(alpha, table, 3).total()
        self.assertEqual(coprime + rest, total)
