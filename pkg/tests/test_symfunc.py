"""
Unit tests for partitions, symmetric group characters and the Fourier
expansion of factorization functions.
"""

from ffcorr import (arithfun, symfunc)
from ffcorr.errors import (DomainError, ResourceError)
from fractions import Fraction
import math
import numpy as np
import unittest


class Partition(unittest.TestCase):
    """Tests for the Partition type."""
    def test_parse(self):
        """Confirm both text forms are accepted."""
        self.assertEqual(symfunc.Partition.parse('(3,1,1)'), (3, 1, 1))
        self.assertEqual(symfunc.Partition.parse('3,1,1'), (3, 1, 1))

    def test_parse_error(self):
        """Ensure malformed text raises an exception."""
        with self.assertRaises(DomainError):
            symfunc.Partition.parse('(3,x)')

    def test_increasing(self):
        """Ensure increasing parts are rejected."""
        with self.assertRaises(DomainError):
            symfunc.Partition((1, 2))

    def test_conjugate(self):
        """Confirm the transposed diagram."""
        self.assertEqual(symfunc.Partition((3, 1)).conjugate(), (2, 1, 1))
        self.assertEqual(symfunc.Partition((2, 2)).conjugate(), (2, 2))

    def test_hook(self):
        """Confirm hook construction and detection."""
        lam = symfunc.Partition.hook(5, 2)
        self.assertEqual(lam, (2, 1, 1, 1))
        self.assertTrue(lam.is_hook)
        self.assertFalse(symfunc.Partition((2, 2)).is_hook)

    def test_class_sizes(self):
        """Confirm the class sizes of S_n add up to n!."""
        for n in range(1, 8):
            self.assertEqual(sum(mu.class_size for mu in symfunc.partitions(n)),
                             math.factorial(n))

    def test_count(self):
        """Confirm p(6) = 11 and p(10) = 42."""
        self.assertEqual(len(symfunc.partitions(6)), 11)
        self.assertEqual(len(symfunc.partitions(10)), 42)


class Characters(unittest.TestCase):
    """Tests for the irreducible characters of S_n."""
    def test_row_orthogonality(self):
        """Confirm sum over classes of |C| chi_lam chi_nu = n! delta."""
        for n in range(1, 7):
            table = symfunc.character_table(n)
            for lam in table.partitions:
                for nu in table.partitions:
                    total = sum(size * table(lam, mu) * table(nu, mu)
                                for mu, size in zip(table.partitions, table.class_sizes))
                    self.assertEqual(total, math.factorial(n) if lam == nu else 0)

    def test_hook_dimension(self):
        """Confirm the hook length formula matches chi_lam(1^n)."""
        for lam in symfunc.partitions(7):
            self.assertEqual(symfunc.hook_dimension(lam),
                             symfunc.sn_character(lam, (1,) * 7))
        self.assertEqual(symfunc.hook_dimension((3, 1)), 3)
        self.assertEqual(symfunc.hook_dimension((2, 2)), 2)

    def test_known_values(self):
        """Confirm a few values of the S_4 character table."""
        self.assertEqual(symfunc.sn_character((3, 1), (2, 1, 1)), 1)
        self.assertEqual(symfunc.sn_character((2, 2), (3, 1)), -1)
        self.assertEqual(symfunc.sn_character((2, 1, 1), (4,)), 1)
        self.assertEqual(symfunc.sn_character((1, 1, 1, 1), (2, 2)), 1)

    def test_size_mismatch(self):
        """Ensure partitions of different sizes raise an exception."""
        with self.assertRaises(DomainError):
            symfunc.sn_character((2, 1), (2, 2))

    def test_table_cap(self):
        """Ensure tables beyond the degree cap raise a resource error."""
        with self.assertRaises(ResourceError):
            symfunc.character_table(13)


class Fourier(unittest.TestCase):
    """Tests for Fourier coefficients of factorization functions."""
    def test_mobius(self):
        """Confirm mu_hat is (-1)^n on the sign character and zero elsewhere."""
        for n in range(1, 7):
            coeffs = symfunc.fourier_coefficients(arithfun.Mobius(), n)
            for lam, c in coeffs:
                expected = (-1) ** n if lam == (1,) * n else 0
                self.assertEqual(c, expected, str(lam))

    def test_von_mangoldt(self):
        """Confirm Lambda_hat is (-1)^(n-r) on hooks and zero elsewhere."""
        for n in range(1, 7):
            coeffs = symfunc.fourier_coefficients(arithfun.VonMangoldt(), n)
            for lam, c in coeffs:
                expected = (-1) ** (n - lam[0]) if lam.is_hook else 0
                self.assertEqual(c, expected, str(lam))

    def test_divisor(self):
        """Confirm d_k_hat equals the Schur polynomial at k ones."""
        for k in [2, 3, 5]:
            coeffs = symfunc.fourier_coefficients(arithfun.DivisorK(k), 5)
            for lam, c in coeffs:
                self.assertEqual(c, symfunc.schur_at_ones(lam, k), str(lam))

    def test_exact(self):
        """Confirm rational functions have Fraction coefficients."""
        coeffs = symfunc.fourier_coefficients(arithfun.DivisorK(2), 4)
        for _, c in coeffs:
            self.assertIsInstance(c, Fraction)

    def test_character_is_delta(self):
        """Confirm the spectrum of chi_lam is a delta at lam."""
        alpha = arithfun.SnCharacter((3, 2))
        for lam, c in symfunc.fourier_coefficients(alpha, 5):
            self.assertEqual(c, 1 if lam == (3, 2) else 0)

    def test_resynthesize(self):
        """Confirm the expansion reproduces the function on every class."""
        alpha = arithfun.DivisorK(3)
        coeffs = symfunc.fourier_coefficients(alpha, 5)
        for mu, value in symfunc.class_values(alpha, 5).items():
            self.assertEqual(coeffs.resynthesize(mu), value)

    def test_plancherel(self):
        """Confirm the class side and spectral side of the pairing agree."""
        functions = [arithfun.Mobius(), arithfun.VonMangoldt(), arithfun.DivisorK(2)]
        for alpha in functions:
            for beta in functions:
                lhs, rhs = symfunc.plancherel_pairing(alpha, beta, 5)
                self.assertEqual(lhs, rhs)

    def test_csv_rows(self):
        """Confirm one row per partition with real and imaginary parts."""
        rows = list(symfunc.fourier_coefficients(arithfun.Mobius(), 3).csv_rows())
        self.assertEqual(len(rows), 3)
        self.assertEqual(rows[-1], ['(1,1,1)', '-1.0', '0.0'])


class Schur(unittest.TestCase):
    """Tests for Schur polynomial evaluation."""
    def test_at_ones(self):
        """Confirm s_(2,1)(1,1,1) = 8 by both methods."""
        self.assertEqual(symfunc.schur_at_ones((2, 1), 3), 8)
        self.assertAlmostEqual(symfunc.schur_eval((2, 1), [1, 1, 1]), 8)

    def test_too_long(self):
        """Confirm partitions longer than the variable count give zero."""
        self.assertEqual(symfunc.schur_at_ones((1, 1, 1), 2), 0)
        self.assertEqual(symfunc.schur_eval((1, 1, 1), [1, 1]), 0)

    def test_elementary(self):
        """Confirm s_(1,1) is the second elementary symmetric polynomial."""
        xs = [2, 3, 5]
        self.assertAlmostEqual(symfunc.schur_eval((1, 1), xs), 2 * 3 + 2 * 5 + 3 * 5)

    def test_agree(self):
        """Confirm the determinant and product formulas agree."""
        for lam in symfunc.partitions(4):
            for k in range(1, 5):
                self.assertAlmostEqual(symfunc.schur_eval(lam, [1] * k),
                                       float(symfunc.schur_at_ones(lam, k)))

    def test_bialternant(self):
        """Confirm Jacobi-Trudi against the ratio of alternants at distinct
        points of the unit circle."""
        xs = np.exp(2j * np.pi * np.array([0.05, 0.21, 0.48, 0.77]))
        size = len(xs)
        vandermonde = np.linalg.det(np.array([[x ** (size - 1 - j) for j in range(size)]
                                              for x in xs]))
        for lam in symfunc.partitions(5):
            if lam.length > size:
                continue
            parts = lam.padded(size)
            alternant = np.linalg.det(np.array([[x ** (parts[j] + size - 1 - j)
                                                 for j in range(size)] for x in xs]))
            self.assertAlmostEqual(symfunc.schur_eval(lam, xs), alternant / vandermonde)
