"""
Unit tests for L-polynomials of Hayes characters and their inverse roots.
"""

from ffcorr import (hayes, lfunc)
from ffcorr.errors import DomainError
from tests import fixture
import numpy as np
import unittest


class LPolynomials(unittest.TestCase):
    """Tests for the L-polynomials themselves."""
    def test_trivial_series(self):
        """Confirm L(u, chi_0) counts the monics coprime to M."""
        group = fixture.group(5, 0, 'T^2 + 1')
        trivial = lfunc.l_polynomials(group)[0]
        self.assertTrue(trivial.is_rational)
        series = trivial.series(3)
        for j in range(4):
            count = int(np.count_nonzero(group.class_positions(j) >= 0))
            self.assertAlmostEqual(series[j], count)

    def test_trivial_short(self):
        """Confirm L(u, chi_0) = 1 / (1 - q u) modulo R_{ell,1}."""
        trivial = lfunc.l_polynomials(fixture.group(3, 2))[0]
        self.assertTrue(np.allclose(trivial.series(3), [1, 3, 9, 27]))
        with self.assertRaises(DomainError):
            trivial.degree

    def test_batch_matches_direct(self):
        """Confirm the batched coefficients match direct summation."""
        group = fixture.group(3, 1, 'T^2 + 1')
        batch = lfunc.l_polynomials(group)
        for chi in hayes.characters(group)[1:]:
            direct = lfunc.l_polynomial(chi)
            width = max(len(direct.coeffs), len(batch[chi.char_id].coeffs))
            self.assertTrue(np.allclose(direct.series(width), batch[chi.char_id].series(width)))

    def test_degree_bound(self):
        """Confirm deg L <= ell + deg M - 1 for every nontrivial character."""
        group = fixture.group(3, 1, 'T^2 + 1')
        for lpoly in lfunc.l_polynomials(group)[1:]:
            self.assertLessEqual(lpoly.degree, 2)


class Roots(object):
    """Base class for inverse-root tests on one unit group."""
    def setUp(self):
        self.group = fixture.group(self.q, self.ell, self.modulus)
        self.thetas = lfunc.theta_classes(self.group)
        self.lpolys = lfunc.l_polynomials(self.group)
        self.primitive, self.odd, _ = self.group.flags()

    def test_count(self):
        """Confirm one class per nontrivial character, in id order."""
        self.assertEqual([t.char_id for t in self.thetas], list(range(1, self.group.order)))

    def test_riemann_hypothesis(self):
        """Confirm |gamma| = sqrt(q) for primitive characters."""
        for theta in self.thetas:
            if self.group.k == 0 or self.primitive[theta.char_id]:
                self.assertLess(theta.rh_residual(), 1e-6, repr(theta))

    def test_unitary(self):
        """Confirm the normalized eigenvalues lie on the unit circle."""
        for theta in self.thetas:
            if self.primitive[theta.char_id]:
                self.assertTrue(np.allclose(np.abs(theta.eigenvalues), 1))

    def test_reconstruction(self):
        """Confirm the inverse roots rebuild the L-polynomial."""
        for theta in self.thetas:
            self.assertLess(lfunc.reconstruction_residual(self.lpolys[theta.char_id], theta),
                            1e-8)

    def test_primitive_degree(self):
        """Confirm primitive characters have degree ell + deg M - 1."""
        for chi in hayes.characters(self.group)[1:]:
            if chi.is_primitive:
                self.assertEqual(lfunc.degree_of_primitive(chi),
                                 self.ell + self.group.k - 1)

    def test_primitive_odd(self):
        """Confirm primitive odd characters have no zero at u = 1."""
        for theta in self.thetas:
            if self.primitive[theta.char_id] and self.odd[theta.char_id]:
                self.assertEqual(theta.a, 0)
                self.assertEqual(theta.dimension, self.ell + self.group.k - 1)

    def test_explicit_formula(self):
        """Confirm S(n, Lambda, chi) = -a - q^(n/2) Tr(Theta^n)."""
        table = fixture.table(self.q, 4)
        for theta in self.thetas:
            chi = self.group.character(theta.char_id)
            for n in range(1, 5):
                residual = lfunc.explicit_formula_residual(chi, n, table, theta)
                self.assertLess(residual, 1e-6 * self.q ** (n / 2.0))

    def test_euler_product(self):
        """Confirm the truncated Euler product matches L(u, chi)."""
        depth = self.ell + self.group.k
        table = fixture.table(self.q, depth)
        for chi in hayes.characters(self.group)[1:]:
            self.assertLess(lfunc.euler_product_check(chi, depth, table), 1e-8)


class TestShortF3(Roots, unittest.TestCase):
    q = 3
    ell = 3
    modulus = '1'


class TestShortF5(Roots, unittest.TestCase):
    q = 5
    ell = 2
    modulus = '1'


class TestDirichletF5(Roots, unittest.TestCase):
    q = 5
    ell = 0
    modulus = 'T^2 + 1'


class TestMixedF3(Roots, unittest.TestCase):
    q = 3
    ell = 1
    modulus = 'T^2 + 1'


class Special(unittest.TestCase):
    """Tests for edge cases of the inverse roots."""
    def test_empty_class(self):
        """Confirm primitive characters modulo R_{1,1} have an empty class."""
        group = fixture.group(5, 1)
        for theta in lfunc.theta_classes(group):
            self.assertEqual(theta.dimension, 0)
            self.assertEqual(theta.trace(3), 0)
            self.assertEqual(theta.rh_residual(), 0.0)

    def test_selector(self):
        """Confirm the selector restricts the characters."""
        group = fixture.group(5, 0, 'T^2 + 1')
        primitive = group.flags()[0]
        thetas = lfunc.theta_classes(group, selector=primitive)
        self.assertEqual(len(thetas), hayes.primitive_count(group))

    def test_trivial_rejected(self):
        """Ensure the trivial character has no class."""
        with self.assertRaises(DomainError):
            lfunc.theta_class(fixture.group(3, 2).character(0))

    def test_bare_polynomial_needs_q(self):
        """Ensure a bare L-polynomial needs the field order."""
        lpoly = lfunc.l_polynomials(fixture.group(3, 2))[1]
        with self.assertRaises(DomainError):
            lfunc.theta_class(lpoly)

    def test_imprimitive_degree_rejected(self):
        """Ensure degree_of_primitive rejects imprimitive characters."""
        group = fixture.group(3, 2)
        chi = next(c for c in hayes.characters(group)[1:] if not c.is_primitive)
        with self.assertRaises(DomainError):
            lfunc.degree_of_primitive(chi)

    def test_euler_depth(self):
        """Ensure truncation beyond the factor table raises an exception."""
        chi = fixture.group(3, 2).character(1)
        with self.assertRaises(DomainError):
            lfunc.euler_product_check(chi, 5, fixture.table(3, 3))

    def test_twist_invariance(self):
        """Confirm twisting leaves L(u, chi) unchanged."""
        group = fixture.group(5, 2)
        for chi in hayes.characters(group)[1:]:
            for c in [2, 3, 4]:
                self.assertLess(lfunc.twist_residual(chi, c), 1e-8)

    def test_zero_rows(self):
        """Confirm each row holds the id, a and two numbers per eigenvalue."""
        thetas = lfunc.theta_classes(fixture.group(3, 3))
        for row, theta in zip(lfunc.zero_rows(thetas), thetas):
            self.assertEqual(row[0], theta.char_id)
            self.assertEqual(len(row), 2 + 2 * theta.dimension)
