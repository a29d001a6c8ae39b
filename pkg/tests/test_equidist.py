"""
Unit tests for ensemble averages, test functions and the Haar oracle.
"""

from ffcorr import (arithfun, equidist, hayes, symfunc)
from ffcorr.errors import DomainError
from tests import fixture
import math
import numpy as np
import unittest


class TestFunctions(unittest.TestCase):
    """Tests for test-function parsing and evaluation."""
    def test_parse(self):
        """Confirm every test-function form parses."""
        self.assertIsInstance(equidist.parse_test('one'), equidist.ConstantTest)
        self.assertEqual(equidist.parse_test('tr3').m, 3)
        self.assertEqual(equidist.parse_test('tr').m, 1)
        test = equidist.parse_test('s(3,1)s(2,2)')
        self.assertEqual((test.lam1, test.lam2), ((3, 1), (2, 2)))
        self.assertEqual(test.test_id, 's(3,1)s(2,2)')

    def test_parse_errors(self):
        """Ensure unknown or mismatched test functions raise an exception."""
        for text in ['trx', 'zeta', 's(2)s(1)']:
            with self.assertRaises(DomainError):
                equidist.parse_test(text)

    def test_trace_power(self):
        """Ensure power traces need m >= 1."""
        with self.assertRaises(DomainError):
            equidist.TraceTest(0)

    def test_schur_batch(self):
        """Confirm the batched Schur values match single evaluation."""
        rng = np.random.default_rng(3)
        points = np.exp(2j * np.pi * rng.random((4, 3)))
        for lam in symfunc.partitions(3):
            batch = equidist.schur_batch(lam, points)
            for row, value in zip(points, batch):
                self.assertAlmostEqual(value, symfunc.schur_eval(lam, row))

    def test_schur_reference(self):
        """Confirm the unitary integral of a Schur pair."""
        self.assertEqual(equidist.SchurPairTest((2, 1), (2, 1)).reference(2), 1)
        self.assertEqual(equidist.SchurPairTest((3,), (3,)).reference(2), 0)
        self.assertEqual(equidist.SchurPairTest((3,), (2, 1)).reference(5), 0)


class Ensembles(unittest.TestCase):
    """Tests for filtered ensemble averages."""
    def test_selector(self):
        """Confirm filters and the exclusion of the trivial character."""
        group = fixture.group(3, 3)
        selector = equidist.ensemble_selector(group, 'primitive_odd')
        self.assertFalse(selector[0])
        self.assertEqual(int(selector.sum()), hayes.primitive_count(group))
        self.assertEqual(int(equidist.ensemble_selector(group, 'all').sum()), group.order - 1)

    def test_unknown_filter(self):
        """Ensure unknown filters raise an exception."""
        with self.assertRaises(DomainError):
            equidist.ensemble_selector(fixture.group(3, 2), 'odd')

    def test_constant(self):
        """Confirm the constant test averages to exactly one."""
        stat = equidist.ensemble_average(fixture.group(3, 3), 'primitive_odd',
                                         equidist.ConstantTest())
        self.assertAlmostEqual(stat.average, 1)
        self.assertAlmostEqual(stat.residual, 0)
        self.assertEqual(stat.dimension, 2)
        self.assertEqual(len(stat.csv_row()), 6)

    def test_mixed_dimensions(self):
        """Ensure ensembles mixing Theta dimensions are rejected."""
        with self.assertRaises(DomainError):
            equidist.ensemble_average(fixture.group(3, 3), 'all', equidist.TraceTest(1))

    def test_trace_bounded(self):
        """Confirm |Tr Theta| <= N on every character."""
        stat = equidist.ensemble_average(fixture.group(5, 3), 'primitive',
                                         equidist.TraceTest(2))
        self.assertLessEqual(abs(stat.average), stat.dimension + 1e-9)

    def test_hypotheses(self):
        """Confirm the parameter ranges of the asymptotic statements."""
        self.assertTrue(equidist.schur_sum_hypothesis(fixture.group(3, 4)))
        self.assertTrue(equidist.schur_sum_hypothesis(fixture.group(5, 0, 'T^2')))
        self.assertFalse(equidist.schur_sum_hypothesis(fixture.group(3, 2)))
        self.assertTrue(equidist.twisted_average_hypothesis(fixture.group(3, 3)))
        self.assertFalse(equidist.twisted_average_hypothesis(fixture.group(5, 3)))
        self.assertFalse(equidist.twisted_average_hypothesis(fixture.group(3, 2)))

    def test_schur_sum(self):
        """Confirm the Lambda pairing modulo an irreducible quadratic at n = 2
        against its closed form: every class holds one polynomial M + A."""
        lam = arithfun.VonMangoldt()
        for q in [3, 7]:
            group = fixture.group(q, 0, 'T^2 + 1')
            order = q * q - 1
            measured = ((order * (2 * q * q - q - 4) - (q * q - 2) ** 2)
                        / float(order * q * q))
            residual = equidist.schur_sum_residual(lam, lam, 2, group, fixture.table(q, 2))
            self.assertAlmostEqual(residual, abs(measured - 1) * math.sqrt(q))

    def test_schur_sum_logged(self):
        """Confirm groups outside the hypothesis are logged."""
        lam = arithfun.VonMangoldt()
        with self.assertLogs('ffcorr.equidist', 'WARNING'):
            equidist.schur_sum_residual(lam, lam, 2, fixture.group(3, 2), fixture.table(3, 2))

    def test_lemschur_quadratic(self):
        """Ensure quadratic characters are excluded from the Schur comparison."""
        group = fixture.group(5, 0, 'T^2')
        chi = next(c for c in hayes.characters(group)[1:] if c.is_quadratic)
        with self.assertRaises(DomainError):
            equidist.lemschur_residual((1, 1), chi, 2, fixture.table(5, 2))


class Additive(unittest.TestCase):
    """Tests for additive labels and the Weil bound."""
    def test_weil(self):
        """Confirm no primitive character exceeds the Weil bound."""
        for q, ell in [(3, 2), (5, 2), (3, 3)]:
            group = fixture.group(q, ell)
            for delta in range(1, q):
                self.assertEqual(equidist.weil_bound_violations(group, delta), 0)

    def test_labels(self):
        """Confirm every additive label occurs equally often."""
        group = fixture.group(5, 2)
        table, uniform, trivial_is_imprimitive = equidist.additive_label_distribution(group)
        self.assertEqual(len(table), 5)
        self.assertTrue(uniform)
        self.assertTrue(trivial_is_imprimitive)

    def test_twisted_needs_short(self):
        """Ensure twisted averages reject a nonconstant modulus."""
        with self.assertRaises(DomainError):
            equidist.twisted_average_residual(fixture.group(5, 0, 'T^2'), 1,
                                              equidist.TraceTest(1))

    def test_counts(self):
        """Confirm exact character counts modulo (T - 2)(T - 3) over F_5."""
        counts = equidist.count_checks(fixture.group(5, 0, 'T^2 + 1'))
        self.assertEqual(counts['order'], 16)
        self.assertEqual(counts['primitive'], 9)
        self.assertEqual(counts['even'], 4)
        self.assertEqual(counts['odd'], 12)
        self.assertEqual(counts['primitive_odd'], 6)
        self.assertEqual(counts['quadratic'], 4)


class Oracle(unittest.TestCase):
    """Tests for the Monte Carlo Haar oracle."""
    def test_unitary(self):
        """Confirm the sampled matrices are unitary."""
        for batch in equidist.haar_unitaries(3, 10, seed=0):
            products = batch @ np.conj(np.swapaxes(batch, -1, -2))
            self.assertTrue(np.allclose(products, np.eye(3)))

    def test_batches(self):
        """Confirm the requested sample count is split into batches."""
        sizes = [len(b) for b in equidist.haar_unitaries(2, 12, seed=0, batch=5)]
        self.assertEqual(sizes, [5, 5, 2])

    def test_constant(self):
        """Confirm the constant test has mean one and no spread."""
        mean, stderr = equidist.unitary_oracle(equidist.ConstantTest(), 2, samples=50)
        self.assertAlmostEqual(mean, 1)
        self.assertAlmostEqual(stderr, 0)

    def test_trace(self):
        """Confirm E Tr U = 0 within sampling error."""
        mean, stderr = equidist.unitary_oracle(equidist.TraceTest(1), 3, samples=4000, seed=1)
        self.assertLess(abs(mean), 0.1)
        self.assertLess(stderr, 0.05)

    def test_deterministic(self):
        """Confirm a fixed seed reproduces the estimate."""
        first = equidist.unitary_oracle(equidist.TraceTest(2), 2, samples=100, seed=7)
        second = equidist.unitary_oracle(equidist.TraceTest(2), 2, samples=100, seed=7)
        self.assertEqual(first, second)
