#!/usr/bin/env python3
#
# Tests the laissez-faire optimality test.
#
# This file is part of PRICECAP which is
# released under the BSD 3-clause license. See accompanying LICENSE.md for
# copyright notice and full license details.
#
import logging
import unittest

import pricecap

from shared import constant_elastic_uniform, linear_uniform

# Consistent unit testing in Python 2 and 3
try:
    unittest.TestCase.assertRaisesRegex
except AttributeError:
    unittest.TestCase.assertRaisesRegex = unittest.TestCase.assertRaisesRegexp


def logarithmic(alpha, cost=None):
    return pricecap.MarketEnvironment(
        pricecap.LogarithmicDemand(1, 0.3, 3),
        cost or pricecap.UniformCost(), alpha, 0)


class TestGate(unittest.TestCase):
    """
    Tests :meth:`pricecap.gate()`.
    """
    def test_intervention(self):
        # M(c) = 1/2 - (3/2 - alpha) c decreases everywhere
        for alpha in [0, 0.5, 1]:
            env = linear_uniform(alpha=alpha)
            lf = pricecap.lf_schedule(env, 65)
            report = pricecap.gate(env, lf, 257)
            self.assertFalse(report.lf_optimal())
            self.assertEqual(report.verdict(), 'intervention required')
            c, size = report.worst_violation()
            self.assertTrue(0 <= c < 1)
            self.assertAlmostEqual(size, (1.5 - alpha) / 256, places=9)
            self.assertAlmostEqual(report.margin_at_zero(), 0.5, places=9)
            self.assertAlmostEqual(
                report.margin_curve()(0.5), 0.5 - (1.5 - alpha) * 0.5,
                places=8)
            self.assertEqual(report.tolerance(), 1e-9)
            self.assertIn('intervention required', str(report))

    def test_laissez_faire_optimal(self):
        # Constant markup, uniform costs and full weight on profit: M is
        # constant
        env = logarithmic(1)
        lf = pricecap.lf_schedule(env, 65)
        report = pricecap.gate(env, lf, 257)
        self.assertTrue(report.lf_optimal())
        self.assertEqual(report.verdict(), 'laissez-faire optimal')
        self.assertLess(report.worst_violation()[1], 1e-9)
        self.assertAlmostEqual(report.margin_at_zero(), 0.3, places=9)
        self.assertIn('laissez-faire optimal', str(report))

        # A decreasing density makes M decrease
        env = logarithmic(1, pricecap.TruncatedExponentialCost(1))
        lf = pricecap.lf_schedule(env, 65)
        self.assertFalse(pricecap.gate(env, lf, 257).lf_optimal())

        # As does any weight below 1
        env = logarithmic(0.9)
        lf = pricecap.lf_schedule(env, 65)
        self.assertFalse(pricecap.gate(env, lf, 257).lf_optimal())

    def test_constant_elastic(self):
        # The markup c / (eta - 1) rises with c, so laissez-faire is optimal
        # for any weight, and the verdict does not depend on the grid
        for alpha in [1, 0.5, 0]:
            env = constant_elastic_uniform(alpha=alpha, eta=2)
            lf = pricecap.lf_schedule(env, 65)
            for n in [1025, 2049]:
                report = pricecap.gate(env, lf, n)
                self.assertTrue(report.lf_optimal())
                self.assertLessEqual(
                    report.worst_violation()[1], report.tolerance())

    def test_tolerance(self):
        # A loose tolerance accepts small decreases
        env = linear_uniform()
        lf = pricecap.lf_schedule(env, 65)
        self.assertTrue(pricecap.gate(env, lf, 257, 0.01).lf_optimal())

    def test_cutoff_at_zero(self):
        env = linear_uniform(k=0.25)
        handlers = list(logging.getLogger().handlers)
        with self.assertLogs('pricecap', level='WARNING'):
            lf = pricecap.lf_schedule(env, 65)

        # Warnings leave the root logger's configuration alone
        self.assertEqual(logging.getLogger().handlers, handlers)
        report = pricecap.gate(env, lf, 33)
        self.assertTrue(report.lf_optimal())
        self.assertAlmostEqual(report.margin_curve()(0.7), 0.5, places=9)

    def test_markup_curve(self):
        env = linear_uniform()
        lf = pricecap.lf_schedule(env, 65)
        m = pricecap.markup_curve(env, lf, 129)
        self.assertAlmostEqual(m(0.3), 0.35, places=9)
        self.assertAlmostEqual(m(1), 0, places=9)

        # Constant-elastic demand: markup (c + epsilon) / (eta - 1)
        env = constant_elastic_uniform(eta=3)
        lf = pricecap.lf_schedule(env, 65)
        m = pricecap.markup_curve(env, lf)
        self.assertAlmostEqual(m(0.3), 0.15, places=5)

    def test_bad_input(self):
        env = linear_uniform()
        lf = pricecap.lf_schedule(env, 65)
        other = linear_uniform()
        self.assertRaisesRegex(
            ValueError, 'different environment', pricecap.gate, other, lf)
        self.assertRaisesRegex(
            ValueError, 'different environment', pricecap.markup_curve,
            other, lf)
        self.assertRaisesRegex(
            ValueError, 'at least 2', pricecap.gate, env, lf, 1)
        self.assertRaisesRegex(
            ValueError, 'nonnegative', pricecap.gate, env, lf, 10, -1)


if __name__ == '__main__':
    unittest.main()
