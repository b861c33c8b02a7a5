#!/usr/bin/env python3
#
# Tests the cost distributions.
#
# This file is part of PRICECAP which is
# released under the BSD 3-clause license. See accompanying LICENSE.md for
# copyright notice and full license details.
#
import unittest
import numpy as np

import pricecap

# Consistent unit testing in Python 2 and 3
try:
    unittest.TestCase.assertRaisesRegex
except AttributeError:
    unittest.TestCase.assertRaisesRegex = unittest.TestCase.assertRaisesRegexp


class TestCostDistributions(unittest.TestCase):
    """
    Tests the cost distributions on ``[0, 1]``.
    """
    def check_consistent(self, cost):
        # Density integrates to the distribution function, and its derivative
        # matches finite differences
        c = np.linspace(0.05, 0.95, 19)
        h = 1e-6
        fd = (cost.pdf(c + h) - cost.pdf(c - h)) / (2 * h)
        self.assertTrue(np.allclose(cost.pdf_derivative(c), fd, rtol=1e-4,
                                    atol=1e-6))
        fd = (cost.cdf(c + h) - cost.cdf(c - h)) / (2 * h)
        self.assertTrue(np.allclose(cost.pdf(c), fd, rtol=1e-5, atol=1e-6))
        self.assertAlmostEqual(cost.cdf(0), 0)
        self.assertAlmostEqual(cost.cdf(1), 1)

    def test_uniform(self):
        u = pricecap.UniformCost()
        self.assertEqual(u.cdf(0.3), 0.3)
        self.assertEqual(u.pdf(0.3), 1)
        self.assertEqual(u.pdf_derivative(0.3), 0)
        self.assertTrue(np.all(u.pdf([0, 0.5, 1]) == 1))
        self.assertEqual(u.family(), 'uniform')
        self.assertEqual(str(u), 'uniform()')
        self.assertRaisesRegex(ValueError, 'cost', u.cdf, 1.5)
        self.assertRaisesRegex(ValueError, 'cost', u.pdf, -0.5)
        self.check_consistent(u)

    def test_truncated_normal(self):
        n = pricecap.TruncatedNormalCost(0.5, 0.01)
        self.assertAlmostEqual(n.cdf(0.5), 0.5)
        self.assertAlmostEqual(n.pdf(0.5), 1 / np.sqrt(2 * np.pi * 0.01),
                               places=5)
        self.assertAlmostEqual(n.pdf_derivative(0.5), 0)
        self.assertEqual(n.parameters(), {'mean': 0.5, 'variance': 0.01})
        self.check_consistent(n)

        self.assertRaises(ValueError, pricecap.TruncatedNormalCost, 0.5, 0)
        self.assertRaises(
            ValueError, pricecap.TruncatedNormalCost, float('nan'), 1)

    def test_truncated_exponential(self):
        e = pricecap.TruncatedExponentialCost(2)
        z = 1 - np.exp(-2)
        self.assertAlmostEqual(e.pdf(0.25), 2 * np.exp(-0.5) / z)
        self.assertAlmostEqual(e.cdf(0.25), (1 - np.exp(-0.5)) / z)
        self.assertEqual(str(e), 'truncated-exponential(rate=2.0)')
        self.check_consistent(e)
        self.assertRaises(ValueError, pricecap.TruncatedExponentialCost, 0)

    def test_tabulated(self):
        t = pricecap.TabulatedCost.from_cost(pricecap.UniformCost(), 17)
        self.assertAlmostEqual(t.cdf(0.3), 0.3)
        self.assertAlmostEqual(t.pdf(0.3), 1)
        self.assertEqual(t.family(), 'tabulated')

        # Density is normalised
        t = pricecap.TabulatedCost([0, 0.5, 0.75, 1], [4, 4, 4, 4])
        self.assertAlmostEqual(t.pdf(0.1), 1)

        e = pricecap.TruncatedExponentialCost(1)
        t = pricecap.TabulatedCost.from_cost(e, 257)
        c = np.linspace(0, 1, 11)
        self.assertTrue(np.allclose(t.cdf(c), e.cdf(c), atol=1e-6))
        self.check_consistent(t)

    def test_tabulated_bad_points(self):
        T = pricecap.TabulatedCost
        self.assertRaisesRegex(
            ValueError, 'At least 4', T, [0, 0.5, 1], [1, 1, 1])
        self.assertRaisesRegex(
            ValueError, 'from 0 to 1', T, [0, 0.5, 0.7, 0.9], [1, 1, 1, 1])
        self.assertRaisesRegex(
            ValueError, 'increasing', T, [0, 0.7, 0.5, 1], [1, 1, 1, 1])
        self.assertRaisesRegex(
            ValueError, 'nonnegative', T, [0, 0.5, 0.7, 1], [1, -1, 1, 1])
        self.assertRaisesRegex(
            ValueError, 'positive integral', T, [0, 0.5, 0.7, 1],
            [0, 0, 0, 0])
        self.assertRaisesRegex(
            ValueError, 'equal length', T, [0, 0.5, 0.7, 1], [1, 1, 1])


if __name__ == '__main__':
    unittest.main()
