#!/usr/bin/env python3
#
# Tests the inverse demand curves.
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


class TestLinearDemand(unittest.TestCase):
    """
    Tests :class:`pricecap.LinearDemand`.
    """
    def test_curve(self):
        d = pricecap.LinearDemand(2, 4)
        self.assertEqual(d.v_bar(), 2)
        self.assertEqual(d.q_max(), 0.5)
        self.assertEqual(d.price(0.25), 1)
        self.assertEqual(d.quantity(1), 0.25)
        self.assertEqual(d.derivative(0.1), -4)
        self.assertEqual(d.marginal_revenue(0.25), 0)
        self.assertAlmostEqual(d.consumer_value(0.5), 0.5)
        self.assertEqual(d.family(), 'linear')
        self.assertEqual(d.parameters(), {'A': 2, 'B': 4})
        self.assertEqual(str(d), 'linear(A=2.0, B=4.0)')

        # Vectorised
        q = np.array([0, 0.25, 0.5])
        self.assertTrue(np.allclose(d.price(q), [2, 1, 0]))
        self.assertTrue(np.allclose(d.quantity([2, 1, 0]), q))

        # Module level shortcuts
        self.assertEqual(pricecap.price(d, 0.25), 1)
        self.assertEqual(pricecap.quantity(d, 1), 0.25)
        self.assertAlmostEqual(pricecap.consumer_value(d, 0.25), 0.375)

    def test_domain(self):
        d = pricecap.LinearDemand()
        self.assertRaisesRegex(ValueError, 'quantity', d.price, 1.5)
        self.assertRaisesRegex(ValueError, 'quantity', d.price, -0.5)
        self.assertRaisesRegex(ValueError, 'price', d.quantity, 1.5)
        self.assertRaises(ValueError, d.consumer_value, [0.5, 2])

    def test_bad_parameters(self):
        self.assertRaisesRegex(
            ValueError, 'Intercept', pricecap.LinearDemand, 0, 1)
        self.assertRaisesRegex(
            ValueError, 'Slope', pricecap.LinearDemand, 1, -1)


class TestConstantElasticDemand(unittest.TestCase):
    """
    Tests :class:`pricecap.ConstantElasticDemand`.
    """
    def test_curve(self):
        d = pricecap.ConstantElasticDemand(1, 2, 1e-6, 10)
        self.assertEqual(d.elasticity(), 2)
        self.assertEqual(d.v_bar(), 10)
        self.assertAlmostEqual(d.q_max(), 1e12, delta=1)
        self.assertAlmostEqual(d.price(0.25), 2 - 1e-6, places=12)
        self.assertAlmostEqual(d.quantity(1), 1 / (1 + 1e-6) ** 2)
        self.assertEqual(d.price(0), 10)
        self.assertEqual(d.price(1e-3), 10)
        self.assertEqual(d.quantity(10), 0)
        self.assertEqual(d.derivative(1e-3), 0)
        self.assertAlmostEqual(d.derivative(0.25), -4)
        self.assertEqual(d.family(), 'constant-elastic')

    def test_value(self):
        d = pricecap.ConstantElasticDemand(1, 2, 1e-6, 10)
        q = np.array([0.005, 0.5, 2.0])
        exact = d.consumer_value(q)
        numerical = pricecap.DemandCurve._value(d, q)
        self.assertTrue(np.allclose(exact, numerical, rtol=1e-7, atol=1e-9))

    def test_bad_parameters(self):
        self.assertRaises(ValueError, pricecap.ConstantElasticDemand, 0)
        self.assertRaisesRegex(
            ValueError, 'eta', pricecap.ConstantElasticDemand, 1, 1)
        self.assertRaisesRegex(
            ValueError, 'epsilon', pricecap.ConstantElasticDemand, 1, 2, 0)
        self.assertRaisesRegex(
            ValueError, 'v_bar', pricecap.ConstantElasticDemand, 1, 2, 1, 0)


class TestLogarithmicDemand(unittest.TestCase):
    """
    Tests :class:`pricecap.LogarithmicDemand`.
    """
    def test_curve(self):
        d = pricecap.LogarithmicDemand(1, 0.5, 10)
        self.assertEqual(d.markup(), 0.5)
        self.assertAlmostEqual(d.q_max(), np.exp(2))
        self.assertAlmostEqual(d.price(1), 1)
        self.assertAlmostEqual(d.price(np.e), 0.5)
        self.assertAlmostEqual(d.quantity(0.5), np.e)
        self.assertAlmostEqual(d.derivative(2), -0.25)
        self.assertAlmostEqual(d.marginal_revenue(1), 0.5)
        self.assertEqual(d.price(0), 10)
        self.assertEqual(d.family(), 'logarithmic')

        q = np.array([0.5, 1.0, 5.0])
        numerical = pricecap.DemandCurve._value(d, q)
        self.assertTrue(np.allclose(
            d.consumer_value(q), numerical, rtol=1e-7, atol=1e-8))

    def test_bad_parameters(self):
        self.assertRaisesRegex(
            ValueError, 'beta', pricecap.LogarithmicDemand, 1, 0)
        self.assertRaisesRegex(
            ValueError, 'v_bar', pricecap.LogarithmicDemand, 1, 0.5, 0.5)


class TestTabulatedDemand(unittest.TestCase):
    """
    Tests :class:`pricecap.TabulatedDemand`.
    """
    def test_from_linear(self):
        d = pricecap.TabulatedDemand.from_curve(
            pricecap.LinearDemand(2, 1), 65)
        self.assertEqual(d.v_bar(), 2)
        self.assertEqual(d.q_max(), 2)
        self.assertAlmostEqual(d.price(0.5), 1.5, places=10)
        self.assertAlmostEqual(d.derivative(0.7), -1, places=10)
        self.assertAlmostEqual(d.consumer_value(2), 2, places=10)
        self.assertAlmostEqual(d.quantity(1.0), 1, places=10)
        self.assertEqual(d.quantity(2), 0)
        self.assertEqual(d.family(), 'tabulated')
        self.assertEqual(len(d.parameters()['q']), 65)

        # Parameters are not shown in full
        self.assertEqual(str(d), 'tabulated()')

    def test_bad_points(self):
        T = pricecap.TabulatedDemand
        self.assertRaisesRegex(
            ValueError, 'At least 4', T, [0, 1, 2], [2, 1, 0])
        self.assertRaisesRegex(
            ValueError, 'first quantity', T, [0.1, 1, 2, 3], [3, 2, 1, 0])
        self.assertRaisesRegex(
            ValueError, 'increasing', T, [0, 2, 1, 3], [3, 2, 1, 0])
        self.assertRaisesRegex(
            ValueError, 'decreasing', T, [0, 1, 2, 3], [3, 2, 2, 0])
        self.assertRaisesRegex(
            ValueError, 'last price', T, [0, 1, 2, 3], [3, 2, 1, 0.5])
        self.assertRaisesRegex(
            ValueError, 'equal length', T, [0, 1, 2, 3], [3, 2, 0])
        self.assertRaises(
            ValueError, T.from_curve, pricecap.LinearDemand(), 3)


if __name__ == '__main__':
    unittest.main()
