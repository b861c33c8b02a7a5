#!/usr/bin/env python3
#
# Tests the closed-form and brute-force reference solutions.
#
# This file is part of PRICECAP which is
# released under the BSD 3-clause license. See accompanying LICENSE.md for
# copyright notice and full license details.
#
import unittest
import numpy as np

import pricecap

from shared import linear_uniform, normal_example, StreamCapture

# Consistent unit testing in Python 2 and 3
try:
    unittest.TestCase.assertRaisesRegex
except AttributeError:
    unittest.TestCase.assertRaisesRegex = unittest.TestCase.assertRaisesRegexp


class TestClosedForm(unittest.TestCase):
    """
    Tests :class:`pricecap.ClosedFormLinearUniform`.
    """
    def test_alpha_zero(self):
        cf = pricecap.closed_form_policy(alpha=0)
        self.assertAlmostEqual(cf.c_bar(), 11 / 23, places=10)
        self.assertAlmostEqual(cf.c_hat(), 3 / 23, places=10)
        self.assertEqual(cf.c_low(), 0)
        self.assertAlmostEqual(cf.q_flat(), 16 / 23, places=10)
        self.assertAlmostEqual(cf.p_hat(), 7 / 23, places=10)
        self.assertAlmostEqual(cf.welfare(), 2944 / 36501, places=12)
        self.assertFalse(cf.regime_clamped())
        lo, hi = cf.regime()
        self.assertAlmostEqual(lo, 0.4)
        self.assertAlmostEqual(hi, 0.625)

        slope, intercept = cf.tax_line()
        self.assertAlmostEqual(slope, 3)
        self.assertAlmostEqual(intercept, -21 / 23, places=10)
        self.assertEqual(cf.tax_rate(0.2), 0)
        self.assertAlmostEqual(cf.tax_rate(0.4), 1.2 - 21 / 23, places=10)
        self.assertEqual(cf.tax_rate(0.6), 1)

        # Welfare cubic (4/81) (1 - c_bar)^2 (23 c_bar - 5)
        for c_bar in [0.45, 0.5, 0.6]:
            self.assertAlmostEqual(
                cf.welfare_at(c_bar),
                4 / 81 * (1 - c_bar) ** 2 * (23 * c_bar - 5), places=12)
        self.assertEqual(cf.welfare_polynomial().degree(), 3)
        self.assertEqual(cf.c_hat_at(0.3), 0)

    def test_alpha_one(self):
        cf = pricecap.closed_form_policy(alpha=1)
        r3 = np.sqrt(3)
        self.assertAlmostEqual(cf.c_bar(), r3 - 1, places=10)
        self.assertAlmostEqual(cf.c_hat(), 3 * r3 - 5, places=10)
        self.assertAlmostEqual(cf.q_flat(), 4 - 2 * r3, places=10)
        self.assertAlmostEqual(cf.p_hat(), 2 * r3 - 3, places=10)
        self.assertAlmostEqual(cf.welfare(), 2 * r3 - 10 / 3, places=12)
        slope, intercept = cf.tax_line()
        self.assertAlmostEqual(slope, 1)
        self.assertAlmostEqual(intercept, 3 - 2 * r3, places=10)
        for c_bar in [0.68, 0.72]:
            self.assertAlmostEqual(
                cf.welfare_at(c_bar),
                (1 - c_bar) * (c_bar ** 2 + 4 * c_bar - 2) / 3, places=12)

    def test_schedules(self):
        cf = pricecap.closed_form_policy(alpha=0)
        c_bar = cf.c_bar()
        for c in [0.2, 0.4]:
            self.assertAlmostEqual(cf.quantity(c), 2 * (c_bar - c))
            self.assertAlmostEqual(cf.profit(c), (c_bar - c) ** 2)
            self.assertAlmostEqual(cf.price(c), (c + c_bar) / 2)
            self.assertAlmostEqual(cf.consumer_price(c), 1 - 2 * (c_bar - c))
        self.assertAlmostEqual(cf.quantity(0.05), 16 / 23)
        self.assertAlmostEqual(cf.price(0.05), 7 / 23)
        self.assertEqual(cf.quantity(0.9), 0)
        self.assertEqual(cf.profit(0.9), 0)
        self.assertEqual(cf.price(0.9), 1)
        self.assertEqual(cf.price(c_bar), c_bar)
        self.assertRaisesRegex(ValueError, 'Cost', cf.quantity, 2)

    def test_scaled_demand(self):
        # Parameters are stored and the regime follows the intercept
        cf = pricecap.ClosedFormLinearUniform(0.8, 2, 0.5)
        self.assertEqual(cf.A(), 0.8)
        self.assertEqual(cf.B(), 2)
        self.assertEqual(cf.alpha(), 0.5)
        lo, hi = cf.regime()
        self.assertAlmostEqual(lo, 0.4)
        self.assertTrue(lo <= cf.c_bar() <= hi)
        self.assertAlmostEqual(cf.p_hat(), 0.8 - 2 * cf.q_flat())

    def test_bad_input(self):
        self.assertRaisesRegex(
            ValueError, 'positive', pricecap.ClosedFormLinearUniform, 1, 0)
        self.assertRaisesRegex(
            ValueError, 'A <= 1', pricecap.ClosedFormLinearUniform, 2, 2)
        self.assertRaisesRegex(
            ValueError, 'A <= 2 B', pricecap.ClosedFormLinearUniform, 1, 0.4)
        self.assertRaisesRegex(
            ValueError, 'weight', pricecap.ClosedFormLinearUniform, 1, 1, 2)


class TestAgreement(unittest.TestCase):
    """
    Compares the solver with the closed form for several welfare weights.
    """
    def test_agreement(self):
        for alpha in [0, 0.25, 0.5, 0.75, 1]:
            env = linear_uniform(alpha=alpha)
            solver = pricecap.PolicySolver(env)
            solver.set_grid(257)
            solver.set_cbar_grid(33)
            solver.set_assumption_grid(257)
            solver.set_log_to_screen(False)
            policy = solver.run()

            cf = pricecap.closed_form_policy(alpha=alpha)
            self.assertAlmostEqual(policy.c_bar(), cf.c_bar(), delta=1e-4)
            self.assertAlmostEqual(policy.c_hat(), cf.c_hat(), delta=1e-4)
            self.assertAlmostEqual(policy.p_hat(), cf.p_hat(), delta=1e-4)
            self.assertAlmostEqual(policy.welfare(), cf.welfare(), delta=1e-6)

            rows = pricecap.compare_with_oracles(policy).rows()
            self.assertEqual(
                [r[0] for r in rows],
                ['c_bar', 'c_hat', 'c_L', 'p_hat', 'welfare'])
            for name, ours, closed, brute in rows:
                self.assertIsNone(brute)
                self.assertAlmostEqual(ours, closed, delta=1e-4)


class TestBruteForce(unittest.TestCase):
    """
    Tests the brute-force optimiser over step mechanisms.
    """
    def test_brute_force(self):
        env = linear_uniform(alpha=1)
        policy = pricecap.MechanismPolicy(
            pricecap.inner_solve(env, np.sqrt(3) - 1, 257), 257)
        mechanism = pricecap.brute_force_mechanism(env, 100, 500)

        self.assertIs(mechanism.environment(), env)
        self.assertEqual(len(mechanism.q()), 100)
        self.assertEqual(len(mechanism.edges()), 101)
        self.assertAlmostEqual(mechanism.costs()[1], 0.01)
        self.assertLessEqual(mechanism.iterations(), 500)
        self.assertLessEqual(mechanism.monotonicity_violation(), 1e-12)
        self.assertTrue(np.all(mechanism.slack() >= -1e-9))
        self.assertAlmostEqual(mechanism.pi()[-1], 0.01 * mechanism.q()[-1])

        # A step mechanism is feasible, so cannot beat the optimum
        self.assertLess(mechanism.objective(), policy.welfare() + 1e-6)
        self.assertLess(policy.welfare() - mechanism.objective(), 1e-3)

        comparison = pricecap.compare_with_oracles(policy, mechanism)
        rows = comparison.rows()
        self.assertEqual(rows[-1][0], 'max |q - q_grid|')
        self.assertLess(rows[-1][3], 0.02)
        self.assertEqual(rows[4][3], mechanism.objective())
        self.assertIn('brute force', str(comparison))

        self.assertAlmostEqual(
            mechanism.quantity(0.505), mechanism.q()[50])
        self.assertEqual(mechanism.quantity(1), mechanism.q()[-1])
        self.assertRaisesRegex(ValueError, 'Cost', mechanism.quantity, 2)

    def test_refinement(self):
        # Welfare of the best step mechanism approaches the optimum from
        # below as the cost grid is refined
        env = linear_uniform(alpha=0)
        optimum = pricecap.closed_form_policy(alpha=0).welfare()
        policy = pricecap.MechanismPolicy(
            pricecap.inner_solve(env, 11 / 23, 257), 257)
        gaps = []
        for n in [50, 100, 200]:
            mechanism = pricecap.brute_force_mechanism(env, n)
            self.assertTrue(mechanism.converged())
            gaps.append(optimum - mechanism.objective())
            rows = pricecap.compare_with_oracles(policy, mechanism).rows()
            self.assertLess(rows[-1][3], 0.02)
        self.assertGreaterEqual(gaps[-1], -1e-9)
        self.assertLess(gaps[0], 1e-3)
        self.assertLess(gaps[1], gaps[0])
        self.assertLess(gaps[2], gaps[1])

    def test_normal_example(self):
        env = normal_example()
        solver = pricecap.PolicySolver(env)
        solver.set_grid(257)
        solver.set_cbar_grid(33)
        solver.set_assumption_grid(513)
        solver.set_log_to_screen(False)
        policy = solver.run()

        mechanism = pricecap.brute_force_mechanism(env, 100)
        rows = pricecap.compare_with_oracles(policy, mechanism).rows()
        self.assertEqual(rows[-1][0], 'max |q - q_grid|')
        self.assertLess(rows[-1][3], 0.02)
        self.assertLess(abs(policy.welfare() - mechanism.objective()), 1e-3)
        self.assertTrue(np.all(mechanism.slack() >= -1e-9))

        # No closed form for this environment
        self.assertTrue(all(r[2] is None for r in rows))

    def test_solver(self):
        env = linear_uniform(alpha=0.5)
        solver = pricecap.GridMechanismSolver(env, 20)
        self.assertEqual(solver.iterations(), 500)
        self.assertIsNone(solver.time())
        solver.set_iterations(50)
        solver.set_seed(1)
        with StreamCapture() as c:
            mechanism = solver.run()
        out = c.text()
        self.assertIn('Round', out)
        self.assertIn('Min slack', out)
        self.assertIn('Halting', out)
        self.assertLessEqual(mechanism.iterations(), 50)
        self.assertGreater(solver.time(), 0)
        self.assertTrue(np.all(np.diff(mechanism.q()) <= 0))
        self.assertGreater(mechanism.objective(), pricecap.lf_welfare(env))

    def test_bad_input(self):
        env = linear_uniform()
        self.assertRaisesRegex(
            ValueError, '2, 200', pricecap.GridMechanismSolver, env, 1)
        self.assertRaisesRegex(
            ValueError, 'MarketEnvironment', pricecap.GridMechanismSolver,
            'env')
        solver = pricecap.GridMechanismSolver(env, 10)
        self.assertRaisesRegex(
            ValueError, 'at least 1', solver.set_iterations, 0)


if __name__ == '__main__':
    unittest.main()
