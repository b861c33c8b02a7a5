#!/usr/bin/env python3
#
# Tests the inner and outer solves and the resulting regulation policies.
#
# This file is part of PRICECAP which is
# released under the BSD 3-clause license. See accompanying LICENSE.md for
# copyright notice and full license details.
#
import logging
import unittest
import numpy as np

import pricecap

from shared import linear_uniform, normal_example, random_environments

# Consistent unit testing in Python 2 and 3
try:
    unittest.TestCase.assertRaisesRegex
except AttributeError:
    unittest.TestCase.assertRaisesRegex = unittest.TestCase.assertRaisesRegexp


def solve(env, grid=257, cbar_grid=33, golden_tol=1e-8, assumption_grid=513):
    """ Runs a quiet :class:`pricecap.PolicySolver`. """
    solver = pricecap.PolicySolver(env)
    solver.set_grid(grid)
    solver.set_cbar_grid(cbar_grid)
    solver.set_golden_tolerance(golden_tol)
    solver.set_assumption_grid(assumption_grid)
    solver.set_log_to_screen(False)
    return solver.run(), solver


class TestTerminalCondition(unittest.TestCase):
    """
    Tests :meth:`pricecap.terminal_quantity()` and :meth:`pricecap.phi()`.
    """
    def test_terminal_quantity(self):
        self.assertEqual(pricecap.terminal_quantity(linear_uniform(), 0.5), 0)

        # q (1 - q - 0.5) = 0.01, smaller root
        env = linear_uniform(k=0.01)
        q = pricecap.terminal_quantity(env, 0.5)
        self.assertAlmostEqual(q, (0.5 - np.sqrt(0.21)) / 2, places=10)
        self.assertAlmostEqual(q * (0.5 - q), 0.01, places=11)

        self.assertRaisesRegex(
            pricecap.InfeasibleEnvironmentError, 'cannot cover',
            pricecap.terminal_quantity, env, 0.9)
        self.assertRaisesRegex(
            ValueError, 'cutoff', pricecap.terminal_quantity, env, 0)
        self.assertRaisesRegex(
            ValueError, 'cutoff', pricecap.terminal_quantity, env, 1.5)

    def test_phi(self):
        # Linear demand, uniform costs, no fixed cost:
        # phi = c + (1 - alpha) c + 1 - c_bar - (1 - alpha) c_bar
        for alpha in [0, 0.5, 1]:
            env = linear_uniform(alpha=alpha)
            for c in [0, 0.2, 0.45]:
                expected = (2 - alpha) * (c - 0.5) + 1
                self.assertAlmostEqual(
                    pricecap.phi(env, c, 0.5), expected, places=12)

        # At the cutoff, the virtual price is the terminal consumer price
        env = linear_uniform(alpha=0.3, k=0.01)
        q = pricecap.terminal_quantity(env, 0.6)
        self.assertAlmostEqual(
            pricecap.phi(env, 0.6, 0.6), 1 - q, places=10)

        # Arrays
        x = pricecap.phi(linear_uniform(), np.array([0.1, 0.2]), 0.5)
        self.assertEqual(x.shape, (2, ))
        self.assertAlmostEqual(x[1], 0.4)

        self.assertRaisesRegex(
            ValueError, 'cost', pricecap.phi, linear_uniform(), -0.5, 0.5)


class TestInnerSolve(unittest.TestCase):
    """
    Tests :meth:`pricecap.inner_solve()` against the welfare cubics of
    linear demand with uniform costs.
    """
    def test_alpha_zero(self):
        env = linear_uniform(alpha=0)
        for c_bar in np.linspace(0.42, 0.6, 10):
            s = pricecap.inner_solve(env, c_bar, 129)
            self.assertAlmostEqual(s.c_hat(), (5 * c_bar - 2) / 3, places=7)
            self.assertAlmostEqual(s.q_flat(), 4 * (1 - c_bar) / 3, places=7)
            self.assertEqual(s.c_low(), 0)
            self.assertEqual(s.c_bar(), c_bar)
            self.assertEqual(s.q_terminal(), 0)
            self.assertEqual(s.flags(), ())
            expected = 4 / 81 * (1 - c_bar) ** 2 * (23 * c_bar - 5)
            self.assertAlmostEqual(s.welfare(), expected, delta=1e-6)

            # Taxed branch q = 2 (c_bar - c), profit (c_bar - c)^2
            c = c_bar - 0.05
            self.assertAlmostEqual(s.quantity(c), 0.1, places=9)
            self.assertAlmostEqual(s.profit(c), 0.0025, places=9)
            self.assertAlmostEqual(
                s.gamma_const(), 1 - 2 * c_bar, places=12)

    def test_alpha_one(self):
        env = linear_uniform(alpha=1)
        for c_bar in np.linspace(0.675, 0.74, 10):
            s = pricecap.inner_solve(env, c_bar, 129)
            self.assertAlmostEqual(s.c_hat(), 3 * c_bar - 2, places=7)
            self.assertAlmostEqual(s.q_flat(), 2 * (1 - c_bar), places=7)
            self.assertEqual(s.c_low(), 0)
            expected = (1 - c_bar) * (c_bar ** 2 + 4 * c_bar - 2) / 3
            self.assertAlmostEqual(s.welfare(), expected, delta=1e-6)

    def test_closed_form_c_hat(self):
        # c_hat = ((2a + 1) c_bar - 2) / (2a - 1), a = 2 - alpha, inside the
        # regime where it is nonnegative
        rng = np.random.RandomState(3)
        for i in range(20):
            alpha = rng.uniform(0, 1)
            a = 2 - alpha
            lo, hi = 2 / (2 * a + 1), (2 * a + 1) / (4 * a)
            c_bar = rng.uniform(lo + 0.01, hi - 0.01)
            s = pricecap.inner_solve(linear_uniform(alpha=alpha), c_bar, 129)
            self.assertAlmostEqual(
                s.c_hat(), ((2 * a + 1) * c_bar - 2) / (2 * a - 1), places=7)

    def test_slack(self):
        s = pricecap.inner_solve(linear_uniform(), 0.5, 129)
        c = np.linspace(0, 1, 101)
        g = s.slack(c)
        self.assertTrue(np.all(g >= -1e-10))

        # Binding below c_hat, slack on the taxed part, zero when excluded
        self.assertAlmostEqual(s.slack(0.05), 0, places=10)
        self.assertGreater(s.slack(0.3), 1e-4)
        self.assertEqual(s.slack(0.8), 0)

        # Sampled schedules
        self.assertEqual(s.grid()[0], 0)
        self.assertEqual(s.grid()[-1], 1)
        self.assertAlmostEqual(s.q_of_c()(0.4), 0.2, places=6)
        self.assertAlmostEqual(s.pi_of_c()(0.4), 0.01, delta=1e-5)

    def test_fixed_cost(self):
        # With a fixed cost the highest type served still produces
        env = linear_uniform(alpha=0.5, k=0.005)
        s = pricecap.inner_solve(env, 0.6, 129)
        q = s.q_terminal()
        self.assertGreater(q, 0)
        self.assertAlmostEqual(s.quantity(0.6), q, places=9)
        self.assertEqual(s.quantity(0.61), 0)
        self.assertAlmostEqual(s.profit(0.6), 0, places=12)
        self.assertAlmostEqual(s.slack(0.6), 0, places=9)
        self.assertTrue(np.all(np.diff(s.quantity(np.linspace(0, 1, 65)))
                               <= 1e-12))

    def test_bad_input(self):
        env = linear_uniform(k=0.01)
        self.assertRaisesRegex(
            ValueError, 'cutoff', pricecap.inner_solve, env, 0)
        self.assertRaisesRegex(
            ValueError, 'Grid size', pricecap.inner_solve, env, 0.5, 10)
        self.assertRaisesRegex(
            pricecap.InfeasibleEnvironmentError, 'exceeds',
            pricecap.inner_solve, env, 0.9)


class TestGoldenAlphaZero(unittest.TestCase):
    """
    Tests the optimal regulation for linear demand, uniform costs and no
    weight on profit, where ``c_bar = 11/23``, ``c_hat = 3/23`` and ``p_hat =
    7/23``.
    """
    @classmethod
    def setUpClass(cls):
        cls.env = linear_uniform(alpha=0)
        cls.policy, cls.solver = solve(cls.env)

    def test_cutoffs(self):
        p = self.policy
        self.assertIsInstance(p, pricecap.MechanismPolicy)
        self.assertFalse(p.is_laissez_faire())
        self.assertAlmostEqual(p.c_bar(), 11 / 23, delta=1e-4)
        self.assertAlmostEqual(p.c_hat(), 3 / 23, delta=1e-4)
        self.assertEqual(p.c_low(), 0)
        self.assertAlmostEqual(p.p_hat(), 7 / 23, delta=1e-4)
        self.assertAlmostEqual(
            p.inner_solution().q_flat(), 16 / 23, delta=1e-4)
        self.assertEqual(p.q_terminal(), 0)
        self.assertTrue(p.structure_verified())
        self.assertEqual(p.flags(), ())

    def test_welfare(self):
        d = self.solver.diagnostics()
        self.assertAlmostEqual(self.policy.welfare(), 2944 / 36501, delta=1e-6)
        self.assertAlmostEqual(d.lf_welfare(), 1 / 24, places=8)
        self.assertAlmostEqual(
            d.improvement(), 2944 / 36501 - 1 / 24, delta=1e-6)
        self.assertEqual(d.welfare(), self.policy.welfare())
        self.assertFalse(d.gate().lf_optimal())
        self.assertTrue(d.assumptions().passed())

    def test_schedules(self):
        p = self.policy
        c_bar = p.c_bar()

        # Firm price (c + c_bar) / 2 on the taxed segment
        for c in [0.2, 0.3, 0.45]:
            self.assertAlmostEqual(p.price(c), (c + c_bar) / 2, delta=1e-7)
            self.assertAlmostEqual(p.profit(c), (c_bar - c) ** 2, delta=1e-7)

        # Bunching types all charge the benchmark price
        for c in [0, 0.05, 0.1]:
            self.assertAlmostEqual(p.price(c), p.p_hat(), delta=1e-9)
            self.assertAlmostEqual(p.unit_tax(c), 0, delta=1e-9)

        # Excluded types
        self.assertEqual(p.quantity(0.9), 0)
        self.assertEqual(p.price(0.9), 1)
        self.assertEqual(p.profit(0.9), 0)
        self.assertEqual(p.unit_tax(0.9), 0)
        self.assertEqual(p.consumer_price(0.9), 1)

        self.assertEqual(p.segment(0.05), pricecap.BUNCH)
        self.assertEqual(p.segment(0.3), pricecap.TAXED)
        self.assertEqual(p.segment(0.9), pricecap.EXCLUDED)
        self.assertRaisesRegex(ValueError, 'Cost', p.segment, 2)
        labels = p.segments()
        self.assertEqual(len(labels), 257)
        self.assertNotIn(pricecap.LAISSEZ_FAIRE, labels)

        # Sampled schedules
        self.assertAlmostEqual(p.q_star()(0.3), 2 * (c_bar - 0.3), delta=1e-6)
        self.assertAlmostEqual(p.p_star()(0.3), (0.3 + c_bar) / 2, delta=1e-6)
        self.assertAlmostEqual(p.pi_star()(0.3), (c_bar - 0.3) ** 2,
                               delta=1e-5)

    def test_mbmc_residual(self):
        p = self.policy
        for c in [p.c_hat(), 0.3, 0.4, p.c_bar()]:
            self.assertLess(abs(pricecap.mbmc_residual(self.env, p, c)), 1e-9)
        self.assertRaisesRegex(
            ValueError, 'taxed segment', pricecap.mbmc_residual, self.env, p,
            0.05)
        self.assertRaisesRegex(
            ValueError, 'different environment', pricecap.mbmc_residual,
            linear_uniform(), p, 0.3)

    def test_diagnostics(self):
        d = self.solver.diagnostics()
        stages = [x[0] for x in d.trace()]
        self.assertEqual(stages[:33], ['grid'] * 33)
        self.assertIn('golden', stages)
        self.assertEqual(stages[-1], 'final')
        self.assertEqual(self.solver.evaluations(), len(d.trace()))
        self.assertGreater(self.solver.time(), 0)
        self.assertIsInstance(d.tax(), pricecap.OptimalTax)
        self.assertTrue(d.progressivity().progressive())
        self.assertIn('improvement', str(d))
        self.assertIn('p_hat', str(self.policy))


class TestGoldenAlphaOne(unittest.TestCase):
    """
    Tests the optimal regulation for linear demand, uniform costs and full
    weight on profit, where ``c_bar = sqrt(3) - 1``.
    """
    @classmethod
    def setUpClass(cls):
        cls.env = linear_uniform(alpha=1)
        cls.policy, cls.solver = solve(cls.env)

    def test_cutoffs(self):
        p = self.policy
        r3 = np.sqrt(3)
        self.assertAlmostEqual(p.c_bar(), r3 - 1, delta=1e-4)
        self.assertAlmostEqual(p.c_hat(), 3 * r3 - 5, delta=1e-4)
        self.assertEqual(p.c_low(), 0)
        self.assertAlmostEqual(p.p_hat(), 2 * r3 - 3, delta=1e-4)
        self.assertAlmostEqual(
            p.inner_solution().q_flat(), 4 - 2 * r3, delta=1e-4)
        self.assertTrue(p.structure_verified())

    def test_welfare(self):
        d = self.solver.diagnostics()
        self.assertAlmostEqual(
            self.policy.welfare(), 2 * np.sqrt(3) - 10 / 3, delta=1e-6)
        self.assertAlmostEqual(d.lf_welfare(), 1 / 8, places=8)
        self.assertGreater(d.improvement(), 0)

    def test_schedules(self):
        p = self.policy
        c_bar = p.c_bar()
        for c in [0.3, 0.5, 0.7]:
            self.assertAlmostEqual(p.quantity(c), c_bar - c, delta=1e-7)
            self.assertAlmostEqual(p.price(c), (c + c_bar) / 2, delta=1e-7)
            self.assertAlmostEqual(
                p.consumer_price(c), 1 - c_bar + c, delta=1e-7)


class TestNormalExample(unittest.TestCase):
    """
    Tests the optimal regulation with truncated normal costs, which violate
    the density hypotheses of the progressive price cap.
    """
    def test_normal(self):
        env = normal_example()
        policy, solver = solve(env)
        self.assertAlmostEqual(policy.c_low(), 0.104, delta=0.02)
        self.assertAlmostEqual(policy.c_hat(), 0.46, delta=0.02)
        self.assertAlmostEqual(policy.c_bar(), 0.609, delta=0.02)
        self.assertAlmostEqual(policy.p_hat(), 0.5515, delta=0.02)
        self.assertTrue(0 < policy.c_low() < policy.c_hat() < policy.c_bar())
        self.assertIn(pricecap.STRUCTURE_UNVERIFIED, policy.flags())
        self.assertFalse(policy.structure_verified())

        d = solver.diagnostics()
        self.assertFalse(d.assumptions().passed('f_nonincreasing'))
        self.assertGreater(d.improvement(), 0)

        # Three active segments
        self.assertEqual(policy.segment(0.05), pricecap.LAISSEZ_FAIRE)
        self.assertEqual(policy.segment(0.3), pricecap.BUNCH)
        self.assertEqual(policy.segment(0.55), pricecap.TAXED)


class TestLaissezFaire(unittest.TestCase):
    """
    Tests the solver when laissez-faire is optimal, or infeasible.
    """
    def test_lf_optimal(self):
        env = pricecap.MarketEnvironment(
            pricecap.LogarithmicDemand(1, 0.3, 3), pricecap.UniformCost(), 1)
        policy, solver = solve(env)
        self.assertIsInstance(policy, pricecap.LaissezFairePolicy)
        self.assertTrue(policy.is_laissez_faire())
        self.assertEqual(policy.c_bar(), 1)
        self.assertEqual(policy.c_hat(), 1)
        self.assertEqual(policy.c_low(), 1)

        d = solver.diagnostics()
        self.assertTrue(d.gate().lf_optimal())
        self.assertEqual(d.improvement(), 0)
        self.assertEqual(d.trace(), ())
        self.assertIsNone(d.tax())
        self.assertIsNone(d.progressivity())
        self.assertEqual(solver.evaluations(), 0)

        # Constant markup 0.3
        for c in [0, 0.5, 1]:
            self.assertAlmostEqual(policy.price(c), c + 0.3, places=8)
            self.assertAlmostEqual(policy.unit_tax(c), 0, places=12)
            self.assertEqual(policy.segment(c), pricecap.LAISSEZ_FAIRE)
        self.assertRaisesRegex(
            ValueError, 'no taxed segment', pricecap.mbmc_residual, env,
            policy, 0.5)

    def test_message(self):
        from shared import StreamCapture
        env = pricecap.MarketEnvironment(
            pricecap.LogarithmicDemand(1, 0.3, 3), pricecap.UniformCost(), 1)
        solver = pricecap.PolicySolver(env)
        solver.set_assumption_grid(257)
        solver.set_grid(129)
        with StreamCapture() as c:
            solver.run()
        self.assertIn('Laissez-faire is optimal', c.text())

    def test_infeasible(self):
        env = linear_uniform(k=0.3)
        solver = pricecap.PolicySolver(env)
        solver.set_log_to_screen(False)
        self.assertRaisesRegex(
            pricecap.InfeasibleEnvironmentError, 'fixed cost', solver.run)


class TestPolicySolver(unittest.TestCase):
    """
    Tests the :class:`pricecap.PolicySolver` settings.
    """
    def test_settings(self):
        solver = pricecap.PolicySolver(linear_uniform())
        self.assertIsNone(solver.evaluations())
        self.assertIsNone(solver.time())
        self.assertRaisesRegex(RuntimeError, 'after run', solver.diagnostics)
        self.assertFalse(solver.parallel())
        solver.set_parallel(3)
        self.assertEqual(solver.parallel(), 3)
        solver.set_parallel(False)
        self.assertFalse(solver.parallel())
        solver.set_parallel(True)
        self.assertEqual(
            solver.parallel(), pricecap.ParallelEvaluator.cpu_count())

        self.assertRaisesRegex(ValueError, '64', solver.set_grid, 10)
        self.assertRaisesRegex(ValueError, '2', solver.set_cbar_grid, 1)
        self.assertRaisesRegex(ValueError, '16', solver.set_assumption_grid, 4)
        self.assertRaisesRegex(
            ValueError, 'nonnegative', solver.set_gate_tolerance, -1)
        self.assertRaisesRegex(
            ValueError, 'positive', solver.set_golden_tolerance, 0)
        self.assertRaisesRegex(
            ValueError, 'MarketEnvironment', pricecap.PolicySolver, 'env')

    def test_log_to_file(self):
        from shared import TemporaryDirectory
        with TemporaryDirectory() as d:
            path = d.path('log.csv')
            solver = pricecap.PolicySolver(linear_uniform())
            solver.set_grid(129)
            solver.set_cbar_grid(4)
            solver.set_golden_tolerance(1e-3)
            solver.set_assumption_grid(257)
            solver.set_log_to_screen(False)
            solver.set_log_to_file(path, csv=True)
            solver.run()
            with open(path, 'r') as f:
                lines = f.readlines()
            self.assertEqual(
                lines[0].strip(),
                '"Iter.","Stage","c_bar","Welfare","Best","Time m:s"')
            self.assertEqual(len(lines) - 1, solver.evaluations())

    def test_outer_solve(self):
        handlers = list(logging.getLogger().handlers)
        policy = pricecap.outer_solve(linear_uniform(), 129, 9)
        self.assertAlmostEqual(policy.c_bar(), 11 / 23, delta=1e-4)

        # Solving leaves the root logger unconfigured
        self.assertEqual(logging.getLogger().handlers, handlers)


class TestInvariants(unittest.TestCase):
    """
    Checks the properties every solved policy must have, on random
    environments.
    """
    def test_random_environments(self):
        h = 1e-4
        envs = random_environments(25, seed=2)
        envs.append(linear_uniform(alpha=0, k=0.01))
        envs.append(linear_uniform(alpha=0.5, k=0.005))
        for env in envs:
            policy, solver = solve(
                env, grid=129, cbar_grid=9, golden_tol=1e-5,
                assumption_grid=257)
            w_lf = solver.diagnostics().lf_welfare()
            self.assertGreaterEqual(policy.welfare(), w_lf - 1e-9)
            if policy.is_laissez_faire():
                continue

            c = np.linspace(0, 1, 201)
            q = policy.quantity(c)
            self.assertTrue(np.all(np.diff(q) <= 1e-9))
            self.assertTrue(
                np.all(policy.unit_tax(np.linspace(0, 1, 1001)) >= -1e-12))

            solution = policy.inner_solution()
            self.assertTrue(np.all(solution.slack(c) >= -1e-8))

            # No-subsidy constraint binds on the bunching segment
            if policy.c_hat() > policy.c_low():
                bunch = np.linspace(policy.c_low(), policy.c_hat(), 33)
                self.assertTrue(
                    np.all(np.abs(solution.slack(bunch)) <= 1e-8))
            if policy.structure_verified():
                step = 1 / 128
                inside = c[(c > policy.c_hat() + 2 * step)
                           & (c < policy.c_bar() - 2 * step)]
                if len(inside):
                    self.assertTrue(np.all(solution.slack(inside) > 0))

            # Envelope condition, away from the segment ends
            kinks = np.array([policy.c_low(), policy.c_hat(), policy.c_bar()])
            for x in np.linspace(0.01, 0.99, 41):
                if np.min(np.abs(kinks - x)) < 5 * h:
                    continue
                qx = policy.quantity(x)
                if qx <= 1e-2:
                    continue
                slope = (policy.profit(x + h) - policy.profit(x - h)) / (2 * h)
                self.assertLess(abs(slope + qx), 1e-4 * qx + 1e-8)


if __name__ == '__main__':
    unittest.main()
