#
# Independent reference solutions: the closed form for linear demand with
# uniform costs, and a brute-force optimiser over step mechanisms
#
# This file is part of PRICECAP which is
# released under the BSD 3-clause license. See accompanying LICENSE.md for
# copyright notice and full license details.
#
from __future__ import absolute_import, division
from __future__ import print_function, unicode_literals
import pricecap
import numpy as np
import scipy.optimize
from numpy.polynomial import Polynomial
from sklearn.isotonic import isotonic_regression
from tabulate import tabulate


class ClosedFormLinearUniform(object):
    """
    The optimal regulation for linear demand ``P(q) = A - B q``, uniformly
    distributed costs and no fixed cost, in closed form.

    With ``a = 2 - alpha`` and ``U = 2 (A - c_bar) / (2a - 1)``, a cutoff
    ``c_bar`` gives the taxed allocation ``q(c) = a (c_bar - c) / B`` on
    ``[c_hat, c_bar]``, with ``c_hat = c_bar - U``, and bunching at
    ``q(c_hat) = a U / B`` below. Welfare is then a cubic polynomial in
    ``c_bar``, valid as long as ``0 <= c_hat`` and the bunching quantity does
    not exceed the laissez-faire quantity of the lowest type; its maximiser
    over that regime is the optimal cutoff.

    If the maximum lies on the boundary of the regime (without being a
    stationary point), :meth:`regime_clamped()` returns ``True``: the
    formulas then describe the best policy of this shape, which need not be
    the optimal regulation.

    Created by :meth:`closed_form_policy()`.
    """
    def __init__(self, A=1, B=1, alpha=0):
        self._A = float(A)
        self._B = float(B)
        self._alpha = float(alpha)
        if not (self._A > 0 and self._B > 0):
            raise ValueError('Demand parameters must be positive.')
        if self._A > 1:
            raise ValueError('Closed form requires A <= 1.')
        if self._A > 2 * self._B:
            raise ValueError('Closed form requires A <= 2 B.')
        if not 0 <= self._alpha <= 1:
            raise ValueError('Welfare weight must be in [0, 1].')

        A, B = self._A, self._B
        a = 2 - self._alpha
        K = 2 * a - 1
        self._a = a
        self._K = K

        # Schedules as polynomials in c_bar
        c_bar = Polynomial([0, 1])
        self._U = Polynomial([2 * A / K, -2 / K])
        self._c_hat = Polynomial([-2 * A / K, (2 * a + 1) / K])
        q_flat = a * self._U / B
        taxed = (a / B) * (A - a * c_bar) * self._U**2 / 2 \
            + a**2 * self._U**3 / (6 * B)
        value = A * q_flat - B * q_flat**2 / 2
        bunch = self._c_hat * value - a * q_flat * self._c_hat**2 / 2
        self._welfare = taxed + bunch

        # Regime with 0 <= c_hat and c_L <= 0
        self._lo = 2 * A / (2 * a + 1)
        self._hi = min(A * (2 * a + 1) / (4 * a), A, 1)

        candidates = [self._lo, self._hi]
        for r in self._welfare.deriv().roots():
            if abs(r.imag) < 1e-12 and self._lo < r.real < self._hi:
                candidates.append(float(r.real))
        values = [self._welfare(x) for x in candidates]
        i = int(np.argmax(values))
        self._c_bar = float(candidates[i])
        self._clamped = i < 2 and abs(
            self._welfare.deriv()(self._c_bar)) > 1e-10

    def A(self):
        """ Returns the demand intercept. """
        return self._A

    def alpha(self):
        """ Returns the welfare weight on profit. """
        return self._alpha

    def B(self):
        """ Returns the demand slope. """
        return self._B

    def c_bar(self):
        """ Returns the optimal exclusion cutoff. """
        return self._c_bar

    def c_hat(self):
        """ Returns the upper end of the bunching segment. """
        return self.c_hat_at(self._c_bar)

    def c_hat_at(self, c_bar):
        """
        Returns ``c_hat = ((2a + 1) c_bar - 2A) / (2a - 1)`` for a cutoff
        ``c_bar``, clamped at 0.
        """
        return max(0.0, float(self._c_hat(c_bar)))

    def c_low(self):
        """
        Returns the upper end of the laissez-faire segment, which is 0 in the
        regime the closed form covers.
        """
        c_hat = self.c_hat()
        q = self.q_flat()
        return min(max(self._A - 2 * self._B * q, 0.0), c_hat)

    def consumer_price(self, c):
        """ Returns the consumer price ``P(q*(c))``. """
        return self._A - self._B * self.quantity(c)

    def p_hat(self):
        """ Returns the benchmark price ``A - B q(c_hat)``. """
        return self._A - self._B * self.q_flat()

    def price(self, c):
        """ Returns the firm price ``p*(c)``. """
        c = float(c)
        q = self.quantity(c)
        if q <= 0:
            return self._c_bar if c == self._c_bar else self._A
        return c + self.profit(c) / q

    def profit(self, c):
        """ Returns the firm profit ``Pi*(c)``. """
        c = float(c)
        a, B = self._a, self._B
        c_bar, c_hat, c_low = self._c_bar, self.c_hat(), self.c_low()
        if c >= c_bar:
            return 0.0
        if c >= c_hat:
            return a * (c_bar - c)**2 / (2 * B)
        pi_hat = a * (c_bar - c_hat)**2 / (2 * B)
        if c >= c_low:
            return pi_hat + self.q_flat() * (c_hat - c)
        pi_low = pi_hat + self.q_flat() * (c_hat - c_low)
        return pi_low + ((self._A - c)**2 - (self._A - c_low)**2) / (4 * B)

    def q_flat(self):
        """ Returns the bunching quantity ``a U / B``. """
        return self._a * max(0.0, float(self._U(self._c_bar))) / self._B

    def quantity(self, c):
        """ Returns the allocation ``q*(c)``. """
        c = float(c)
        if not 0 <= c <= 1:
            raise ValueError('Cost must be in [0, 1].')
        if c > self._c_bar:
            return 0.0
        if c >= self.c_hat():
            return self._a * (self._c_bar - c) / self._B
        if c >= self.c_low():
            return self.q_flat()
        return (self._A - c) / (2 * self._B)

    def regime(self):
        """
        Returns the interval ``(lo, hi)`` of cutoffs over which the welfare
        polynomial is valid.
        """
        return self._lo, self._hi

    def regime_clamped(self):
        """
        Returns ``True`` if the welfare polynomial is maximised on the
        boundary of its regime, see :class:`ClosedFormLinearUniform`.
        """
        return self._clamped

    def tax_line(self):
        """
        Returns ``(slope, intercept)`` of the tax ``(3 - 2 alpha) p + A - 2 (2
        - alpha) c_bar`` charged on ``(p_hat, c_bar]``.
        """
        return self._K, self._A - 2 * self._a * self._c_bar

    def tax_rate(self, p):
        """
        Returns the unit tax at firm price ``p``: zero up to ``p_hat``, the
        tax line up to ``c_bar`` and the prohibitive ``A`` above.
        """
        p = float(p)
        if p <= self.p_hat():
            return 0.0
        if p > self._c_bar:
            return self._A
        slope, intercept = self.tax_line()
        return slope * p + intercept

    def welfare(self):
        """ Returns the optimal expected weighted surplus. """
        return float(self._welfare(self._c_bar))

    def welfare_at(self, c_bar):
        """
        Returns the welfare polynomial evaluated at a cutoff ``c_bar``.
        """
        return float(self._welfare(c_bar))

    def welfare_polynomial(self):
        """
        Returns the welfare as a ``numpy.polynomial.Polynomial`` in
        ``c_bar``.
        """
        return self._welfare


def closed_form_policy(A=1, B=1, alpha=0):
    """
    Returns the :class:`ClosedFormLinearUniform` solution for demand
    ``P(q) = A - B q`` (with ``A <= 1`` and ``A <= 2B``), uniform costs, no
    fixed cost and welfare weight ``alpha``.
    """
    return ClosedFormLinearUniform(A, B, alpha)


class GridMechanism(object):
    """
    A direct mechanism with a step allocation: ``q(c) = q_i`` on each of
    ``N`` cost cells ``[c_i, c_i + dc)``, with profit derived from the
    envelope condition, ``Pi_i = dc * sum_{j >= i} q_j``.

    Created by :meth:`brute_force_mechanism()` or a
    :class:`GridMechanismSolver`.
    """
    def __init__(self, env, q, objective, converged, iterations):
        self._env = env
        self._q = pricecap.vector(q)
        n = len(self._q)
        self._edges = pricecap.vector(np.linspace(0, 1, n + 1))
        self._dc = 1 / n
        self._pi = pricecap.vector(_tail_sums(self._q, self._dc))
        self._objective = float(objective)
        self._converged = bool(converged)
        self._iterations = int(iterations)

    def converged(self):
        """ Returns ``True`` if the optimisation met its tolerance. """
        return self._converged

    def costs(self):
        """ Returns the left edges ``c_i`` of the cost cells. """
        return self._edges[:-1]

    def edges(self):
        """ Returns all ``N + 1`` cell edges. """
        return self._edges

    def environment(self):
        """ Returns the environment this mechanism was computed for. """
        return self._env

    def iterations(self):
        """ Returns the number of optimiser iterations used. """
        return self._iterations

    def monotonicity_violation(self):
        """ Returns the largest increase ``q_{i+1} - q_i`` (0 if none). """
        return max(0.0, float(np.max(np.diff(self._q))))

    def objective(self):
        """ Returns the expected weighted surplus of this mechanism. """
        return self._objective

    def pi(self):
        """ Returns the profits ``Pi_i`` at the left cell edges. """
        return self._pi

    def q(self):
        """ Returns the cell quantities ``q_i``. """
        return self._q

    def quantity(self, c):
        """ Returns the step allocation ``q(c)``. """
        c = float(c)
        if not 0 <= c <= 1:
            raise ValueError('Cost must be in [0, 1].')
        i = min(int(c / self._dc), len(self._q) - 1)
        return float(self._q[i])

    def slack(self):
        """
        Returns the no-subsidy slack of every cell,
        ``q_i [P(q_i) - c_i] - k 1{q_i > 0} - Pi_i``.
        """
        q = self._q
        demand = self._env.demand()
        return pricecap.vector(
            q * (demand.price(q) - self.costs()) - self._env.k() * (q > 0)
            - self._pi)


def _tail_sums(q, dc):
    """ Returns ``dc * sum_{j >= i} q_j`` for every ``i``. """
    return dc * np.cumsum(q[::-1])[::-1]


class _GridProblem(pricecap.Loggable):
    """
    The brute-force program over step allocations: objective, gradient and
    constraints, with cell integrals of the cost distribution precomputed.
    """
    def __init__(self, env, n):
        self._env = env
        self._n = n
        self._dc = 1 / n
        self._edges = np.linspace(0, 1, n + 1)
        cost = env.cost()
        self._mass = np.diff(cost.cdf(self._edges))
        self._mean = pricecap.interval_integrals(
            lambda c: c * cost.pdf(c), self._edges)
        self._cdf = pricecap.interval_integrals(cost.cdf, self._edges)
        self._q_max = env.demand().q_max()

        # Constant parts of the constraint Jacobians
        self._monotone = np.eye(n - 1, n) - np.eye(n - 1, n, 1)
        self._tail = -self._dc * np.triu(np.ones((n, n)), 1)
        self._current = None

    def bounds(self):
        return [(0, self._q_max)] * self._n

    def clip(self, q):
        return np.clip(q, 0, self._q_max)

    def constraints(self):
        return [
            {'type': 'ineq',
             'fun': lambda q: np.dot(self._monotone, q),
             'jac': lambda q: self._monotone},
            {'type': 'ineq', 'fun': self.no_subsidy,
             'jac': self.no_subsidy_jacobian},
        ]

    def objective(self, q):
        """ Returns the exact expected weighted surplus of ``q``. """
        q = self.clip(q)
        demand = self._env.demand()
        k = self._env.k() * (q > 0)
        return float(np.sum(
            (demand.consumer_value(q) - k) * self._mass - q * self._mean
            - (1 - self._env.alpha()) * q * self._cdf))

    def gradient(self, q):
        q = self.clip(q)
        return (self._env.demand().price(q) * self._mass - self._mean
                - (1 - self._env.alpha()) * self._cdf)

    def _log_init(self, logger):
        """ See :meth:`Loggable._log_init()`. """
        logger.add_float('Min slack')
        logger.add_float('Max rise')

    def _log_write(self, logger):
        """ See :meth:`Loggable._log_write()`. """
        q = self._current
        rise = np.max(np.diff(q)) if self._n > 1 else 0.0
        logger.log(np.min(self.no_subsidy(q)), max(0.0, rise))

    def no_subsidy(self, q):
        """
        Returns the slack of each cell at its right edge, where the
        constraint is tightest. A positive fixed cost is smoothed near zero
        output.
        """
        q = self.clip(q)
        demand = self._env.demand()
        k = self._env.k() * np.minimum(1, q / 1e-9)
        tail = _tail_sums(q, self._dc) - q * self._dc
        return q * (demand.price(q) - self._edges[1:]) - k - tail

    def no_subsidy_jacobian(self, q):
        q = self.clip(q)
        jac = self._tail.copy()
        jac[np.diag_indices(self._n)] = (
            self._env.demand().marginal_revenue(q) - self._edges[1:])
        return jac

    def project(self, q):
        """
        Projects ``q`` onto nonincreasing allocations, then shrinks cells
        from the top down toward the next cell until every no-subsidy
        constraint holds.
        """
        q = isotonic_regression(self.clip(q), increasing=False)
        q = self.clip(q)
        demand = self._env.demand()
        k = self._env.k()

        def slack(x, c, tail):
            return x * (demand.price(x) - c) - (k if x > 0 else 0) - tail

        tail = 0.0
        for i in range(self._n - 1, -1, -1):
            nxt = q[i + 1] if i + 1 < self._n else 0.0
            c = self._edges[i + 1]
            if slack(q[i], c, tail) < 0:
                lo, hi = nxt, q[i]
                for j in range(100):
                    mid = 0.5 * (lo + hi)
                    if slack(mid, c, tail) >= 0:
                        lo = mid
                    else:
                        hi = mid
                    if hi - lo <= 1e-15 * max(1, hi):
                        break
                q[i] = lo
            tail += q[i] * self._dc
        self._current = q
        return q

    def start(self, seed=None):
        """
        Returns the laissez-faire step allocation (evaluated at cell
        midpoints), randomly scaled down by up to 5% if a seed is given.
        """
        cutoff = pricecap.lf_cutoff(self._env)
        mid = 0.5 * (self._edges[:-1] + self._edges[1:])
        q = np.array([
            pricecap.monopoly_quantity(self._env, c) if c <= cutoff else 0
            for c in mid])
        if seed is not None:
            rng = np.random.default_rng(seed)
            q *= rng.uniform(0.95, 1, size=self._n)
        return self.project(q)


class GridMechanismSolver(object):
    """
    Maximises expected weighted surplus over step mechanisms with ``n`` cost
    cells, as an independent check on the optimal regulation.

    Each round runs a sequential quadratic programming ascent (SLSQP) on the
    cell quantities, subject to monotonicity and the no-subsidy constraints,
    and then projects the result back onto feasible allocations: onto
    nonincreasing vectors with pool-adjacent-violators, and then onto
    no-subsidy feasible ones by shrinking cells toward their successor from
    the top down. Rounds stop when the objective changes by less than
    ``1e-10``, or when the iteration budget is spent.

    The ascent step is SLSQP rather than a projected gradient step: a
    gradient step followed by projection onto monotone vectors does not keep
    the no-subsidy constraints, whose multipliers SLSQP carries.

    Example
    -------
    ::

        solver = pricecap.GridMechanismSolver(env, n=100)
        mechanism = solver.run()

    """
    def __init__(self, env, n=100):
        if not isinstance(env, pricecap.MarketEnvironment):
            raise ValueError('Environment must be a MarketEnvironment.')
        n = int(n)
        if not 2 <= n <= 200:
            raise ValueError('Number of cost cells must be in [2, 200].')
        self._env = env
        self._n = n
        self._iterations = 500
        self._seed = None
        self._tolerance = 1e-10

        # Logging
        self._log_to_screen = True
        self._log_filename = None
        self._log_csv = False

        # Post-run statistics
        self._evaluations = None
        self._time = None

    def iterations(self):
        """ Returns the maximum number of optimiser iterations. """
        return self._iterations

    def run(self):
        """
        Runs the optimisation and returns a :class:`GridMechanism`.
        """
        problem = _GridProblem(self._env, self._n)
        timer = pricecap.Timer()

        # Set up logger
        logger = pricecap.Logger()
        if not self._log_to_screen:
            logger.set_stream(None)
        if self._log_filename:
            logger.set_filename(self._log_filename, csv=self._log_csv)
        logger.add_counter('Round', max_value=self._iterations)
        logger.add_counter('Iter.', max_value=self._iterations)
        logger.add_float('Objective')
        problem._log_init(logger)
        logger.add_time('Time m:s')

        q = problem.start(self._seed)
        w = problem.objective(q)
        used = 0
        rounds = 0
        converged = False
        while used < self._iterations:
            result = scipy.optimize.minimize(
                lambda x: -problem.objective(x), q,
                jac=lambda x: -problem.gradient(x),
                bounds=problem.bounds(),
                constraints=problem.constraints(),
                method='SLSQP',
                options={
                    'maxiter': min(100, self._iterations - used),
                    'ftol': 1e-14,
                },
            )
            used += max(1, int(result.nit))
            rounds += 1
            candidate = problem.project(result.x)
            w_new = problem.objective(candidate)
            logger.log(rounds, used, w_new)
            problem._log_write(logger)
            logger.log(timer.time())

            # A worse round would repeat from the same start
            if w_new < w:
                converged = w - w_new < self._tolerance
                break
            change = w_new - w
            q, w = candidate, w_new
            if change < self._tolerance:
                converged = True
                break

        self._evaluations = used
        self._time = timer.time()
        if self._log_to_screen:
            if converged:
                print('Halting: objective change below tolerance ('
                      + str(self._tolerance) + ').')
            else:
                print('Halting: maximum number of iterations ('
                      + str(self._iterations) + ') reached.')
        return GridMechanism(self._env, q, w, converged, used)

    def set_iterations(self, iterations=500):
        """
        Sets the maximum number of optimiser iterations.
        """
        iterations = int(iterations)
        if iterations < 1:
            raise ValueError('Number of iterations must be at least 1.')
        self._iterations = iterations

    def set_log_to_file(self, filename=None, csv=False):
        """
        Enables logging to file when a filename is passed in, disables it if
        ``filename`` is ``False`` or ``None``.
        """
        if filename:
            self._log_filename = str(filename)
            self._log_csv = True if csv else False
        else:
            self._log_filename = None
            self._log_csv = False

    def set_log_to_screen(self, enabled):
        """
        Enables or disables logging to screen.
        """
        self._log_to_screen = True if enabled else False

    def set_seed(self, seed=None):
        """
        Sets a seed for the random perturbation of the starting allocation,
        or disables the perturbation if ``seed`` is ``None``.
        """
        self._seed = None if seed is None else int(seed)

    def time(self):
        """
        Returns the time needed for the last run, in seconds, or ``None`` if
        the solver hasn't run yet.
        """
        return self._time


def brute_force_mechanism(env, n=100, iters=500, seed=None):
    """
    Runs a :class:`GridMechanismSolver` with ``n`` cost cells and at most
    ``iters`` iterations, with screen logging disabled, and returns the
    resulting :class:`GridMechanism`.
    """
    solver = GridMechanismSolver(env, n)
    solver.set_iterations(iters)
    solver.set_seed(seed)
    solver.set_log_to_screen(False)
    return solver.run()


class OracleComparison(object):
    """
    A side-by-side comparison of a :class:`RegulationPolicy` with the
    reference solutions available for its environment.
    """
    def __init__(self, rows):
        self._rows = [tuple(r) for r in rows]

    def rows(self):
        """
        Returns the rows of the comparison, as tuples ``(quantity, solver,
        closed form, brute force)``; unavailable entries are ``None``.
        """
        return list(self._rows)

    def __str__(self):
        return tabulate(
            [['-' if x is None else x for x in r] for r in self._rows],
            headers=['quantity', 'solver', 'closed form', 'brute force'],
            numalign='left',
            floatfmt='.8g',
        )


def compare_with_oracles(policy, mechanism=None):
    """
    Compares a :class:`RegulationPolicy` with a :class:`GridMechanism` (if
    given) and, for linear demand with uniform costs and no fixed cost, with
    the closed form. Returns an :class:`OracleComparison`.
    """
    env = policy.environment()
    closed = None
    demand = env.demand()
    if (isinstance(demand, pricecap.LinearDemand)
            and isinstance(env.cost(), pricecap.UniformCost)
            and env.k() == 0):
        p = demand.parameters()
        try:
            closed = closed_form_policy(p['A'], p['B'], env.alpha())
        except ValueError:
            closed = None

    def cf(name):
        return None if closed is None else getattr(closed, name)()

    rows = [
        ('c_bar', policy.c_bar(), cf('c_bar'), None),
        ('c_hat', policy.c_hat(), cf('c_hat'), None),
        ('c_L', policy.c_low(), cf('c_low'), None),
        ('p_hat', policy.p_hat(), cf('p_hat'), None),
        ('welfare', policy.welfare(), cf('welfare'),
         None if mechanism is None else mechanism.objective()),
    ]
    if mechanism is not None:
        mid = 0.5 * (mechanism.edges()[:-1] + mechanism.edges()[1:])
        gap = np.max(np.abs(mechanism.q() - policy.quantity(mid)))
        rows.append(('max |q - q_grid|', 0.0, None, float(gap)))
    return OracleComparison(rows)
