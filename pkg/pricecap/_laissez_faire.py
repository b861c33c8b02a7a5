#
# The unregulated monopoly benchmark
#
# This file is part of PRICECAP which is
# released under the BSD 3-clause license. See accompanying LICENSE.md for
# copyright notice and full license details.
#
from __future__ import absolute_import, division
from __future__ import print_function, unicode_literals
import logging
import pricecap
import numpy as np
import scipy.integrate
import scipy.optimize


def _check_cost(c):
    c = float(c)
    if not 0 <= c <= 1:
        raise ValueError('Cost must be in [0, 1].')
    return c


def monopoly_quantity(env, c):
    """
    Returns the quantity ``q`` at which marginal revenue ``P(q) + q P'(q)``
    equals the marginal cost ``c``, ignoring the fixed cost.

    Returns 0 if marginal revenue at (nearly) zero output does not exceed
    ``c``.
    """
    c = _check_cost(c)
    demand = env.demand()
    q_max = demand.q_max()
    q_lo = 1e-12 * min(1, q_max)
    q_hi = q_max * (1 - 1e-12)

    def excess(q):
        return float(demand._price(q) + q * demand._derivative(q)) - c

    if excess(q_lo) <= 0:
        return 0.0
    if excess(q_hi) >= 0:
        return q_hi
    return scipy.optimize.brentq(excess, q_lo, q_hi, xtol=1e-13, maxiter=500)


def gross_profit(env, c):
    """
    Returns the unregulated monopoly profit ``[P(q) - c] q`` at the monopoly
    quantity ``q`` for cost ``c``, before the fixed cost.
    """
    q = monopoly_quantity(env, c)
    return (env.demand().price(q) - c) * q


def lf_cutoff(env):
    """
    Returns the highest cost type that still covers its fixed cost when
    unregulated, ``c_LF = max{c : gross_profit(c) >= k}``, found by bisection
    to ``1e-10``. Returns 1 if even the highest cost covers ``k``.

    Raises an :class:`InfeasibleEnvironmentError` if the lowest cost type
    cannot cover ``k``. If it covers ``k`` exactly, a warning is logged and 0
    is returned.
    """
    k = env.k()
    pi0 = gross_profit(env, 0)
    if pi0 < k - 1e-12:
        raise pricecap.InfeasibleEnvironmentError(
            'Fixed cost k = ' + str(k) + ' exceeds the largest monopoly'
            ' profit ' + str(pi0) + ': no type of firm can produce.')
    if pi0 <= k + 1e-12:
        log = logging.getLogger(__name__)
        log.warning(
            'Fixed cost equals the monopoly profit of the lowest cost type:'
            ' laissez-faire cutoff is at the boundary 0.')
        return 0.0
    if gross_profit(env, 1) >= k:
        return 1.0
    return scipy.optimize.bisect(
        lambda c: gross_profit(env, c) - k, 0, 1, xtol=1e-10, maxiter=200)


def expected_welfare(env, quantity, c_bar, profit_at_cutoff=0, points=None):
    """
    Returns the expected weighted surplus ``E[CS + alpha * profit]`` of an
    incentive compatible allocation ``quantity(c)`` that serves exactly the
    types ``c <= c_bar``, where ``profit_at_cutoff`` is the profit of the
    highest served type.

    Expected profit is rewritten by parts, so that the result is

    ``int_0^c_bar [(V(q) - c q - k) f - (1 - alpha) q F] dc
    - (1 - alpha) F(c_bar) profit_at_cutoff``.

    Optional ``points`` mark kinks of ``quantity`` to help the quadrature.
    """
    c_bar = float(c_bar)
    if c_bar <= 0:
        return 0.0
    demand = env.demand()
    cost = env.cost()
    alpha = env.alpha()
    k = env.k()

    def integrand(c):
        q = quantity(c)
        if q <= 0:
            return 0.0
        surplus = demand.consumer_value(q) - c * q - k
        return surplus * cost.pdf(c) - (1 - alpha) * q * cost.cdf(c)

    if points is not None:
        points = [x for x in points if 0 < x < c_bar]
    w = scipy.integrate.quad(
        integrand, 0, c_bar, points=points or None, epsabs=1e-11,
        epsrel=1e-11, limit=400)[0]
    return w - (1 - alpha) * cost.cdf(c_bar) * float(profit_at_cutoff)


class LaissezFaireSchedule(object):
    """
    The unregulated monopoly outcome, sampled on a uniform cost grid: the
    cutoff ``c_LF``, and the quantity, price and (net) profit of every type.

    Types above the cutoff produce nothing, have profit 0, and are recorded
    at price ``v_bar``. Schedules evaluate off-grid with monotone
    interpolation, with an exact jump at the cutoff when the fixed cost is
    positive.

    Created by :meth:`lf_schedule()`.
    """
    def __init__(self, env, cutoff, grid, q, p, profit):
        self._env = env
        self._cutoff = float(cutoff)
        self._grid = pricecap.vector(grid)
        self._q = pricecap.vector(q)
        self._p = pricecap.vector(p)
        self._profit = pricecap.vector(profit)

        # Insert the cutoff as a (possible) jump point
        active = self._grid <= self._cutoff
        if 0 < self._cutoff < 1:
            below = self._grid < self._cutoff
            q_c = monopoly_quantity(env, self._cutoff)
            p_c = env.demand().price(q_c)
            x = np.concatenate((
                self._grid[below], [self._cutoff, self._cutoff],
                self._grid[~active]))
            y_q = np.concatenate((self._q[below], [q_c, 0], self._q[~active]))
            y_p = np.concatenate((
                self._p[below], [p_c, env.demand().v_bar()],
                self._p[~active]))
            y_pi = np.concatenate((
                self._profit[below], [0, 0], self._profit[~active]))
        else:
            x, y_q, y_p, y_pi = self._grid, self._q, self._p, self._profit
        self._q_of_c = pricecap.Schedule(x, y_q)
        self._price_of_c = pricecap.Schedule(x, y_p)
        self._profit_of_c = pricecap.Schedule(x, y_pi)

    def cutoff(self):
        """ Returns the laissez-faire cutoff ``c_LF``. """
        return self._cutoff

    def environment(self):
        """ Returns the environment this schedule was computed for. """
        return self._env

    def grid(self):
        """ Returns the uniform cost grid. """
        return self._grid

    def prices(self):
        """ Returns the sampled prices. """
        return self._p

    def price_of_c(self):
        """ Returns the price schedule ``P(q_LF(c))``. """
        return self._price_of_c

    def profit_of_c(self):
        """ Returns the net profit schedule ``[P(q_LF(c)) - c] q_LF(c) - k``.
        """
        return self._profit_of_c

    def profits(self):
        """ Returns the sampled net profits. """
        return self._profit

    def q_of_c(self):
        """ Returns the quantity schedule ``q_LF(c)``. """
        return self._q_of_c

    def quantities(self):
        """ Returns the sampled quantities. """
        return self._q


def lf_schedule(env, grid_n=1025):
    """
    Samples the laissez-faire outcome of a :class:`MarketEnvironment` on a
    uniform grid of ``grid_n`` costs in ``[0, 1]`` and returns a
    :class:`LaissezFaireSchedule`.

    Raises an :class:`InfeasibleEnvironmentError` if no type covers the fixed
    cost.
    """
    grid_n = int(grid_n)
    if grid_n < 64:
        raise ValueError('Grid size must be at least 64.')
    cutoff = lf_cutoff(env)
    demand = env.demand()
    k = env.k()

    grid = np.linspace(0, 1, grid_n)
    q = np.zeros(grid_n)
    p = np.full(grid_n, demand.v_bar())
    profit = np.zeros(grid_n)
    for i, c in enumerate(grid):
        if c <= cutoff:
            q[i] = monopoly_quantity(env, c)
            if q[i] > 0:
                p[i] = demand.price(q[i])
                profit[i] = max((p[i] - c) * q[i] - k, 0)
    return LaissezFaireSchedule(env, cutoff, grid, q, p, profit)


def lf_welfare(env):
    """
    Returns the expected weighted surplus of the unregulated monopoly,
    :meth:`expected_welfare()` of the laissez-faire allocation.
    """
    cutoff = lf_cutoff(env)
    if cutoff <= 0:
        return 0.0
    top = max(gross_profit(env, cutoff) - env.k(), 0)
    return expected_welfare(
        env, lambda c: monopoly_quantity(env, c), cutoff, top)
