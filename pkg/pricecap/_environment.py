#
# Market environments and checks of their standing assumptions
#
# This file is part of PRICECAP which is
# released under the BSD 3-clause license. See accompanying LICENSE.md for
# copyright notice and full license details.
#
from __future__ import absolute_import, division
from __future__ import print_function, unicode_literals
import pricecap
import numpy as np
from tabulate import tabulate


class InfeasibleEnvironmentError(ValueError):
    """
    Raised when no type of firm can cover the fixed cost, or when a requested
    exclusion cutoff lies beyond the range where the fixed cost can be
    covered.

    Extends ``ValueError``.
    """


class MarketEnvironment(object):
    """
    A regulated market: a :class:`DemandCurve`, a :class:`CostDistribution`
    for the firm's privately known marginal cost, the regulator's welfare
    weight ``alpha`` on profit, and the firm's fixed cost ``k``.

    Parameters
    ----------
    demand
        A :class:`DemandCurve`.
    cost
        A :class:`CostDistribution`.
    alpha
        The weight of profit in the objective ``CS + alpha * profit``, in
        ``[0, 1]``.
    k
        The fixed cost of production, nonnegative.
    """
    def __init__(self, demand, cost, alpha=0, k=0):
        super(MarketEnvironment, self).__init__()
        if not isinstance(demand, pricecap.DemandCurve):
            raise ValueError('Demand must extend pricecap.DemandCurve.')
        if not isinstance(cost, pricecap.CostDistribution):
            raise ValueError('Cost must extend pricecap.CostDistribution.')
        self._demand = demand
        self._cost = cost

        self._alpha = float(alpha)
        if not 0 <= self._alpha <= 1:
            raise ValueError('Welfare weight alpha must be in [0, 1].')
        self._k = float(k)
        if not (self._k >= 0 and np.isfinite(self._k)):
            raise ValueError('Fixed cost k must be finite and nonnegative.')

    def alpha(self):
        """ Returns the welfare weight on profit. """
        return self._alpha

    def cost(self):
        """ Returns this environment's :class:`CostDistribution`. """
        return self._cost

    def demand(self):
        """ Returns this environment's :class:`DemandCurve`. """
        return self._demand

    def k(self):
        """ Returns the fixed cost. """
        return self._k

    def __str__(self):
        return (
            'MarketEnvironment(demand=' + str(self._demand)
            + ', cost=' + str(self._cost)
            + ', alpha=' + str(self._alpha) + ', k=' + str(self._k) + ')')


class AssumptionReport(object):
    """
    Verdicts and worst-case margins of the grid checks run by
    :meth:`check_assumptions()`.

    Checks are identified by name:

    ``revenue_concave``
        Revenue ``q P(q)`` is strictly concave (margin: the largest change in
        slope between consecutive grid intervals, must be negative).
    ``boundary_limits``
        ``P(0) = v_bar`` and ``P(q_max) = 0`` (margin: largest deviation).
    ``positive_revenue``
        Some quantity has revenue above the fixed cost (margin: the largest
        revenue minus ``k``, must be positive).
    ``f_nonincreasing``
        The cost density is nonincreasing (margin: largest increase).
    ``log_f_concave``
        The cost density is log-concave where positive (margin: largest
        second difference of ``log f``).
    ``inverse_demand_log_concave``
        Demand ``P^-1(p)`` is strictly log-concave (margin: largest second
        difference of ``log P^-1`` on interior prices, must be negative).
    """
    def __init__(self, rows, grid_n):
        self._rows = [(str(a), bool(b), float(c)) for a, b, c in rows]
        self._index = dict((r[0], r) for r in self._rows)
        self._grid_n = int(grid_n)

    def grid_size(self):
        """ Returns the grid size the checks were run with. """
        return self._grid_n

    def margin(self, name):
        """ Returns the worst-case margin of the check with the given name. """
        return self._row(name)[2]

    def names(self):
        """ Returns the names of all checks, in order. """
        return [r[0] for r in self._rows]

    def passed(self, name=None):
        """
        Returns ``True`` if the check with the given ``name`` passed, or, if
        no name is given, if all checks passed.
        """
        if name is None:
            return all(r[1] for r in self._rows)
        return self._row(name)[1]

    def standing_assumptions(self):
        """
        Returns ``True`` if the curve and fixed cost checks passed
        (concave revenue, boundary limits and positive revenue).
        """
        return all(self.passed(x) for x in AssumptionReport.STANDING)

    def progressivity_hypotheses(self):
        """
        Returns ``True`` if the checks under which the optimal regulation is
        known to be a progressive price cap passed: a nonincreasing and
        log-concave density and strictly log-concave demand.
        """
        return all(self.passed(x) for x in AssumptionReport.PROGRESSIVITY)

    def _row(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise ValueError('Unknown assumption check: ' + str(name))

    def __str__(self):
        return tabulate(
            [(n, 'pass' if p else 'FAIL', m) for n, p, m in self._rows],
            headers=['check', 'verdict', 'margin'],
            numalign='left',
            floatfmt='.3e',
        )


AssumptionReport.STANDING = (
    'revenue_concave', 'boundary_limits', 'positive_revenue')
AssumptionReport.PROGRESSIVITY = (
    'f_nonincreasing', 'log_f_concave', 'inverse_demand_log_concave')


def check_assumptions(env, grid_n=2049):
    """
    Checks the standing assumptions on a :class:`MarketEnvironment` and the
    hypotheses under which its optimal regulation is a progressive price cap,
    on grids of ``grid_n`` points, and returns an :class:`AssumptionReport`.

    Failures are reported, not raised.
    """
    grid_n = int(grid_n)
    if grid_n < 16:
        raise ValueError('Grid size must be at least 16.')
    demand = env.demand()
    cost = env.cost()
    v_bar = demand.v_bar()
    rows = []

    # Revenue on quantities that map to a uniform price grid, so that the
    # grid follows the curve even when q_max is huge
    p = np.linspace(v_bar, 0, grid_n)
    q = demand.quantity(p)
    q[0], q[-1] = 0, demand.q_max()
    revenue = q * p
    slopes = np.diff(revenue) / np.diff(q)
    margin = np.max(np.diff(slopes))
    rows.append(('revenue_concave', margin < 0, margin))

    margin = max(
        abs(demand.price(0) - v_bar), abs(demand.price(demand.q_max())))
    rows.append(('boundary_limits', margin <= 1e-9 * max(1, v_bar), margin))

    margin = np.max(revenue) - env.k()
    rows.append(('positive_revenue', margin > 0, margin))

    # Density checks
    c = np.linspace(0, 1, grid_n)
    f = cost.pdf(c)
    margin = np.max(np.diff(f))
    rows.append((
        'f_nonincreasing', margin <= 1e-12 * max(1, np.max(f)), margin))

    positive = f > 0
    log_f = np.log(f[positive])
    margin = np.max(np.diff(log_f, 2)) if len(log_f) > 2 else 0
    rows.append(('log_f_concave', margin <= 1e-10, margin))

    log_q = np.log(q[1:-1])
    margin = np.max(np.diff(log_q, 2))
    rows.append(('inverse_demand_log_concave', margin < -1e-12, margin))

    return AssumptionReport(rows, grid_n)
