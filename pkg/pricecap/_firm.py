#
# Simulated firm behaviour under a tax schedule
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

# Band around the benchmark price classified as bunching
BUNCH_BAND = 1e-6


class BestResponse(object):
    """
    The profit maximising price of a firm with cost ``c`` facing a tax
    schedule, the quantity it sells and its profit
    ``(p - c) q - k 1{q > 0}``.

    A firm that cannot make a positive profit stays out of the market, and is
    recorded at price ``v_bar`` with zero output and profit.
    """
    def __init__(self, c, p_opt, q_opt, profit):
        self._c = float(c)
        self._p = float(p_opt)
        self._q = float(q_opt)
        self._profit = float(profit)

    def active(self):
        """ Returns ``True`` if the firm produces. """
        return self._q > 0

    def cost(self):
        """ Returns the firm's marginal cost. """
        return self._c

    def p_opt(self):
        """ Returns the chosen price. """
        return self._p

    def profit(self):
        """ Returns the resulting profit. """
        return self._profit

    def q_opt(self):
        """ Returns the quantity sold. """
        return self._q


class _PriceSearch(object):
    """
    Regulated demand on a uniform price grid over ``[0, v_bar]``, shared by
    the best responses of all cost types to the same tax.
    """
    def __init__(self, env, tax, price_grid_n):
        price_grid_n = int(price_grid_n)
        if price_grid_n < 1024:
            raise ValueError('Price grid size must be at least 1024.')
        self._env = env
        self._tax = tax
        self._demand = env.demand()
        self._prices = np.linspace(0, self._demand.v_bar(), price_grid_n)
        self._q = pricecap.regulated_demand(tax, self._demand, self._prices)

    def step(self):
        """ Returns the price grid spacing. """
        return self._prices[1] - self._prices[0]

    def __call__(self, c):
        k = self._env.k()
        profit = (self._prices - c) * self._q - k * (self._q > 0)
        i = int(np.argmax(profit))
        n = len(self._prices)
        lo = self._prices[max(i - 1, 0)]
        hi = self._prices[min(i + 1, n - 1)]

        def f(p):
            q = float(pricecap.regulated_demand(self._tax, self._demand, p))
            return (p - c) * q - (k if q > 0 else 0)

        p, best = pricecap.golden_section_search(f, lo, hi, 1e-11)
        if profit[i] > best or (profit[i] == best and self._prices[i] < p):
            p, best = self._prices[i], profit[i]

        if best <= 1e-12:
            return BestResponse(c, self._demand.v_bar(), 0, 0)
        q = float(pricecap.regulated_demand(self._tax, self._demand, p))
        return BestResponse(c, p, q, best)


def best_response(env, tax, c, price_grid_n=4096):
    """
    Returns the :class:`BestResponse` of a firm with cost ``c`` to a
    :class:`TaxSchedule`, in a :class:`MarketEnvironment`.

    Profit is maximised over a uniform grid of ``price_grid_n`` prices in
    ``[0, v_bar]``, and the best grid price is refined by golden-section
    search between its neighbours. Ties go to the lowest price.
    """
    c = float(c)
    if not 0 <= c <= 1:
        raise ValueError('Cost must be in [0, 1].')
    return _PriceSearch(env, tax, price_grid_n)(c)


def _segment_guess(tax, response):
    """ Classifies a best response by where its price falls. """
    if not response.active():
        return pricecap.EXCLUDED
    p = response.p_opt()
    if abs(p - tax.benchmark_price()) <= BUNCH_BAND:
        return pricecap.BUNCH
    if tax.rate(p) > 1e-9:
        return pricecap.TAXED
    return pricecap.LAISSEZ_FAIRE


class AuditReport(object):
    """
    Outcome of :meth:`ic_audit()`: simulated best responses to a tax on a
    cost grid, compared with the prices and profits a
    :class:`RegulationPolicy` intends.
    """
    def __init__(self, responses, guesses, intended_prices, intended_profits,
                 price_step):
        self._responses = tuple(responses)
        self._guesses = tuple(guesses)
        self._costs = pricecap.vector([r.cost() for r in responses])
        self._intended_prices = pricecap.vector(intended_prices)
        self._intended_profits = pricecap.vector(intended_profits)
        self._price_step = float(price_step)

        prices = np.array([r.p_opt() for r in responses])
        profits = np.array([r.profit() for r in responses])
        self._deviations = pricecap.vector(
            np.abs(prices - self._intended_prices))
        self._gaps = pricecap.vector(profits - self._intended_profits)

    def costs(self):
        """ Returns the audited cost grid. """
        return self._costs

    def deviations(self):
        """ Returns the absolute price deviation at every audited cost. """
        return self._deviations

    def intended_prices(self):
        """ Returns the policy's prices ``p*(c)`` on the cost grid. """
        return self._intended_prices

    def max_price_deviation(self):
        """
        Returns the largest absolute difference between a simulated price and
        the intended price.
        """
        return float(np.max(self._deviations))

    def max_profit_gap(self):
        """
        Returns the largest absolute difference between a simulated profit
        and the intended profit.
        """
        return float(np.max(np.abs(self._gaps)))

    def price_step(self):
        """ Returns the spacing of the price grid used in the simulation. """
        return self._price_step

    def profit_gaps(self):
        """
        Returns the simulated profit minus the intended profit at every
        audited cost.
        """
        return self._gaps

    def responses(self):
        """ Returns the simulated :class:`BestResponse` objects. """
        return self._responses

    def segment_guesses(self):
        """
        Returns the segment each simulated response falls in, judged from its
        price: ``excluded``, ``bunch``, ``taxed`` or ``laissez-faire``.
        """
        return self._guesses

    def __str__(self):
        i = int(np.argmax(self._deviations))
        counts = [(x, self._guesses.count(x)) for x in (
            pricecap.LAISSEZ_FAIRE, pricecap.BUNCH, pricecap.TAXED,
            pricecap.EXCLUDED)]
        rows = [
            ('costs audited', len(self._responses)),
            ('price grid step', self._price_step),
            ('max price deviation', self._deviations[i]),
            ('  at cost', self._costs[i]),
            ('max profit gap', self.max_profit_gap()),
        ]
        rows.extend(('types ' + x, n) for x, n in counts)
        return tabulate(rows, numalign='left', floatfmt='.6g')


def ic_audit(env, tax, policy, cost_grid_n=1025, price_grid_n=4096,
             parallel=False):
    """
    Simulates the best response to ``tax`` of every type on a uniform grid
    of ``cost_grid_n`` costs, and compares it with the price and profit of
    ``policy``. Returns an :class:`AuditReport`.

    Best responses are independent, and can be evaluated in parallel (see
    :meth:`evaluate()`).
    """
    if policy.environment() is not env:
        raise ValueError('Policy was computed for a different environment.')
    cost_grid_n = int(cost_grid_n)
    if cost_grid_n < 2:
        raise ValueError('Cost grid size must be at least 2.')
    search = _PriceSearch(env, tax, price_grid_n)
    c = np.linspace(0, 1, cost_grid_n)
    responses = pricecap.evaluate(search, list(c), parallel)
    guesses = [_segment_guess(tax, r) for r in responses]
    return AuditReport(
        responses, guesses, policy.price(c), policy.profit(c), search.step())
