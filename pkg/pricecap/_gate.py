#
# Deciding whether laissez-faire is optimal
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


class GateReport(object):
    """
    Outcome of the laissez-faire test of :meth:`gate()`.

    Laissez-faire is optimal if and only if the margin

    ``M(c) = [P(q_LF(c)) - c] f(c) - (1 - alpha) F(c)``

    is nondecreasing on ``[0, c_LF]``. The report holds the verdict, the
    sampled margin curve, and the location and size of its largest decrease
    between consecutive grid points.
    """
    def __init__(self, lf_optimal, margin_curve, worst, tolerance, m0):
        self._lf_optimal = bool(lf_optimal)
        self._margin_curve = margin_curve
        self._worst = (float(worst[0]), float(worst[1]))
        self._tolerance = float(tolerance)
        self._m0 = float(m0)

    def lf_optimal(self):
        """ Returns ``True`` if laissez-faire is optimal. """
        return self._lf_optimal

    def margin_at_zero(self):
        """ Returns ``M(0)``, which is nonnegative for every environment. """
        return self._m0

    def margin_curve(self):
        """ Returns the sampled margin ``M`` as a :class:`Schedule`. """
        return self._margin_curve

    def tolerance(self):
        """ Returns the slack allowed on each decrease of ``M``. """
        return self._tolerance

    def verdict(self):
        """ Returns a one-line description of the verdict. """
        if self._lf_optimal:
            return 'laissez-faire optimal'
        return 'intervention required'

    def worst_violation(self):
        """
        Returns a tuple ``(c, decrease)``: the grid cost at which ``M`` has
        its largest decrease to the next grid point, and the size of that
        decrease (0 if ``M`` is nondecreasing).
        """
        return self._worst

    def __str__(self):
        return tabulate(
            [
                ('verdict', self.verdict()),
                ('worst violation at c', self._worst[0]),
                ('worst decrease', self._worst[1]),
                ('M(0)', self._m0),
                ('tolerance', self._tolerance),
            ],
            numalign='left',
            floatfmt='.6g',
        )


def _check_match(env, lf):
    if lf.environment() is not env:
        raise ValueError(
            'Laissez-faire schedule was computed for a different environment.')


def markup_curve(env, lf, grid_n=1025):
    """
    Returns the laissez-faire markup ``P(q_LF(c)) - c`` sampled on a uniform
    grid of ``grid_n`` costs in ``[0, c_LF]``, as a :class:`Schedule`.
    """
    _check_match(env, lf)
    grid = np.linspace(0, lf.cutoff(), int(grid_n))
    return pricecap.Schedule(grid, _markups(env, grid))


def _markups(env, grid):
    """ Returns the exact laissez-faire markup at each cost in ``grid``. """
    demand = env.demand()
    out = np.zeros(len(grid))
    for i, c in enumerate(grid):
        q = pricecap.monopoly_quantity(env, c)
        out[i] = demand.price(q) - c if q > 0 else 0
    return out


def gate(env, lf, grid_n=1025, tol=1e-9):
    """
    Tests whether laissez-faire is optimal for a :class:`MarketEnvironment`,
    given its :class:`LaissezFaireSchedule` ``lf``, and returns a
    :class:`GateReport`.

    The margin ``M`` is evaluated on a uniform grid of ``grid_n`` points in
    ``[0, c_LF]``, and laissez-faire is declared optimal if no step between
    consecutive grid points decreases ``M`` by more than ``tol``.
    """
    _check_match(env, lf)
    grid_n = int(grid_n)
    if grid_n < 2:
        raise ValueError('Grid size must be at least 2.')
    tol = float(tol)
    if not tol >= 0:
        raise ValueError('Tolerance must be nonnegative.')

    cost = env.cost()
    grid = np.linspace(0, lf.cutoff(), grid_n)
    m = _markups(env, grid) * cost.pdf(grid) - (1 - env.alpha()) * cost.cdf(
        grid)

    steps = np.diff(m)
    i = int(np.argmin(steps))
    worst = (grid[i], max(0.0, -steps[i]))
    lf_optimal = steps[i] >= -tol and m[0] >= -1e-12
    if lf.cutoff() <= 0:
        # Only the lowest type can produce
        grid, m = np.array([0.0, 1.0]), np.array([m[0], m[0]])
    return GateReport(lf_optimal, pricecap.Schedule(grid, m), worst, tol, m[0])
