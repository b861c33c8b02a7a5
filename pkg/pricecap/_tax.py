#
# Unit tax schedules, the optimal progressive price cap, and progressivity
# checks
#
# This file is part of PRICECAP which is
# released under the BSD 3-clause license. See accompanying LICENSE.md for
# copyright notice and full license details.
#
from __future__ import absolute_import, division
from __future__ import print_function, unicode_literals
import pricecap
import numpy as np
import scipy.interpolate
from tabulate import tabulate


class TaxSchedule(object):
    """
    Abstract base class for unit tax schedules ``tau(p)``, charged per unit
    sold at firm price ``p`` so that consumers pay ``p + tau(p)``.

    Every schedule has a benchmark price ``p_hat`` at or below which no tax
    is charged. Taxes are evaluated with :meth:`rate()` (or by calling the
    schedule), for scalar or array prices.

    Parameters
    ----------
    benchmark
        The benchmark price ``p_hat >= 0``.
    """
    def __init__(self, benchmark):
        benchmark = float(benchmark)
        if not benchmark >= 0:
            raise ValueError('Benchmark price must be nonnegative.')
        self._benchmark = benchmark

    def __call__(self, p):
        return self.rate(p)

    def benchmark_price(self):
        """ Returns the benchmark price ``p_hat``. """
        return self._benchmark

    def knots(self, v_bar, n=1025):
        """
        Returns a tuple ``(prices, taxes)`` sampled at ``n`` uniformly spaced
        prices from 0 to :meth:`prohibitive_above()`, or to ``v_bar`` if this
        schedule is never prohibitive.
        """
        n = int(n)
        if n < 2:
            raise ValueError('Number of knots must be at least 2.')
        top = self.prohibitive_above()
        if top is None:
            top = float(v_bar)
        p = np.linspace(0, top, n)
        return pricecap.vector(p), pricecap.vector(self.rate(p))

    def prohibitive_above(self):
        """
        Returns the price above which the tax is prohibitive (pinning the
        consumer price at or above ``v_bar``), or ``None``.
        """
        return None

    def rate(self, p):
        """
        Returns the unit tax ``tau(p)`` at firm price ``p >= 0``.
        """
        p = np.asarray(p, dtype=float)
        if np.any(np.isnan(p)) or np.any(p < -1e-12):
            raise ValueError('Prices must be nonnegative.')
        y = np.asarray(self._rate(np.maximum(p, 0)), dtype=float)
        if y.ndim == 0:
            return float(y)
        return y

    def shifted(self, delta):
        """
        Returns a copy of this schedule, with the tax raised by ``delta`` on
        its taxation region (above the benchmark and, if it has one, not above
        the prohibitive price).
        """
        return ShiftedTax(self, delta)

    def _rate(self, p):
        """ See :meth:`rate()`. """
        raise NotImplementedError


class ZeroTax(TaxSchedule):
    """
    The laissez-faire schedule ``tau = 0``: every price is delegated to the
    firm. Its benchmark is the highest willingness to pay ``v_bar``.

    Extends :class:`TaxSchedule`.
    """
    def __init__(self, v_bar):
        super(ZeroTax, self).__init__(v_bar)

    def _rate(self, p):
        return np.zeros(p.shape)


class LinearTax(TaxSchedule):
    """
    A tax that is zero up to a benchmark price ``p_hat`` and
    ``level + slope * (p - p_hat)`` above it.

    With ``slope = 0`` and ``level >= v_bar - p_hat`` this is a hard price cap
    at ``p_hat``; with ``level = 0`` and ``slope > 0`` it is a linear
    progressive tax.

    Extends :class:`TaxSchedule`.
    """
    def __init__(self, benchmark, slope, level=0):
        super(LinearTax, self).__init__(benchmark)
        self._slope = float(slope)
        self._level = float(level)
        if self._slope < 0 or self._level < 0:
            raise ValueError('Slope and level must be nonnegative.')

    def level(self):
        """ Returns the tax just above the benchmark. """
        return self._level

    def slope(self):
        """ Returns the slope of the tax above the benchmark. """
        return self._slope

    def _rate(self, p):
        return np.where(
            p > self._benchmark,
            self._level + self._slope * (p - self._benchmark), 0.0)


class TabulatedTax(TaxSchedule):
    """
    A tax interpolated monotonically (PCHIP) through knots ``(prices,
    taxes)``, zero at or below the benchmark.

    Beyond the last knot the tax is held at its last value, or, if a
    ``sentinel`` is given, set to that (prohibitive) value.

    Extends :class:`TaxSchedule`.
    """
    def __init__(self, prices, taxes, benchmark, sentinel=None):
        super(TabulatedTax, self).__init__(benchmark)
        p = np.array(prices, dtype=float, copy=True)
        t = np.array(taxes, dtype=float, copy=True)
        if p.ndim != 1 or p.shape != t.shape or len(p) < 2:
            raise ValueError(
                'Prices and taxes must be 1d sequences of equal length (at'
                ' least 2).')
        if np.any(np.diff(p) <= 0):
            raise ValueError('Prices must be strictly increasing.')
        if np.any(t < 0):
            raise ValueError('Taxes must be nonnegative.')
        self._prices = pricecap.vector(p)
        self._taxes = pricecap.vector(t)
        self._sentinel = None if sentinel is None else float(sentinel)
        self._interpolant = scipy.interpolate.PchipInterpolator(p, t)

    def prohibitive_above(self):
        """ See :meth:`TaxSchedule.prohibitive_above()`. """
        return None if self._sentinel is None else self._prices[-1]

    def _rate(self, p):
        x = np.clip(p, self._prices[0], self._prices[-1])
        tau = np.maximum(self._interpolant(x), 0)
        if self._sentinel is not None:
            tau = np.where(p > self._prices[-1], self._sentinel, tau)
        return np.where(p > self._benchmark, tau, 0.0)


class ShiftedTax(TaxSchedule):
    """
    A tax schedule raised by a constant on the taxation region of another
    schedule. Created by :meth:`TaxSchedule.shifted()`.

    Extends :class:`TaxSchedule`.
    """
    def __init__(self, base, delta):
        super(ShiftedTax, self).__init__(base.benchmark_price())
        self._base = base
        self._delta = float(delta)

    def prohibitive_above(self):
        """ See :meth:`TaxSchedule.prohibitive_above()`. """
        return self._base.prohibitive_above()

    def _rate(self, p):
        tau = self._base._rate(p)
        region = p > self._benchmark
        top = self._base.prohibitive_above()
        if top is not None:
            region &= p <= top
        return np.where(region, np.maximum(tau + self._delta, 0), tau)


class OptimalTax(TaxSchedule):
    """
    The unit tax implementing a :class:`RegulationPolicy`: zero at or below
    the benchmark ``p_hat``, and

    ``tau(p) = P(q*(c)) - p`` with ``c = p*^-1(p)``

    for prices charged on the taxed segment, up to ``p*(c_bar)``. Higher
    prices get the prohibitive tax ``v_bar``.

    The inverse ``p*^-1`` and the consumer price ``P(q*(c))`` are monotone
    cubic interpolants through exact samples of the policy, so the tax is
    exact at the knots. Created by :meth:`build_tax()`.

    Extends :class:`TaxSchedule`.
    """
    def __init__(self, policy, samples=513):
        super(OptimalTax, self).__init__(policy.p_hat())
        samples = int(samples)
        if samples < 2:
            raise ValueError('Number of samples must be at least 2.')
        c = np.linspace(policy.c_hat(), policy.c_bar(), samples)
        p = policy.price(c)
        if np.any(np.diff(p) <= 0):
            raise ValueError(
                'Firm price schedule is not strictly increasing on the taxed'
                ' segment: it cannot be inverted into a tax.')
        y = policy.consumer_price(c)

        self._v_bar = policy.environment().demand().v_bar()
        self._costs = pricecap.vector(c)
        self._prices = pricecap.vector(p)
        self._consumer = pricecap.vector(y)
        self._inverse = scipy.interpolate.PchipInterpolator(p, c)
        self._consumer_of_c = scipy.interpolate.PchipInterpolator(c, y)

    def consumer_prices(self):
        """ Returns the sampled consumer prices ``P(q*(c))``. """
        return self._consumer

    def costs(self):
        """ Returns the sampled costs on the taxed segment. """
        return self._costs

    def inverse_price(self, p):
        """
        Returns the cost type ``p*^-1(p)`` charging firm price ``p``, for
        prices in ``[p_hat, p*(c_bar)]``.
        """
        p = np.asarray(p, dtype=float)
        if np.any(p < self._prices[0] - 1e-12) or np.any(
                p > self._prices[-1] + 1e-12):
            raise ValueError('Price is not charged on the taxed segment.')
        c = self._inverse(np.clip(p, self._prices[0], self._prices[-1]))
        return float(c) if np.ndim(c) == 0 else c

    def prices(self):
        """ Returns the sampled firm prices ``p*(c)``. """
        return self._prices

    def prohibitive_above(self):
        """ See :meth:`TaxSchedule.prohibitive_above()`. """
        return self._prices[-1]

    def _rate(self, p):
        x = np.clip(p, self._prices[0], self._prices[-1])
        tau = np.maximum(self._consumer_of_c(self._inverse(x)) - x, 0)
        tau = np.where(p > self._benchmark, tau, 0.0)
        return np.where(p > self._prices[-1], self._v_bar, tau)


def build_tax(policy, samples=513):
    """
    Returns the :class:`OptimalTax` implementing a
    :class:`RegulationPolicy`.

    Raises a ``ValueError`` if the policy has no taxed segment (for example a
    :class:`LaissezFairePolicy`), or if its firm price is not strictly
    increasing there.
    """
    if policy.is_laissez_faire():
        raise ValueError(
            'A laissez-faire policy is implemented by the zero tax.')
    if not policy.c_hat() < policy.c_bar():
        raise ValueError('Policy has no taxed segment.')
    return OptimalTax(policy, samples)


def regulated_demand(tax, demand, p):
    """
    Returns the regulated demand ``P^-1(p + tau(p))`` at firm price ``p``:
    the demand at the consumer price, which is clipped to ``v_bar``.
    """
    p = np.asarray(p, dtype=float)
    if np.any(p < -1e-12):
        raise ValueError('Prices must be nonnegative.')
    p = np.maximum(p, 0)
    consumer = np.minimum(p + tax.rate(p), demand.v_bar())
    return demand.quantity(consumer)


class ProgressivityReport(object):
    """
    Outcome of :meth:`verify_progressive()`: whether a tax schedule is a
    progressive price cap, clause by clause.

    ``zero_below``
        The tax vanishes at and below the benchmark price.
    ``increasing``
        The tax is positive and strictly increasing above the benchmark (up
        to the prohibitive price, if any).
    ``soft``
        Some price above the benchmark still has positive regulated demand.
    """
    def __init__(self, benchmark, zero_below, increasing, soft, violation):
        self._benchmark = float(benchmark)
        self._zero_below = bool(zero_below)
        self._increasing = bool(increasing)
        self._soft = bool(soft)
        self._violation = float(violation)

    def benchmark_price(self):
        """ Returns the benchmark price of the checked tax. """
        return self._benchmark

    def increasing(self):
        """ See :class:`ProgressivityReport`. """
        return self._increasing

    def largest_violation(self):
        """
        Returns the largest violation found of the first two clauses: the
        largest tax below the benchmark, negative tax or decrease of the tax
        above it (0 if there is none).
        """
        return self._violation

    def progressive(self):
        """ Returns ``True`` if all three clauses hold. """
        return self._zero_below and self._increasing and self._soft

    def soft(self):
        """ See :class:`ProgressivityReport`. """
        return self._soft

    def zero_below(self):
        """ See :class:`ProgressivityReport`. """
        return self._zero_below

    def __str__(self):
        return tabulate(
            [
                ('benchmark price', self._benchmark),
                ('zero at or below benchmark', self._zero_below),
                ('positive and increasing above', self._increasing),
                ('soft (demand remains)', self._soft),
                ('largest violation', self._violation),
                ('progressive price cap', self.progressive()),
            ],
            numalign='left',
            floatfmt='.6g',
        )


def verify_progressive(tax, demand, n=1025):
    """
    Checks whether a :class:`TaxSchedule` is a progressive price cap for a
    :class:`DemandCurve`, on the knot grid of :meth:`TaxSchedule.knots()`,
    and returns a :class:`ProgressivityReport`.
    """
    p, tau = tax.knots(demand.v_bar(), n)
    p_hat = tax.benchmark_price()
    below = p <= p_hat
    above = ~below

    violation = 0.0
    worst = np.max(np.abs(tau[below])) if np.any(below) else 0.0
    zero_below = worst <= 1e-12
    violation = max(violation, worst)

    increasing = False
    if np.count_nonzero(above) > 0:
        t = tau[above]
        steps = np.diff(t)
        increasing = bool(np.all(t > 0) and np.all(steps > 0))
        violation = max(violation, -np.min(t))
        if len(steps):
            violation = max(violation, -np.min(steps))

    soft = False
    if np.any(above):
        q = regulated_demand(tax, demand, p[above])
        soft = bool(np.any(q > 1e-12))

    return ProgressivityReport(p_hat, zero_below, increasing, soft, violation)
