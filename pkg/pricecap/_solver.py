#
# The optimal regulation when laissez-faire is not optimal: inner solves for a
# fixed exclusion cutoff, the outer welfare search over cutoffs, and the
# resulting policies.
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
from tabulate import tabulate

from ._util import on_interval

# Points in the scan used to bracket the end of the bunching region
_SCAN_POINTS = 257

# Flags
NO_BUNCHING = 'no-bunching'
STRUCTURE_UNVERIFIED = 'structure-unverified'
LAISSEZ_FAIRE_FALLBACK = 'laissez-faire-fallback'

# Segment labels
LAISSEZ_FAIRE = 'laissez-faire'
BUNCH = 'bunch'
TAXED = 'taxed'
EXCLUDED = 'excluded'


def _check_cutoff(c_bar):
    c_bar = float(c_bar)
    if not 0 < c_bar <= 1:
        raise ValueError('Exclusion cutoff must be in (0, 1].')
    return c_bar


def terminal_quantity(env, c_bar):
    """
    Returns the output ``q(c_bar)`` of the highest type served, which exactly
    covers the fixed cost: ``q [P(q) - c_bar] = k``.

    For ``k = 0`` this is 0. Otherwise it is the root in ``(0, q_hat]``, where
    ``q_hat`` is the monopoly quantity at ``c_bar``, found to ``1e-12``.

    Raises an :class:`InfeasibleEnvironmentError` if no output lets a firm
    with cost ``c_bar`` cover ``k``.
    """
    c_bar = _check_cutoff(c_bar)
    k = env.k()
    if k == 0:
        return 0.0
    demand = env.demand()
    q_hat = pricecap.monopoly_quantity(env, c_bar)
    top = q_hat * (demand.price(q_hat) - c_bar)
    if top < k - 1e-12:
        raise pricecap.InfeasibleEnvironmentError(
            'A firm with cost ' + str(c_bar) + ' cannot cover the fixed cost'
            ' k = ' + str(k) + ': the cutoff exceeds the laissez-faire'
            ' cutoff.')
    if top <= k:
        return q_hat
    return scipy.optimize.brentq(
        lambda q: q * (demand.price(q) - c_bar) - k, 0, q_hat, xtol=1e-13,
        maxiter=500)


def _gamma(env, c_bar, q_terminal):
    """ Returns the constant cumulative multiplier on the taxed region. """
    cost = env.cost()
    return ((env.demand().price(q_terminal) - c_bar) * cost.pdf(c_bar)
            - (1 - env.alpha()) * cost.cdf(c_bar))


def phi(env, c, c_bar, q_terminal=None):
    """
    Returns the virtual consumer price

    ``phi(c; c_bar) = c + (1 - alpha) F(c) / f(c) + Gamma / f(c)``,

    with ``Gamma = [P(q(c_bar)) - c_bar] f(c_bar) - (1 - alpha) F(c_bar)``,
    the consumer price of type ``c`` on the taxed part of the optimal
    mechanism with cutoff ``c_bar``.

    The terminal quantity ``q(c_bar)`` is computed with
    :meth:`terminal_quantity()` unless given. Accepts scalar or array ``c``.
    Raises a ``ValueError`` where the density is zero.
    """
    c_bar = _check_cutoff(c_bar)
    if q_terminal is None:
        q_terminal = terminal_quantity(env, c_bar)
    gamma = _gamma(env, c_bar, q_terminal)
    cost = env.cost()

    def virtual_price(x):
        f = cost.pdf(x)
        if np.any(f <= 0):
            raise ValueError(
                'The cost density is zero: virtual price is undefined.')
        return x + ((1 - env.alpha()) * cost.cdf(x) + gamma) / f

    return on_interval(virtual_price, c, 1, 'cost')


class InnerSolution(object):
    """
    The optimal mechanism for a fixed exclusion cutoff ``c_bar``, as returned
    by :meth:`inner_solve()`.

    The allocation has (at most) four parts:

    - ``c < c_L``: the laissez-faire quantity ``q_LF(c)``;
    - ``c_L <= c < c_hat``: bunching at the constant quantity ``q(c_hat)``;
    - ``c_hat <= c <= c_bar``: the taxed branch ``P^-1(phi(c; c_bar))``;
    - ``c > c_bar``: exclusion, ``q = 0``.

    The profit ``Pi(c)`` is the integral of ``q`` from ``c`` to ``c_bar``, and
    the no-subsidy constraint binds exactly on ``[0, c_hat]``.
    """
    def __init__(self, env, c_bar, q_terminal, gamma, c_hat, c_low, q_flat,
                 welfare, flags, grid_n):
        self._env = env
        self._c_bar = float(c_bar)
        self._q_terminal = float(q_terminal)
        self._gamma = float(gamma)
        self._c_hat = float(c_hat)
        self._c_low = float(c_low)
        self._q_flat = float(q_flat)
        self._welfare = float(welfare)
        self._flags = tuple(flags)
        self._grid_n = int(grid_n)
        self._schedules = None

    def c_bar(self):
        """ Returns the exclusion cutoff. """
        return self._c_bar

    def c_hat(self):
        """ Returns the upper end of the bunching region. """
        return self._c_hat

    def c_low(self):
        """ Returns the upper end of the laissez-faire region (0 if absent).
        """
        return self._c_low

    def environment(self):
        """ Returns the environment this solution was computed for. """
        return self._env

    def flags(self):
        """ Returns a tuple of diagnostic flags. """
        return self._flags

    def gamma_const(self):
        """
        Returns the constant cumulative multiplier on the taxed region,
        pinned down by the terminal condition.
        """
        return self._gamma

    def grid(self):
        """ Returns the grid the schedules are sampled on. """
        return self._sample()[0]

    def pi_of_c(self):
        """ Returns the profit schedule as a :class:`Schedule`. """
        return self._sample()[2]

    def profit(self, c):
        """ Returns the profit ``Pi(c)``, for a scalar or array of costs. """
        return on_interval(self._profits, c, 1, 'cost')

    def q_flat(self):
        """ Returns the bunching quantity ``q(c_hat)``. """
        return self._q_flat

    def q_of_c(self):
        """ Returns the allocation as a :class:`Schedule`. """
        return self._sample()[1]

    def q_terminal(self):
        """ Returns the output of the highest type served. """
        return self._q_terminal

    def quantity(self, c):
        """ Returns the allocation ``q(c)`` for a scalar or array of costs. """
        return on_interval(self._quantities, c, 1, 'cost')

    def slack(self, c):
        """
        Returns the no-subsidy slack

        ``g(c) = q(c) [P(q(c)) - c] - k 1{q(c) > 0} - Pi(c)``.
        """
        def slack(x):
            q = self._quantities(x)
            active = q > 0
            return (q * (self._env.demand().price(q) - x)
                    - self._env.k() * active - self._profits(x))
        return on_interval(slack, c, 1, 'cost')

    def taxed_quantity(self, c):
        """
        Returns the taxed branch ``P^-1(phi(c; c_bar))`` (clipped to the
        price range), for any cost with a positive density.
        """
        demand = self._env.demand()
        p = phi(self._env, c, self._c_bar, self._q_terminal)
        return demand.quantity(np.clip(p, 0, demand.v_bar()))

    def welfare(self):
        """ Returns the expected weighted surplus. """
        return self._welfare

    def _profits(self, c):
        shape = np.shape(c)
        c = np.asarray(c, dtype=float).ravel()
        k = self._env.k()
        demand = self._env.demand()
        out = np.zeros(c.shape)

        for i in np.nonzero(c < self._c_low)[0]:
            q = pricecap.monopoly_quantity(self._env, c[i])
            out[i] = q * (demand.price(q) - c[i]) - k

        bunch = (c >= self._c_low) & (c < self._c_hat)
        q = self._q_flat
        out[bunch] = q * (demand.price(q) - c[bunch]) - k

        taxed = (c >= self._c_hat) & (c <= self._c_bar)
        if np.any(taxed):
            out[taxed] = self._taxed_profits(c[taxed])
        return out.reshape(shape)

    def _quantities(self, c):
        shape = np.shape(c)
        c = np.asarray(c, dtype=float).ravel()
        out = np.zeros(c.shape)
        for i in np.nonzero(c < self._c_low)[0]:
            out[i] = pricecap.monopoly_quantity(self._env, c[i])
        out[(c >= self._c_low) & (c < self._c_hat)] = self._q_flat
        taxed = (c >= self._c_hat) & (c <= self._c_bar)
        if np.any(taxed):
            out[taxed] = self.taxed_quantity(c[taxed])
        return out.reshape(shape)

    def _sample(self):
        """ Samples the schedules, with a jump at ``c_bar`` if needed. """
        if self._schedules is None:
            grid = np.linspace(0, 1, self._grid_n)
            x = np.unique(np.concatenate((
                grid, [self._c_low, self._c_hat, self._c_bar])))
            q = self._quantities(x)
            pi = self._profits(x)
            if self._q_terminal > 0 and self._c_bar < 1:
                i = int(np.searchsorted(x, self._c_bar)) + 1
                x = np.insert(x, i, self._c_bar)
                q = np.insert(q, i, 0)
                pi = np.insert(pi, i, 0)
            self._schedules = (
                pricecap.vector(x),
                pricecap.Schedule(x, q),
                pricecap.Schedule(x, pi),
            )
        return self._schedules

    def _taxed_profits(self, c):
        """
        Integrates the taxed branch from each ``c`` to ``c_bar``, with
        Gauss-Legendre quadrature on a grid refined between the given costs.
        """
        base = np.linspace(self._c_hat, self._c_bar, 65)
        x = np.unique(np.concatenate((np.ravel(c), base)))
        tails = pricecap.tail_integrals(self.taxed_quantity, x)
        return tails[np.searchsorted(x, c)]


def _find_c_hat(env, c_bar, q_terminal, gamma_solution):
    """
    Locates the end of the bunching region: the largest cost below ``c_bar``
    where the no-subsidy slack of the taxed branch crosses from nonpositive
    to positive. Returns ``(c_hat, flags)``.
    """
    demand = env.demand()
    k = env.k()
    flags = []

    s = np.linspace(0, c_bar, _SCAN_POINTS)
    q = gamma_solution.taxed_quantity(s)
    pi = pricecap.tail_integrals(gamma_solution.taxed_quantity, s)
    g = q * (demand.price(q) - s) - k * (q > 0) - pi

    # The slack vanishes at c_bar itself; look at the interior
    positive = g[:-1] > 0
    up = np.nonzero(~positive[:-1] & positive[1:])[0]
    down = np.nonzero(positive[:-1] & ~positive[1:])[0]

    if np.all(positive):
        return 0.0, [NO_BUNCHING]
    if len(up) == 0:
        flags.append(STRUCTURE_UNVERIFIED)
        return float(s[-2]), flags
    if len(up) > 1 or len(down) > 0:
        flags.append(STRUCTURE_UNVERIFIED)
    i = int(up[-1])

    def slack(x):
        qx = float(gamma_solution.taxed_quantity(x))
        tail = scipy.integrate.quad(
            gamma_solution.taxed_quantity, x, s[i + 1], epsabs=1e-14)[0]
        return (qx * (demand.price(qx) - x) - k * (qx > 0)
                - (pi[i + 1] + tail))

    lo, hi = float(s[i]), float(s[i + 1])
    g_lo, g_hi = slack(lo), slack(hi)
    if g_lo <= 0 < g_hi:
        c_hat = scipy.optimize.brentq(slack, lo, hi, xtol=1e-12, maxiter=200)
    else:
        c_hat = lo + (hi - lo) * g[i] / (g[i] - g[i + 1])
    return c_hat, flags


def inner_solve(env, c_bar, grid_n=1025, cutoff=None):
    """
    Solves for the optimal mechanism of a :class:`MarketEnvironment` among
    those that exclude exactly the types above ``c_bar``, and returns an
    :class:`InnerSolution`.

    The taxed branch ``q(c) = P^-1(phi(c; c_bar))`` is computed from the
    terminal condition. The end ``c_hat`` of the bunching region is the root
    of the no-subsidy slack of that branch, bracketed on a scan of ``[0,
    c_bar]`` and refined to ``1e-12``; below ``c_hat`` the quantity is held at
    ``q(c_hat)`` until it meets the laissez-faire quantity at ``c_L``.

    If the slack never becomes nonpositive, there is no bunching (``c_hat =
    0``) and the solution is flagged ``no-bunching``; if it changes sign more
    than once, the largest root is used and the solution is flagged
    ``structure-unverified``.

    Parameters
    ----------
    env
        A :class:`MarketEnvironment`.
    c_bar
        The exclusion cutoff, in ``(0, c_LF]``.
    grid_n
        The number of uniform grid points on ``[0, 1]`` at which the
        schedules of the solution are sampled.
    cutoff
        The laissez-faire cutoff, if already known.
    """
    c_bar = _check_cutoff(c_bar)
    grid_n = int(grid_n)
    if grid_n < 64:
        raise ValueError('Grid size must be at least 64.')
    if cutoff is None:
        cutoff = pricecap.lf_cutoff(env)
    if c_bar > cutoff + 1e-12:
        raise pricecap.InfeasibleEnvironmentError(
            'Exclusion cutoff ' + str(c_bar) + ' exceeds the laissez-faire'
            ' cutoff ' + str(cutoff) + '.')

    demand = env.demand()
    q_terminal = terminal_quantity(env, c_bar)
    gamma = _gamma(env, c_bar, q_terminal)

    # A solution with only the taxed branch, to evaluate it
    branch = InnerSolution(
        env, c_bar, q_terminal, gamma, 0, 0, 0, 0, (), grid_n)
    c_hat, flags = _find_c_hat(env, c_bar, q_terminal, branch)

    q_flat = float(branch.taxed_quantity(c_hat))
    c_low = 0.0
    if c_hat > 0:
        c_low = float(demand.marginal_revenue(q_flat))
        if c_low > c_hat + 1e-12 and STRUCTURE_UNVERIFIED not in flags:
            flags.append(STRUCTURE_UNVERIFIED)
        c_low = min(max(c_low, 0.0), c_hat)

    solution = InnerSolution(
        env, c_bar, q_terminal, gamma, c_hat, c_low, q_flat, 0, flags, grid_n)
    welfare = pricecap.expected_welfare(
        env, lambda c: float(solution._quantities(c)), c_bar, 0,
        points=[c_low, c_hat])
    solution._welfare = welfare
    return solution


class RegulationPolicy(object):
    """
    Abstract base class for a solved regulation: an allocation ``q*(c)``,
    firm price ``p*(c)`` and profit ``Pi*(c)`` for every cost type, with
    cutoffs ``0 <= c_L <= c_hat <= c_bar <= 1`` dividing the types into
    laissez-faire, bunching, taxed and excluded segments.

    Firm prices follow from the allocation and profit,
    ``p*(c) = c + (Pi*(c) + k) / q*(c)``, for active types. Excluded types
    are recorded at price ``v_bar`` with zero profit and zero tax.

    Parameters
    ----------
    env
        The :class:`MarketEnvironment` regulated.
    grid_n
        The number of uniform grid points on ``[0, 1]`` used for sampled
        schedules.
    flags
        A sequence of diagnostic flags.
    """
    def __init__(self, env, grid_n=1025, flags=()):
        self._env = env
        self._grid_n = int(grid_n)
        if self._grid_n < 2:
            raise ValueError('Grid size must be at least 2.')
        self._flags = tuple(flags)
        self._samples = None

    def c_bar(self):
        """ Returns the exclusion cutoff. """
        raise NotImplementedError

    def c_hat(self):
        """ Returns the upper end of the bunching segment. """
        raise NotImplementedError

    def c_low(self):
        """ Returns the upper end of the laissez-faire segment. """
        raise NotImplementedError

    def consumer_price(self, c):
        """
        Returns the consumer price ``P(q*(c))`` (``v_bar`` for excluded types).
        """
        return on_interval(self._consumer_prices, c, 1, 'cost')

    def environment(self):
        """ Returns the regulated environment. """
        return self._env

    def flags(self):
        """ Returns a tuple of diagnostic flags. """
        return self._flags

    def grid(self):
        """ Returns the uniform sample grid. """
        return self._sample()[0]

    def is_laissez_faire(self):
        """ Returns ``True`` if this policy leaves the firm unregulated. """
        return False

    def p_hat(self):
        """ Returns the benchmark price. """
        raise NotImplementedError

    def p_star(self):
        """ Returns the firm price schedule as a :class:`Schedule`. """
        return self._sample()[4]

    def pi_star(self):
        """ Returns the profit schedule as a :class:`Schedule`. """
        return self._sample()[5]

    def price(self, c):
        """ Returns the firm price ``p*(c)``. """
        return on_interval(self._prices, c, 1, 'cost')

    def profit(self, c):
        """ Returns the firm profit ``Pi*(c)``. """
        return on_interval(self._profits, c, 1, 'cost')

    def q_star(self):
        """ Returns the allocation as a :class:`Schedule`. """
        return self._sample()[3]

    def quantity(self, c):
        """ Returns the allocation ``q*(c)``. """
        return on_interval(self._quantities, c, 1, 'cost')

    def segment(self, c):
        """
        Returns the segment label of a cost type: ``laissez-faire``,
        ``bunch``, ``taxed`` or ``excluded``.
        """
        c = float(c)
        if not 0 <= c <= 1:
            raise ValueError('Cost must be in [0, 1].')
        return self._segments(np.array([c]))[0]

    def segments(self):
        """ Returns the segment labels of the sample grid. """
        return self._sample()[1]

    def structure_verified(self):
        """
        Returns ``False`` if the solution was flagged
        ``structure-unverified``.
        """
        return STRUCTURE_UNVERIFIED not in self._flags

    def unit_tax(self, c):
        """
        Returns the unit tax ``P(q*(c)) - p*(c)`` paid by type ``c`` (0 for
        excluded types).
        """
        def tax(x):
            q = self._quantities(x)
            return np.where(
                q > 0, self._consumer_prices(x) - self._prices(x), 0.0)
        return on_interval(tax, c, 1, 'cost')

    def welfare(self):
        """ Returns the expected weighted surplus. """
        raise NotImplementedError

    def _consumer_prices(self, c):
        q = self._quantities(c)
        demand = self._env.demand()
        return np.where(q > 0, demand.price(q), demand.v_bar())

    def _prices(self, c):
        c = np.asarray(c, dtype=float)
        q = self._quantities(c)
        pi = self._profits(c)
        with np.errstate(divide='ignore', invalid='ignore'):
            p = c + (pi + self._env.k()) / q
        return np.where(q > 0, p, self._env.demand().v_bar())

    def _profits(self, c):
        raise NotImplementedError

    def _quantities(self, c):
        raise NotImplementedError

    def _sample(self):
        """
        Returns the sample grid and labels, and the allocation, price and
        profit schedules.
        """
        if self._samples is None:
            grid = np.linspace(0, 1, self._grid_n)
            labels = self._segments(grid)
            c_bar = self.c_bar()
            x = np.unique(np.concatenate(
                (grid, [self.c_low(), self.c_hat(), c_bar])))
            q = self._quantities(x)
            p = self._prices(x)
            pi = self._profits(x)
            if c_bar < 1 and self._quantities(c_bar) > 0:
                i = int(np.searchsorted(x, c_bar)) + 1
                x = np.insert(x, i, c_bar)
                q = np.insert(q, i, 0)
                p = np.insert(p, i, self._env.demand().v_bar())
                pi = np.insert(pi, i, 0)
            self._samples = (
                pricecap.vector(grid),
                labels,
                pricecap.vector(x),
                pricecap.Schedule(x, q),
                pricecap.Schedule(x, p),
                pricecap.Schedule(x, pi),
            )
        return self._samples

    def _segments(self, c):
        labels = []
        for x in c:
            if x > self.c_bar():
                labels.append(EXCLUDED)
            elif x < self.c_low():
                labels.append(LAISSEZ_FAIRE)
            elif x < self.c_hat():
                labels.append(BUNCH)
            else:
                labels.append(TAXED)
        return labels

    def __str__(self):
        return tabulate(
            [
                ('c_L', self.c_low()),
                ('c_hat', self.c_hat()),
                ('c_bar', self.c_bar()),
                ('p_hat', self.p_hat()),
                ('welfare', self.welfare()),
                ('flags', ', '.join(self._flags) or '-'),
            ],
            numalign='left',
            floatfmt='.10g',
        )


class MechanismPolicy(RegulationPolicy):
    """
    The optimal regulation built from an :class:`InnerSolution`.

    Extends :class:`RegulationPolicy`.
    """
    def __init__(self, solution, grid_n=1025, flags=()):
        flags = tuple(solution.flags()) + tuple(
            x for x in flags if x not in solution.flags())
        super(MechanismPolicy, self).__init__(
            solution.environment(), grid_n, flags)
        self._solution = solution

    def c_bar(self):
        """ See :meth:`RegulationPolicy.c_bar()`. """
        return self._solution.c_bar()

    def c_hat(self):
        """ See :meth:`RegulationPolicy.c_hat()`. """
        return self._solution.c_hat()

    def c_low(self):
        """ See :meth:`RegulationPolicy.c_low()`. """
        return self._solution.c_low()

    def inner_solution(self):
        """ Returns the :class:`InnerSolution` this policy was built from. """
        return self._solution

    def p_hat(self):
        """
        Returns the benchmark price ``p*(c_hat)``: the price charged by every
        bunching type, below which prices are not taxed.
        """
        return float(self._prices(np.array([self.c_hat()]))[0])

    def q_terminal(self):
        """ Returns the output of the highest type served. """
        return self._solution.q_terminal()

    def welfare(self):
        """ See :meth:`RegulationPolicy.welfare()`. """
        return self._solution.welfare()

    def _prices(self, c):
        c = np.asarray(c, dtype=float)
        p = super(MechanismPolicy, self)._prices(c)

        # Left limit at the cutoff when the top type produces nothing
        top = (c == self.c_bar()) & (self._quantities(c) <= 0)
        return np.where(top, self.c_bar(), p)

    def _profits(self, c):
        return self._solution._profits(c)

    def _quantities(self, c):
        return self._solution._quantities(c)


class LaissezFairePolicy(RegulationPolicy):
    """
    The unregulated outcome, as a :class:`RegulationPolicy` whose segments
    are all laissez-faire (or excluded above ``c_LF``).

    The benchmark price is the highest price charged, ``P(q_LF(c_LF))``, so
    that the zero tax is a (trivial) price cap at that benchmark.

    Extends :class:`RegulationPolicy`.
    """
    def __init__(self, env, grid_n=1025, flags=()):
        super(LaissezFairePolicy, self).__init__(env, grid_n, flags)
        self._cutoff = pricecap.lf_cutoff(env)
        self._welfare = None

    def c_bar(self):
        """ See :meth:`RegulationPolicy.c_bar()`. """
        return self._cutoff

    def c_hat(self):
        """ See :meth:`RegulationPolicy.c_hat()`. """
        return self._cutoff

    def c_low(self):
        """ See :meth:`RegulationPolicy.c_low()`. """
        return self._cutoff

    def is_laissez_faire(self):
        """ See :meth:`RegulationPolicy.is_laissez_faire()`. """
        return True

    def p_hat(self):
        """ See :meth:`RegulationPolicy.p_hat()`. """
        q = pricecap.monopoly_quantity(self._env, self._cutoff)
        if q <= 0:
            return self._env.demand().v_bar()
        return self._env.demand().price(q)

    def welfare(self):
        """ See :meth:`RegulationPolicy.welfare()`. """
        if self._welfare is None:
            self._welfare = pricecap.lf_welfare(self._env)
        return self._welfare

    def _profits(self, c):
        q = self._quantities(c)
        c = np.asarray(c, dtype=float)
        pi = q * (self._env.demand().price(q) - c) - self._env.k()
        return np.where(q > 0, np.maximum(pi, 0), 0.0)

    def _quantities(self, c):
        c = np.asarray(c, dtype=float)
        out = np.zeros(c.shape)
        for i, x in np.ndenumerate(c):
            if x <= self._cutoff:
                out[i] = pricecap.monopoly_quantity(self._env, float(x))
        return out

    def _segments(self, c):
        return [LAISSEZ_FAIRE if x <= self._cutoff else EXCLUDED for x in c]


def mbmc_residual(env, policy, c):
    """
    Returns ``P(q*(c)) - phi(c; c_bar)`` for a cost ``c`` in the taxed
    segment ``[c_hat, c_bar]`` of a :class:`MechanismPolicy`: the gap between
    the consumer price and marginal cost plus information rent plus the
    constant allocative distortion, which vanishes on that segment.
    """
    if policy.is_laissez_faire():
        raise ValueError('A laissez-faire policy has no taxed segment.')
    if policy.environment() is not env:
        raise ValueError('Policy was computed for a different environment.')
    c = float(c)
    if not policy.c_hat() - 1e-12 <= c <= policy.c_bar() + 1e-12:
        raise ValueError(
            'Cost must be in the taxed segment [' + str(policy.c_hat()) + ', '
            + str(policy.c_bar()) + '].')
    c = min(max(c, policy.c_hat()), policy.c_bar())
    q = policy.quantity(c)
    return env.demand().price(q) - phi(env, c, policy.c_bar(),
                                       policy.q_terminal())


class SolveDiagnostics(object):
    """
    Diagnostics of a :class:`PolicySolver` run: the assumption report, the
    gate report, the outer search trace, welfare values, the progressivity
    report of the implementing tax (if any) and flags.
    """
    def __init__(self, assumptions, gate, trace, lf_welfare, welfare,
                 progressivity, flags, tax=None):
        self._assumptions = assumptions
        self._gate = gate
        self._trace = tuple(trace)
        self._lf_welfare = float(lf_welfare)
        self._welfare = float(welfare)
        self._progressivity = progressivity
        self._flags = tuple(flags)
        self._tax = tax

    def assumptions(self):
        """ Returns the :class:`AssumptionReport`. """
        return self._assumptions

    def flags(self):
        """ Returns the flags of the returned policy. """
        return self._flags

    def gate(self):
        """ Returns the :class:`GateReport`. """
        return self._gate

    def improvement(self):
        """ Returns the welfare gain over laissez-faire. """
        return self._welfare - self._lf_welfare

    def lf_welfare(self):
        """ Returns the laissez-faire welfare. """
        return self._lf_welfare

    def progressivity(self):
        """
        Returns the :class:`ProgressivityReport` of the implementing tax, or
        ``None`` if the policy is laissez-faire or has no taxed segment.
        """
        return self._progressivity

    def tax(self):
        """ Returns the implementing :class:`TaxSchedule`, if any. """
        return self._tax

    def trace(self):
        """
        Returns the outer search trace, as a tuple of ``(stage, c_bar,
        welfare)`` entries.
        """
        return self._trace

    def welfare(self):
        """ Returns the welfare of the returned policy. """
        return self._welfare

    def __str__(self):
        rows = [
            ('gate', self._gate.verdict()),
            ('laissez-faire welfare', self._lf_welfare),
            ('welfare', self._welfare),
            ('improvement', self.improvement()),
            ('evaluations', len(self._trace)),
        ]
        if self._progressivity is not None:
            rows.append(('progressive', self._progressivity.progressive()))
        rows.append(('flags', ', '.join(self._flags) or '-'))
        return tabulate(rows, numalign='left', floatfmt='.10g')


class _CutoffWelfare(object):
    """
    Picklable callable returning the welfare of the inner solution for a
    cutoff, or ``-inf`` if the cutoff is infeasible.
    """
    def __init__(self, env, grid_n, cutoff):
        self._env = env
        self._grid_n = grid_n
        self._cutoff = cutoff

    def __call__(self, c_bar):
        try:
            return inner_solve(
                self._env, c_bar, self._grid_n, self._cutoff).welfare()
        except ValueError:
            return float('-inf')


class PolicySolver(object):
    """
    Finds the optimal regulation of a :class:`MarketEnvironment`.

    A run checks the standing assumptions, computes the laissez-faire
    benchmark and tests whether it is optimal. If it is, a
    :class:`LaissezFairePolicy` is returned. Otherwise the welfare of
    :meth:`inner_solve()` is evaluated on a grid of exclusion cutoffs in
    ``(0, c_LF]``, the best grid bracket is refined by golden-section search,
    and the best candidate (grid points, refined point and both ends
    included) gives the returned :class:`MechanismPolicy`.

    Example
    -------
    ::

        env = pricecap.MarketEnvironment(
            pricecap.LinearDemand(), pricecap.UniformCost(), alpha=0)
        solver = pricecap.PolicySolver(env)
        policy = solver.run()
        print(policy.c_bar(), policy.p_hat())

    """
    def __init__(self, env):
        if not isinstance(env, pricecap.MarketEnvironment):
            raise ValueError('Environment must be a MarketEnvironment.')
        self._env = env

        self._grid_n = 1025
        self._cbar_grid_n = 129
        self._assumption_grid_n = 2049
        self._gate_tol = 1e-9
        self._golden_tol = 1e-8

        # Logging
        self._log_to_screen = True
        self._log_filename = None
        self._log_csv = False

        # Parallelisation
        self.set_parallel()

        # Post-run statistics
        self._diagnostics = None
        self._evaluations = None
        self._time = None

    def diagnostics(self):
        """
        Returns the :class:`SolveDiagnostics` of the last run.
        """
        if self._diagnostics is None:
            raise RuntimeError('Diagnostics are only available after run().')
        return self._diagnostics

    def evaluations(self):
        """
        Returns the number of inner solves evaluated in the last run, or
        ``None`` if the solver hasn't run yet.
        """
        return self._evaluations

    def parallel(self):
        """
        Returns the number of parallel worker processes this solver uses, or
        ``False`` if parallelisation is disabled.
        """
        return self._n_workers if self._parallel else False

    def run(self):
        """
        Runs the solver and returns the optimal :class:`RegulationPolicy`.
        """
        env = self._env
        timer = pricecap.Timer()
        log = logging.getLogger(__name__)

        assumptions = pricecap.check_assumptions(env, self._assumption_grid_n)
        if not assumptions.passed('positive_revenue'):
            raise pricecap.InfeasibleEnvironmentError(
                'The fixed cost exceeds the largest revenue: no output can'
                ' cover it.')
        lf = pricecap.lf_schedule(env, self._grid_n)
        gate = pricecap.gate(env, lf, self._grid_n, self._gate_tol)
        w_lf = pricecap.lf_welfare(env)

        flags = []
        if not (assumptions.standing_assumptions()
                and assumptions.progressivity_hypotheses()):
            flags.append(STRUCTURE_UNVERIFIED)

        if gate.lf_optimal():
            if self._log_to_screen:
                print('Laissez-faire is optimal: no regulation needed.')
            policy = LaissezFairePolicy(env, self._grid_n, flags)
            self._finish(
                policy, assumptions, gate, [], w_lf, flags, timer.time(), 0)
            return policy

        # Show parallelisation
        cutoff = lf.cutoff()
        f = _CutoffWelfare(env, self._grid_n, cutoff)
        if self._log_to_screen:
            print('Maximising welfare over the exclusion cutoff.')
            if self._parallel:
                print('Running in parallel with ' + str(self._n_workers) +
                      ' worker processes.')
            else:
                print('Running in sequential mode.')

        # Set up logger
        logger = pricecap.Logger()
        if not self._log_to_screen:
            logger.set_stream(None)
        if self._log_filename:
            logger.set_filename(self._log_filename, csv=self._log_csv)
        logger.add_counter('Iter.', max_value=self._cbar_grid_n + 1000)
        logger.add_string('Stage', 6)
        logger.add_float('c_bar')
        logger.add_float('Welfare')
        logger.add_float('Best')
        logger.add_time('Time m:s')

        trace = []
        best = [float('-inf')]

        def record(stage, c_bar, w):
            trace.append((stage, float(c_bar), float(w)))
            best[0] = max(best[0], w)
            logger.log(len(trace), stage, c_bar, w, best[0], timer.time())

        # Grid stage
        n = self._cbar_grid_n
        candidates = [cutoff * j / n for j in range(1, n + 1)]
        welfare = pricecap.evaluate(
            f, candidates, self._n_workers if self._parallel else False)
        for c_bar, w in zip(candidates, welfare):
            record('grid', c_bar, w)
        i = int(np.argmax(welfare))
        if not np.isfinite(welfare[i]):
            raise pricecap.InfeasibleEnvironmentError(
                'Every exclusion cutoff is infeasible.')

        # Golden-section refinement of the best bracket
        lo = candidates[i - 1] if i > 0 else cutoff * 1e-6
        hi = candidates[i + 1] if i + 1 < n else cutoff

        def w(c_bar):
            value = f(c_bar)
            record('golden', c_bar, value)
            return value

        c_star, w_star = pricecap.golden_section_search(
            w, lo, hi, self._golden_tol)
        if welfare[i] > w_star:
            c_star, w_star = candidates[i], welfare[i]

        solution = inner_solve(env, c_star, self._grid_n, cutoff)
        record('final', c_star, solution.welfare())
        if self._log_to_screen:
            print('Halting: golden-section bracket below tolerance ('
                  + str(self._golden_tol) + ').')

        if solution.welfare() < w_lf:
            log.warning(
                'Optimised mechanism does not improve on laissez-faire;'
                ' returning the laissez-faire policy.')
            flags.append(LAISSEZ_FAIRE_FALLBACK)
            policy = LaissezFairePolicy(env, self._grid_n, flags)
        else:
            policy = MechanismPolicy(solution, self._grid_n, flags)
        self._finish(policy, assumptions, gate, trace, w_lf, policy.flags(),
                     timer.time(), len(trace))
        return policy

    def _finish(self, policy, assumptions, gate, trace, w_lf, flags, time,
                evaluations):
        """ Builds the diagnostics and stores post-run statistics. """
        tax = progressivity = None
        if not policy.is_laissez_faire() and policy.c_hat() < policy.c_bar():
            try:
                tax = pricecap.build_tax(policy)
                progressivity = pricecap.verify_progressive(
                    tax, self._env.demand())
            except ValueError as e:
                logging.getLogger(__name__).warning(
                    'Unable to build the implementing tax: ' + str(e))
        self._diagnostics = SolveDiagnostics(
            assumptions, gate, trace, w_lf, policy.welfare(), progressivity,
            flags, tax)
        self._time = time
        self._evaluations = evaluations

    def set_assumption_grid(self, grid_n=2049):
        """
        Sets the grid size used to check the environment's assumptions.
        """
        grid_n = int(grid_n)
        if grid_n < 16:
            raise ValueError('Grid size must be at least 16.')
        self._assumption_grid_n = grid_n

    def set_cbar_grid(self, grid_n=129):
        """
        Sets the number of exclusion cutoffs evaluated before golden-section
        refinement.
        """
        grid_n = int(grid_n)
        if grid_n < 2:
            raise ValueError('Cutoff grid size must be at least 2.')
        self._cbar_grid_n = grid_n

    def set_gate_tolerance(self, tol=1e-9):
        """
        Sets the slack allowed on decreases of the laissez-faire margin.
        """
        tol = float(tol)
        if not tol >= 0:
            raise ValueError('Gate tolerance must be nonnegative.')
        self._gate_tol = tol

    def set_golden_tolerance(self, tol=1e-8):
        """
        Sets the bracket length at which golden-section search stops.
        """
        tol = float(tol)
        if not tol > 0:
            raise ValueError('Golden-section tolerance must be positive.')
        self._golden_tol = tol

    def set_grid(self, grid_n=1025):
        """
        Sets the cost grid size used for schedules and the gate.
        """
        grid_n = int(grid_n)
        if grid_n < 64:
            raise ValueError('Grid size must be at least 64.')
        self._grid_n = grid_n

    def set_log_to_file(self, filename=None, csv=False):
        """
        Enables logging to file when a filename is passed in, disables it if
        ``filename`` is ``False`` or ``None``.

        The argument ``csv`` can be set to ``True`` to write the file in comma
        separated value (CSV) format. By default, the file contents will be
        similar to the output on screen.
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

    def set_parallel(self, parallel=False):
        """
        Enables/disables parallel evaluation of the cutoff grid.

        If ``parallel=True``, the method will run using a number of worker
        processes equal to the detected cpu core count. The number of workers
        can be set explicitly by setting ``parallel`` to an integer greater
        than 0.
        Parallelisation can be disabled by setting ``parallel`` to ``0`` or
        ``False``.
        """
        if parallel is True:
            self._parallel = True
            self._n_workers = pricecap.ParallelEvaluator.cpu_count()
        elif parallel >= 1:
            self._parallel = True
            self._n_workers = int(parallel)
        else:
            self._parallel = False
            self._n_workers = 1

    def time(self):
        """
        Returns the time needed for the last run, in seconds, or ``None`` if
        the solver hasn't run yet.
        """
        return self._time


def outer_solve(env, grid_n=1025, cbar_grid_n=129, parallel=False):
    """
    Runs a :class:`PolicySolver` with screen logging disabled and returns the
    optimal :class:`RegulationPolicy`.
    """
    solver = PolicySolver(env)
    solver.set_grid(grid_n)
    solver.set_cbar_grid(cbar_grid_n)
    solver.set_parallel(parallel)
    solver.set_log_to_screen(False)
    return solver.run()
