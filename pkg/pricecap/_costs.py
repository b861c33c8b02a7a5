#
# Distributions of the firm's marginal cost on [0, 1]
#
# This file is part of PRICECAP which is
# released under the BSD 3-clause license. See accompanying LICENSE.md for
# copyright notice and full license details.
#
from __future__ import absolute_import, division
from __future__ import print_function, unicode_literals
import numpy as np
import scipy.interpolate
import scipy.stats

from ._util import on_interval


class CostDistribution(object):
    """
    Abstract base class for distributions of the marginal cost type ``c`` on
    the support ``[0, 1]``, with distribution function ``F``, density ``f``
    and density derivative ``f'``.

    Public methods accept scalars or arrays and raise a ``ValueError`` for
    costs outside ``[0, 1]``.
    """

    def cdf(self, c):
        """ Returns the distribution function ``F(c)``. """
        return on_interval(self._cdf, c, 1, 'cost')

    def family(self):
        """
        Returns the name of this distribution's family, as used in
        configuration files.
        """
        raise NotImplementedError

    def parameters(self):
        """
        Returns a dict with this distribution's parameters.
        """
        raise NotImplementedError

    def pdf(self, c):
        """ Returns the density ``f(c)``. """
        return on_interval(self._pdf, c, 1, 'cost')

    def pdf_derivative(self, c):
        """ Returns the derivative of the density, ``f'(c)``. """
        return on_interval(self._pdf_derivative, c, 1, 'cost')

    def _cdf(self, c):
        raise NotImplementedError

    def _pdf(self, c):
        raise NotImplementedError

    def _pdf_derivative(self, c):
        raise NotImplementedError

    def __str__(self):
        params = ', '.join(
            k + '=' + str(v) for k, v in sorted(self.parameters().items())
            if np.isscalar(v))
        return self.family() + '(' + params + ')'


class UniformCost(CostDistribution):
    """
    Uniformly distributed cost on ``[0, 1]``.

    Extends :class:`CostDistribution`.
    """
    def family(self):
        """ See :meth:`CostDistribution.family()`. """
        return 'uniform'

    def parameters(self):
        """ See :meth:`CostDistribution.parameters()`. """
        return {}

    def _cdf(self, c):
        return np.asarray(c, dtype=float) * 1.0

    def _pdf(self, c):
        return np.ones(np.shape(c))

    def _pdf_derivative(self, c):
        return np.zeros(np.shape(c))


class TruncatedNormalCost(CostDistribution):
    """
    Normal distribution with the given ``mean`` and ``variance``, truncated
    to ``[0, 1]``.

    Extends :class:`CostDistribution`.
    """
    def __init__(self, mean=0.5, variance=0.01):
        super(TruncatedNormalCost, self).__init__()
        self._mean = float(mean)
        self._variance = float(variance)
        if not np.isfinite(self._mean):
            raise ValueError('Mean must be finite.')
        if not self._variance > 0:
            raise ValueError('Variance must be positive.')
        sigma = np.sqrt(self._variance)
        self._dist = scipy.stats.truncnorm(
            (0 - self._mean) / sigma, (1 - self._mean) / sigma,
            loc=self._mean, scale=sigma)

    def family(self):
        """ See :meth:`CostDistribution.family()`. """
        return 'truncated-normal'

    def parameters(self):
        """ See :meth:`CostDistribution.parameters()`. """
        return {'mean': self._mean, 'variance': self._variance}

    def _cdf(self, c):
        return self._dist.cdf(c)

    def _pdf(self, c):
        return self._dist.pdf(c)

    def _pdf_derivative(self, c):
        c = np.asarray(c, dtype=float)
        return -(c - self._mean) / self._variance * self._dist.pdf(c)


class TruncatedExponentialCost(CostDistribution):
    """
    Exponential distribution with the given ``rate``, truncated to
    ``[0, 1]``. Its density is decreasing and log-linear.

    Extends :class:`CostDistribution`.
    """
    def __init__(self, rate=1):
        super(TruncatedExponentialCost, self).__init__()
        self._rate = float(rate)
        if not self._rate > 0:
            raise ValueError('Rate must be positive.')
        self._dist = scipy.stats.truncexpon(
            self._rate, scale=1 / self._rate)

    def family(self):
        """ See :meth:`CostDistribution.family()`. """
        return 'truncated-exponential'

    def parameters(self):
        """ See :meth:`CostDistribution.parameters()`. """
        return {'rate': self._rate}

    def _cdf(self, c):
        return self._dist.cdf(c)

    def _pdf(self, c):
        return self._dist.pdf(c)

    def _pdf_derivative(self, c):
        return -self._rate * self._dist.pdf(c)


class TabulatedCost(CostDistribution):
    """
    Cost distribution whose density is interpolated through sample points
    with a monotone cubic interpolant and normalised to integrate to one.

    Extends :class:`CostDistribution`.

    Parameters
    ----------
    c_points
        Strictly increasing costs, from ``0`` to ``1``.
    density
        Nonnegative (unnormalised) density values at ``c_points``.
    """
    def __init__(self, c_points, density):
        super(TabulatedCost, self).__init__()
        c = np.array(c_points, dtype=float, copy=True)
        d = np.array(density, dtype=float, copy=True)
        if c.ndim != 1 or c.shape != d.shape:
            raise ValueError(
                'Costs and densities must be 1d sequences of equal length.')
        if len(c) < 4:
            raise ValueError('At least 4 sample points are required.')
        if c[0] != 0 or c[-1] != 1:
            raise ValueError('Costs must run from 0 to 1.')
        if np.any(np.diff(c) <= 0):
            raise ValueError('Costs must be strictly increasing.')
        if np.any(d < 0) or not np.all(np.isfinite(d)):
            raise ValueError('Densities must be finite and nonnegative.')
        c.setflags(write=False)
        d.setflags(write=False)
        self._c = c
        self._d = d

        self._density = scipy.interpolate.PchipInterpolator(c, d)
        self._primitive = self._density.antiderivative()
        self._slope = self._density.derivative()
        self._total = float(self._primitive(1))
        if not self._total > 0:
            raise ValueError('Density must have a positive integral.')

    @staticmethod
    def from_cost(cost, n=257):
        """
        Creates a :class:`TabulatedCost` by sampling the density of another
        :class:`CostDistribution` at ``n`` uniformly spaced costs.
        """
        c = np.linspace(0, 1, int(n))
        return TabulatedCost(c, cost.pdf(c))

    def family(self):
        """ See :meth:`CostDistribution.family()`. """
        return 'tabulated'

    def parameters(self):
        """ See :meth:`CostDistribution.parameters()`. """
        return {'c': list(self._c), 'density': list(self._d)}

    def _cdf(self, c):
        return np.clip(self._primitive(c) / self._total, 0, 1)

    def _pdf(self, c):
        return np.maximum(self._density(c) / self._total, 0)

    def _pdf_derivative(self, c):
        return self._slope(c) / self._total
