#
# Inverse demand curves
#
# This file is part of PRICECAP which is
# released under the BSD 3-clause license. See accompanying LICENSE.md for
# copyright notice and full license details.
#
from __future__ import absolute_import, division
from __future__ import print_function, unicode_literals
import numpy as np
import scipy.integrate
import scipy.interpolate
import scipy.optimize

from ._util import on_interval


class DemandCurve(object):
    """
    Abstract base class for inverse demand curves ``P(q)`` on ``[0, q_max]``.

    A demand curve is strictly decreasing from ``P(0) = v_bar`` (the highest
    willingness to pay) to ``P(q_max) = 0``. Curves are immutable after
    construction.

    All public methods accept a scalar (returning a float) or an array
    (returning an array), and raise a ``ValueError`` for arguments outside the
    curve's domain. Subclasses implement the vectorised private methods
    :meth:`_price` and :meth:`_derivative`, and may override
    :meth:`_quantity` and :meth:`_value` when closed forms are available.
    """

    def consumer_value(self, q):
        """
        Returns the consumer value ``V(q)``, the integral of ``P`` from ``0``
        to ``q``.
        """
        return on_interval(self._value, q, self.q_max(), 'quantity')

    def derivative(self, q):
        """
        Returns the derivative ``P'(q)``.
        """
        return on_interval(self._derivative, q, self.q_max(), 'quantity')

    def family(self):
        """
        Returns the name of this curve's family, as used in configuration
        files.
        """
        raise NotImplementedError

    def marginal_revenue(self, q):
        """
        Returns the marginal revenue ``P(q) + q P'(q)``.
        """
        return on_interval(
            lambda x: self._price(x) + x * self._derivative(x),
            q, self.q_max(), 'quantity')

    def parameters(self):
        """
        Returns a dict with this curve's parameters, keyed by their
        configuration file names.
        """
        raise NotImplementedError

    def price(self, q):
        """
        Returns the inverse demand ``P(q)``.
        """
        return on_interval(self._price, q, self.q_max(), 'quantity')

    def q_max(self):
        """
        Returns the upper end of the quantity domain, where ``P(q_max) = 0``.
        """
        raise NotImplementedError

    def quantity(self, p):
        """
        Returns the demand ``P^-1(p)`` at price ``p``.

        Prices at or above ``v_bar`` have zero demand.
        """
        return on_interval(self._quantity, p, self.v_bar(), 'price')

    def v_bar(self):
        """
        Returns the highest willingness to pay, ``P(0)``.
        """
        raise NotImplementedError

    def _derivative(self, q):
        """ See :meth:`derivative()`. """
        raise NotImplementedError

    def _price(self, q):
        """ See :meth:`price()`. """
        raise NotImplementedError

    def _quantity(self, p):
        """
        Inverts the curve by a bracketing root solve on ``[0, q_max]``.
        """
        p = np.asarray(p, dtype=float)
        q = np.empty(p.shape)
        v_bar, q_max = self.v_bar(), self.q_max()
        for i, x in np.ndenumerate(p):
            if x >= v_bar:
                q[i] = 0
            elif x <= 0:
                q[i] = q_max
            else:
                q[i] = scipy.optimize.brentq(
                    lambda y: float(self._price(y)) - x, 0, q_max,
                    xtol=1e-13, maxiter=500)
        return q

    def _value(self, q):
        """
        Integrates the curve by adaptive quadrature.
        """
        q = np.asarray(q, dtype=float)
        v = np.empty(q.shape)
        for i, x in np.ndenumerate(q):
            v[i] = scipy.integrate.quad(
                lambda y: float(self._price(y)), 0, x,
                epsabs=1e-10, limit=200)[0]
        return v

    def __str__(self):
        params = ', '.join(
            k + '=' + str(v) for k, v in sorted(self.parameters().items())
            if np.isscalar(v))
        return self.family() + '(' + params + ')'


class LinearDemand(DemandCurve):
    """
    Linear inverse demand ``P(q) = A - B q`` on ``[0, A / B]``.

    Extends :class:`DemandCurve`.

    Parameters
    ----------
    A
        The intercept (highest willingness to pay), must be positive.
    B
        The slope, must be positive.
    """
    def __init__(self, A=1, B=1):
        super(LinearDemand, self).__init__()
        self._A = float(A)
        self._B = float(B)
        if not self._A > 0:
            raise ValueError('Intercept A must be positive.')
        if not self._B > 0:
            raise ValueError('Slope B must be positive.')

    def family(self):
        """ See :meth:`DemandCurve.family()`. """
        return 'linear'

    def parameters(self):
        """ See :meth:`DemandCurve.parameters()`. """
        return {'A': self._A, 'B': self._B}

    def q_max(self):
        """ See :meth:`DemandCurve.q_max()`. """
        return self._A / self._B

    def v_bar(self):
        """ See :meth:`DemandCurve.v_bar()`. """
        return self._A

    def _derivative(self, q):
        return np.full(np.shape(q), -self._B)

    def _price(self, q):
        return self._A - self._B * np.asarray(q)

    def _quantity(self, p):
        return (self._A - np.asarray(p)) / self._B

    def _value(self, q):
        q = np.asarray(q)
        return q * (self._A - 0.5 * self._B * q)


class ConstantElasticDemand(DemandCurve):
    """
    Truncated constant-elastic inverse demand

    ``P(q) = min(max(theta q^(-1/eta) - epsilon, 0), v_bar)``,

    a constant-elasticity curve shifted down by ``epsilon`` so that it reaches
    zero at ``q_max = (theta / epsilon)^eta``, and capped at ``v_bar`` so that
    the willingness to pay is finite. Between the cap and ``q_max`` the
    monopoly markup is ``(c + epsilon) / (eta - 1)``.

    Extends :class:`DemandCurve`.

    Parameters
    ----------
    theta
        The scale, must be positive.
    eta
        The elasticity, must be greater than 1.
    epsilon
        The downward shift, must be positive.
    v_bar
        The cap on the willingness to pay, must be positive.
    """
    def __init__(self, theta=1, eta=2, epsilon=1e-6, v_bar=10):
        super(ConstantElasticDemand, self).__init__()
        self._theta = float(theta)
        self._eta = float(eta)
        self._epsilon = float(epsilon)
        self._v_bar = float(v_bar)
        if not self._theta > 0:
            raise ValueError('Scale theta must be positive.')
        if not self._eta > 1:
            raise ValueError('Elasticity eta must be greater than 1.')
        if not self._epsilon > 0:
            raise ValueError('Shift epsilon must be positive.')
        if not self._v_bar > 0:
            raise ValueError('Maximum price v_bar must be positive.')

        # Quantity at which the cap stops binding
        self._q_cap = (self._theta / (self._v_bar + self._epsilon))**self._eta
        self._q_max = (self._theta / self._epsilon)**self._eta
        self._exponent = 1 - 1 / self._eta

    def elasticity(self):
        """ Returns the elasticity ``eta``. """
        return self._eta

    def family(self):
        """ See :meth:`DemandCurve.family()`. """
        return 'constant-elastic'

    def parameters(self):
        """ See :meth:`DemandCurve.parameters()`. """
        return {
            'theta': self._theta,
            'eta': self._eta,
            'epsilon': self._epsilon,
            'v_bar': self._v_bar,
        }

    def q_max(self):
        """ See :meth:`DemandCurve.q_max()`. """
        return self._q_max

    def v_bar(self):
        """ See :meth:`DemandCurve.v_bar()`. """
        return self._v_bar

    def _derivative(self, q):
        q = np.asarray(q, dtype=float)
        with np.errstate(divide='ignore', over='ignore'):
            d = -(self._theta / self._eta) * q**(-1 / self._eta - 1)
        return np.where(q <= self._q_cap, 0.0, d)

    def _price(self, q):
        q = np.asarray(q, dtype=float)
        with np.errstate(divide='ignore'):
            p = self._theta * q**(-1 / self._eta) - self._epsilon
        return np.clip(p, 0, self._v_bar)

    def _quantity(self, p):
        p = np.asarray(p, dtype=float)
        q = (self._theta / (p + self._epsilon))**self._eta
        return np.where(p >= self._v_bar, 0.0, q)

    def _value(self, q):
        q = np.asarray(q, dtype=float)
        x = np.maximum(q, self._q_cap)
        tail = (
            self._theta / self._exponent
            * (x**self._exponent - self._q_cap**self._exponent)
            - self._epsilon * (x - self._q_cap))
        return self._v_bar * np.minimum(q, self._q_cap) + tail


class LogarithmicDemand(DemandCurve):
    """
    Logarithmic inverse demand ``P(q) = min(max(mu - beta log(q), 0), v_bar)``
    on ``[0, exp(mu / beta)]``.

    Below the cap, the monopoly markup ``P(q_LF(c)) - c`` equals ``beta`` for
    every cost.

    Extends :class:`DemandCurve`.

    Parameters
    ----------
    mu
        The price at ``q = 1``.
    beta
        The slope with respect to ``log(q)``, must be positive.
    v_bar
        The cap on the willingness to pay, must exceed ``max(mu, 0)``.
    """
    def __init__(self, mu=1, beta=0.5, v_bar=10):
        super(LogarithmicDemand, self).__init__()
        self._mu = float(mu)
        self._beta = float(beta)
        self._v_bar = float(v_bar)
        if not self._beta > 0:
            raise ValueError('Slope beta must be positive.')
        if not self._v_bar > max(self._mu, 0):
            raise ValueError('Maximum price v_bar must exceed max(mu, 0).')

        self._q_cap = np.exp((self._mu - self._v_bar) / self._beta)
        self._q_max = np.exp(self._mu / self._beta)

    def family(self):
        """ See :meth:`DemandCurve.family()`. """
        return 'logarithmic'

    def markup(self):
        """ Returns the constant monopoly markup ``beta``. """
        return self._beta

    def parameters(self):
        """ See :meth:`DemandCurve.parameters()`. """
        return {'mu': self._mu, 'beta': self._beta, 'v_bar': self._v_bar}

    def q_max(self):
        """ See :meth:`DemandCurve.q_max()`. """
        return self._q_max

    def v_bar(self):
        """ See :meth:`DemandCurve.v_bar()`. """
        return self._v_bar

    def _derivative(self, q):
        q = np.asarray(q, dtype=float)
        with np.errstate(divide='ignore'):
            d = -self._beta / q
        return np.where(q <= self._q_cap, 0.0, d)

    def _price(self, q):
        q = np.asarray(q, dtype=float)
        with np.errstate(divide='ignore'):
            p = self._mu - self._beta * np.log(q)
        return np.clip(p, 0, self._v_bar)

    def _quantity(self, p):
        p = np.asarray(p, dtype=float)
        q = np.exp((self._mu - p) / self._beta)
        return np.where(p >= self._v_bar, 0.0, q)

    def _value(self, q):
        q = np.asarray(q, dtype=float)
        a = self._q_cap
        x = np.maximum(q, a)

        def primitive(y):
            return (self._mu + self._beta) * y - self._beta * y * np.log(y)

        return self._v_bar * np.minimum(q, a) + primitive(x) - primitive(a)


class TabulatedDemand(DemandCurve):
    """
    Inverse demand interpolated through sample points with a monotone
    (piecewise cubic Hermite) interpolant, so that ``P`` stays strictly
    decreasing and ``P'`` exists everywhere.

    Extends :class:`DemandCurve`.

    Parameters
    ----------
    q_points
        Strictly increasing quantities, starting at ``0``.
    p_points
        Strictly decreasing prices, ending at ``0``.
    """
    def __init__(self, q_points, p_points):
        super(TabulatedDemand, self).__init__()
        q = np.array(q_points, dtype=float, copy=True)
        p = np.array(p_points, dtype=float, copy=True)
        if q.ndim != 1 or q.shape != p.shape:
            raise ValueError(
                'Quantities and prices must be 1d sequences of equal length.')
        if len(q) < 4:
            raise ValueError('At least 4 sample points are required.')
        if q[0] != 0:
            raise ValueError('The first quantity must be 0.')
        if np.any(np.diff(q) <= 0):
            raise ValueError('Quantities must be strictly increasing.')
        if np.any(np.diff(p) >= 0):
            raise ValueError('Prices must be strictly decreasing.')
        if p[-1] != 0:
            raise ValueError('The last price must be 0.')
        q.setflags(write=False)
        p.setflags(write=False)
        self._q = q
        self._p = p

        self._curve = scipy.interpolate.PchipInterpolator(q, p)
        self._slope = self._curve.derivative()
        self._primitive = self._curve.antiderivative()

    @staticmethod
    def from_curve(curve, n=257):
        """
        Creates a :class:`TabulatedDemand` by sampling another
        :class:`DemandCurve` at ``n`` uniformly spaced prices.
        """
        n = int(n)
        if n < 4:
            raise ValueError('At least 4 sample points are required.')
        p = np.linspace(curve.v_bar(), 0, n)
        q = curve.quantity(p)
        q[0], q[-1] = 0, curve.q_max()
        return TabulatedDemand(q, p)

    def family(self):
        """ See :meth:`DemandCurve.family()`. """
        return 'tabulated'

    def parameters(self):
        """ See :meth:`DemandCurve.parameters()`. """
        return {'q': list(self._q), 'p': list(self._p)}

    def q_max(self):
        """ See :meth:`DemandCurve.q_max()`. """
        return self._q[-1]

    def v_bar(self):
        """ See :meth:`DemandCurve.v_bar()`. """
        return self._p[0]

    def _derivative(self, q):
        return self._slope(q)

    def _price(self, q):
        return self._curve(q)

    def _value(self, q):
        return self._primitive(q)


def consumer_value(curve, q):
    """
    Returns the consumer value ``V(q) = integral of P from 0 to q`` for a
    :class:`DemandCurve`. See :meth:`DemandCurve.consumer_value()`.
    """
    return curve.consumer_value(q)


def price(curve, q):
    """
    Returns the inverse demand ``P(q)`` of a :class:`DemandCurve`. See
    :meth:`DemandCurve.price()`.
    """
    return curve.price(q)


def quantity(curve, p):
    """
    Returns the demand ``P^-1(p)`` of a :class:`DemandCurve`. See
    :meth:`DemandCurve.quantity()`.
    """
    return curve.quantity(p)
