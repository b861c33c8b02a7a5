#
# Utility classes and functions for pricecap
#
# This file is part of PRICECAP which is
# released under the BSD 3-clause license. See accompanying LICENSE.md for
# copyright notice and full license details.
#
from __future__ import absolute_import, division
from __future__ import print_function, unicode_literals
import math
import pricecap
import numpy as np
import timeit

# Golden ratio constants
INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2


def strfloat(x):
    """
    Converts a float to a string, with maximum precision.
    """
    return pricecap.FLOAT_FORMAT.format(float(x))


class Timer(object):
    """
    Provides accurate timing.

    Example
    -------
    ::

        timer = pricecap.Timer()
        print(timer.format(timer.time()))

    """
    def __init__(self):
        self._start = timeit.default_timer()

    def format(self, time=None):
        """
        Formats a (non-integer) number of seconds, returns a string like
        "5 weeks, 3 days, 1 hour, 4 minutes, 9 seconds", or "0.0019 seconds".
        """
        if time is None:
            time = self.time()
        if time < 1e-2:
            return str(time) + ' seconds'
        elif time < 60:
            return str(round(time, 2)) + ' seconds'
        output = []
        time = int(round(time))
        units = [
            (604800, 'week'),
            (86400, 'day'),
            (3600, 'hour'),
            (60, 'minute'),
        ]
        for k, name in units:
            f = time // k
            if f > 0 or output:
                output.append(str(f) + ' ' + (name if f == 1 else name + 's'))
            time -= f * k
        output.append('1 second' if time == 1 else str(time) + ' seconds')
        return ', '.join(output)

    def reset(self):
        """
        Resets this timer's start time.
        """
        self._start = timeit.default_timer()

    def time(self):
        """
        Returns the time (in seconds) since this timer was created, or since
        meth:`reset()` was last called.
        """
        return timeit.default_timer() - self._start


def vector(x):
    """
    Copies ``x`` and returns a 1d read-only numpy array of floats with shape
    ``(n,)``.

    Raises a ``ValueError`` if ``x`` has an incompatible shape.
    """
    if np.isscalar(x):
        x = np.array([float(x)])
    else:
        x = np.array(x, copy=True, dtype=float)
    x.setflags(write=False)
    if x.ndim != 1:
        n = np.max(x.shape)
        if np.prod(x.shape) != n:
            raise ValueError('Unable to convert to 1d vector of scalar values')
        x = x.reshape((n,))
    return x


def golden_section_search(f, a, b, tol=1e-8):
    """
    Maximises a function ``f`` that is unimodal on ``[a, b]``, using
    golden-section search.

    The bracket is shrunk until it is shorter than ``tol``. Because ``f`` is
    only assumed unimodal up to numerical noise, the best point evaluated
    during the search is returned (not just the centre of the last bracket),
    as a tuple ``(x, f(x))``. Ties are resolved in favour of the smaller
    ``x``.
    """
    a, b = float(min(a, b)), float(max(a, b))
    tol = float(tol)
    if not tol > 0:
        raise ValueError('Tolerance must be positive.')

    h = b - a
    best_x, best_f = a, f(a)
    fb = f(b)
    if fb > best_f:
        best_x, best_f = b, fb
    if h <= tol:
        return best_x, best_f

    # Required steps to achieve tolerance
    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)
    for x, y in ((c, yc), (d, yd)):
        if y > best_f or (y == best_f and x < best_x):
            best_x, best_f = x, y

    for k in range(n - 1):
        if yc >= yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = y = f(c)
            x = c
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = y = f(d)
            x = d
        if y > best_f or (y == best_f and x < best_x):
            best_x, best_f = x, y

    return best_x, best_f


def interval_integrals(f, grid, order=8):
    """
    Integrates a vectorised function ``f`` over each interval of a sorted
    ``grid``, using Gauss-Legendre quadrature of the given ``order`` on every
    interval.

    Returns an array of length ``len(grid) - 1``.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2:
        raise ValueError('Grid must be a 1d array with at least two points.')
    nodes, weights = np.polynomial.legendre.leggauss(int(order))
    lo, hi = grid[:-1], grid[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * nodes[None, :]
    y = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    return half * np.dot(y, weights)


def tail_integrals(f, grid, order=8):
    """
    Returns ``I[i] = integral of f from grid[i] to grid[-1]`` for every grid
    point, computed with :meth:`interval_integrals`.
    """
    parts = interval_integrals(f, grid, order)
    out = np.zeros(len(parts) + 1)
    out[:-1] = np.cumsum(parts[::-1])[::-1]
    return out


def on_interval(function, x, upper, name):
    """
    Evaluates a vectorised ``function`` at ``x`` after checking that every
    value lies in ``[0, upper]`` (up to rounding), and returns a float for
    scalar input or an array otherwise.

    Raises a ``ValueError`` naming ``name`` if ``x`` falls outside the
    interval.
    """
    x = np.asarray(x, dtype=float)
    upper = float(upper)
    if np.any(np.isnan(x)) or np.any(x < -1e-12) or np.any(
            x > upper + 1e-12 * max(1.0, upper)):
        raise ValueError(
            'The ' + name + ' must lie in [0, ' + str(upper) + '].')
    y = np.asarray(function(np.clip(x, 0, upper)), dtype=float)
    if y.ndim == 0:
        return float(y)
    return y
