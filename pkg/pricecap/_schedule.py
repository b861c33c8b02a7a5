#
# Sampled schedules with monotone interpolation
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


class Schedule(object):
    """
    A map sampled on a grid, evaluated between samples with monotone cubic
    (PCHIP) interpolation, so that monotone samples give a monotone schedule.

    A grid point may appear twice in a row, to store a jump: the schedule is
    then interpolated separately on each side, and takes the left value at
    the jump. Arguments outside the grid are clipped to its ends.

    Parameters
    ----------
    grid
        Nondecreasing sample locations (at least two distinct points).
    values
        Values at the sample locations.
    """
    def __init__(self, grid, values):
        super(Schedule, self).__init__()
        self._x = pricecap.vector(grid)
        self._y = pricecap.vector(values)
        if len(self._x) != len(self._y):
            raise ValueError('Grid and values must have the same length.')
        if len(self._x) < 2:
            raise ValueError('A schedule needs at least two samples.')
        steps = np.diff(self._x)
        if np.any(steps < 0):
            raise ValueError('Grid must be nondecreasing.')
        if np.any((steps[1:] == 0) & (steps[:-1] == 0)):
            raise ValueError('A grid point can appear at most twice.')

        self._pieces = []
        self._edges = []
        start = 0
        for jump in list(np.nonzero(steps == 0)[0]) + [len(self._x) - 1]:
            x = self._x[start:jump + 1]
            y = self._y[start:jump + 1]
            if len(x) > 1:
                self._pieces.append(scipy.interpolate.PchipInterpolator(x, y))
            else:
                self._pieces.append(_Constant(y[0]))
            self._edges.append(x[-1])
            start = jump + 1
        self._edges = np.array(self._edges)

    def __call__(self, x):
        x = np.clip(np.asarray(x, dtype=float), self._x[0], self._x[-1])
        index = np.minimum(
            np.searchsorted(self._edges, x, side='left'),
            len(self._pieces) - 1)
        if x.ndim == 0:
            return float(self._pieces[int(index)](x))
        y = np.empty(x.shape)
        for i, piece in enumerate(self._pieces):
            selected = index == i
            if np.any(selected):
                y[selected] = piece(x[selected])
        return y

    def grid(self):
        """ Returns the sample locations. """
        return self._x

    def values(self):
        """ Returns the sampled values. """
        return self._y


class _Constant(object):
    """ A single-sample piece of a :class:`Schedule`. """
    def __init__(self, value):
        self._value = float(value)

    def __call__(self, x):
        return np.full(np.shape(x), self._value)
