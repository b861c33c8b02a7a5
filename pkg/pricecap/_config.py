#
# Reading market environments and solver settings from JSON files
#
# This file is part of PRICECAP which is
# released under the BSD 3-clause license. See accompanying LICENSE.md for
# copyright notice and full license details.
#
from __future__ import absolute_import, division
from __future__ import print_function, unicode_literals
import json
import pricecap

# Solver settings: name -> (default, type, minimum, maximum)
SOLVER_DEFAULTS = {
    'grid': (1025, int, 64, 1000000),
    'cbar_grid': (129, int, 2, 100000),
    'assumption_grid': (2049, int, 16, 1000000),
    'gate_tol': (1e-9, float, 0, 1),
    'golden_tol': (1e-8, float, 0, 1),
    'price_grid': (4096, int, 1024, 10000000),
    'audit_grid': (1025, int, 2, 1000000),
    'oracle_n': (100, int, 2, 200),
    'oracle_iters': (500, int, 1, 1000000),
}


def _field(d, key, path, default=None):
    """ Returns ``d[key]``, or ``default``, or raises naming the field. """
    if not isinstance(d, dict):
        raise ValueError('Field `' + path + '` must be an object.')
    try:
        return d[key]
    except KeyError:
        if default is None:
            raise ValueError(
                'Missing field `' + (path + '.' if path else '') + key + '`.')
        return default


def _number(d, key, path, default=None, positive=False, integer=False):
    """ Reads a finite number from ``d[key]``. """
    name = (path + '.' if path else '') + key
    x = _field(d, key, path, default)
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ValueError('Field `' + name + '` must be a number.')
    if integer:
        if int(x) != x:
            raise ValueError('Field `' + name + '` must be an integer.')
        x = int(x)
    else:
        x = float(x)
    if x != x or x in (float('inf'), float('-inf')):
        raise ValueError('Field `' + name + '` must be finite.')
    if positive and not x > 0:
        raise ValueError('Field `' + name + '` must be positive.')
    return x


def _numbers(d, key, path):
    """ Reads a list of finite numbers from ``d[key]``. """
    name = path + '.' + key
    x = _field(d, key, path)
    if not isinstance(x, list):
        raise ValueError('Field `' + name + '` must be a list of numbers.')
    out = []
    for i, v in enumerate(x):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ValueError(
                'Field `' + name + '[' + str(i) + ']` must be a number.')
        out.append(float(v))
    return out


def _rename(error, path):
    """ Prefixes the message of an error from a constructor with a path. """
    return ValueError('Invalid `' + path + '`: ' + str(error))


def _demand(d):
    """ Creates a :class:`DemandCurve` from the ``demand`` block. """
    family = _field(d, 'family', 'demand')
    try:
        if family == 'linear':
            return pricecap.LinearDemand(
                _number(d, 'A', 'demand', 1.0, positive=True),
                _number(d, 'B', 'demand', 1.0, positive=True))
        elif family == 'constant-elastic':
            return pricecap.ConstantElasticDemand(
                _number(d, 'theta', 'demand', 1.0, positive=True),
                _number(d, 'eta', 'demand', 2.0, positive=True),
                _number(d, 'epsilon', 'demand', 1e-6, positive=True),
                _number(d, 'v_bar', 'demand', 10.0, positive=True))
        elif family == 'logarithmic':
            return pricecap.LogarithmicDemand(
                _number(d, 'mu', 'demand', 1.0),
                _number(d, 'beta', 'demand', 0.5, positive=True),
                _number(d, 'v_bar', 'demand', 10.0, positive=True))
        elif family == 'tabulated':
            return pricecap.TabulatedDemand(
                _numbers(d, 'q', 'demand'), _numbers(d, 'p', 'demand'))
    except ValueError as e:
        if str(e).startswith('Field') or str(e).startswith('Missing'):
            raise
        raise _rename(e, 'demand')
    raise ValueError(
        'Field `demand.family` must be one of linear, constant-elastic,'
        ' logarithmic or tabulated.')


def _cost(d):
    """ Creates a :class:`CostDistribution` from the ``cost`` block. """
    family = _field(d, 'family', 'cost')
    try:
        if family == 'uniform':
            return pricecap.UniformCost()
        elif family == 'truncated-normal':
            return pricecap.TruncatedNormalCost(
                _number(d, 'mean', 'cost', 0.5),
                _number(d, 'variance', 'cost', 0.01, positive=True))
        elif family == 'truncated-exponential':
            return pricecap.TruncatedExponentialCost(
                _number(d, 'rate', 'cost', 1.0, positive=True))
        elif family == 'tabulated':
            return pricecap.TabulatedCost(
                _numbers(d, 'c', 'cost'), _numbers(d, 'density', 'cost'))
    except ValueError as e:
        if str(e).startswith('Field') or str(e).startswith('Missing'):
            raise
        raise _rename(e, 'cost')
    raise ValueError(
        'Field `cost.family` must be one of uniform, truncated-normal,'
        ' truncated-exponential or tabulated.')


def environment_from_dict(d):
    """
    Creates a :class:`MarketEnvironment` from a dict with fields ``demand``
    (with a ``family`` and its parameters), ``cost`` (idem), ``alpha`` and
    ``k``.

    Invalid or missing fields raise a ``ValueError`` whose message names the
    field by its dotted path, e.g. ``demand.A``.
    """
    if not isinstance(d, dict):
        raise ValueError('Configuration must be a JSON object.')
    demand = _demand(_field(d, 'demand', ''))
    cost = _cost(_field(d, 'cost', ''))
    alpha = _number(d, 'alpha', '')
    if not 0 <= alpha <= 1:
        raise ValueError('Field `alpha` must be in [0, 1].')
    k = _number(d, 'k', '', 0.0)
    if k < 0:
        raise ValueError('Field `k` must be nonnegative.')
    return pricecap.MarketEnvironment(demand, cost, alpha, k)


def environment_to_dict(env):
    """
    Returns a dict describing a :class:`MarketEnvironment`, in the format read
    by :meth:`environment_from_dict()`.
    """
    demand = {'family': env.demand().family()}
    demand.update(env.demand().parameters())
    cost = {'family': env.cost().family()}
    cost.update(env.cost().parameters())
    return {
        'demand': demand,
        'cost': cost,
        'alpha': env.alpha(),
        'k': env.k(),
    }


def load_environment(path):
    """
    Loads a :class:`MarketEnvironment` from the JSON file at ``path``. See
    :meth:`environment_from_dict()`.
    """
    with open(path, 'r') as f:
        try:
            d = json.load(f)
        except ValueError as e:
            raise ValueError('Unable to parse ' + str(path) + ': ' + str(e))
    return environment_from_dict(d)


def solver_settings(d=None):
    """
    Returns a dict with validated solver settings read from the ``solver``
    block of a configuration dict ``d``, with defaults filled in for missing
    fields.

    Recognised fields are ``grid``, ``cbar_grid``, ``assumption_grid``,
    ``gate_tol``, ``golden_tol``, ``price_grid``, ``audit_grid``,
    ``oracle_n`` and ``oracle_iters``.
    """
    block = {} if d is None else _field(d, 'solver', '', {})
    if not isinstance(block, dict):
        raise ValueError('Field `solver` must be an object.')
    for key in block:
        if key not in SOLVER_DEFAULTS:
            raise ValueError('Unknown field `solver.' + str(key) + '`.')

    settings = {}
    for key, (default, kind, lo, hi) in SOLVER_DEFAULTS.items():
        name = 'solver.' + key
        x = _number(
            block, key, 'solver', default, positive=(kind is float),
            integer=(kind is int))
        if not lo <= x <= hi:
            raise ValueError(
                'Field `' + name + '` must be in [' + str(lo) + ', '
                + str(hi) + '].')
        settings[key] = x
    return settings
