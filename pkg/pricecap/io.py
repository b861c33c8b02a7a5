#
# I/O helper methods for Pricecap: CSV schedules and summary files
#
# This file is part of PRICECAP which is
# released under the BSD 3-clause license. See accompanying LICENSE.md for
# copyright notice and full license details.
#
from __future__ import absolute_import, division
from __future__ import print_function, unicode_literals


# Text written in place of a prohibitive tax
PROHIBITIVE = 'prohibitive'


def _write(filename, header, rows):
    """
    Writes a CSV file with the given header and rows. Floats are written
    with :meth:`pricecap.strfloat()`, everything else as text.
    """
    import pricecap

    def cell(x):
        if isinstance(x, float):
            return pricecap.strfloat(x).strip()
        return str(x)

    with open(filename, 'w') as f:
        f.write(','.join(header) + '\n')
        for row in rows:
            f.write(','.join([cell(x) for x in row]) + '\n')


def load_csv(filename):
    """
    Loads a CSV file written by this module, and returns a tuple ``(header,
    rows)``, where ``header`` is a list of column names and ``rows`` is a list
    of lists. Values that parse as numbers are returned as floats, all others
    as strings.
    """
    def parse(x):
        try:
            return float(x)
        except ValueError:
            return x

    with open(filename, 'r') as f:
        lines = [line.strip() for line in f if line.strip()]
    if not lines:
        raise ValueError('Empty CSV file: ' + str(filename))
    header = [x.strip().strip('"') for x in lines[0].split(',')]
    rows = []
    for i, line in enumerate(lines[1:]):
        row = [parse(x.strip()) for x in line.split(',')]
        if len(row) != len(header):
            raise ValueError(
                'Row ' + str(i + 1) + ' of ' + str(filename) + ' has '
                + str(len(row)) + ' fields, expected ' + str(len(header))
                + '.')
        rows.append(row)
    return header, rows


def save_audit(filename, report):
    """
    Stores the simulated best responses of an :class:`AuditReport` as
    ``c,p_opt,q_opt,profit,segment_guess``.
    """
    _write(
        filename,
        ['c', 'p_opt', 'q_opt', 'profit', 'segment_guess'],
        [(r.cost(), r.p_opt(), r.q_opt(), r.profit(), g) for r, g in zip(
            report.responses(), report.segment_guesses())])


def save_figure_prices(filename, policy):
    """
    Stores the firm price ``p*(c)`` and consumer price ``P(q*(c))`` of a
    :class:`RegulationPolicy` on its sample grid, as
    ``c,p_star,consumer_price``.
    """
    c = policy.grid()
    p = policy.price(c)
    y = policy.consumer_price(c)
    _write(
        filename,
        ['c', 'p_star', 'consumer_price'],
        [(float(a), float(b), float(d)) for a, b, d in zip(c, p, y)])


def save_grid_mechanism(filename, mechanism):
    """
    Stores a :class:`GridMechanism` as ``c,q,pi,slack``, with one row per
    cost cell (at its left edge).
    """
    _write(
        filename,
        ['c', 'q', 'pi', 'slack'],
        [tuple(float(x) for x in row) for row in zip(
            mechanism.costs(), mechanism.q(), mechanism.pi(),
            mechanism.slack())])


def save_laissez_faire(filename, lf):
    """
    Stores a :class:`LaissezFaireSchedule` as ``c,q_lf,p_lf,profit_lf``.
    """
    _write(
        filename,
        ['c', 'q_lf', 'p_lf', 'profit_lf'],
        [tuple(float(x) for x in row) for row in zip(
            lf.grid(), lf.quantities(), lf.prices(), lf.profits())])


def save_margin_curve(filename, report):
    """
    Stores the margin curve of a :class:`GateReport` as ``c,M``.
    """
    curve = report.margin_curve()
    _write(
        filename,
        ['c', 'M'],
        [(float(c), float(m)) for c, m in zip(curve.grid(), curve.values())])


def save_policy(filename, policy):
    """
    Stores a :class:`RegulationPolicy` on its sample grid, as
    ``c,segment,q_star,p_star,consumer_price,profit,tax``.

    Excluded types are written with price ``v_bar``, zero profit and zero
    tax.
    """
    c = policy.grid()
    columns = (
        c,
        policy.segments(),
        policy.quantity(c),
        policy.price(c),
        policy.consumer_price(c),
        policy.profit(c),
        policy.unit_tax(c),
    )
    rows = []
    for x, s, q, p, y, pi, tau in zip(*columns):
        rows.append((
            float(x), s, float(q), float(p), float(y), float(pi),
            float(tau)))
    _write(
        filename,
        ['c', 'segment', 'q_star', 'p_star', 'consumer_price', 'profit',
         'tax'],
        rows)


def save_summary(filename, entries):
    """
    Stores a sequence of ``(key, value)`` pairs as a flat ``key=value`` text
    file. See :meth:`load_summary()`.
    """
    import pricecap
    with open(filename, 'w') as f:
        for key, value in entries:
            key = str(key)
            if '=' in key or '\n' in key:
                raise ValueError('Invalid summary key: ' + key)
            if isinstance(value, bool):
                value = 'true' if value else 'false'
            elif isinstance(value, float):
                value = pricecap.strfloat(value).strip()
            elif isinstance(value, (list, tuple)):
                value = ' '.join(str(x) for x in value)
            f.write(key + '=' + str(value) + '\n')


def load_summary(filename):
    """
    Loads a summary file written with :meth:`save_summary()` and returns an
    ordered dict. Numbers are returned as floats, ``true`` and ``false`` as
    booleans and everything else as strings.
    """
    import collections
    out = collections.OrderedDict()
    with open(filename, 'r') as f:
        for line in f:
            line = line.rstrip('\n')
            if not line:
                continue
            key, sep, value = line.partition('=')
            if not sep:
                raise ValueError('Invalid summary line: ' + line)
            if value in ('true', 'false'):
                out[key] = value == 'true'
                continue
            try:
                out[key] = float(value)
            except ValueError:
                out[key] = value
    return out


def save_tax(filename, tax, v_bar, n=1025):
    """
    Stores a :class:`TaxSchedule` as ``p,tau`` on its knot grid (see
    :meth:`TaxSchedule.knots()`). If the tax is prohibitive above some price,
    a final row at ``v_bar`` carries the text ``prohibitive``.
    """
    p, tau = tax.knots(v_bar, n)
    rows = [(float(x), float(y)) for x, y in zip(p, tau)]
    top = tax.prohibitive_above()
    if top is not None and top < v_bar:
        rows.append((float(v_bar), PROHIBITIVE))
    _write(filename, ['p', 'tau'], rows)


def _check_header(filename, header, expected):
    if header != expected:
        raise ValueError(
            'Unexpected header in ' + str(filename) + ': expected '
            + ','.join(expected) + '.')


def validate_policy_csv(filename, tol=1e-9):
    """
    Re-loads a policy CSV written by :meth:`save_policy()` and checks that
    the allocation is nonincreasing in cost and the tax is nonnegative (both
    up to ``tol``). Raises a ``ValueError`` naming the first offending row.
    """
    header, rows = load_csv(filename)
    _check_header(filename, header, [
        'c', 'segment', 'q_star', 'p_star', 'consumer_price', 'profit',
        'tax'])
    last_q = float('inf')
    for i, row in enumerate(rows):
        q, tau = row[2], row[6]
        if q > last_q + tol:
            raise ValueError(
                'Allocation increases at row ' + str(i + 1) + ' of '
                + str(filename) + '.')
        if tau < -tol:
            raise ValueError(
                'Negative tax at row ' + str(i + 1) + ' of ' + str(filename)
                + '.')
        last_q = q
    return True


def validate_tax_csv(filename, tol=1e-9):
    """
    Re-loads a tax CSV written by :meth:`save_tax()` and checks that prices
    increase and taxes are nonnegative (up to ``tol``). Raises a
    ``ValueError`` naming the first offending row.
    """
    header, rows = load_csv(filename)
    _check_header(filename, header, ['p', 'tau'])
    last_p = float('-inf')
    for i, (p, tau) in enumerate(rows):
        if not p > last_p:
            raise ValueError(
                'Prices do not increase at row ' + str(i + 1) + ' of '
                + str(filename) + '.')
        if tau != PROHIBITIVE and tau < -tol:
            raise ValueError(
                'Negative tax at row ' + str(i + 1) + ' of ' + str(filename)
                + '.')
        last_p = p
    return True
