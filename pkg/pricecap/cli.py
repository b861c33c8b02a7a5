#
# Command line interface: runs the pipeline on an environment file and writes
# CSV and summary files
#
# This file is part of PRICECAP which is
# released under the BSD 3-clause license. See accompanying LICENSE.md for
# copyright notice and full license details.
#
from __future__ import absolute_import, division
from __future__ import print_function, unicode_literals
import argparse
import json
import logging
import os
import sys

import pricecap
import pricecap.io

# Exit codes
EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_INVALID = 3

COMMANDS = ('check', 'lf', 'gate', 'solve', 'audit', 'oracle')


class RunConfig(object):
    """
    Settings for a single command line run: the environment file, the
    command, the output directory, and optional overrides of the solver
    settings in the environment file.

    Parameters
    ----------
    config_path
        Path to a JSON environment file (see :meth:`load_environment()`).
    command
        One of ``check``, ``lf``, ``gate``, ``solve``, ``audit`` or
        ``oracle``.
    out_dir
        Directory to write output files to (created if needed).
    grid
        Overrides ``solver.grid``.
    cbar_grid
        Overrides ``solver.cbar_grid``.
    seed
        Seed for the starting point of the brute-force oracle.
    quiet
        Set to ``True`` to disable progress output.
    """
    def __init__(self, config_path, command, out_dir='.', grid=None,
                 cbar_grid=None, seed=None, quiet=False):
        self._config_path = str(config_path)
        if command not in COMMANDS:
            raise ValueError(
                'Unknown command `' + str(command) + '`, expected one of '
                + ', '.join(COMMANDS) + '.')
        self._command = command
        self._out_dir = str(out_dir)
        self._overrides = {}
        if grid is not None:
            self._overrides['grid'] = grid
        if cbar_grid is not None:
            self._overrides['cbar_grid'] = cbar_grid
        self._seed = None if seed is None else int(seed)
        self._quiet = bool(quiet)

    def command(self):
        """ Returns the command to run. """
        return self._command

    def config_path(self):
        """ Returns the path to the environment file. """
        return self._config_path

    def load(self):
        """
        Loads the environment file and returns a tuple ``(environment,
        settings)``, with the command line overrides applied to the solver
        settings.
        """
        try:
            with open(self._config_path, 'r') as f:
                d = json.load(f)
        except ValueError as e:
            raise ValueError(
                'Unable to parse ' + self._config_path + ': ' + str(e))
        env = pricecap.environment_from_dict(d)
        if self._overrides:
            if not isinstance(d, dict):
                raise ValueError('Configuration must be a JSON object.')
            block = dict(d.get('solver', {}))
            block.update(self._overrides)
            d = dict(d)
            d['solver'] = block
        return env, pricecap.solver_settings(d)

    def out_dir(self):
        """ Returns the output directory. """
        return self._out_dir

    def path(self, name):
        """ Returns the path of an output file. """
        return os.path.join(self._out_dir, name)

    def quiet(self):
        """ Returns ``True`` if progress output is disabled. """
        return self._quiet

    def seed(self):
        """ Returns the oracle seed, or ``None``. """
        return self._seed


def _solve(env, settings, config):
    """ Runs a :class:`PolicySolver` with the given settings. """
    solver = pricecap.PolicySolver(env)
    solver.set_grid(settings['grid'])
    solver.set_cbar_grid(settings['cbar_grid'])
    solver.set_assumption_grid(settings['assumption_grid'])
    solver.set_gate_tolerance(settings['gate_tol'])
    solver.set_golden_tolerance(settings['golden_tol'])
    solver.set_log_to_screen(not config.quiet())
    policy = solver.run()
    return policy, solver.diagnostics()


def _policy_summary(policy, diagnostics):
    """ Returns summary entries for a solved policy. """
    entries = [
        ('verdict', diagnostics.gate().verdict()),
        ('c_bar', policy.c_bar()),
        ('c_hat', policy.c_hat()),
        ('c_L', policy.c_low()),
        ('p_hat', policy.p_hat()),
        ('welfare', policy.welfare()),
        ('lf_welfare', diagnostics.lf_welfare()),
        ('improvement', diagnostics.improvement()),
    ]
    report = diagnostics.progressivity()
    if report is not None:
        entries.append(('progressive', report.progressive()))
    entries.append(('flags', ','.join(policy.flags()) or 'none'))
    return entries


def _check(env, settings, config):
    report = pricecap.check_assumptions(env, settings['assumption_grid'])
    print(report)
    entries = []
    for name in report.names():
        entries.append((name, report.passed(name)))
        entries.append((name + '_margin', report.margin(name)))
    pricecap.io.save_summary(config.path('assumptions.txt'), entries)


def _lf(env, settings, config):
    lf = pricecap.lf_schedule(env, settings['grid'])
    pricecap.io.save_laissez_faire(config.path('laissez_faire.csv'), lf)
    entries = [
        ('c_lf', lf.cutoff()),
        ('lf_welfare', pricecap.lf_welfare(env)),
    ]
    pricecap.io.save_summary(config.path('summary.txt'), entries)
    for key, value in entries:
        print(key + ' = ' + str(value))


def _gate(env, settings, config):
    lf = pricecap.lf_schedule(env, settings['grid'])
    report = pricecap.gate(env, lf, settings['grid'], settings['gate_tol'])
    print(report)
    pricecap.io.save_margin_curve(config.path('margin.csv'), report)
    c, size = report.worst_violation()
    pricecap.io.save_summary(config.path('summary.txt'), [
        ('verdict', report.verdict()),
        ('worst_violation_c', c),
        ('worst_violation', size),
        ('margin_at_zero', report.margin_at_zero()),
    ])


def _solve_command(env, settings, config):
    policy, diagnostics = _solve(env, settings, config)
    print(policy)
    policy_path = config.path('policy.csv')
    pricecap.io.save_policy(policy_path, policy)
    pricecap.io.save_figure_prices(config.path('figure_prices.csv'), policy)
    pricecap.io.validate_policy_csv(policy_path)
    tax = diagnostics.tax()
    if tax is not None:
        tax_path = config.path('tax.csv')
        pricecap.io.save_tax(tax_path, tax, env.demand().v_bar())
        pricecap.io.validate_tax_csv(tax_path)
    pricecap.io.save_summary(
        config.path('summary.txt'), _policy_summary(policy, diagnostics))


def _audit(env, settings, config):
    policy, diagnostics = _solve(env, settings, config)
    tax = diagnostics.tax()
    if tax is None:
        tax = pricecap.ZeroTax(env.demand().v_bar())
    report = pricecap.ic_audit(
        env, tax, policy, settings['audit_grid'], settings['price_grid'])
    print(report)
    pricecap.io.save_audit(config.path('audit.csv'), report)
    pricecap.io.save_summary(config.path('summary.txt'), [
        ('max_price_deviation', report.max_price_deviation()),
        ('price_step', report.price_step()),
        ('max_profit_gap', report.max_profit_gap()),
    ])


def _oracle(env, settings, config):
    policy, diagnostics = _solve(env, settings, config)
    mechanism = pricecap.brute_force_mechanism(
        env, settings['oracle_n'], settings['oracle_iters'], config.seed())
    comparison = pricecap.compare_with_oracles(policy, mechanism)
    print(comparison)
    pricecap.io.save_grid_mechanism(
        config.path('grid_mechanism.csv'), mechanism)
    entries = []
    for name, solver, closed, brute in comparison.rows():
        entries.append((name + ' solver', solver))
        if closed is not None:
            entries.append((name + ' closed_form', closed))
        if brute is not None:
            entries.append((name + ' brute_force', brute))
    entries.append(('brute_force_converged', mechanism.converged()))
    pricecap.io.save_summary(config.path('oracle.txt'), entries)


_RUNNERS = {
    'check': _check,
    'lf': _lf,
    'gate': _gate,
    'solve': _solve_command,
    'audit': _audit,
    'oracle': _oracle,
}


def run(config):
    """
    Runs the command of a :class:`RunConfig` and returns an exit status: 0 on
    success, 2 if the environment is infeasible, and 3 if the configuration
    (or any other input) is invalid.
    """
    try:
        env, settings = config.load()
        if not os.path.isdir(config.out_dir()):
            os.makedirs(config.out_dir())
        _RUNNERS[config.command()](env, settings, config)
    except pricecap.InfeasibleEnvironmentError as e:
        print('Infeasible environment: ' + str(e), file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ValueError, IOError, OSError) as e:
        print('Invalid input: ' + str(e), file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def main(argv=None):
    """
    Parses command line arguments, runs the requested command and exits with
    its status.
    """
    parser = argparse.ArgumentParser(
        prog='pricecap',
        description='Optimal regulation of a monopolist with private costs.',
    )
    parser.add_argument(
        '--config', required=True, help='JSON environment file.')
    parser.add_argument(
        '--command', required=True, choices=COMMANDS,
        help='Pipeline stage to run.')
    parser.add_argument(
        '--out', default='.', help='Output directory.')
    parser.add_argument(
        '--grid', type=int, default=None, help='Cost grid size.')
    parser.add_argument(
        '--cbar-grid', type=int, default=None,
        help='Number of exclusion cutoffs searched before refinement.')
    parser.add_argument(
        '--seed', type=int, default=None,
        help='Seed for the brute-force oracle\'s starting point.')
    parser.add_argument(
        '--quiet', action='store_true', help='Disable progress output.')
    args = parser.parse_args(argv)

    # Library warnings go through the pricecap loggers
    logging.basicConfig(
        format='%(levelname)s %(name)s: %(message)s',
        level=logging.ERROR if args.quiet else logging.WARNING)

    config = RunConfig(
        args.config, args.command, args.out, args.grid, args.cbar_grid,
        args.seed, args.quiet)
    sys.exit(run(config))
