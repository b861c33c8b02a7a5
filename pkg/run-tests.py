#!/usr/bin/env python3
#
# Runs all unit tests included in Pricecap.
#
# This file is part of PRICECAP which is
# released under the BSD 3-clause license. See accompanying LICENSE.md for
# copyright notice and full license details.
#
from __future__ import absolute_import, division
from __future__ import print_function, unicode_literals
import argparse
import datetime
import inspect
import os
import re
import subprocess
import sys
import unittest


def run_unit_tests():
    """
    Runs unit tests (without subprocesses).
    """
    tests = os.path.join('pricecap', 'tests')
    suite = unittest.defaultTestLoader.discover(tests, pattern='test*.py')
    res = unittest.TextTestRunner(verbosity=2).run(suite)
    sys.exit(0 if res.wasSuccessful() else 1)


def run_subprocess(args, name):
    """
    Runs ``args`` in a subprocess and exits if it fails or is interrupted.
    """
    p = subprocess.Popen(args)
    try:
        ret = p.wait()
    except KeyboardInterrupt:
        try:
            p.terminate()
        except OSError:
            pass
        p.wait()
        print('')
        sys.exit(1)
    if ret != 0:
        print(name + ' FAILED')
        sys.exit(ret)


def run_flake8():
    """
    Runs flake8 in a subprocess, exits if it doesn't finish.
    """
    print('Running flake8 ... ')
    sys.stdout.flush()
    run_subprocess([sys.executable, '-m', 'flake8', 'pricecap'], 'flake8')
    print('ok')


def run_copyright_checks():
    """
    Checks that the copyright year in LICENSE.md is up-to-date and that each
    file contains the copyright header.
    """
    print('\nChecking that copyright is up-to-date and complete.')

    year_check = True
    current_year = str(datetime.datetime.now().year)
    with open('LICENSE.md', 'r') as f:
        if '-' + current_year in f.read():
            print('Copyright notice in LICENSE.md is up-to-date.')
        else:
            print('Copyright notice in LICENSE.md is NOT up-to-date.')
            year_check = False

    header_check = True
    copyright_header = """#
# This file is part of PRICECAP which is
# released under the BSD 3-clause license. See accompanying LICENSE.md for
# copyright notice and full license details.
#"""
    for dirname, subdir_list, file_list in os.walk('pricecap'):
        for f_name in file_list:
            if f_name.endswith('.py'):
                path = os.path.join(dirname, f_name)
                with open(path, 'r') as f:
                    if copyright_header not in f.read():
                        print('Copyright blurb missing from ' + path)
                        header_check = False
    if header_check:
        print('All files contain copyright header.')

    if not (year_check and header_check):
        print('FAILED')
        sys.exit(1)


def run_doctests():
    """
    Checks the docs can be built, and that every public class and function is
    documented in an rst file.
    """
    print('Checking if docs can be built.')
    run_subprocess([
        'sphinx-build', '-b', 'doctest', 'docs/source', 'docs/build/html',
        '-W'], 'sphinx')

    print('\nChecking that all classes and methods are documented in an RST '
          'file and that public interfaces are clean.')
    import pricecap
    import pricecap.cli
    import pricecap.io
    doc_symbols = get_all_documented_symbols()
    check_exposed_symbols(pricecap, ['pricecap.cli', 'pricecap.io'],
                          doc_symbols)
    check_exposed_symbols(pricecap.io, [], doc_symbols)
    check_exposed_symbols(pricecap.cli, None, doc_symbols)
    print('All classes and methods are documented in an RST file, and all '
          'public interfaces are clean.')


def check_exposed_symbols(module, submodule_names, doc_symbols):
    """
    Checks ``module`` for any classes and functions not contained in
    ``doc_symbols``, and for any modules not contained in
    ``submodule_names``.
    If ``submodule_names`` is ``None``, exposed modules are not checked.
    """
    exposed = [x for x in dir(module) if not x.startswith('_')]
    symbols = [getattr(module, x) for x in exposed]

    unexpected = []
    if submodule_names is not None:
        unexpected = [m.__name__ for m in symbols if inspect.ismodule(m)
                      and m.__name__ not in submodule_names]
    if unexpected:
        print('The following modules are unexpectedly exposed in the public '
              'interface of %s:' % module.__name__)
        for name in sorted(unexpected):
            print('  unexpected module: ' + name)
        print('FAILED')
        sys.exit(1)

    for kind, test in (('classes', inspect.isclass),
                       ('functions', inspect.isfunction)):
        # Only check symbols defined in this package
        names = [module.__name__ + '.' + x.__name__ for x in symbols
                 if test(x) and x.__module__.startswith('pricecap')]
        missing = [x for x in names if x not in doc_symbols[kind]]
        if missing:
            print('The following %s do not appear in any RST file:' % kind)
            for name in sorted(missing):
                print('  undocumented: ' + name)
            print('FAILED')
            sys.exit(1)


def get_all_documented_symbols():
    """
    Recursively traverses docs/source and identifies all autoclass and
    autofunction declarations.

    Returns a dict containing a list of classes and a list of functions.
    """
    doc_files = []
    for root, dirs, files in os.walk(os.path.join('docs', 'source')):
        for name in files:
            if name.endswith('.rst'):
                doc_files.append(os.path.join(root, name))

    regex_module = re.compile(r'\.\.\s*\S*module\:\:\s*(\S+)')
    regex_class = re.compile(r'\.\.\s*autoclass\:\:\s*(\S+)')
    regex_funct = re.compile(r'\.\.\s*autofunction\:\:\s*(\S+)')

    documented = {'classes': [], 'functions': []}
    for doc_file in doc_files:
        with open(doc_file, 'r') as f:
            module = ''
            for line in f.readlines():
                m_match = re.search(regex_module, line)
                c_match = re.search(regex_class, line)
                f_match = re.search(regex_funct, line)
                if m_match:
                    module = m_match.group(1) + '.'
                elif c_match:
                    documented['classes'].append(module + c_match.group(1))
                elif f_match:
                    documented['functions'].append(module + f_match.group(1))

    for symbols in documented.values():
        dupes = set([d for d in symbols if symbols.count(d) > 1])
        if dupes:
            print('The following symbols are unexpectedly documented multiple '
                  'times in rst files:')
            for d in sorted(dupes):
                print('  multiple entries in docs: ' + d)
            print('FAILED')
            sys.exit(1)

    return documented


if __name__ == '__main__':
    # Set up argument parsing
    parser = argparse.ArgumentParser(
        description='Run unit tests for Pricecap.',
        epilog='To run individual unit tests, use e.g.'
               ' $ pricecap/tests/test_solver.py',
    )
    parser.add_argument(
        '--unit',
        action='store_true',
        help='Run all unit tests using the `python` interpreter.',
    )
    parser.add_argument(
        '--doctest',
        action='store_true',
        help='Check if docs can be built and cover the public interface.',
    )
    parser.add_argument(
        '--style',
        action='store_true',
        help='Run flake8 on the package.',
    )
    parser.add_argument(
        '--copyright',
        action='store_true',
        help='Check copyright runs to the current year',
    )
    parser.add_argument(
        '--quick',
        action='store_true',
        help='Run quick checks (flake8, docs, unit tests)',
    )
    args = parser.parse_args()

    has_run = False
    if args.doctest:
        has_run = True
        run_doctests()
    if args.copyright:
        has_run = True
        run_copyright_checks()
    if args.style:
        has_run = True
        run_flake8()
    if args.quick:
        has_run = True
        run_flake8()
        run_doctests()
    # Unit tests exit when done, so run them last
    if args.unit or args.quick:
        has_run = True
        run_unit_tests()
    if not has_run:
        parser.print_help()
