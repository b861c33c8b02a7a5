#
# Runs the pricecap command line interface with ``python -m pricecap``.
#
# This file is part of PRICECAP which is
# released under the BSD 3-clause license. See accompanying LICENSE.md for
# copyright notice and full license details.
#
from __future__ import absolute_import, division
from __future__ import print_function, unicode_literals
from pricecap.cli import main


if __name__ == '__main__':
    main()
