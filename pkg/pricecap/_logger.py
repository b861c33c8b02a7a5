#
# Progress logging for solvers and oracles
#
# This file is part of PRICECAP which is
# released under the BSD 3-clause license. See accompanying LICENSE.md for
# copyright notice and full license details.
#
from __future__ import absolute_import, division
from __future__ import print_function, unicode_literals
import sys
import numpy as np
import collections


def _format_time(seconds):
    """
    Formats a time in seconds as "mmm:ss.s".
    """
    minutes = int(seconds // 60)
    seconds -= 60 * minutes

    # Never show 60.0 seconds
    if seconds >= 59.95:
        minutes += 1
        seconds = 0

    return '{:>3d}:{:0>4.1f}'.format(minutes, seconds)


class _Field(object):
    """
    A named column of a :class:`Logger`. Subclasses format single values for
    the fixed-width table and for CSV files.
    """
    def __init__(self, name, width, file_only):
        self.name = name
        self.width = width
        self.file_only = bool(file_only)

    def header(self):
        return self.name.ljust(self.width)

    def cell(self, value):
        return self._text(value).ljust(self.width)

    def csv(self, value):
        return str(value)

    def _text(self, value):
        return str(value)


class _CounterField(_Field):
    def _text(self, value):
        return str(int(value))

    csv = _text


class _FloatField(_Field):
    def _text(self, value):
        # 'g' format, with fewer digits if an exponent is needed
        x = '{: .{}g}'.format(value, self.width - 2)
        if len(x) > self.width:
            x = '{: .{}g}'.format(value, self.width - 6)
        return x

    def csv(self, value):
        return '{:.17e}'.format(value)


class _TextField(_Field):
    def _text(self, value):
        return str(value)[:self.width]

    def csv(self, value):
        return '"' + str(value) + '"'


class _TimeField(_Field):
    def _text(self, value):
        return _format_time(value)


class Logger(object):
    """
    Writes rows of typed values to screen and/or a file, as a fixed-width
    table or as CSV.

    Example
    -------
    ::

        log = pricecap.Logger()
        log.add_counter('Iter.', max_value=129)
        log.add_float('c_bar')
        log.add_float('Welfare')
        log.log(1, 0.25, 0.0412)
        log.log(2, 0.5, 0.0583)

    Rows may also be passed in pieces: values are buffered until a complete
    row is available. The first row written is preceded by a header.
    """
    def __init__(self):
        super(Logger, self).__init__()
        self._stream = sys.stdout
        self._filename = None
        self._csv_mode = False
        self._fields = []
        self._pending = collections.deque()
        self._have_logged = False

    def _check_configurable(self):
        if self._have_logged:
            raise RuntimeError('Cannot configure after logging has started.')

    def _add(self, field):
        self._check_configurable()
        self._fields.append(field)
        return self

    def add_counter(self, name, width=5, max_value=None, file_only=False):
        """
        Adds a column for iteration or evaluation counts.

        Returns this :class:`Logger` object.

        Parameters
        ----------
        name : str
            The column header.
        width : int
            A hint for the width of this column. Wider numbers break the
            layout but are shown in full.
        max_value : int|None
            A hint for the largest count this column will show.
        file_only : boolean
            If set to ``True``, this column is only written to file.
        """
        name = str(name)
        width = max(int(width), len(name), 1)
        if max_value is not None:
            width = max(width, int(np.ceil(np.log10(float(max_value)))))
        return self._add(_CounterField(name, width, file_only))

    def add_float(self, name, width=9, file_only=False):
        """
        Adds a column for floating point numbers, shown with as many digits
        as the column ``width`` (at least 7) allows.

        Returns this :class:`Logger` object.
        """
        name = str(name)
        width = max(int(width), len(name), 7)
        return self._add(_FloatField(name, width, file_only))

    def add_string(self, name, width, file_only=False):
        """
        Adds a column showing at most ``width`` characters of a label, for
        example the stage of a search.

        Returns this :class:`Logger` object.
        """
        name = str(name)
        width = max(len(name), int(width))
        return self._add(_TextField(name, width, file_only))

    def add_time(self, name, file_only=False):
        """
        Adds a column showing an elapsed time, given in seconds.

        Returns this :class:`Logger` object.
        """
        name = str(name)
        return self._add(_TimeField(name, max(len(name), 8), file_only))

    def log(self, *data):
        """
        Logs a new row of data, or part of a row.
        """
        if self._stream is None and self._filename is None:
            return
        if not self._fields:
            raise ValueError('Unable to log: No fields specified.')

        n = len(self._fields)
        self._pending.extend(data)
        rows = []
        while len(self._pending) >= n:
            rows.append([self._pending.popleft() for i in range(n)])
        if rows:
            self._write(rows)

    def _write(self, rows):
        """ Writes complete rows to the stream and/or file. """
        first = not self._have_logged
        self._have_logged = True

        table = [[f.cell(x) for f, x in zip(self._fields, row)]
                 for row in rows]
        if first:
            table.insert(0, [f.header() for f in self._fields])

        if self._stream is not None:
            shown = [i for i, f in enumerate(self._fields) if not f.file_only]
            self._stream.write(''.join(
                ' '.join(cells[i] for i in shown) + '\n' for cells in table))

        if self._filename is None:
            return
        if self._csv_mode:
            lines = [[f.csv(x) for f, x in zip(self._fields, row)]
                     for row in rows]
            if first:
                lines.insert(0, ['"' + f.name + '"' for f in self._fields])
            lines = [','.join(cells) for cells in lines]
        else:
            lines = [' '.join(cells) for cells in table]
        with open(self._filename, 'w' if first else 'a') as f:
            f.write(''.join(line + '\n' for line in lines))

    def set_filename(self, filename=None, csv=False):
        """
        Writes the log to ``filename`` as well, or stops writing to file if
        ``filename=None``.

        The file gets the same table as the screen, with file-only columns
        included, or CSV if ``csv=True``.
        """
        self._check_configurable()
        self._filename = None if filename is None else str(filename)
        self._csv_mode = bool(csv)

    def set_stream(self, stream=sys.stdout):
        """
        Writes the log to ``stream``, or stops writing to screen if
        ``stream=None``.
        """
        self._check_configurable()
        self._stream = stream


class Loggable(object):
    """
    Interface for classes that add columns to a :class:`Logger`.
    """
    def _log_init(self, logger):
        """
        Adds this :class:`Loggable's<Loggable>` columns to a :class:`Logger`.
        """
        pass

    def _log_write(self, logger):
        """
        Logs a value for each column added in :meth:`_log_init()`.
        """
        pass
