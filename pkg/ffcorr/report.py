"""
Machine-readable reports.

A Report holds rows, one per checked identity or measured estimate, and
serializes them as JSON (sorted keys, versioned schema) or CSV. Both writers
accept a file name or a buffer.
"""

from fractions import Fraction
import csv
import io
import json
import numbers
import numpy as np


SCHEMA_VERSION = 1

CSV_COLUMNS = ('anchor', 'value', 'reference', 'residual', 'normalized', 'tolerance',
               'passed', 'outside_hypothesis')


def as_number(value):
    """Converts exact and numpy values to JSON-representable ones.

    Fractions become the string 'p/q' when not integral, complex numbers
    a [re, im] pair unless real; other values pass through.
    """
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value.numerator)
        return '{0}/{1}'.format(value.numerator, value.denominator)
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, numbers.Real):
        return float(value)
    if isinstance(value, numbers.Complex):
        value = complex(value)
        if value.imag == 0:
            return value.real
        return [value.real, value.imag]
    if isinstance(value, (list, tuple)):
        return [as_number(x) for x in value]
    if isinstance(value, dict):
        return dict((str(k), as_number(v)) for k, v in value.items())
    return str(value)


def _cell(value):
    value = as_number(value)
    if value is None:
        return ''
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        return ';'.join(_cell(x) for x in value)
    return str(value)


class Row(object):
    """One report entry.

    passed is derived from residual and tolerance unless given; rows
    without a tolerance are informational and never fail.
    """
    def __init__(self, anchor, value=None, reference=None, residual=None,
                 tolerance=None, passed=None, **extra):
        self.anchor = anchor
        self.value = value
        self.reference = reference
        self.residual = residual
        self.tolerance = tolerance
        if passed is None and tolerance is not None and residual is not None:
            passed = bool(residual <= tolerance)
        self.passed = None if passed is None else bool(passed)
        self.extra = extra

    def as_dict(self):
        data = {'anchor': self.anchor,
                'value': as_number(self.value),
                'reference': as_number(self.reference),
                'residual': as_number(self.residual),
                'tolerance': as_number(self.tolerance),
                'passed': self.passed}
        for key, value in self.extra.items():
            data[key] = as_number(value)
        return data

    @property
    def failed(self):
        return self.passed is False


class Report(object):
    """Rows produced by one command run."""
    def __init__(self, command, config_hash=None):
        self.command = command
        self.config_hash = config_hash
        self.rows = []
        self.tables = {}

    def add(self, anchor, value=None, reference=None, residual=None,
            tolerance=None, passed=None, **extra):
        row = Row(anchor, value, reference, residual, tolerance, passed, **extra)
        self.rows.append(row)
        return row

    def add_table(self, name, header, rows):
        """Attaches a named table, written by write_csv."""
        self.tables[name] = (list(header), [list(r) for r in rows])

    @property
    def failures(self):
        return [row for row in self.rows if row.failed]

    @property
    def passed(self):
        return not self.failures

    def as_dict(self):
        return {'schema_version': SCHEMA_VERSION,
                'command': self.command,
                'config_hash': self.config_hash,
                'passed': self.passed,
                'rows': [row.as_dict() for row in self.rows]}

    def to_json(self):
        return json.dumps(self.as_dict(), sort_keys=True, indent=2) + '\n'

    def write(self, filename):
        """Outputs the JSON report to a file name or buffer."""
        _write_text(filename, self.to_json())

    def csv_text(self, name=None):
        """CSV of a named table, or of the rows when name is None."""
        if name is None:
            header = list(CSV_COLUMNS)
            rows = [[_cell(row.as_dict().get(col)) for col in header] for row in self.rows]
        else:
            header, rows = self.tables[name]
            rows = [[_cell(x) for x in r] for r in rows]
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator='\n')
        writer.writerow(header)
        writer.writerows(rows)
        return buf.getvalue()

    def write_csv(self, filename, name=None):
        _write_text(filename, self.csv_text(name))


def _write_text(filename, text):
    try:
        f = io.open(filename, 'w', encoding='UTF-8', newline='')

    # Buffers are rewound so callers can read what was written.
    except TypeError:
        filename.write(text)
        filename.seek(0)

    else:
        with f:
            f.write(text)
