"""
Utilities shared by all test modules: cached fields, factor tables and unit
groups, so each exhaustive enumeration is built only once per test run.
"""

import ffcorr
import io
from ffcorr import hayes


_fields = {}
_tables = {}
_groups = {}


def field(q):
    """The field with q elements and its default modulus."""
    try:
        return _fields[q]
    except KeyError:
        _fields[q] = ffcorr.FieldSpec.of_order(q)
        return _fields[q]


def poly(q, text):
    """Parses polynomial text over F_q."""
    return ffcorr.Poly.parse(field(q), text)


def table(q, n):
    """Factor table of the monic polynomials of degree <= n over F_q."""
    key = (q, n)
    if key not in _tables:
        _tables[key] = ffcorr.factor_sieve(field(q), n)
    return _tables[key]


def group(q, ell, modulus='1'):
    """Unit group of R_{ell,M} over F_q, M given as text."""
    key = (q, ell, modulus)
    if key not in _groups:
        _groups[key] = hayes.UnitGroup(hayes.HayesModulus(ell, poly(q, modulus)))
    return _groups[key]


def config(text):
    """Builds an ExperimentConfig from file content."""
    return ffcorr.ExperimentConfig(io.StringIO(text))
