"""
Partitions, characters of the symmetric group, Fourier coefficients of
factorization functions and Schur polynomial evaluation.

A factorization function restricted to squarefree factorization types of
degree n is a class function on S_n: the factor degrees of a squarefree
polynomial form the cycle type of a permutation. Its Fourier coefficients
are its coordinates in the basis of irreducible characters.
"""

from .algebra import ExtFactType
from .errors import (DomainError, ResourceError)
from fractions import Fraction
import functools
import logging
import math
import numbers
import numpy as np


logger = logging.getLogger(__name__)

# Largest n with a cached character table.
MAX_TABLE_DEGREE = 12


class Partition(object):
    """A partition of n: non-increasing positive parts."""
    __slots__ = ('parts',)

    def __init__(self, parts):
        parts = tuple(int(x) for x in parts)
        if any(x < 1 for x in parts):
            raise DomainError('Partition parts must be positive: {0}'.format(parts))
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise DomainError('Partition parts must be non-increasing: {0}'.format(parts))
        self.parts = parts

    @classmethod
    def parse(cls, text):
        """Accepts `3,1,1` or `(3,1,1)`."""
        body = text.strip().strip('()')
        if not body:
            return cls(())
        try:
            return cls(int(x) for x in body.split(','))
        except ValueError:
            raise DomainError('Malformed partition {0!r}.'.format(text))

    @classmethod
    def hook(cls, n, r):
        """The hook (r, 1^(n-r))."""
        return cls((r,) + (1,) * (n - r))

    @property
    def n(self):
        return sum(self.parts)

    @property
    def length(self):
        return len(self.parts)

    def conjugate(self):
        if not self.parts:
            return self
        return Partition(sum(1 for x in self.parts if x > i)
                         for i in range(self.parts[0]))

    def multiplicities(self):
        """Mapping part -> number of occurrences."""
        counts = {}
        for x in self.parts:
            counts[x] = counts.get(x, 0) + 1
        return counts

    @property
    def z(self):
        """Order of the centralizer of a permutation with this cycle type."""
        z = 1
        for part, m in self.multiplicities().items():
            z *= part ** m * math.factorial(m)
        return z

    @property
    def class_size(self):
        return math.factorial(self.n) // self.z

    def hook_lengths(self):
        conj = self.conjugate().parts
        return [self.parts[i] - j + conj[j] - i - 1
                for i in range(len(self.parts)) for j in range(self.parts[i])]

    @property
    def is_hook(self):
        return len(self.parts) == 0 or all(x == 1 for x in self.parts[1:])

    def padded(self, k):
        """Parts padded with zeros to length k."""
        return self.parts + (0,) * (k - len(self.parts))

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __eq__(self, other):
        if isinstance(other, Partition):
            return self.parts == other.parts
        if isinstance(other, tuple):
            return self.parts == other
        return False

    def __ne__(self, other):
        return not self == other

    def __lt__(self, other):
        return self.parts < other.parts

    def __hash__(self):
        return hash(self.parts)

    def __str__(self):
        return '({0})'.format(','.join(str(x) for x in self.parts))

    def __repr__(self):
        return 'Partition({0})'.format(self)


def _as_partition(value):
    if isinstance(value, Partition):
        return value
    return Partition(value)


def partitions(n):
    """All partitions of n in reverse lexicographic order."""
    if n < 0:
        raise DomainError('Cannot partition a negative integer.')

    def generate(remaining, largest):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, largest), 0, -1):
            for rest in generate(remaining - first, first):
                yield (first,) + rest

    return [Partition(parts) for parts in generate(n, n)]


@functools.lru_cache(maxsize=None)
def _mn(shape, cycles):
    """Murnaghan-Nakayama recursion on beta-sets."""
    if not cycles:
        return 1 if not shape else 0
    r = cycles[0]
    length = len(shape)
    beta = [shape[i] + length - 1 - i for i in range(length)]
    occupied = set(beta)
    total = 0
    for b in beta:
        target = b - r
        if target < 0 or target in occupied:
            continue
        between = sum(1 for x in beta if target < x < b)
        moved = sorted((target if x == b else x for x in beta), reverse=True)
        new_shape = tuple(x for x in (moved[i] - (length - 1 - i) for i in range(length))
                          if x > 0)
        total += (-1) ** between * _mn(new_shape, cycles[1:])
    return total


def sn_character(lam, mu):
    """chi_lam evaluated on the class of cycle type mu."""
    lam = _as_partition(lam)
    mu = _as_partition(mu)
    if lam.n != mu.n:
        raise DomainError('Partitions {0} and {1} have different sizes.'.format(lam, mu))
    return _mn(lam.parts, mu.parts)


def hook_dimension(lam):
    """chi_lam(1^n) from the hook length formula."""
    lam = _as_partition(lam)
    product = 1
    for h in lam.hook_lengths():
        product *= h
    return math.factorial(lam.n) // product


class CharacterTable(object):
    """Irreducible characters of S_n, rows indexed by character, columns by class."""
    def __init__(self, n):
        self.n = n
        self.partitions = partitions(n)
        self.position = dict((lam, i) for i, lam in enumerate(self.partitions))
        self.values = np.array([[sn_character(lam, mu) for mu in self.partitions]
                                for lam in self.partitions], dtype=np.int64)
        self.class_sizes = [mu.class_size for mu in self.partitions]

    def __call__(self, lam, mu):
        return int(self.values[self.position[_as_partition(lam)],
                               self.position[_as_partition(mu)]])


_tables = {}


def character_table(n):
    """Cached character table of S_n."""
    if n > MAX_TABLE_DEGREE:
        raise ResourceError('Character tables are capped at n = {0}; got {1}.'.format(
            MAX_TABLE_DEGREE, n))
    try:
        return _tables[n]
    except KeyError:
        logger.debug('Building character table of S_%d', n)
        _tables[n] = CharacterTable(n)
        return _tables[n]


def _is_exact(values):
    return all(isinstance(v, numbers.Rational) for v in values)


def _conj(value):
    return value.conjugate()


class FourierCoefficients(object):
    """The spectrum {alpha_hat_lam : lam partition of n}."""
    def __init__(self, n, coeffs):
        self.n = n
        self.coeffs = coeffs

    def __getitem__(self, lam):
        return self.coeffs[_as_partition(lam)]

    def __iter__(self):
        return iter(self.coeffs.items())

    def __len__(self):
        return len(self.coeffs)

    def resynthesize(self, mu):
        """Sum over lam of alpha_hat_lam * chi_lam(mu)."""
        table = character_table(self.n)
        return sum(c * table(lam, mu) for lam, c in self.coeffs.items())

    def pairing(self, other, predicate=None):
        """Sum of alpha_hat_lam * conj(beta_hat_lam) over partitions
        accepted by predicate."""
        return sum((c * _conj(other[lam]) for lam, c in self.coeffs.items()
                    if predicate is None or predicate(lam)), Fraction(0))

    def csv_rows(self):
        """Rows `partition, re(coeff), im(coeff)`."""
        for lam, c in self.coeffs.items():
            c = complex(c)
            yield [str(lam), repr(c.real), repr(c.imag)]


def class_values(alpha, n):
    """alpha on the squarefree types of degree n, keyed by cycle type."""
    return dict((mu, alpha.value(ExtFactType.from_partition(mu.parts)))
                for mu in partitions(n))


def fourier_coefficients(alpha, n):
    """alpha_hat_lam = (1/n!) sum_mu |C_mu| alpha(mu) chi_lam(mu)."""
    table = character_table(n)
    values = class_values(alpha, n)
    exact = _is_exact(values.values())
    total = math.factorial(n)
    coeffs = {}
    for lam in table.partitions:
        acc = sum(size * values[mu] * table(lam, mu)
                  for mu, size in zip(table.partitions, table.class_sizes))
        coeffs[lam] = Fraction(acc, total) if exact else complex(acc) / total
    return FourierCoefficients(n, coeffs)


def plancherel_pairing(alpha, beta, n):
    """E_{S_n} alpha conj(beta), computed by class weights and from the two
    spectra. Returns (class_side, spectral_side)."""
    table = character_table(n)
    a = class_values(alpha, n)
    b = class_values(beta, n)
    class_side = sum(size * a[mu] * _conj(b[mu])
                     for mu, size in zip(table.partitions, table.class_sizes))
    if _is_exact(a.values()) and _is_exact(b.values()):
        class_side = Fraction(class_side, math.factorial(n))
    else:
        class_side = complex(class_side) / math.factorial(n)
    spectral = fourier_coefficients(alpha, n).pairing(fourier_coefficients(beta, n))
    return class_side, spectral


def schur_at_ones(lam, k):
    """s_lam(1, ..., 1) with k ones, by the product formula."""
    lam = _as_partition(lam)
    if k < 1:
        raise DomainError('Need at least one variable.')
    if lam.length > k:
        return Fraction(0)
    parts = lam.padded(k)
    value = Fraction(1)
    for i in range(k):
        for j in range(i + 1, k):
            value *= Fraction(parts[i] - parts[j] + j - i, j - i)
    return value


def complete_homogeneous(xs, degree):
    """h_0 .. h_degree of the variables, from power sums by Newton's identities."""
    xs = np.asarray(xs, dtype=complex)
    power = [complex(np.sum(xs ** m)) for m in range(degree + 1)]
    h = [1 + 0j]
    for m in range(1, degree + 1):
        h.append(sum(power[i] * h[m - i] for i in range(1, m + 1)) / m)
    return h


def schur_eval(lam, xs):
    """s_lam(x_1, ..., x_N) by the Jacobi-Trudi determinant det(h_{lam_i - i + j})."""
    lam = _as_partition(lam)
    xs = list(xs)
    if not xs:
        raise DomainError('Need at least one variable.')
    if lam.length > len(xs):
        return 0j
    if lam.length == 0:
        return 1 + 0j
    k = lam.length
    h = complete_homogeneous(xs, lam[0] + k)
    matrix = np.zeros((k, k), dtype=complex)
    for i in range(k):
        for j in range(k):
            m = lam[i] - i + j
            matrix[i, j] = h[m] if m >= 0 else 0
    return complex(np.linalg.det(matrix))
