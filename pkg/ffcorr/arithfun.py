"""
Factorization functions on F_q[T] and their mean values.

A factorization function depends only on the extended factorization type of
its argument, so it is determined by finitely many values per degree and is
automatically even: alpha(c*f) = alpha(f) for every nonzero scalar c.
"""

from .algebra import (ExtFactType, PolyIndex, factor_one, factor_types,
                      factorization, is_squarefree, reduce_arrays, poly_gcd)
from .errors import DomainError
from .symfunc import (Partition, sn_character)
from fractions import Fraction
import logging
import math
import numbers
import os
import re
import numpy as np


logger = logging.getLogger(__name__)


class FactorizationFunction(object):
    """Base class; subclasses implement value(eft)."""
    tag = None

    def value(self, eft):
        raise NotImplementedError()

    @property
    def exact(self):
        """True when every value is rational."""
        return True

    def __call__(self, f):
        return evaluate(self, f)

    def __str__(self):
        return self.tag

    def __repr__(self):
        return '{0}()'.format(type(self).__name__)


class Mobius(FactorizationFunction):
    tag = 'mu'

    def value(self, eft):
        if not eft.is_squarefree:
            return 0
        return -1 if len(eft) % 2 else 1


class VonMangoldt(FactorizationFunction):
    tag = 'Lambda'

    def value(self, eft):
        if len(eft) == 1:
            return eft.parts[0][0]
        return 0


class DivisorK(FactorizationFunction):
    """Number of ordered factorizations into k monic factors."""
    def __init__(self, k):
        if k < 2:
            raise DomainError('Divisor function order must be at least 2.')
        self.k = k

    @property
    def tag(self):
        return 'd{0}'.format(self.k)

    def value(self, eft):
        product = 1
        for _, e in eft:
            product *= math.comb(e + self.k - 1, self.k - 1)
        return product

    def __repr__(self):
        return 'DivisorK({0})'.format(self.k)


class SnCharacter(FactorizationFunction):
    """chi_lam on squarefree polynomials of degree n, zero elsewhere."""
    def __init__(self, lam):
        self.partition = lam if isinstance(lam, Partition) else Partition(lam)

    @property
    def tag(self):
        return 'chi{0}'.format(self.partition)

    def value(self, eft):
        if eft.degree != self.partition.n:
            raise DomainError('{0} is defined on degree {1}, got {2}.'.format(
                self.tag, self.partition.n, eft.degree))
        if not eft.is_squarefree:
            return 0
        return sn_character(self.partition, eft.to_partition())

    def __repr__(self):
        return 'SnCharacter({0})'.format(self.partition)


class IndicatorEFT(FactorizationFunction):
    """Indicator of a single extended factorization type."""
    def __init__(self, eft):
        self.eft = eft

    @property
    def tag(self):
        return 'ind{0}'.format(self.eft)

    def value(self, eft):
        return 1 if eft == self.eft else 0


class Constant(FactorizationFunction):
    """The constant function; tag `one` for the value 1."""
    def __init__(self, c=1):
        self.c = c

    @property
    def tag(self):
        return 'one' if self.c == 1 else 'const({0})'.format(self.c)

    @property
    def exact(self):
        return isinstance(self.c, numbers.Rational)

    def value(self, eft):
        return self.c


_USER_LINE = re.compile(r'^\s*EFT\s*:=\s*(?P<eft>[^;]*);\s*value\s*:=\s*(?P<value>\S.*?)\s*$')


def parse_value(text):
    """Rational (`3`, `-1/2`) or complex (`1+2j`, `1+2i`) value text."""
    text = text.strip()
    try:
        return Fraction(text)
    except ValueError:
        pass
    try:
        return complex(text.replace('i', 'j').replace(' ', ''))
    except ValueError:
        raise DomainError('Cannot parse value {0!r}.'.format(text))


class UserTable(FactorizationFunction):
    """A user-supplied function on the extended factorization types of one
    degree; missing types take the value 0."""
    def __init__(self, n, mapping, name='user'):
        self.n = n
        self.name = name
        self.mapping = {}
        for eft, value in mapping.items():
            if eft.degree != n:
                raise DomainError('Type {0} has degree {1}, table degree is {2}.'.format(
                    eft, eft.degree, n))
            self.mapping[eft] = value
        missing = [t for t in factor_types(n) if t not in self.mapping]
        if missing:
            logger.warning('User table %s lacks %d of the types of degree %d; '
                           'they default to 0: %s', name, len(missing), n,
                           ' '.join(str(t) for t in missing))

    @classmethod
    def load(cls, source):
        """Reads `EFT := (d1,e1)(d2,e2)... ; value := v` lines from a
        filename or buffer."""
        try:
            f = open(source, encoding='UTF-8')
            name = os.path.basename(source)
        except TypeError:
            f = source
            name = 'user'
        mapping = {}
        with f:
            for lineno, line in enumerate(f, 1):
                stripped = line.strip()
                if not stripped or stripped.startswith('#'):
                    continue
                match = _USER_LINE.match(stripped)
                if match is None:
                    raise DomainError('Line {0} of user table is malformed: {1!r}'.format(
                        lineno, stripped))
                mapping[ExtFactType.parse(match.group('eft'))] = parse_value(
                    match.group('value'))
        if not mapping:
            raise DomainError('User table {0} is empty.'.format(name))
        degrees = set(t.degree for t in mapping)
        if len(degrees) != 1:
            raise DomainError('User table {0} mixes degrees {1}.'.format(
                name, sorted(degrees)))
        return cls(degrees.pop(), mapping, name)

    @property
    def tag(self):
        return self.name

    @property
    def exact(self):
        return all(isinstance(v, numbers.Rational) for v in self.mapping.values())

    def value(self, eft):
        if eft.degree != self.n:
            raise DomainError('User table {0} is defined on degree {1}, got {2}.'.format(
                self.name, self.n, eft.degree))
        return self.mapping.get(eft, 0)


def parse_function(text):
    """Builds a factorization function from its name: Lambda, mu, one, dK,
    chi(3,1), ind(1,1)(2,1), or a user table path."""
    text = text.strip()
    if text in ('Lambda', 'L', 'vonmangoldt'):
        return VonMangoldt()
    if text in ('mu', 'mobius'):
        return Mobius()
    if text in ('one', '1'):
        return Constant(1)
    match = re.match(r'^d(\d+)$', text)
    if match:
        return DivisorK(int(match.group(1)))
    match = re.match(r'^chi\((.*)\)$', text)
    if match:
        return SnCharacter(Partition.parse(match.group(1)))
    match = re.match(r'^ind(\(.*\))$', text)
    if match:
        return IndicatorEFT(ExtFactType.parse(match.group(1)))
    if os.path.exists(text):
        return UserTable.load(text)
    raise DomainError('Unknown factorization function {0!r}.'.format(text))


def evaluate(alpha, f, table=None):
    """alpha(f) through the extended factorization type of f."""
    if f.is_zero:
        raise DomainError('Factorization functions are undefined at 0.')
    if table is not None and f.degree <= table.n:
        eft = table.eft_of(f)
    else:
        eft = factor_one(f)
    return alpha.value(eft)


def monic_divisors(f):
    """All monic divisors of f, found by trial division."""
    index = PolyIndex(f.spec)
    f = f.monic()
    divisors = []
    for d in range(f.degree + 1):
        for i in range(f.spec.q ** d):
            g = index.monic(d, i)
            if g.divides(f):
                divisors.append(g)
    return divisors


def _divisor_count(f, k, divisors):
    if k == 1:
        return 1
    return sum(_divisor_count(f // g, k - 1, [h for h in divisors if h.divides(f // g)])
               for g in divisors if g.divides(f))


def evaluate_direct(alpha, f):
    """Evaluates a builtin from its definition rather than its factorization
    type: Lambda via f = P^k, mu via squarefreeness and the number of prime
    factors, d_k by counting ordered monic factorizations."""
    if f.is_zero:
        raise DomainError('Factorization functions are undefined at 0.')
    f = f.monic()
    if isinstance(alpha, VonMangoldt):
        if f.degree < 1:
            return 0
        factors = factorization(f)
        prime = factors[0][0]
        k = f.degree // prime.degree
        return prime.degree if prime ** k == f else 0
    if isinstance(alpha, Mobius):
        if not is_squarefree(f):
            return 0
        return (-1) ** len(factorization(f))
    if isinstance(alpha, DivisorK):
        return _divisor_count(f, alpha.k, monic_divisors(f))
    return evaluate(alpha, f)


def max_abs(alpha, n):
    """max(alpha; n): the largest |alpha| over the types of degree n."""
    return max(abs(alpha.value(t)) for t in factor_types(n))


class Values(object):
    """Values of a function along an enumeration of polynomials.

    Exact values are held as int64 numerators over a common denominator;
    other values as complex128 with denominator 1.
    """
    def __init__(self, data, denom=1):
        self.data = data
        self.denom = denom

    @classmethod
    def tabulate(cls, alpha, table, degree):
        """alpha on the monic polynomials of the given degree, in index order."""
        ids = table.eft_ids(degree)
        per_type = [alpha.value(t) if t.degree == degree else 0 for t in table.efts]
        return cls.from_types(per_type, ids)

    @classmethod
    def from_types(cls, per_type, ids):
        if all(isinstance(v, numbers.Rational) for v in per_type):
            denom = 1
            for v in per_type:
                denom = denom * Fraction(v).denominator // math.gcd(
                    denom, Fraction(v).denominator)
            lut = np.array([int(Fraction(v) * denom) for v in per_type], dtype=np.int64)
            return cls(lut[ids], denom)
        lut = np.array([complex(v) for v in per_type], dtype=complex)
        return cls(lut[ids])

    @property
    def exact(self):
        return self.data.dtype.kind in 'iu'

    def __len__(self):
        return len(self.data)

    def take(self, selector):
        return Values(self.data[selector], self.denom)

    def conj(self):
        if self.exact:
            return self
        return Values(np.conj(self.data), self.denom)

    def __mul__(self, other):
        return Values(self.data * other.data, self.denom * other.denom)

    def total(self):
        """Exact Fraction or complex sum."""
        if self.exact:
            return Fraction(int(self.data.sum()), self.denom)
        return complex(np.sum(self.data)) / self.denom

    def mean(self):
        if not len(self.data):
            raise DomainError('Mean over an empty set.')
        return self.total() / len(self.data)

    def weighted_sums(self, groups, size):
        """Sums of the values over each group label 0..size-1."""
        if self.exact:
            sums = np.zeros(size, dtype=np.int64)
            np.add.at(sums, groups, self.data)
            return sums, self.denom
        real = np.bincount(groups, weights=self.data.real, minlength=size)
        imag = np.bincount(groups, weights=self.data.imag, minlength=size)
        return real + 1j * imag, self.denom


def monic_normalized_indices(spec, n, lead):
    """Stripped indices of the monic associates of all degree-n polynomials
    with leading coefficient code `lead`, in index order of the lower
    coefficients."""
    index = PolyIndex(spec)
    digits = index.digits(n)
    inv = spec.vinv(lead)
    return index.indices(spec.vmul(inv, digits))


def mean(alpha, n, table, domain='monic'):
    """E alpha over M_{n,q} (domain 'monic') or A_{n,q} (domain 'all')."""
    if n < 1:
        raise DomainError('Mean values need n >= 1.')
    values = Values.tabulate(alpha, table, n)
    if domain == 'monic':
        return values.mean()
    if domain != 'all':
        raise DomainError('Unknown domain {0!r}.'.format(domain))
    total = 0
    for lead in range(1, table.spec.q):
        total += values.take(monic_normalized_indices(table.spec, n, lead)).total()
    return total / ((table.spec.q - 1) * table.spec.q ** n)


def shifted_mean_with_linear_factor(alpha, n, table):
    """E over f in A_{n-1,q} of alpha(f*T)."""
    if n < 2:
        raise DomainError('The linear-factor mean needs n >= 2.')
    spec = table.spec
    q = spec.q
    values = Values.tabulate(alpha, table, n)
    total = 0
    for lead in range(1, q):
        # The monic associate of f*T is m*T; its stripped index is q * index(m).
        m = monic_normalized_indices(spec, n - 1, lead)
        total += values.take(q * m).total()
    return total / ((q - 1) * q ** (n - 1))


def unit_residues(delta):
    """Boolean array over residue indices mod delta marking the units."""
    spec = delta.spec
    modulus = delta.monic()
    k = modulus.degree
    if k == 0:
        return np.ones(1, dtype=bool)
    index = PolyIndex(spec)
    return np.array([poly_gcd(index.decode(i), modulus).degree == 0
                     for i in range(spec.q ** k)], dtype=bool)


def residue_indices(spec, n, delta, indices=None):
    """Residue index of every monic f of degree n modulo delta."""
    index = PolyIndex(spec)
    modulus = delta.monic()
    digits = index.digits(n, indices)
    full = np.concatenate([digits, np.ones(digits.shape[:-1] + (1,), dtype=np.int64)],
                          axis=-1)
    return index.indices(reduce_arrays(spec, full, modulus))


def coprime_mask(spec, n, delta):
    """Boolean array over monic degree-n indices: gcd(f, delta) = 1."""
    return unit_residues(delta)[residue_indices(spec, n, delta)]


def coprime_mean(alpha, n, delta, table):
    """E alpha over M_{n,q,delta}, the monics coprime to delta."""
    values = Values.tabulate(alpha, table, n)
    return values.take(coprime_mask(table.spec, n, delta)).mean()


def noncoprime_sum(alpha, n, delta, table):
    """Sum of alpha(f) over monic f of degree n with gcd(f, delta) != 1."""
    values = Values.tabulate(alpha, table, n)
    return values.take(~coprime_mask(table.spec, n, delta)).total()
