"""
Exact arithmetic in F_q and F_q[T], together with the dense polynomial index
and factorization sieve every exhaustive computation in this package runs on.

Field elements are stored as integer codes in [0, q): the code of an element
is sum(c_j * p**j) over its coordinates c_j with respect to the power basis of
the field modulus, so code 0 is zero, code 1 is one, and the prime subfield is
coded by its residues. Polynomials are tuples of codes, lowest degree first.

The index of a polynomial f is sum(code(c_i) * q**i). Monic polynomials of
degree n are addressed by the index of their q**n lower coefficients, i.e.
with the leading coefficient stripped, so every degree occupies the dense
range [0, q**n) and numpy arrays of that length tabulate arithmetic functions.
"""

from .errors import (DomainError, ResourceError)
import io
import json
import logging
import os
import re
import numpy as np
import sympy


logger = logging.getLogger(__name__)

# Degree of the zero polynomial; compares below every integer.
NEG_INF = float('-inf')

DEFAULT_SIEVE_CAP = 10 ** 8

# Largest field order with full addition and multiplication tables.
MAX_FIELD_ORDER = 1024

# Product arrays built by the sieve are split into blocks of about this
# many entries.
SIEVE_BLOCK = 1 << 18


def _fp_trim(coeffs):
    """Strips high-order zero residues."""
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _fp_mul(a, b, p):
    """Multiplies two residue lists over F_p."""
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def _fp_rem(a, m, p):
    """Remainder of residue list a modulo the nonzero residue list m over F_p."""
    a = _fp_trim(a)
    m = _fp_trim(m)
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        factor = (a[-1] * inv_lead) % p
        shift = len(a) - len(m)
        for j, c in enumerate(m):
            a[shift + j] = (a[shift + j] - factor * c) % p
        a = _fp_trim(a)
    return a


def _fp_is_irreducible(m, p):
    """Trial division of a monic residue list by every monic polynomial of
    at most half its degree."""
    degree = len(m) - 1
    for d in range(1, degree // 2 + 1):
        for index in range(p ** d):
            divisor = [(index // p ** j) % p for j in range(d)] + [1]
            if not _fp_rem(list(m), divisor, p):
                return False
    return True


def default_modulus(p, e):
    """Returns the monic irreducible of degree e over F_p with the smallest
    index, as a residue tuple lowest degree first."""
    if e == 1:
        return (0, 1)
    for index in range(p ** e):
        candidate = [(index // p ** j) % p for j in range(e)] + [1]
        if _fp_is_irreducible(candidate, p):
            return tuple(candidate)
    raise DomainError('No irreducible of degree {0} over F_{1}'.format(e, p))


class FieldSpec(object):
    """The finite field F_q with q = p**e elements.

    Prime-power fields are realized as F_p[x]/(modulus). When no modulus is
    given the irreducible with the smallest index is used, e.g. x^2+x+1 for
    F_4, x^3+x+1 for F_8, x^2+1 for F_9 and x^4+x+1 for F_16.
    """
    def __init__(self, p, e=1, modulus=None):
        if not isinstance(p, int) or not isinstance(e, int):
            raise TypeError('Characteristic and degree must be integers.')
        if not sympy.isprime(p):
            raise DomainError('Characteristic {0} is not prime.'.format(p))
        if e < 1:
            raise DomainError('Extension degree must be at least 1.')
        if p ** e > MAX_FIELD_ORDER:
            raise ResourceError(
                'Field order {0} exceeds the table cap {1}.'.format(
                    p ** e, MAX_FIELD_ORDER))

        self.p = p
        self.e = e
        self.q = p ** e

        if modulus is None:
            modulus = default_modulus(p, e)
        modulus = tuple(int(c) % p for c in modulus)
        if e > 1:
            if len(_fp_trim(modulus)) != e + 1 or modulus[-1] != 1:
                raise DomainError('Field modulus must be monic of degree {0}.'.format(e))
            if not _fp_is_irreducible(list(modulus), p):
                raise DomainError('Field modulus {0} is reducible over F_{1}.'.format(
                    list(modulus), p))
        self.modulus = modulus

        self._build_tables()

    @classmethod
    def of_order(cls, q):
        """The field with q elements and its default modulus."""
        factors = sympy.factorint(q)
        if len(factors) != 1:
            raise DomainError('{0} is not a prime power.'.format(q))
        (p, e), = factors.items()
        return cls(int(p), int(e))

    def _build_tables(self):
        """Creates the code-level arithmetic tables."""
        p, e, q = self.p, self.e, self.q
        codes = np.arange(q)
        self.digit_table = np.stack([(codes // p ** j) % p for j in range(e)],
                                    axis=1)
        weights = p ** np.arange(e)

        sums = (self.digit_table[:, None, :] + self.digit_table[None, :, :]) % p
        self.add_table = (sums * weights).sum(axis=2)

        if e == 1:
            self.mul_table = np.outer(codes, codes) % p
        else:
            table = np.zeros((q, q), dtype=np.int64)
            for a in range(q):
                da = list(self.digit_table[a])
                for b in range(a, q):
                    product = _fp_rem(_fp_mul(da, list(self.digit_table[b]), p),
                                      list(self.modulus), p)
                    code = sum(c * p ** j for j, c in enumerate(product))
                    table[a, b] = table[b, a] = code
            self.mul_table = table

        self.neg_table = np.argmin(self.add_table, axis=1)
        self.inv_table = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            self.inv_table[a] = int(np.flatnonzero(self.mul_table[a] == 1)[0])

    def __eq__(self, other):
        return (isinstance(other, FieldSpec)
                and (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus))

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __repr__(self):
        if self.e == 1:
            return 'FieldSpec({0})'.format(self.p)
        return 'FieldSpec({0}, {1}, {2})'.format(self.p, self.e, list(self.modulus))

    @property
    def zero(self):
        return FieldElem(self, 0)

    @property
    def one(self):
        return FieldElem(self, 1)

    def element(self, value):
        """Converts an integer, residue vector or FieldElem into a FieldElem."""
        return FieldElem(self, self.code_of(value))

    def elements(self):
        """All field elements in code order."""
        return [FieldElem(self, c) for c in range(self.q)]

    def units(self):
        """The nonzero field elements in code order."""
        return [FieldElem(self, c) for c in range(1, self.q)]

    def code_of(self, value):
        """Returns the integer code of a field value.

        Integers denote elements of the prime subfield; lists or tuples are
        coordinate vectors with respect to the power basis.
        """
        if isinstance(value, FieldElem):
            if value.spec != self:
                raise TypeError('Element belongs to a different field.')
            return value.code
        if isinstance(value, (int, np.integer)):
            return int(value) % self.p
        if isinstance(value, (list, tuple)):
            if len(value) > self.e:
                raise DomainError('Vector {0} is longer than the extension degree.'.format(value))
            return sum((int(c) % self.p) * self.p ** j for j, c in enumerate(value))
        raise TypeError('Cannot convert {0!r} to a field element.'.format(value))

    def format_code(self, code):
        """Text form of an element: an integer for prime fields, a vector
        otherwise."""
        if self.e == 1:
            return str(int(code))
        return '[{0}]'.format(','.join(str(int(c)) for c in self.digit_table[code]))

    def parse_element(self, text):
        """Inverse of format_code; integers are accepted in every field."""
        text = text.strip()
        if text.startswith('['):
            if not text.endswith(']'):
                raise DomainError('Unterminated field vector {0!r}.'.format(text))
            body = text[1:-1].strip()
            values = [int(v) for v in body.split(',')] if body else []
            return self.code_of(values)
        return self.code_of(int(text))

    # Vectorized code arithmetic; arguments are integer arrays of codes.
    def vadd(self, a, b):
        return self.add_table[a, b]

    def vsub(self, a, b):
        return self.add_table[a, self.neg_table[b]]

    def vmul(self, a, b):
        return self.mul_table[a, b]

    def vneg(self, a):
        return self.neg_table[a]

    def vinv(self, a):
        if np.any(np.asarray(a) == 0):
            raise DomainError('Cannot invert zero.')
        return self.inv_table[a]

    def pow_code(self, code, exponent):
        """Raises a code to an integer power."""
        if exponent < 0:
            if code == 0:
                raise DomainError('Cannot invert zero.')
            code = int(self.inv_table[code])
            exponent = -exponent
        result = 1
        base = code
        while exponent:
            if exponent & 1:
                result = int(self.mul_table[result, base])
            base = int(self.mul_table[base, base])
            exponent >>= 1
        return result


class FieldElem(object):
    """An element of a FieldSpec, stored by its code."""
    __slots__ = ('spec', 'code')

    def __init__(self, spec, code):
        self.spec = spec
        self.code = int(code)

    @property
    def coeffs(self):
        """Coordinates with respect to the power basis of the modulus."""
        return tuple(int(c) for c in self.spec.digit_table[self.code])

    def _other(self, other):
        return self.spec.code_of(other)

    def __add__(self, other):
        return FieldElem(self.spec, self.spec.add_table[self.code, self._other(other)])

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.spec, self.spec.vsub(self.code, self._other(other)))

    def __rsub__(self, other):
        return FieldElem(self.spec, self.spec.vsub(self._other(other), self.code))

    def __mul__(self, other):
        if isinstance(other, Poly):
            return NotImplemented
        return FieldElem(self.spec, self.spec.mul_table[self.code, self._other(other)])

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElem(self.spec, self.spec.neg_table[self.code])

    def inverse(self):
        if self.code == 0:
            raise DomainError('Cannot invert zero.')
        return FieldElem(self.spec, self.spec.inv_table[self.code])

    def __truediv__(self, other):
        return self * self.spec.element(other).inverse()

    def __pow__(self, exponent):
        return FieldElem(self.spec, self.spec.pow_code(self.code, exponent))

    def __eq__(self, other):
        try:
            return self.code == self.spec.code_of(other)
        except TypeError:
            return False

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.spec, self.code))

    def __bool__(self):
        return self.code != 0

    __nonzero__ = __bool__

    def __int__(self):
        return self.code

    def __str__(self):
        return self.spec.format_code(self.code)

    def __repr__(self):
        return 'FieldElem({0})'.format(self)


class Poly(object):
    """A polynomial over a FieldSpec; coefficients are codes, lowest degree
    first, with no zero at the top."""
    __slots__ = ('spec', 'codes')

    def __init__(self, spec, coeffs=()):
        self.spec = spec
        codes = [spec.code_of(c) for c in coeffs]
        while codes and codes[-1] == 0:
            codes.pop()
        self.codes = tuple(codes)

    @classmethod
    def from_codes(cls, spec, codes):
        """Builds a polynomial directly from integer codes."""
        f = cls.__new__(cls)
        f.spec = spec
        codes = [int(c) for c in codes]
        while codes and codes[-1] == 0:
            codes.pop()
        f.codes = tuple(codes)
        return f

    @classmethod
    def T(cls, spec):
        return cls.from_codes(spec, (0, 1))

    @classmethod
    def constant(cls, spec, value):
        return cls.from_codes(spec, (spec.code_of(value),))

    @classmethod
    def monomial(cls, spec, degree, value=1):
        return cls.from_codes(spec, (0,) * degree + (spec.code_of(value),))

    @classmethod
    def parse(cls, spec, text):
        """Parses the `c_k*T^k + ... + c_0` text format."""
        return parse_poly(spec, text)

    @property
    def coeffs(self):
        return tuple(FieldElem(self.spec, c) for c in self.codes)

    @property
    def degree(self):
        if not self.codes:
            return NEG_INF
        return len(self.codes) - 1

    @property
    def lc(self):
        """Leading coefficient; zero for the zero polynomial."""
        if not self.codes:
            return self.spec.zero
        return FieldElem(self.spec, self.codes[-1])

    @property
    def is_monic(self):
        return bool(self.codes) and self.codes[-1] == 1

    @property
    def is_zero(self):
        return not self.codes

    @property
    def index(self):
        return PolyIndex(self.spec).encode(self)

    @property
    def monic_index(self):
        return PolyIndex(self.spec).monic_index(self)

    def coefficient(self, i):
        """Code of the coefficient of T^i; zero beyond the degree."""
        if 0 <= i < len(self.codes):
            return self.codes[i]
        return 0

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.spec != self.spec:
                raise TypeError('Polynomials belong to different fields.')
            return other
        return Poly.constant(self.spec, other)

    def __add__(self, other):
        other = self._coerce(other)
        width = max(len(self.codes), len(other.codes))
        add = self.spec.add_table
        codes = [add[self.coefficient(i), other.coefficient(i)] for i in range(width)]
        return Poly.from_codes(self.spec, codes)

    __radd__ = __add__

    def __neg__(self):
        neg = self.spec.neg_table
        return Poly.from_codes(self.spec, [neg[c] for c in self.codes])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero or other.is_zero:
            return Poly(self.spec)
        add = self.spec.add_table
        mul = self.spec.mul_table
        out = [0] * (len(self.codes) + len(other.codes) - 1)
        for i, a in enumerate(self.codes):
            if a == 0:
                continue
            for j, b in enumerate(other.codes):
                out[i + j] = add[out[i + j], mul[a, b]]
        return Poly.from_codes(self.spec, out)

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if exponent < 0:
            raise DomainError('Negative polynomial powers are undefined.')
        result = Poly.constant(self.spec, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero:
            raise DomainError('Division by the zero polynomial.')
        spec = self.spec
        add, mul, neg = spec.add_table, spec.mul_table, spec.neg_table
        rem = list(self.codes)
        g = other.codes
        inv_lead = spec.inv_table[g[-1]]
        quot = [0] * max(len(rem) - len(g) + 1, 0)
        while len(rem) >= len(g):
            factor = mul[rem[-1], inv_lead]
            shift = len(rem) - len(g)
            quot[shift] = factor
            for j, c in enumerate(g):
                rem[shift + j] = add[rem[shift + j], neg[mul[factor, c]]]
            while rem and rem[-1] == 0:
                rem.pop()
        return Poly.from_codes(spec, quot), Poly.from_codes(spec, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other):
        """True if self divides other."""
        return (other % self).is_zero

    def monic(self):
        """The monic associate; the zero polynomial is returned unchanged."""
        if self.is_zero:
            return self
        inv = self.spec.inv_table[self.codes[-1]]
        mul = self.spec.mul_table
        return Poly.from_codes(self.spec, [mul[c, inv] for c in self.codes])

    def derivative(self):
        """Formal derivative; i*c_i is computed in the prime subfield."""
        mul = self.spec.mul_table
        p = self.spec.p
        codes = [mul[i % p, c] for i, c in enumerate(self.codes)][1:]
        return Poly.from_codes(self.spec, codes)

    def eval_at(self, a):
        """Evaluates at a field element by Horner's rule."""
        x = self.spec.code_of(a)
        add, mul = self.spec.add_table, self.spec.mul_table
        acc = 0
        for c in reversed(self.codes):
            acc = add[mul[acc, x], c]
        return FieldElem(self.spec, acc)

    __call__ = eval_at

    def powmod(self, exponent, modulus):
        """self**exponent reduced modulo a nonzero polynomial."""
        result = Poly.constant(self.spec, 1) % modulus
        base = self % modulus
        while exponent:
            if exponent & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            exponent >>= 1
        return result

    def substitute(self, c1, c2=0):
        """Returns f(c1*T + c2) / c1**deg f."""
        spec = self.spec
        c1 = spec.element(c1)
        if not c1:
            raise DomainError('Substitution scale must be nonzero.')
        linear = Poly.from_codes(spec, (spec.code_of(c2), c1.code))
        result = Poly(spec)
        for c in reversed(self.codes):
            result = result * linear + Poly.from_codes(spec, (c,))
        if self.is_zero:
            return result
        return result * (c1 ** -self.degree)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.spec == other.spec and self.codes == other.codes
        try:
            return self == Poly.constant(self.spec, other)
        except TypeError:
            return False

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.spec, self.codes))

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return 'Poly({0!r})'.format(format_poly(self))


def poly_gcd(f, g):
    """Monic generator of the ideal (f, g); the zero polynomial if both are zero."""
    a, b = f, g
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def format_poly(f):
    """Formats a polynomial as `c_k*T^k + ... + c_0`."""
    if f.is_zero:
        return '0'
    terms = []
    for i in range(len(f.codes) - 1, -1, -1):
        c = f.codes[i]
        if c == 0:
            continue
        coeff = f.spec.format_code(c)
        if i == 0:
            terms.append(coeff)
            continue
        power = 'T' if i == 1 else 'T^{0}'.format(i)
        terms.append(power if c == 1 else '{0}*{1}'.format(coeff, power))
    return ' + '.join(terms)


_TERM = re.compile(r"""
    (?P<sign>[+-]?)
    (?:
        (?P<coeff>\[[^\]]*\]|\d+)(?:\*?(?P<var1>T)(?:\^(?P<exp1>\d+))?)?
      |
        (?P<var2>T)(?:\^(?P<exp2>\d+))?
    )
""", re.VERBOSE)


def parse_poly(spec, text):
    """Parses polynomial text; whitespace is ignored and integer
    coefficients are taken in the prime subfield."""
    compact = re.sub(r'\s+', '', text)
    if not compact:
        raise DomainError('Empty polynomial text.')
    result = Poly(spec)
    pos = 0
    while pos < len(compact):
        match = _TERM.match(compact, pos)
        if match is None or match.end() == pos:
            raise DomainError('Cannot parse polynomial {0!r} at offset {1}.'.format(text, pos))
        if pos > 0 and not match.group('sign'):
            raise DomainError('Missing operator in {0!r} at offset {1}.'.format(text, pos))
        if match.group('coeff') is not None:
            code = spec.parse_element(match.group('coeff'))
            has_var = match.group('var1') is not None
            exp = match.group('exp1')
        else:
            code = 1
            has_var = True
            exp = match.group('exp2')
        degree = (int(exp) if exp else 1) if has_var else 0
        term = Poly.monomial(spec, degree, FieldElem(spec, code))
        if match.group('sign') == '-':
            term = -term
        result = result + term
        pos = match.end()
    return result


class PolyIndex(object):
    """The dense integer index of polynomials over one field."""
    def __init__(self, spec):
        self.spec = spec

    def encode(self, f):
        """Returns sum(code(c_i) * q**i)."""
        q = self.spec.q
        return sum(c * q ** i for i, c in enumerate(f.codes))

    def decode(self, index):
        """Inverse of encode."""
        if index < 0:
            raise DomainError('Polynomial indices are nonnegative.')
        q = self.spec.q
        codes = []
        while index:
            index, c = divmod(index, q)
            codes.append(c)
        return Poly.from_codes(self.spec, codes)

    def monic_index(self, f):
        """Index of a monic polynomial with its leading coefficient stripped."""
        if not f.is_monic:
            raise DomainError('{0} is not monic.'.format(f))
        return self.encode(f) - self.spec.q ** f.degree

    def monic(self, n, index):
        """The monic polynomial of degree n with the given stripped index."""
        if not 0 <= index < self.spec.q ** n:
            raise DomainError('Index {0} out of range for degree {1}.'.format(index, n))
        return self.decode(index + self.spec.q ** n)

    def digits(self, n, indices=None):
        """Coefficient codes c_0 .. c_{n-1} of monic polynomials of degree n,
        one row per index."""
        q = self.spec.q
        if indices is None:
            indices = np.arange(q ** n, dtype=np.int64)
        indices = np.asarray(indices, dtype=np.int64)
        powers = q ** np.arange(n, dtype=np.int64)
        return (indices[..., None] // powers) % q

    def indices(self, digits):
        """Inverse of digits: collapses the last axis of a code array."""
        digits = np.asarray(digits, dtype=np.int64)
        powers = self.spec.q ** np.arange(digits.shape[-1], dtype=np.int64)
        return (digits * powers).sum(axis=-1)


def conv_arrays(spec, a, b):
    """Multiplies coefficient arrays along the last axis, broadcasting the
    leading axes."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    width_a = a.shape[-1]
    width_b = b.shape[-1]
    shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1]) + (width_a + width_b - 1,)
    out = np.zeros(shape, dtype=np.int64)
    if spec.e == 1:
        for i in range(width_a):
            out[..., i:i + width_b] += a[..., i:i + 1] * b
        return out % spec.p
    for i in range(width_a):
        product = spec.mul_table[a[..., i:i + 1], b]
        out[..., i:i + width_b] = spec.add_table[out[..., i:i + width_b], product]
    return out


def reduce_arrays(spec, a, modulus):
    """Remainders of coefficient arrays (last axis) modulo a monic polynomial.

    The result has width deg(modulus).
    """
    k = modulus.degree
    if not modulus.is_monic:
        raise DomainError('Array reduction needs a monic modulus.')
    a = np.array(a, dtype=np.int64)
    width = a.shape[-1]
    if width < k:
        pad = np.zeros(a.shape[:-1] + (k - width,), dtype=np.int64)
        return np.concatenate([a, pad], axis=-1)
    m = modulus.codes
    for top in range(width - 1, k - 1, -1):
        c = a[..., top]
        for j in range(k):
            if m[j]:
                a[..., top - k + j] = spec.vsub(a[..., top - k + j], spec.vmul(c, m[j]))
        a[..., top] = 0
    return a[..., :k]


def enumerate_monic(spec, n):
    """Yields the q**n monic polynomials of degree n in index order."""
    if n < 0:
        raise DomainError('Degree must be nonnegative.')
    index = PolyIndex(spec)
    for i in range(spec.q ** n):
        yield index.monic(n, i)


def enumerate_all(spec, n):
    """Yields the q**n (q-1) polynomials of degree exactly n in index order."""
    if n < 0:
        raise DomainError('Degree must be nonnegative.')
    index = PolyIndex(spec)
    q = spec.q
    for i in range(q ** n, q ** (n + 1)):
        yield index.decode(i)


def is_squarefree(f):
    """True if no irreducible factor of f is repeated."""
    if f.is_zero:
        raise DomainError('The zero polynomial has no factorization.')
    return poly_gcd(f, f.derivative()).degree == 0


def is_irreducible(f):
    """Rabin's test: T^(q^n) = T mod f and gcd(T^(q^(n/r)) - T, f) = 1 for
    every prime r dividing n = deg f."""
    if f.is_zero or f.degree < 1:
        raise DomainError('Irreducibility needs a nonconstant polynomial.')
    f = f.monic()
    n = f.degree
    q = f.spec.q
    t = Poly.T(f.spec)
    for r in sympy.primefactors(n):
        frob = _frobenius_power(t, n // r, f)
        if poly_gcd(frob - t, f).degree != 0:
            return False
    return (_frobenius_power(t, n, f) - t) % f == Poly(f.spec)


def _frobenius_power(x, k, modulus):
    """x**(q**k) modulo modulus."""
    q = x.spec.q
    for _ in range(k):
        x = x.powmod(q, modulus)
    return x


def factorization(f):
    """Trial-division factorization into monic irreducibles.

    Returns a list of (irreducible, multiplicity) pairs ordered by degree
    then index.
    """
    if f.is_zero:
        raise DomainError('The zero polynomial has no factorization.')
    spec = f.spec
    rest = f.monic()
    index = PolyIndex(spec)
    factors = []
    d = 1
    while rest.degree >= 2 * d:
        for i in range(spec.q ** d):
            divisor = index.monic(d, i)
            count = 0
            quot, rem = divmod(rest, divisor)
            while rem.is_zero:
                rest = quot
                count += 1
                quot, rem = divmod(rest, divisor)
            if count:
                factors.append((divisor, count))
            if rest.degree < 2 * d:
                break
        d += 1
    if rest.degree >= 1:
        factors.append((rest, 1))
        factors.sort(key=lambda pair: (pair[0].degree, pair[0].monic_index))
    return factors


def factor_one(f):
    """Extended factorization type of a single polynomial by trial division."""
    return ExtFactType((g.degree, e) for g, e in factorization(f))


def roots_by_evaluation(delta):
    """Counts the distinct roots of delta in F_q by evaluating at every element."""
    if delta.is_zero:
        raise DomainError('The zero polynomial vanishes everywhere.')
    return sum(1 for a in delta.spec.elements() if not delta.eval_at(a))


def roots_by_gcd(delta):
    """Counts the distinct roots of delta in F_q as deg gcd(delta, T^q - T)."""
    if delta.is_zero:
        raise DomainError('The zero polynomial vanishes everywhere.')
    if delta.degree == 0:
        return 0
    t = Poly.T(delta.spec)
    frob = t.powmod(delta.spec.q, delta)
    return poly_gcd(delta, frob - t).degree


def distinct_roots_in_base(delta):
    """a(delta, q): the number of distinct roots of delta in F_q.

    Both the evaluation count and the gcd degree are computed; they must
    agree.
    """
    direct = roots_by_evaluation(delta)
    via_gcd = roots_by_gcd(delta)
    if direct != via_gcd:
        raise ArithmeticError('Root counts disagree for {0}: {1} != {2}'.format(
            delta, direct, via_gcd))
    return direct


def euler_phi(m):
    """Size of the unit group of F_q[T]/(m)."""
    if m.is_zero:
        raise DomainError('Totient of the zero polynomial is undefined.')
    q = m.spec.q
    phi = 1
    for d, e in factor_one(m):
        phi *= q ** (d * (e - 1)) * (q ** d - 1)
    return phi


def mobius_int(d):
    """The integer Mobius function."""
    exponents = sympy.factorint(d).values()
    if any(e > 1 for e in exponents):
        return 0
    return -1 if len(exponents) % 2 else 1


def irreducible_count(q, n):
    """Number of monic irreducibles of degree n over F_q (Gauss's formula)."""
    return sum(mobius_int(d) * q ** (n // d) for d in sympy.divisors(n)) // n


class ExtFactType(object):
    """Extended factorization type: the multiset of (degree, multiplicity)
    pairs of a factorization, kept as a sorted tuple."""
    __slots__ = ('parts',)

    def __init__(self, parts=()):
        clean = []
        for d, e in parts:
            d, e = int(d), int(e)
            if d < 1 or e < 1:
                raise DomainError('Factor degrees and multiplicities must be positive.')
            clean.append((d, e))
        self.parts = tuple(sorted(clean))

    @classmethod
    def from_partition(cls, parts):
        """The squarefree type whose factor degrees are the partition parts."""
        return cls((d, 1) for d in parts)

    @classmethod
    def parse(cls, text):
        """Parses `(d1,e1)(d2,e2)...`; an empty string is the type of 1."""
        compact = re.sub(r'\s+', '', text)
        pairs = re.findall(r'\((\d+),(\d+)\)', compact)
        if ''.join('({0},{1})'.format(d, e) for d, e in pairs) != compact:
            raise DomainError('Malformed factorization type {0!r}.'.format(text))
        return cls(pairs)

    @property
    def degree(self):
        return sum(d * e for d, e in self.parts)

    @property
    def is_squarefree(self):
        return all(e == 1 for _, e in self.parts)

    def to_partition(self):
        """Factor degrees in non-increasing order; squarefree types only."""
        if not self.is_squarefree:
            raise DomainError('{0} is not squarefree.'.format(self))
        return tuple(sorted((d for d, _ in self.parts), reverse=True))

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __eq__(self, other):
        return isinstance(other, ExtFactType) and self.parts == other.parts

    def __ne__(self, other):
        return not self == other

    def __lt__(self, other):
        return self.parts < other.parts

    def __hash__(self):
        return hash(self.parts)

    def __str__(self):
        return ''.join('({0},{1})'.format(d, e) for d, e in self.parts)

    def __repr__(self):
        return 'ExtFactType({0!r})'.format(str(self))


def factor_types(n):
    """Every extended factorization type of total degree n, sorted."""
    found = set()

    def extend(remaining, smallest, parts):
        if remaining == 0:
            found.add(ExtFactType(parts))
            return
        for d in range(smallest[0], remaining + 1):
            for e in range(1, remaining // d + 1):
                if (d, e) < smallest:
                    continue
                extend(remaining - d * e, (d, e), parts + [(d, e)])

    extend(n, (1, 1), [])
    return sorted(found)


class FactorTable(object):
    """Extended factorization types of all monic polynomials of degree <= n.

    Each degree d has an int32 array of length q**d holding an id into the
    interned list `efts`.
    """
    def __init__(self, spec, n, efts, ids, irreducibles):
        self.spec = spec
        self.n = n
        self.efts = efts
        self._ids = ids
        self._irreducibles = irreducibles
        self.lookup = dict((t, i) for i, t in enumerate(efts))

    def eft_ids(self, d):
        """Array of EFT ids for the monic polynomials of degree d."""
        if not 0 <= d <= self.n:
            raise DomainError('Degree {0} outside the sieved range 0..{1}.'.format(d, self.n))
        return self._ids[d]

    def eft_of(self, f):
        """Extended factorization type of a polynomial of degree <= n."""
        f = f.monic()
        return self.efts[int(self.eft_ids(f.degree)[f.monic_index])]

    def irreducibles(self, d):
        """Stripped indices of the monic irreducibles of degree d."""
        if not 1 <= d <= self.n:
            raise DomainError('Degree {0} outside the sieved range 1..{1}.'.format(d, self.n))
        return self._irreducibles[d]

    def irreducible_polys(self, d):
        index = PolyIndex(self.spec)
        return [index.monic(d, int(i)) for i in self.irreducibles(d)]

    def spot_check(self, f):
        """Compares the tabulated type with trial division."""
        return self.eft_of(f) == factor_one(f)

    def save(self, path):
        """Writes the table to a compressed .npz file."""
        arrays = dict(('ids_{0}'.format(d), a) for d, a in enumerate(self._ids))
        arrays.update(('irr_{0}'.format(d), a) for d, a in self._irreducibles.items())
        header = {'p': self.spec.p, 'e': self.spec.e,
                  'modulus': list(self.spec.modulus), 'n': self.n,
                  'efts': [list(map(list, t.parts)) for t in self.efts]}
        arrays['header'] = np.array(json.dumps(header, sort_keys=True))
        np.savez_compressed(path, **arrays)

    @classmethod
    def load(cls, spec, path):
        """Reads a table written by save()."""
        with np.load(path, allow_pickle=False) as data:
            header = json.loads(str(data['header']))
            if (header['p'], header['e'], tuple(header['modulus'])) != (
                    spec.p, spec.e, spec.modulus):
                raise DomainError('Cached table {0} belongs to another field.'.format(path))
            n = header['n']
            efts = [ExtFactType(parts) for parts in header['efts']]
            ids = [data['ids_{0}'.format(d)] for d in range(n + 1)]
            irreducibles = dict((d, data['irr_{0}'.format(d)]) for d in range(1, n + 1))
        return cls(spec, n, efts, ids, irreducibles)


def _cache_path(cache_dir, spec, n):
    name = 'sieve_p{0}_e{1}_m{2}_n{3}.npz'.format(
        spec.p, spec.e, '-'.join(str(c) for c in spec.modulus), n)
    return os.path.join(cache_dir, name)


def factor_sieve(spec, n, cap=DEFAULT_SIEVE_CAP, cache_dir=None):
    """Tabulates the extended factorization type of every monic polynomial
    of degree <= n with a smallest-factor sieve.

    Irreducibles are processed in increasing degree and index; each one marks
    its multiples of the current degree, and a polynomial keeps the smallest
    irreducible that marked it. The factorization type is then assembled from
    the type of the cofactor.
    """
    if n < 1:
        raise DomainError('Sieve degree must be at least 1.')
    entries = sum(spec.q ** d for d in range(n + 1))
    if entries > cap:
        raise ResourceError(
            'Factor sieve over F_{0} up to degree {1} needs {2} entries, above '
            'the cap of {3}; use factor_one for single polynomials.'.format(
                spec.q, n, entries, cap))

    if cache_dir:
        path = _cache_path(cache_dir, spec, n)
        if os.path.exists(path):
            logger.debug('Loading factor table from %s', path)
            return FactorTable.load(spec, path)

    table = _Sieve(spec, n).run()

    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        table.save(_cache_path(cache_dir, spec, n))
    return table


class _Sieve(object):
    """Working state of factor_sieve."""
    def __init__(self, spec, n):
        self.spec = spec
        self.n = n
        self.index = PolyIndex(spec)
        self.efts = [ExtFactType()]
        self.lookup = {ExtFactType(): 0}
        self.ids = [np.zeros(1, dtype=np.int32)]
        # Per degree: global rank of the smallest irreducible factor, its
        # multiplicity, and the (degree, index) of the cofactor free of it.
        self.spf = [np.full(1, -1, dtype=np.int64)]
        self.expo = [np.zeros(1, dtype=np.int64)]
        self.rest_deg = [np.zeros(1, dtype=np.int64)]
        self.rest_idx = [np.zeros(1, dtype=np.int64)]
        self.irreducibles = {}
        self.rank_start = {}
        self.next_rank = 0

    def intern(self, eft):
        try:
            return self.lookup[eft]
        except KeyError:
            self.lookup[eft] = len(self.efts)
            self.efts.append(eft)
            return self.lookup[eft]

    def products(self, d, factors, m):
        """Stripped indices of factor * g for every monic g of degree m;
        one row per factor."""
        q = self.spec.q
        f_digits = np.concatenate(
            [self.index.digits(d, factors), np.ones((len(factors), 1), dtype=np.int64)],
            axis=1)
        g_digits = np.concatenate(
            [self.index.digits(m), np.ones((q ** m, 1), dtype=np.int64)], axis=1)
        full = conv_arrays(self.spec, f_digits[:, None, :], g_digits[None, :, :])
        return self.index.indices(full[..., :d + m])

    def marks(self, degree):
        """(target, key) pairs for every product of an irreducible of degree
        <= degree/2 with a monic cofactor; key = rank * q**degree + cofactor."""
        q = self.spec.q
        size = q ** degree
        targets, keys = [], []
        for d in range(1, degree // 2 + 1):
            m = degree - d
            irr = self.irreducibles[d]
            block = max(1, SIEVE_BLOCK // q ** m)
            cofactors = np.arange(q ** m, dtype=np.int64)
            for start in range(0, len(irr), block):
                chunk = irr[start:start + block]
                ranks = self.rank_start[d] + start + np.arange(len(chunk), dtype=np.int64)
                targets.append(self.products(d, chunk, m).ravel())
                keys.append((ranks[:, None] * size + cofactors[None, :]).ravel())
        if not targets:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty
        return np.concatenate(targets), np.concatenate(keys)

    def gather(self, arrays, degrees, indices):
        """Looks up per-degree arrays at mixed (degree, index) positions."""
        out = np.zeros(len(degrees), dtype=np.int64)
        for d in np.unique(degrees):
            sel = degrees == d
            out[sel] = arrays[int(d)][indices[sel]]
        return out

    def run(self):
        q = self.spec.q
        for degree in range(1, self.n + 1):
            size = q ** degree
            targets, keys = self.marks(degree)

            # Smallest key per target = smallest irreducible factor.
            order = np.lexsort((keys, targets))
            targets = targets[order]
            keys = keys[order]
            first = np.ones(len(targets), dtype=bool)
            first[1:] = targets[1:] != targets[:-1]
            comp = targets[first]
            comp_key = keys[first]

            composite = np.zeros(size, dtype=bool)
            composite[comp] = True
            irr = np.flatnonzero(~composite).astype(np.int64)
            self.irreducibles[degree] = irr
            self.rank_start[degree] = self.next_rank
            self.next_rank += len(irr)

            spf = np.empty(size, dtype=np.int64)
            expo = np.empty(size, dtype=np.int64)
            rest_deg = np.zeros(size, dtype=np.int64)
            rest_idx = np.zeros(size, dtype=np.int64)
            ids = np.empty(size, dtype=np.int32)

            spf[irr] = self.rank_start[degree] + np.arange(len(irr))
            expo[irr] = 1
            ids[irr] = self.intern(ExtFactType([(degree, 1)]))

            if len(comp):
                ranks = comp_key // size
                cof = comp_key % size
                starts = np.array([self.rank_start[d] for d in range(1, degree + 1)])
                factor_deg = np.searchsorted(starts, ranks, side='right').astype(np.int64)
                cof_deg = degree - factor_deg

                same = self.gather(self.spf, cof_deg, cof) == ranks
                e = np.where(same, self.gather(self.expo, cof_deg, cof) + 1, 1)
                r_deg = np.where(same, self.gather(self.rest_deg, cof_deg, cof), cof_deg)
                r_idx = np.where(same, self.gather(self.rest_idx, cof_deg, cof), cof)
                r_eft = self.gather(self.ids, r_deg, r_idx)

                spf[comp] = ranks
                expo[comp] = e
                rest_deg[comp] = r_deg
                rest_idx[comp] = r_idx

                width = self.n + 1
                combo = (r_eft * width + factor_deg) * width + e
                uniq, inverse = np.unique(combo, return_inverse=True)
                new_ids = np.empty(len(uniq), dtype=np.int32)
                for j, key in enumerate(uniq):
                    base, mult = divmod(int(key), width)
                    rest_id, d = divmod(base, width)
                    parts = self.efts[rest_id].parts + ((d, mult),)
                    new_ids[j] = self.intern(ExtFactType(parts))
                ids[comp] = new_ids[inverse.ravel()]

            self.ids.append(ids)
            self.spf.append(spf)
            self.expo.append(expo)
            self.rest_deg.append(rest_deg)
            self.rest_idx.append(rest_idx)
            logger.debug('Sieved degree %d over F_%d: %d irreducibles',
                         degree, q, len(irr))

        return FactorTable(self.spec, self.n, self.efts, self.ids, self.irreducibles)
