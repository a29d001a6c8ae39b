"""
L-polynomials of Hayes characters and their unitarized classes.

For a character chi modulo R_{ell,M} the generating function
L(u, chi) = sum over monic f of chi(f) u^deg f has coefficients
S(j, 1, chi). When chi is nontrivial it is a polynomial of degree at most
ell + deg M - 1, and it factors as (1 - u)^a * prod(1 - gamma_i u) with
|gamma_i| = sqrt(q). The eigenvalues gamma_i / sqrt(q) form Theta_chi.
"""

from .algebra import factorization
from .arithfun import (Values, VonMangoldt)
from .errors import (DomainError, NumericError)
from .hayes import (char_sum, class_sums, transform_class_sums)
from . import parallel
import logging
import math
import numpy as np


logger = logging.getLogger(__name__)

# Relative size below which a top coefficient is treated as zero.
TRIM_TOLERANCE = 1e-9

# |L(1)| <= DEFLATE_TOLERANCE * sum|coeff| marks a root at u = 1.
DEFLATE_TOLERANCE = 1e-6

# |L(1/gamma)| <= ROOT_TOLERANCE * max|coeff| for every extracted root.
ROOT_TOLERANCE = 1e-8

RH_TOLERANCE = 1e-6

NEWTON_STEPS = 8


class LPolynomial(object):
    """L(u, chi) as a coefficient array in u, lowest degree first.

    For the trivial character the rational form numerator / denominator is
    kept instead; `coeffs` then holds its power series through the degree
    the series was requested to.
    """
    def __init__(self, char_id, coeffs, numerator=None, denominator=None):
        self.char_id = char_id
        self.coeffs = np.asarray(coeffs, dtype=complex)
        self.numerator = numerator
        self.denominator = denominator

    @property
    def is_rational(self):
        return self.denominator is not None

    @property
    def degree(self):
        if self.is_rational:
            raise DomainError('L(u, chi_0) is not a polynomial.')
        return len(self.coeffs) - 1

    def series(self, degree):
        """Power series coefficients through u^degree."""
        if not self.is_rational:
            out = np.zeros(degree + 1, dtype=complex)
            top = min(degree, self.degree) + 1
            out[:top] = self.coeffs[:top]
            return out
        # 1 / (1 - q u) = sum q^j u^j
        q = -self.denominator[1]
        geometric = np.array([float(q) ** j for j in range(degree + 1)])
        return np.convolve(np.asarray(self.numerator, dtype=float),
                           geometric)[:degree + 1].astype(complex)

    def __call__(self, u):
        if self.is_rational:
            return (np.polyval(np.asarray(self.numerator, dtype=float)[::-1], u)
                    / np.polyval(np.asarray(self.denominator, dtype=float)[::-1], u))
        return np.polyval(self.coeffs[::-1], u)

    def __str__(self):
        if self.is_rational:
            return '({0}) / ({1})'.format(_format_int_poly(self.numerator),
                                         _format_int_poly(self.denominator))
        return ' + '.join('({0:.6g})u^{1}'.format(c, j) for j, c in enumerate(self.coeffs))


def _format_int_poly(coeffs):
    terms = []
    for j, c in enumerate(coeffs):
        if c:
            terms.append('{0}u^{1}'.format(c, j) if j else str(c))
    return ' + '.join(terms).replace('+ -', '- ') or '0'


def trivial_l_polynomial(group):
    """prod over P | M of (1 - u^deg P), over (1 - q u)."""
    numerator = np.array([1], dtype=np.int64)
    if group.k > 0:
        for prime, _ in factorization(group.m):
            factor = np.zeros(prime.degree + 1, dtype=np.int64)
            factor[0] = 1
            factor[-1] = -1
            numerator = np.convolve(numerator, factor)
    return LPolynomial(0, numerator.astype(complex), numerator=[int(c) for c in numerator],
                       denominator=[1, -group.spec.q])


def _trim(coeffs):
    coeffs = np.asarray(coeffs, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(coeffs))))
    top = len(coeffs)
    while top > 1 and abs(coeffs[top - 1]) <= TRIM_TOLERANCE * scale:
        top -= 1
    return coeffs[:top]


def l_polynomial(chi):
    """L(u, chi) by direct summation of chi over monics of degree below
    ell + deg M."""
    group = chi.group
    if chi.is_trivial:
        return trivial_l_polynomial(group)
    coeffs = [np.sum(chi.values(j)) for j in range(group.ell + group.k)]
    return LPolynomial(chi.char_id, _trim(coeffs))


def l_coefficients(group):
    """(|G|, ell + deg M) coefficient matrix of every L(u, chi), computed
    from class counts with one transform per degree."""
    q = group.spec.q
    columns = []
    for j in range(group.ell + group.k):
        ones = Values(np.ones(q ** j, dtype=np.int64))
        columns.append(transform_class_sums(class_sums(ones, group, j), group))
    if not columns:
        return np.zeros((group.order, 0), dtype=complex)
    return np.stack(columns, axis=1)


def l_polynomials(group):
    """L(u, chi) for every character in char_id order; the trivial
    character gets its rational form."""
    matrix = l_coefficients(group)
    out = [trivial_l_polynomial(group)]
    for char_id in range(1, group.order):
        out.append(LPolynomial(char_id, _trim(matrix[char_id])))
    return out


class ThetaClass(object):
    """Theta_chi: the multiplicity a of u = 1 and the eigenvalues
    gamma_i / sqrt(q), sorted by argument and then real part."""
    def __init__(self, char_id, q, a, gammas):
        self.char_id = char_id
        self.q = q
        self.a = a
        gammas = np.asarray(gammas, dtype=complex)
        eigenvalues = gammas / math.sqrt(q)
        order = np.lexsort((np.round(eigenvalues.real, 12),
                            np.round(np.angle(eigenvalues), 12)))
        self.gammas = gammas[order]
        self.eigenvalues = eigenvalues[order]

    @property
    def dimension(self):
        return len(self.eigenvalues)

    def trace(self, m=1):
        """Tr(Theta^m)."""
        if not self.dimension:
            return 0j
        return complex(np.sum(self.eigenvalues ** m))

    def rh_residual(self):
        """max ||gamma| - sqrt(q)| / sqrt(q); 0 for an empty class."""
        if not self.dimension:
            return 0.0
        root = math.sqrt(self.q)
        return float(np.max(np.abs(np.abs(self.gammas) - root))) / root

    def reconstruct(self):
        """Coefficients of (1 - u)^a prod(1 - gamma_i u)."""
        coeffs = np.poly(self.gammas) if self.dimension else np.ones(1, dtype=complex)
        for _ in range(self.a):
            coeffs = np.convolve(coeffs, [1, -1])
        return np.asarray(coeffs, dtype=complex)

    def csv_row(self):
        row = [self.char_id, self.a]
        for z in self.eigenvalues:
            row.extend([repr(float(z.real)), repr(float(z.imag))])
        return row

    def __repr__(self):
        return 'ThetaClass(id={0}, a={1}, N={2})'.format(self.char_id, self.a, self.dimension)


def _polish(coeffs, gammas):
    """Newton steps on u^d L(1/u), whose roots are the gammas."""
    reversed_poly = np.asarray(coeffs, dtype=complex)
    derivative = np.polyder(reversed_poly)
    for _ in range(NEWTON_STEPS):
        step = np.polyval(reversed_poly, gammas) / np.polyval(derivative, gammas)
        gammas = gammas - np.where(np.isfinite(step), step, 0)
    return gammas


def theta_class(source, q=None):
    """Theta_chi of a nontrivial character, given the character itself or
    its LPolynomial (then q is needed)."""
    if isinstance(source, LPolynomial):
        lpoly = source
        if q is None:
            raise DomainError('The field order is needed with a bare L-polynomial.')
    else:
        if source.is_trivial:
            raise DomainError('Theta is defined for nontrivial characters only.')
        lpoly = l_polynomial(source)
        q = source.group.spec.q
    if lpoly.is_rational:
        raise DomainError('Theta is defined for nontrivial characters only.')

    coeffs = lpoly.coeffs
    a = 0
    while len(coeffs) > 1 and abs(np.sum(coeffs)) <= DEFLATE_TOLERANCE * np.sum(np.abs(coeffs)):
        # L(u) = (1 - u) Q(u) with Q_j = c_0 + ... + c_j.
        coeffs = np.cumsum(coeffs)[:-1]
        a += 1
    if len(coeffs) == 1:
        return ThetaClass(lpoly.char_id, q, a, [])

    # The gammas are the roots of c_0 u^d + c_1 u^(d-1) + ... + c_d.
    gammas = np.roots(coeffs)
    if len(gammas) != len(coeffs) - 1:
        raise NumericError('Root extraction lost roots for character {0}.'.format(
            lpoly.char_id))
    gammas = _polish(coeffs, gammas)
    residual = np.abs(np.polyval(coeffs[::-1], 1 / gammas))
    if not np.all(residual <= ROOT_TOLERANCE * np.max(np.abs(coeffs))):
        raise NumericError('Roots of L(u, chi) for character {0} miss the residual '
                           'bound: {1:.3g}'.format(lpoly.char_id, float(np.max(residual))))
    theta = ThetaClass(lpoly.char_id, q, a, gammas)
    if theta.rh_residual() > RH_TOLERANCE:
        logger.debug('Character %d has an inverse root off the circle |u| = sqrt(q): '
                     'relative deviation %.3g', lpoly.char_id, theta.rh_residual())
    return theta


def theta_classes(group, selector=None, threads=1):
    """Theta for every nontrivial character accepted by the boolean
    selector array, in char_id order."""
    lpolys = l_polynomials(group)[1:]
    if selector is not None:
        lpolys = [lp for lp in lpolys if selector[lp.char_id]]
    q = group.spec.q
    return parallel.map_items(lambda lp: theta_class(lp, q), lpolys, threads)


def reconstruction_residual(lpoly, theta):
    """Largest coefficient difference between L and its factored form,
    relative to the largest coefficient."""
    rebuilt = theta.reconstruct()
    width = max(len(rebuilt), len(lpoly.coeffs))
    a = np.zeros(width, dtype=complex)
    b = np.zeros(width, dtype=complex)
    a[:len(lpoly.coeffs)] = lpoly.coeffs
    b[:len(rebuilt)] = rebuilt
    return float(np.max(np.abs(a - b))) / max(1.0, float(np.max(np.abs(a))))


def explicit_formula_residual(chi, n, table, theta=None):
    """|S(n, Lambda, chi) + Tr(Theta^n) q^(n/2) + a(chi)|."""
    if n < 1:
        raise DomainError('The explicit formula needs n >= 1.')
    if theta is None:
        theta = theta_class(chi)
    q = chi.group.spec.q
    prime_sum = char_sum(n, VonMangoldt(), chi, table)
    return abs(prime_sum + theta.trace(n) * q ** (n / 2) + theta.a)


def degree_of_primitive(chi):
    """Measured degree of L(u, chi) for a primitive character."""
    if not chi.is_primitive:
        raise DomainError('Character {0} is not primitive.'.format(chi.char_id))
    if chi.is_trivial:
        raise DomainError('The trivial character has a rational L-function.')
    return l_polynomial(chi).degree


def euler_product_check(chi, D, table):
    """Largest coefficient difference through u^D between L(u, chi) and the
    Euler product over monic irreducibles of degree <= D.

    The product is formed as exp(sum over P, m of chi(P)^m u^(m deg P) / m).
    """
    if D < 1 or D > table.n:
        raise DomainError('Truncation degree must lie in 1..{0}.'.format(table.n))
    log_series = np.zeros(D + 1, dtype=complex)
    for d in range(1, D + 1):
        primes = table.irreducibles(d)
        if not len(primes):
            continue
        values = chi.values(d)[primes]
        for m in range(1, D // d + 1):
            log_series[m * d] += np.sum(values ** m) / m
    product = np.zeros(D + 1, dtype=complex)
    product[0] = 1
    # F' = G' F, i.e. j F_j = sum_k k G_k F_(j-k)
    for j in range(1, D + 1):
        product[j] = sum(k * log_series[k] * product[j - k] for k in range(1, j + 1)) / j
    expected = l_polynomial(chi).series(D)
    scale = max(1.0, float(np.max(np.abs(expected))))
    return float(np.max(np.abs(product - expected))) / scale


def twist_residual(chi, c):
    """Largest coefficient difference between L(u, chi) and L(u, chi_c)."""
    base = l_polynomial(chi)
    twisted = l_polynomial(chi.twist(c))
    if base.is_rational or twisted.is_rational:
        return 0.0 if base.is_rational and twisted.is_rational else float('inf')
    width = max(len(base.coeffs), len(twisted.coeffs))
    return float(np.max(np.abs(base.series(width - 1) - twisted.series(width - 1))))


def zero_rows(thetas):
    """CSV rows `char_id, a, re(eig), im(eig), ...`."""
    return [theta.csv_row() for theta in thetas]
