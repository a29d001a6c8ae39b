"""
Shifted covariances of factorization functions and the identities and
estimates that relate them to character sums and Fourier coefficients.

Every covariance is computed exhaustively from a factor table; rational
functions give exact Fraction results. The covariance of x and y is
E[x conj(y)] - E[x] conj(E[y]).
"""

from .algebra import (FieldSpec, Poly, PolyIndex, distinct_roots_in_base, euler_phi,
                      factor_sieve, factor_types, factorization, irreducible_count,
                      is_squarefree)
from .arithfun import (DivisorK, Values, coprime_mask, mean,
                       shifted_mean_with_linear_factor)
from .errors import DomainError
from .hayes import (DEFAULT_GROUP_CAP, HayesModulus, UnitGroup, class_sums,
                    gauss_averages, transform_class_sums)
from .symfunc import (Partition, fourier_coefficients)
from fractions import Fraction
import logging
import math
import numpy as np


logger = logging.getLogger(__name__)

# Residual decay series must stay within this factor of their first value.
DECAY_FACTOR = 10


def _conj(value):
    return value.conjugate()


def _covariance(x, y):
    """Cov(x, y) of two Values aligned on the same index set."""
    return (x * y.conj()).mean() - x.mean() * _conj(y.mean())


def _is_conjugate_pair(alpha, beta, n):
    """True when alpha = conj(beta) on every factorization type of degree n."""
    return all(alpha.value(t) == _conj(beta.value(t)) for t in factor_types(n))


class ShiftSpec(object):
    """A shift Delta for degree-n correlations: nonzero with deg Delta < n."""
    def __init__(self, n, delta):
        if delta.is_zero:
            raise DomainError('The shift must be nonzero.')
        if delta.degree >= n:
            raise DomainError('Shift {0} has degree {1}, need less than n = {2}.'.format(
                delta, delta.degree, n))
        self.n = n
        self.delta = delta
        self._a = None

    @property
    def spec(self):
        return self.delta.spec

    @property
    def degree(self):
        return self.delta.degree

    @property
    def a(self):
        """a_{Delta,q}: the number of distinct roots of Delta in F_q."""
        if self._a is None:
            self._a = distinct_roots_in_base(self.delta)
        return self._a

    @property
    def is_squarefree(self):
        return is_squarefree(self.delta)

    @property
    def in_excluded_band(self):
        return self.n - 4 <= self.degree <= self.n - 2

    @property
    def outside_hypothesis(self):
        """The main-term estimate is not asserted for this shift."""
        return self.in_excluded_band or not self.is_squarefree

    def __str__(self):
        return 'n={0}, Delta={1}'.format(self.n, self.delta)


def _table(spec, n, table):
    if table is None:
        return factor_sieve(spec, n)
    if table.n < n:
        raise DomainError('Factor table reaches degree {0}, need {1}.'.format(table.n, n))
    return table


def shift_codes(spec, n, shift):
    """Coefficient codes c_0 .. c_{n-1} of a shift of degree below n."""
    if shift.degree >= n:
        raise DomainError('Shift {0} does not keep degree {1} fixed.'.format(shift, n))
    codes = np.zeros(n, dtype=np.int64)
    codes[:len(shift.codes)] = shift.codes
    return codes


def shifted_indices(spec, n, shift, indices=None):
    """Stripped index of f + shift for monic f of degree n."""
    index = PolyIndex(spec)
    digits = index.digits(n, indices)
    return index.indices(spec.vadd(digits, shift_codes(spec, n, shift)))


def cov_monic(alpha, beta, n, delta, table=None):
    """Cov over f in M_{n,q} of alpha(f) and beta(f + Delta)."""
    ShiftSpec(n, delta)
    spec = delta.spec
    table = _table(spec, n, table)
    a = Values.tabulate(alpha, table, n)
    b = Values.tabulate(beta, table, n)
    return _covariance(a, b.take(shifted_indices(spec, n, delta)))


def cov_all(alpha, beta, n, delta, table=None):
    """Cov over f in A_{n,q} of alpha(f) and beta(f + Delta), enumerating
    every leading coefficient."""
    ShiftSpec(n, delta)
    spec = delta.spec
    q = spec.q
    table = _table(spec, n, table)
    index = PolyIndex(spec)
    a = Values.tabulate(alpha, table, n)
    b = Values.tabulate(beta, table, n)
    digits = index.digits(n)
    shifted = spec.vadd(digits, shift_codes(spec, n, delta))
    cross = first = second = 0
    for lead in range(1, q):
        inv = spec.inv_table[lead]
        x = a.take(index.indices(spec.vmul(inv, digits)))
        y = b.take(index.indices(spec.vmul(inv, shifted)))
        cross += (x * y.conj()).total()
        first += x.total()
        second += y.total()
    size = (q - 1) * q ** n
    return cross / size - (first / size) * _conj(second / size)


def cov_all_via_scalars(alpha, beta, n, delta, table=None):
    """(1/(q-1)) sum over c in F_q^x of Cov_M(alpha, beta; n, c Delta)."""
    spec = delta.spec
    table = _table(spec, n, table)
    total = sum(cov_monic(alpha, beta, n, delta * c, table) for c in spec.units())
    return total / (spec.q - 1)


def monic_nonmonic_residual(alpha, beta, n, delta, table=None):
    """|Cov_A computed directly - Cov_A through the scalar multiples of Delta|."""
    table = _table(delta.spec, n, table)
    return abs(cov_all(alpha, beta, n, delta, table)
               - cov_all_via_scalars(alpha, beta, n, delta, table))


# Covariances over the classes of R_{n-h,Delta}.

def _gap_group(n, delta, h, cap):
    if delta.is_zero:
        raise DomainError('The shift must be nonzero.')
    if not delta.degree <= h <= n:
        raise DomainError('Need deg Delta <= h <= n; got h = {0}, deg Delta = {1}, '
                          'n = {2}.'.format(h, delta.degree, n))
    return UnitGroup(HayesModulus(n - h, delta), cap=cap)


def _class_covariance(sums_a, sums_b):
    """Covariance across classes of within-class sums, uniform weights."""
    wa, da = sums_a
    wb, db = sums_b
    size = len(wa)
    if wa.dtype.kind in 'iu' and wb.dtype.kind in 'iu':
        a = wa.astype(object)
        b = wb.astype(object)
        cross = Fraction(int(np.dot(a, b)), da * db * size)
        return cross - Fraction(int(a.sum()), da * size) * Fraction(int(b.sum()), db * size)
    a = np.asarray(wa, dtype=complex) / da
    b = np.asarray(wb, dtype=complex) / db
    return complex(np.mean(a * np.conj(b)) - np.mean(a) * np.conj(np.mean(b)))


def _gap_sums(alpha, beta, n, group, table):
    return (class_sums(Values.tabulate(alpha, table, n), group, n),
            class_sums(Values.tabulate(beta, table, n), group, n))


def cov_gap(alpha, beta, n, delta, h, table=None, cap=DEFAULT_GROUP_CAP):
    """Covariance across the unit classes of R_{n-h,Delta} of the sums of
    alpha and beta over each class."""
    table = _table(delta.spec, n, table)
    group = _gap_group(n, delta, h, cap)
    return _class_covariance(*_gap_sums(alpha, beta, n, group, table))


def cov_gap_characters(alpha, beta, n, delta, h, table=None, cap=DEFAULT_GROUP_CAP):
    """The character side: |G|^-2 sum over nontrivial chi of
    S(n, alpha, chi) conj(S(n, beta, chi))."""
    table = _table(delta.spec, n, table)
    group = _gap_group(n, delta, h, cap)
    sums_a, sums_b = _gap_sums(alpha, beta, n, group, table)
    sa = transform_class_sums(sums_a, group)
    sb = transform_class_sums(sums_b, group)
    return complex(np.sum(sa[1:] * np.conj(sb[1:]))) / group.order ** 2


def covchi_residual(alpha, beta, n, delta, h, table=None, cap=DEFAULT_GROUP_CAP):
    """Relative gap between the class and character forms of cov_gap."""
    classes = cov_gap(alpha, beta, n, delta, h, table, cap)
    chars = cov_gap_characters(alpha, beta, n, delta, h, table, cap)
    return abs(complex(classes) - chars) / max(1.0, abs(complex(classes)))


def gap_shift_sum(alpha, beta, n, delta, m, table=None):
    """Sum over delta of degree exactly m of Cov over f in M_{n,q,Delta} of
    alpha(f) and beta(f + delta Delta)."""
    spec = delta.spec
    q = spec.q
    if m < 0 or m + delta.degree >= n:
        raise DomainError('Shifts of degree {0} times Delta leave degree {1}.'.format(m, n))
    table = _table(spec, n, table)
    a = Values.tabulate(alpha, table, n)
    b = Values.tabulate(beta, table, n)
    idx = np.flatnonzero(coprime_mask(spec, n, delta))
    x = a.take(idx)
    index = PolyIndex(spec)
    total = 0
    for i in range(q ** m, q ** (m + 1)):
        shift = index.decode(i) * delta
        total += _covariance(x, b.take(shifted_indices(spec, n, shift, idx)))
    return total


def covdiff_check(alpha, beta, n, delta, h, table=None, cap=DEFAULT_GROUP_CAP):
    """Both sides of
        cov_gap(h) / q^(h - deg Delta) - cov_gap(h - 1) / q^(h - deg Delta - 1)
          = sum over delta in A_{h - deg Delta - 1} of Cov_{M_{n,q,Delta}}(alpha(f), beta(f + delta Delta)).
    """
    if h < delta.degree + 1:
        raise DomainError('Need h >= deg Delta + 1; got h = {0}.'.format(h))
    q = delta.spec.q
    table = _table(delta.spec, n, table)
    d = delta.degree
    lhs = (cov_gap(alpha, beta, n, delta, h, table, cap) / q ** (h - d)
           - cov_gap(alpha, beta, n, delta, h - 1, table, cap) / q ** (h - d - 1))
    rhs = gap_shift_sum(alpha, beta, n, delta, h - d - 1, table)
    return lhs, rhs


def shift_sum(alpha, beta, n, h, spec, table=None):
    """Sum over delta in A_{h,q} of Cov_M(alpha, beta; n, delta)."""
    if not 0 <= h <= n - 1:
        raise DomainError('Need 0 <= h <= n - 1; got h = {0}.'.format(h))
    return gap_shift_sum(alpha, beta, n, Poly.constant(spec, 1), h, table)


def covdiff2_check(alpha, beta, n, h, spec, table=None, cap=DEFAULT_GROUP_CAP):
    """Both sides of sum over delta in A_h of Cov_M(n, delta)
    = cov_gap(1, h + 1) / q^(h + 1) - cov_gap(1, h) / q^h."""
    table = _table(spec, n, table)
    one = Poly.constant(spec, 1)
    q = spec.q
    lhs = shift_sum(alpha, beta, n, h, spec, table)
    rhs = (cov_gap(alpha, beta, n, one, h + 1, table, cap) / q ** (h + 1)
           - cov_gap(alpha, beta, n, one, h, table, cap) / q ** h)
    return lhs, rhs


# Character expansions of a single shifted correlation.

def shift_group(n, delta, cap=DEFAULT_GROUP_CAP):
    """The group of R_{m,Delta}, m = n - deg Delta, and the key of g: the
    class with short part 1 + c T^m (c the leading coefficient of Delta) and
    residue 1, so that f + Delta = g f."""
    shift = ShiftSpec(n, delta)
    m = n - shift.degree
    group = UnitGroup(HayesModulus(m, delta), cap=cap)
    q = delta.spec.q
    g = delta.lc.code * q ** (m - 1) * group.res_size + group.identity
    return group, g


def _values_at(group, key):
    """chi(x) for every character at one element key."""
    position = group.position[key]
    phases = (group.exponent_vectors() * group.scale) @ group.dlog[position]
    return group.roots[phases % group.exponent]


def fundamental_identity(alpha, beta, n, delta, table=None, cap=DEFAULT_GROUP_CAP):
    """Both sides of
        E_{f in M_{n,q,Delta}} alpha(f) conj(beta(f + Delta))
          = |G|^-2 sum over chi of chi(g) S(n, alpha, chi) conj(S(n, beta, chi)).
    """
    spec = delta.spec
    table = _table(spec, n, table)
    group, g = shift_group(n, delta, cap)
    a = Values.tabulate(alpha, table, n)
    b = Values.tabulate(beta, table, n)
    idx = np.flatnonzero(coprime_mask(spec, n, delta))
    lhs = (a.take(idx) * b.take(shifted_indices(spec, n, delta, idx)).conj()).mean()
    sums_a, sums_b = _gap_sums(alpha, beta, n, group, table)
    sa = transform_class_sums(sums_a, group)
    sb = transform_class_sums(sums_b, group)
    rhs = complex(np.sum(_values_at(group, g) * sa * np.conj(sb))) / group.order ** 2
    return lhs, rhs


def fundamental_identity_residual(alpha, beta, n, delta, table=None, cap=DEFAULT_GROUP_CAP):
    lhs, rhs = fundamental_identity(alpha, beta, n, delta, table, cap)
    return abs(complex(lhs) - rhs) / max(1.0, abs(complex(lhs)))


def shift_congruence_mismatches(n, delta, samples=1000, seed=0, cap=DEFAULT_GROUP_CAP):
    """Number of sampled f coprime to Delta with f + Delta not equal to
    g f modulo R_{m,Delta}."""
    spec = delta.spec
    group, g = shift_group(n, delta, cap)
    idx = np.flatnonzero(coprime_mask(spec, n, delta))
    if len(idx) > samples:
        rng = np.random.default_rng(seed)
        idx = np.sort(rng.choice(idx, samples, replace=False))
    keys = group.class_keys(n, idx)
    shifted = group.class_keys(n, shifted_indices(spec, n, delta, idx))
    return int(np.count_nonzero(group.mul(g, keys) != shifted))


def twisted_identity(alpha, beta, n, delta, table=None, cap=DEFAULT_GROUP_CAP):
    """Both sides of the twist-averaged identity for a scalar shift:
        E_{M_{n,q}} alpha(f) conj(beta(f + Delta))
          = q^(-2n) sum over chi mod R_{n,1} of w(chi) S(n, alpha, chi) conj(S(n, beta, chi)),
    where w(chi) is the mean over c in F_q^x of chi_c(T^n + Delta).
    """
    spec = delta.spec
    if delta.degree != 0:
        raise DomainError('The twisted identity needs a nonzero constant shift.')
    table = _table(spec, n, table)
    q = spec.q
    group = UnitGroup(HayesModulus.short(spec, n), cap=cap)
    a = Values.tabulate(alpha, table, n)
    b = Values.tabulate(beta, table, n)
    lhs = (a * b.take(shifted_indices(spec, n, delta)).conj()).mean()
    weights = gauss_averages(group, delta.lc) * math.sqrt(q) / (q - 1)
    sums_a, sums_b = _gap_sums(alpha, beta, n, group, table)
    sa = transform_class_sums(sums_a, group)
    sb = transform_class_sums(sums_b, group)
    rhs = complex(np.sum(weights * sa * np.conj(sb))) / q ** (2 * n)
    return lhs, rhs


def twisted_identity_residual(alpha, beta, n, delta, table=None, cap=DEFAULT_GROUP_CAP):
    lhs, rhs = twisted_identity(alpha, beta, n, delta, table, cap)
    return abs(complex(lhs) - rhs) / max(1.0, abs(complex(lhs)))


# Symmetries of the shift.

def substituted_shift(delta, n, c1, c2=0):
    """Delta(c1 T + c2) / c1^n."""
    spec = delta.spec
    c1 = spec.element(c1)
    return delta.substitute(c1, c2) * (c1 ** (delta.degree - n))


def substitution_invariance_check(alpha, beta, n, delta, c1, c2=0, table=None):
    """|Cov_M(Delta) - Cov_M(Delta(c1 T + c2) / c1^n)|; when alpha =
    conj(beta) the larger of that and the residual against the negated
    substituted shift."""
    table = _table(delta.spec, n, table)
    moved = substituted_shift(delta, n, c1, c2)
    base = cov_monic(alpha, beta, n, delta, table)
    residual = abs(base - cov_monic(alpha, beta, n, moved, table))
    if _is_conjugate_pair(alpha, beta, n):
        residual = max(residual, abs(base - cov_monic(alpha, beta, n, -moved, table)))
    return residual


def linear_power_form(delta):
    """(k, b) with monic(Delta) = (T + b)^k, or None."""
    spec = delta.spec
    monic = delta.monic()
    k = monic.degree
    if k == 0:
        return 0, spec.zero
    t = Poly.T(spec)
    for b in spec.elements():
        if (t + b) ** k == monic:
            return k, b
    return None


def power_shift_check(alpha, beta, n, delta, table=None):
    """(|Cov_A - Cov_M|, hypothesis) for Delta = a (T + b)^k; the
    hypothesis is gcd(n - k, q - 1) = 1, or odd characteristic with
    alpha = conj(beta) and gcd(n - k, (q - 1) / 2) = 1."""
    form = linear_power_form(delta)
    if form is None:
        raise DomainError('{0} is not a scalar times a power of a linear polynomial.'.format(
            delta))
    k = form[0]
    spec = delta.spec
    q = spec.q
    hypothesis = math.gcd(n - k, q - 1) == 1
    if not hypothesis and spec.p > 2 and _is_conjugate_pair(alpha, beta, n):
        hypothesis = math.gcd(n - k, (q - 1) // 2) == 1
    table = _table(spec, n, table)
    residual = abs(cov_all(alpha, beta, n, delta, table) - cov_monic(alpha, beta, n, delta, table))
    return residual, hypothesis


# Polynomials sharing a factor with the shift.

def _linear_factor_sum(values, q, n):
    """Sum over f in M_{n-1,q} of the tabulated degree-n value at f T."""
    return values.take(q * np.arange(q ** (n - 1), dtype=np.int64)).total()


def noncoprime_correction(alpha, beta, n, delta, table=None):
    """(exact, predicted) for the sum over monic f with gcd(f, Delta) != 1
    of alpha(f) conj(beta(f + Delta)); the prediction is
    a * (sum alpha(f T)) * conj(sum beta(g T)) / q^(n-1) over f, g in M_{n-1,q}."""
    shift = ShiftSpec(n, delta)
    if n < 2:
        raise DomainError('The non-coprime estimate needs n >= 2.')
    spec = delta.spec
    q = spec.q
    table = _table(spec, n, table)
    a = Values.tabulate(alpha, table, n)
    b = Values.tabulate(beta, table, n)
    idx = np.flatnonzero(~coprime_mask(spec, n, delta))
    exact = (a.take(idx) * b.take(shifted_indices(spec, n, delta, idx)).conj()).total()
    predicted = (shift.a * _linear_factor_sum(a, q, n)
                 * _conj(_linear_factor_sum(b, q, n)) / q ** (n - 1))
    return exact, predicted


def noncoprime_single(alpha, n, delta, table=None):
    """(exact, predicted) for the sum of alpha over monic f with
    gcd(f, Delta) != 1, predicted by a * sum over M_{n-1,q} of alpha(f T)."""
    shift = ShiftSpec(n, delta)
    if n < 2:
        raise DomainError('The non-coprime estimate needs n >= 2.')
    spec = delta.spec
    table = _table(spec, n, table)
    a = Values.tabulate(alpha, table, n)
    exact = a.take(~coprime_mask(spec, n, delta)).total()
    return exact, shift.a * _linear_factor_sum(a, spec.q, n)


def coprime_part_estimate(alpha, beta, n, delta, table=None):
    """(measured, predicted) for the sum over c in F_q^x of
    Cov_{f in M_{n,q,Delta}}(alpha(f), beta(f + c Delta)); the prediction is
    q Cov_A - a (E_A alpha - E_{A_{n-1}} alpha(f T)) conj(same for beta)."""
    shift = ShiftSpec(n, delta)
    spec = delta.spec
    q = spec.q
    table = _table(spec, n, table)
    a = Values.tabulate(alpha, table, n)
    b = Values.tabulate(beta, table, n)
    idx = np.flatnonzero(coprime_mask(spec, n, delta))
    x = a.take(idx)
    measured = sum(_covariance(x, b.take(shifted_indices(spec, n, delta * c, idx)))
                   for c in spec.units())
    gap_a = mean(alpha, n, table, 'all') - shifted_mean_with_linear_factor(alpha, n, table)
    gap_b = mean(beta, n, table, 'all') - shifted_mean_with_linear_factor(beta, n, table)
    predicted = q * cov_all(alpha, beta, n, delta, table) - shift.a * gap_a * _conj(gap_b)
    return measured, predicted


# Main terms from Fourier coefficients.

def _hook(n):
    if n < 2:
        raise DomainError('The (n-1,1) coefficient needs n >= 2.')
    return Partition((n - 1, 1))


def main_term(alpha, beta, n, delta):
    """(a - 1) alpha_hat(n-1,1) conj(beta_hat(n-1,1)) / q."""
    shift = ShiftSpec(n, delta)
    hook = _hook(n)
    if shift.outside_hypothesis:
        logger.warning('Shift %s lies outside the main-term hypothesis '
                       '(squarefree, degree outside n-4..n-2).', shift)
    fa = fourier_coefficients(alpha, n)
    fb = fourier_coefficients(beta, n)
    return (shift.a - 1) * fa[hook] * _conj(fb[hook]) / delta.spec.q


def gap_main_term(alpha, beta, n, delta, h):
    """q^(h - deg Delta) times the sum over lam_1 <= n - h + deg Delta - 1 of
    alpha_hat conj(beta_hat)."""
    if not delta.degree <= h <= n:
        raise DomainError('Need deg Delta <= h <= n.')
    d = delta.degree
    top = n - h + d - 1
    fa = fourier_coefficients(alpha, n)
    fb = fourier_coefficients(beta, n)
    return delta.spec.q ** (h - d) * fa.pairing(fb, lambda lam: lam[0] <= top)


def shift_sum_main_term(alpha, beta, n, h):
    """-sum over lam_1 = n - h - 1 of alpha_hat conj(beta_hat)."""
    fa = fourier_coefficients(alpha, n)
    fb = fourier_coefficients(beta, n)
    return -fa.pairing(fb, lambda lam: lam[0] == n - h - 1)


def divisor_constant_forms(n, k, l):
    """The (n-1,1) product for d_k, d_l three ways: from the computed
    Fourier coefficients, from the per-factor closed form
    binom(n+k-2, k-2)(n-1), and as (n-1)^2 binom(n+k-2, n) binom(n+l-2, n)."""
    hook = _hook(n)
    derived = (fourier_coefficients(DivisorK(k), n)[hook]
               * fourier_coefficients(DivisorK(l), n)[hook])
    per_factor = (math.comb(n + k - 2, k - 2) * (n - 1)
                  * math.comb(n + l - 2, l - 2) * (n - 1))
    printed = (n - 1) ** 2 * math.comb(n + k - 2, n) * math.comb(n + l - 2, n)
    forms = {'derived': derived, 'per_factor': per_factor, 'printed': printed,
             'per_factor_matches': derived == per_factor,
             'printed_matches': derived == printed}
    if not (forms['per_factor_matches'] and forms['printed_matches']):
        logger.warning('Divisor constant for n=%d, k=%d, l=%d: computed %s, per-factor '
                       'form %s, printed form %s', n, k, l, derived, per_factor, printed)
    return forms


# Singular series and local expansions.

def hl_constant(delta, D):
    """(value, tail bound) of the singular series truncated at degree D:
    prod over P | Delta of (1 - 1/|P|)^-1 times prod over P not dividing
    Delta of (1 - 2/|P|) / (1 - 1/|P|)^2. The tail bound limits the
    omitted part of the logarithm."""
    spec = delta.spec
    q = spec.q
    if delta.is_zero:
        raise DomainError('The shift must be nonzero.')
    if q <= 2:
        raise DomainError('The singular series vanishes over F_2: the factor '
                          '1 - 2/|P| is 0 at every linear P not dividing Delta.')
    if D < 1:
        raise DomainError('Truncation degree must be at least 1.')
    dividing = {}
    if delta.degree > 0:
        for prime, _ in factorization(delta):
            dividing[prime.degree] = dividing.get(prime.degree, 0) + 1
    terms = []
    for d in range(1, D + 1):
        x = float(q) ** -d
        inside = dividing.get(d, 0)
        outside = irreducible_count(q, d) - inside
        terms.append(-inside * math.log1p(-x))
        terms.append(outside * (math.log1p(-2 * x) - 2 * math.log1p(-x)))
    value = math.exp(math.fsum(terms))
    tail = 2.0 * float(q) ** -D / ((D + 1) * (1 - 1.0 / q))
    return value, tail


def hl_expansion_residual(delta, D=12):
    """|S_Delta - 1 - (a - 1)/q| q^2."""
    q = delta.spec.q
    value, _ = hl_constant(delta, D)
    a = distinct_roots_in_base(delta)
    return abs(value - 1 - (a - 1) / q) * q ** 2


def phi_expansion_residual(delta):
    """||Delta|/phi(Delta) - 1 - a/q| q^2, exactly."""
    if delta.is_zero:
        raise DomainError('The shift must be nonzero.')
    q = delta.spec.q
    ratio = Fraction(q ** delta.degree, euler_phi(delta))
    a = distinct_roots_in_base(delta)
    return abs(ratio - 1 - Fraction(a, q)) * q ** 2


def coeff_interpretation_residual(alpha, n, table):
    """|alpha_hat(n-1,1) - (E_{A_{n-1}} alpha(f T) - E_{A_n} alpha)| q."""
    hook = _hook(n)
    coefficient = fourier_coefficients(alpha, n)[hook]
    approx = shifted_mean_with_linear_factor(alpha, n, table) - mean(alpha, n, table, 'all')
    return abs(coefficient - approx) * table.spec.q


# Residual decay across field sizes.

class DecayPoint(object):
    """One field size of a residual decay series."""
    def __init__(self, q, measured, prediction, exponent):
        self.q = q
        self.measured = measured
        self.prediction = prediction
        self.residual = abs(complex(measured) - complex(prediction))
        self.normalized = self.residual * q ** exponent

    def csv_row(self):
        m = complex(self.measured)
        p = complex(self.prediction)
        return [self.q, repr(m.real), repr(m.imag), repr(p.real), repr(p.imag),
                repr(self.residual), repr(self.normalized)]


def residual_decay_series(experiment, q_list, exponent):
    """Runs experiment(spec) -> (measured, prediction) for every field size
    and normalizes the residuals by q^exponent."""
    series = []
    for q in q_list:
        spec = FieldSpec.of_order(q)
        measured, prediction = experiment(spec)
        point = DecayPoint(q, measured, prediction, exponent)
        logger.debug('q=%d measured=%s prediction=%s normalized=%.6g',
                     q, measured, prediction, point.normalized)
        series.append(point)
    return series


def decay_bounded(series, factor=DECAY_FACTOR, floor=1e-12):
    """True if every normalized residual is within factor of the first."""
    if not series:
        return True
    bound = factor * max(series[0].normalized, floor)
    return all(point.normalized <= bound for point in series)


def covariance_experiment(alpha, beta, n, delta_text, domain='all'):
    """Experiment measuring Cov_A (domain 'all') against the main term, or
    Cov_M (domain 'monic') against 0."""
    def run(spec):
        delta = Poly.parse(spec, delta_text)
        table = factor_sieve(spec, n)
        if domain == 'all':
            return cov_all(alpha, beta, n, delta, table), main_term(alpha, beta, n, delta)
        if domain == 'monic':
            return cov_monic(alpha, beta, n, delta, table), 0
        raise DomainError('Unknown domain {0!r}.'.format(domain))
    return run


def shift_sum_experiment(alpha, beta, n, h):
    """Experiment measuring the shift sum against its main term."""
    def run(spec):
        table = factor_sieve(spec, n)
        return (shift_sum(alpha, beta, n, h, spec, table),
                shift_sum_main_term(alpha, beta, n, h))
    return run


def gap_hypothesis(n, delta, h):
    """Delta squarefree and either n - 4 >= h >= deg Delta, or h = n with
    deg Delta >= 2."""
    if delta.degree > 0 and not is_squarefree(delta):
        return False
    d = delta.degree
    return n - 4 >= h >= d or (h == n and d >= 2)


def gap_experiment(alpha, beta, n, delta_text, h):
    """Experiment measuring cov_gap against gap_main_term."""
    def run(spec):
        delta = Poly.parse(spec, delta_text)
        table = factor_sieve(spec, n)
        return (cov_gap(alpha, beta, n, delta, h, table),
                gap_main_term(alpha, beta, n, delta, h))
    return run


class CovarianceReport(object):
    """Measured covariances of one (alpha, beta, n, Delta) experiment with
    the predictions and residuals they are compared against."""
    def __init__(self, alpha, beta, n, delta, table=None, config_hash=None):
        self.alpha = alpha
        self.beta = beta
        self.shift = ShiftSpec(n, delta)
        self.config_hash = config_hash
        table = _table(delta.spec, n, table)
        self.cov_monic = cov_monic(alpha, beta, n, delta, table)
        self.cov_all = cov_all(alpha, beta, n, delta, table)
        self.cov_all_via_scalars = cov_all_via_scalars(alpha, beta, n, delta, table)
        self.main_term = main_term(alpha, beta, n, delta) if n >= 2 else None
        self.coprime_part = (coprime_part_estimate(alpha, beta, n, delta, table)
                             if n >= 2 else None)

    @property
    def outside_hypothesis(self):
        return self.shift.outside_hypothesis

    def entries(self):
        """Dicts with anchor, value, reference and residual for each comparison."""
        yield {'anchor': 'non-monic covariance as the mean over scalar multiples of the shift',
               'value': self.cov_all, 'reference': self.cov_all_via_scalars,
               'residual': abs(self.cov_all - self.cov_all_via_scalars), 'exact': True}
        if self.main_term is not None:
            q = self.shift.spec.q
            residual = abs(complex(self.cov_all) - complex(self.main_term))
            yield {'anchor': 'non-monic covariance against the (n-1,1) main term',
                   'value': self.cov_all, 'reference': self.main_term,
                   'residual': residual, 'normalized': residual * q ** 1.5,
                   'exact': False, 'outside_hypothesis': self.outside_hypothesis}
        if self.coprime_part is not None:
            q = self.shift.spec.q
            measured, predicted = self.coprime_part
            residual = abs(complex(measured) - complex(predicted))
            yield {'anchor': 'coprime covariance summed over scalar shifts against '
                             'q Cov_A less the non-coprime correction',
                   'value': measured, 'reference': predicted,
                   'residual': residual, 'normalized': residual * math.sqrt(q),
                   'exact': False, 'outside_hypothesis': self.outside_hypothesis}
