"""
Verification suites run by `ffcorr verify`.

Each suite takes an ExperimentConfig and a Report and adds one row per
checked identity; exact identities carry a tolerance and fail the run when
exceeded, decay estimates pass when their normalized residuals stay within
a fixed factor across the configured field sizes.
"""

from .algebra import (Poly, PolyIndex, factor_sieve, is_squarefree)
from .arithfun import (DivisorK, Mobius, SnCharacter, VonMangoldt, mean, parse_function)
from .correlation import (DECAY_FACTOR, covchi_residual, covdiff2_check, covdiff_check,
                          fundamental_identity_residual, hl_constant, hl_expansion_residual,
                          linear_power_form, monic_nonmonic_residual, phi_expansion_residual,
                          power_shift_check, shift_congruence_mismatches,
                          substitution_invariance_check, twisted_identity_residual)
from .equidist import (additive_label_distribution, count_checks, schur_sum_hypothesis,
                       schur_sum_residual)
from .hayes import (HayesModulus, UnitGroup, all_char_sums, characters,
                    orthogonality_residuals)
from .lfunc import (l_polynomials, reconstruction_residual, theta_classes,
                    euler_product_check, twist_residual)
from .symfunc import (Partition, fourier_coefficients, partitions, schur_at_ones)
import logging
import math
import numpy as np


logger = logging.getLogger(__name__)

IDENTITY_TOLERANCE = 1e-8

RH_TOLERANCE = 1e-6

# Characters beyond this count are checked at evenly spaced ids only for
# the per-character Euler product and twist checks.
CHARACTER_SAMPLE = 500

IDENTITY_FUNCTIONS = ('Lambda', 'mu', 'd2', 'd3', 'hook')

DEFAULTS = {'identities': 4, 'rh': 5, 'fourier': 8, 'means': 6}


def relative(lhs, rhs):
    """|lhs - rhs| / max(1, |lhs|)."""
    lhs = complex(lhs)
    return abs(lhs - complex(rhs)) / max(1.0, abs(lhs))


def _degree(config, suite):
    return config.n if config.n is not None else DEFAULTS[suite]


def _functions(config, n):
    """(name, alpha) pairs: the configured alpha and beta, or the standard set."""
    if 'alpha' in config.values or 'beta' in config.values:
        names = [config.alpha, config.beta]
    else:
        names = IDENTITY_FUNCTIONS
    result = []
    for name in names:
        if name == 'hook':
            result.append(('chi({0})'.format(Partition((n - 1, 1))),
                           SnCharacter(Partition((n - 1, 1)))))
        else:
            result.append((name, parse_function(name)))
    return result


def _pairs(config, n):
    functions = _functions(config, n)
    if 'alpha' in config.values or 'beta' in config.values:
        return [(functions[0], functions[1])]
    return [(a, b) for a in functions for b in functions]


def identity_shifts(spec, n):
    """Every nonzero constant and every monic squarefree polynomial of
    degree 1 up to min(2, n - 1)."""
    shifts = [Poly.constant(spec, c) for c in spec.units()]
    index = PolyIndex(spec)
    for d in range(1, min(2, n - 1) + 1):
        for i in range(spec.q ** d):
            f = index.monic(d, i)
            if is_squarefree(f):
                shifts.append(f)
    return shifts


def _group(config, spec):
    m = Poly.parse(spec, config.modulus_m)
    return UnitGroup(HayesModulus(config.ell, m), cap=config.group_cap,
                     strict_parity=config.strict_parity, threads=config.threads or 1)


def _sample(ids):
    if len(ids) <= CHARACTER_SAMPLE:
        return list(ids)
    step = len(ids) / float(CHARACTER_SAMPLE)
    return [ids[int(i * step)] for i in range(CHARACTER_SAMPLE)]


def run_identities(config, report):
    """Exact covariance identities over every shift, function pair and gap."""
    n = _degree(config, 'identities')
    for spec in config.field_specs():
        table = factor_sieve(spec, n, config.sieve_cap, config.cache_dir)
        cap = config.group_cap
        c1 = spec.units()[-1]
        pairs = _pairs(config, n)
        logger.info('Identity suite over F_%d, n = %d: %d pairs', spec.q, n, len(pairs))
        for delta in identity_shifts(spec, n):
            where = {'q': spec.q, 'n': n, 'delta': str(delta)}
            mismatches = shift_congruence_mismatches(n, delta, seed=config.seed, cap=cap)
            report.add('shift acts as multiplication by a fixed class', value=mismatches,
                       reference=0, residual=mismatches, tolerance=0, **where)
            form = linear_power_form(delta)
            for (name_a, alpha), (name_b, beta) in pairs:
                rows = dict(where, alpha=name_a, beta=name_b)
                report.add('non-monic covariance equals the mean over scalar multiples',
                           residual=monic_nonmonic_residual(alpha, beta, n, delta, table),
                           tolerance=IDENTITY_TOLERANCE, **rows)
                worst = max(covchi_residual(alpha, beta, n, delta, h, table, cap)
                            for h in range(delta.degree, n + 1))
                report.add('class covariance equals the character sum over nontrivial '
                           'characters', residual=worst, tolerance=IDENTITY_TOLERANCE, **rows)
                if delta.degree + 1 <= n:
                    worst = max(relative(*covdiff_check(alpha, beta, n, delta, h, table, cap))
                                for h in range(delta.degree + 1, n + 1))
                    report.add('difference of class covariances equals the sum over '
                               'multiples of the shift', residual=worst,
                               tolerance=IDENTITY_TOLERANCE, **rows)
                report.add('shifted correlation as a character expansion',
                           residual=fundamental_identity_residual(alpha, beta, n, delta,
                                                                  table, cap),
                           tolerance=IDENTITY_TOLERANCE, **rows)
                if delta.degree == 0:
                    report.add('scalar-shift correlation through twisted Gauss averages',
                               residual=twisted_identity_residual(alpha, beta, n, delta,
                                                                  table, cap),
                               tolerance=IDENTITY_TOLERANCE, **rows)
                residual = substitution_invariance_check(alpha, beta, n, delta, c1, 1, table)
                report.add('monic covariance invariant under affine substitution',
                           residual=float(abs(complex(residual))),
                           tolerance=IDENTITY_TOLERANCE, **rows)
                if form is not None:
                    residual, hypothesis = power_shift_check(alpha, beta, n, delta, table)
                    if hypothesis:
                        report.add('monic and non-monic covariances agree for a power of '
                                   'a linear shift', residual=float(abs(complex(residual))),
                                   tolerance=IDENTITY_TOLERANCE, **rows)
        for (name_a, alpha), (name_b, beta) in pairs:
            worst = max(relative(*covdiff2_check(alpha, beta, n, h, spec, table, cap))
                        for h in range(0, n))
            report.add('sum of covariances over short shifts as a difference of class '
                       'covariances', residual=worst, tolerance=IDENTITY_TOLERANCE,
                       q=spec.q, n=n, alpha=name_a, beta=name_b)


def run_rh(config, report):
    """Inverse roots, reconstruction, explicit formula and degree checks for
    every character of R_{ell,M}."""
    nmax = _degree(config, 'rh')
    for spec in config.field_specs():
        group = _group(config, spec)
        where = {'q': spec.q, 'modulus': str(group.modulus)}
        table = factor_sieve(spec, max(nmax, group.ell + group.k, 1),
                             config.sieve_cap, config.cache_dir)
        lpolys = l_polynomials(group)
        thetas = theta_classes(group, threads=config.threads or 1)
        logger.info('RH suite over %s: %d characters', group.modulus, group.order)
        if not thetas:
            report.add('group has no nontrivial characters', passed=True, **where)
            continue
        primitive, odd, _ = group.flags()
        # Characters induced from a proper divisor of M lose Euler factors
        # at the dropped primes; those inverse roots have modulus 1.
        pure = [t for t in thetas if group.k == 0 or primitive[t.char_id]]
        report.add('inverse roots lie on |u| = sqrt(q)',
                   residual=max([theta.rh_residual() for theta in pure] or [0.0]),
                   tolerance=RH_TOLERANCE, checked=len(pure), **where)
        if len(pure) < len(thetas):
            report.add('imprimitive characters with roots of modulus 1',
                       value=sum(1 for t in thetas if t.rh_residual() > RH_TOLERANCE),
                       checked=len(thetas) - len(pure), **where)
        report.add('L-polynomial rebuilt from its inverse roots',
                   residual=max(reconstruction_residual(lpolys[t.char_id], t) for t in thetas),
                   tolerance=IDENTITY_TOLERANCE, **where)
        traces = np.array([[t.trace(m) for m in range(1, nmax + 1)] for t in thetas])
        trivial_zeros = np.array([t.a for t in thetas])
        for m in range(1, nmax + 1):
            sums = all_char_sums(m, VonMangoldt(), group, table)[1:]
            residual = np.abs(sums + traces[:, m - 1] * spec.q ** (m / 2.0) + trivial_zeros)
            report.add('explicit formula for the prime sum',
                       residual=float(np.max(residual)) / spec.q ** (m / 2.0),
                       tolerance=RH_TOLERANCE, n=m, **where)

        expected = group.ell + group.k - 1
        degrees = [lpolys[t.char_id].degree for t in thetas if primitive[t.char_id]]
        report.add('primitive characters have L-degree ell + deg M - 1',
                   value=sorted(set(degrees)), reference=expected,
                   passed=all(d == expected for d in degrees), **where)
        report.add('primitive odd characters have no zero at u = 1',
                   value=max([t.a for t in thetas if primitive[t.char_id] and odd[t.char_id]]
                             or [0]), reference=0,
                   passed=all(t.a == 0 for t in thetas
                              if primitive[t.char_id] and odd[t.char_id]), **where)

        chars = characters(group)
        sample = _sample(range(1, group.order))
        depth = group.ell + group.k
        report.add('Euler product agrees with the L-polynomial',
                   residual=max(euler_product_check(chars[i], depth, table) for i in sample),
                   tolerance=IDENTITY_TOLERANCE, degree=depth, checked=len(sample), **where)
        if group.k == 0 and group.ell >= 1 and spec.q > 2:
            report.add('twisting preserves the L-polynomial',
                       residual=max(twist_residual(chars[i], c) for i in sample
                                    for c in spec.units()),
                       tolerance=IDENTITY_TOLERANCE, checked=len(sample), **where)


def _hook_sign(lam, n):
    if not lam.is_hook:
        return 0
    return (-1) ** (n - lam[0])


def run_fourier(config, report):
    """Closed forms of the Fourier coefficients of mu, Lambda and d_k."""
    nmax = _degree(config, 'fourier')
    for n in range(1, nmax + 1):
        spectrum = fourier_coefficients(Mobius(), n)
        ones = Partition((1,) * n)
        report.add('Mobius spectrum is (-1)^n on the sign character only', n=n,
                   passed=all(c == ((-1) ** n if lam == ones else 0) for lam, c in spectrum))
        spectrum = fourier_coefficients(VonMangoldt(), n)
        report.add('von Mangoldt spectrum is (-1)^(n-r) on hooks', n=n,
                   passed=all(c == _hook_sign(lam, n) for lam, c in spectrum))
        for k in range(2, 6):
            spectrum = fourier_coefficients(DivisorK(k), n)
            report.add('divisor function spectrum is the Schur polynomial at k ones',
                       n=n, k=k,
                       passed=all(c == schur_at_ones(lam, k) for lam, c in spectrum))
            if n >= 2:
                hook = Partition((n - 1, 1))
                report.add('divisor function coefficient at (n-1,1)',
                           value=spectrum[hook],
                           reference=math.comb(n + k - 2, k - 2) * (n - 1),
                           passed=spectrum[hook] == math.comb(n + k - 2, k - 2) * (n - 1),
                           n=n, k=k)
        report.add('partition count', value=len(partitions(n)), n=n)


def run_means(config, report):
    """Exact means of Lambda, mu and d_k over monic polynomials."""
    nmax = _degree(config, 'means')
    for spec in config.field_specs():
        table = factor_sieve(spec, nmax, config.sieve_cap, config.cache_dir)
        for n in range(1, nmax + 1):
            value = mean(VonMangoldt(), n, table)
            report.add('mean of the von Mangoldt function', value=value, reference=1,
                       passed=value == 1, q=spec.q, n=n)
            if n >= 2:
                value = mean(Mobius(), n, table)
                report.add('mean of the Mobius function', value=value, reference=0,
                           passed=value == 0, q=spec.q, n=n)
            for k in (2, 3, config.k):
                value = mean(DivisorK(k), n, table)
                expected = math.comb(n + k - 1, n)
                report.add('mean of the divisor function', value=value, reference=expected,
                           passed=value == expected, q=spec.q, n=n, k=k)


def run_hl(config, report):
    """Singular series expansions and their decay across field sizes."""
    trivial = []
    shifted = []
    for spec in config.field_specs():
        if spec.q <= 2:
            logger.warning('Skipping F_2: the singular series vanishes there.')
            continue
        one = Poly.constant(spec, 1)
        delta = Poly.parse(spec, config.delta)
        value, tail = hl_constant(one, config.D)
        normalized = abs(value - (1 - 1.0 / spec.q)) * spec.q ** 2
        trivial.append(normalized)
        report.add('singular series of a scalar shift near 1 - 1/q', value=value,
                   reference=1 - 1.0 / spec.q, residual=abs(value - (1 - 1.0 / spec.q)),
                   normalized=normalized, tail=tail, q=spec.q, D=config.D)
        normalized = hl_expansion_residual(delta, config.D)
        shifted.append(normalized)
        report.add('singular series near 1 + (a - 1)/q', normalized=normalized,
                   q=spec.q, delta=str(delta), D=config.D)
        report.add('|Delta|/phi(Delta) near 1 + a/q',
                   normalized=phi_expansion_residual(delta), q=spec.q, delta=str(delta))
    for name, series in (('scalar shift', trivial), ('configured shift', shifted)):
        if series:
            bound = DECAY_FACTOR * max(series[0], 1e-12)
            report.add('singular series residual decays like q^-2 ({0})'.format(name),
                       value=series, passed=all(x <= bound for x in series))


def _schur_sum_row(config, spec, group, report, where):
    """Character-sum pairing of alpha and beta against the Fourier pairing
    over lam_1 <= ell + deg M - 1, reported with its hypothesis flag."""
    n = config.n if config.n is not None else group.ell + group.k
    table = factor_sieve(spec, n, config.sieve_cap, config.cache_dir)
    alpha = parse_function(config.alpha)
    beta = parse_function(config.beta)
    normalized = schur_sum_residual(alpha, beta, n, group, table)
    report.add('character pairing of S(n, alpha, chi) against the Fourier pairing',
               residual=normalized / math.sqrt(spec.q), normalized=normalized, n=n,
               outside_hypothesis=not schur_sum_hypothesis(group), **where)


def run_chars(config, report):
    """Orthogonality, counts and additive labels of the characters of R_{ell,M}."""
    for spec in config.field_specs():
        group = _group(config, spec)
        where = {'q': spec.q, 'modulus': str(group.modulus)}
        by_chars, by_classes = orthogonality_residuals(group)
        report.add('orthogonality over characters', residual=by_chars,
                   tolerance=IDENTITY_TOLERANCE, **where)
        report.add('orthogonality over classes', residual=by_classes,
                   tolerance=IDENTITY_TOLERANCE, **where)
        for key, value in sorted(count_checks(group).items()):
            report.add('character count: {0}'.format(key), value=value, **where)
        if group.k == 0 and group.ell >= 1:
            _, uniform, trivial_imprimitive = additive_label_distribution(group)
            report.add('additive labels are equidistributed', passed=uniform, **where)
            report.add('trivial additive label marks the imprimitive characters',
                       passed=trivial_imprimitive, **where)
        if group.ell + group.k >= 1:
            _schur_sum_row(config, spec, group, report, where)


SUITE_RUNNERS = (('identities', run_identities),
                 ('rh', run_rh),
                 ('fourier', run_fourier),
                 ('means', run_means),
                 ('hl', run_hl),
                 ('chars', run_chars))


def run_suite(name, config, report):
    """Runs one named suite, or every suite for 'all'."""
    for suite, runner in SUITE_RUNNERS:
        if name in (suite, 'all'):
            runner(config, report)
