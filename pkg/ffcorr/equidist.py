"""
Equidistribution of the classes Theta_chi over character ensembles.

Test functions are evaluated on the eigenvalues of Theta_chi and averaged
over the characters of a unit group that pass a filter; the averages are
compared with the corresponding integrals over the unitary group, which
for the implemented tests are known exactly. A Monte Carlo Haar sampler
cross-checks those reference values.
"""

from .algebra import is_squarefree
from .arithfun import SnCharacter
from .errors import DomainError
from .hayes import (additive_phases, all_char_sums, char_sum, even_count,
                    gauss_averages, primitive_count, quad_torsion_count)
from .lfunc import (theta_class, theta_classes)
from .symfunc import (Partition, fourier_coefficients)
import logging
import math
import numpy as np


logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 10 ** 5

ORACLE_BATCH = 5000

FILTERS = ('all', 'primitive', 'primitive_odd')


def ensemble_selector(group, name):
    """Boolean array over characters for a filter name."""
    primitive, odd, _ = group.flags()
    if name == 'all':
        selector = np.ones(group.order, dtype=bool)
    elif name == 'primitive':
        selector = primitive.copy()
    elif name == 'primitive_odd':
        selector = primitive & odd
    else:
        raise DomainError('Unknown ensemble filter {0!r}; use one of {1}.'.format(
            name, ', '.join(FILTERS)))
    selector[0] = False
    return selector


class TraceTest(object):
    """Tr(Theta^m)."""
    def __init__(self, m=1):
        if m < 1:
            raise DomainError('Power traces need m >= 1.')
        self.m = m

    @property
    def test_id(self):
        return 'tr{0}'.format(self.m)

    def __call__(self, eigenvalues):
        eigenvalues = np.asarray(eigenvalues, dtype=complex)
        return np.sum(eigenvalues ** self.m, axis=-1)

    def reference(self, N):
        return 0j


class SchurPairTest(object):
    """s_{lam1'}(Theta) conj(s_{lam2'}(Theta)) for partitions of equal size."""
    def __init__(self, lam1, lam2):
        self.lam1 = lam1 if isinstance(lam1, Partition) else Partition(lam1)
        self.lam2 = lam2 if isinstance(lam2, Partition) else Partition(lam2)
        if self.lam1.n != self.lam2.n:
            raise DomainError('Schur pairs need partitions of the same size.')

    @property
    def test_id(self):
        return 's{0}s{1}'.format(self.lam1, self.lam2)

    def __call__(self, eigenvalues):
        eigenvalues = np.asarray(eigenvalues, dtype=complex)
        first = schur_batch(self.lam1.conjugate(), eigenvalues)
        second = schur_batch(self.lam2.conjugate(), eigenvalues)
        return first * np.conj(second)

    def reference(self, N):
        """1 when lam1 = lam2 and lam1_1 <= N, otherwise 0."""
        if self.lam1 == self.lam2 and (not len(self.lam1) or self.lam1[0] <= N):
            return 1 + 0j
        return 0j


class ConstantTest(object):
    test_id = 'one'

    def __call__(self, eigenvalues):
        eigenvalues = np.asarray(eigenvalues, dtype=complex)
        return np.ones(eigenvalues.shape[:-1], dtype=complex)

    def reference(self, N):
        return 1 + 0j


def parse_test(text):
    """`one`, `trM` or `s(3,1)s(3,1)`."""
    text = text.strip()
    if text == 'one':
        return ConstantTest()
    if text.startswith('tr'):
        try:
            return TraceTest(int(text[2:] or 1))
        except ValueError:
            pass
    if text.startswith('s(') and ')s(' in text:
        first, second = text[1:].split(')s', 1)
        return SchurPairTest(Partition.parse(first + ')'), Partition.parse(second))
    raise DomainError('Unknown test function {0!r}.'.format(text))


def schur_batch(lam, eigenvalues):
    """s_lam over a batch of eigenvalue rows (last axis), via power sums,
    Newton's identities and the Jacobi-Trudi determinant."""
    eigenvalues = np.asarray(eigenvalues, dtype=complex)
    batch = eigenvalues.shape[:-1]
    N = eigenvalues.shape[-1]
    if len(lam) == 0:
        return np.ones(batch, dtype=complex)
    if len(lam) > N:
        return np.zeros(batch, dtype=complex)
    k = len(lam)
    top = lam[0] + k
    power = [np.full(batch, N, dtype=complex)]
    for m in range(1, top + 1):
        power.append(np.sum(eigenvalues ** m, axis=-1))
    h = [np.ones(batch, dtype=complex)]
    for m in range(1, top + 1):
        h.append(sum(power[i] * h[m - i] for i in range(1, m + 1)) / m)
    matrix = np.zeros(batch + (k, k), dtype=complex)
    for i in range(k):
        for j in range(k):
            m = lam[i] - i + j
            if m >= 0:
                matrix[..., i, j] = h[m]
    return np.linalg.det(matrix)


class EnsembleStat(object):
    """Average of one test function over a filtered character ensemble."""
    def __init__(self, group, filter_name, test, average, size, dimension):
        self.group = group
        self.filter_name = filter_name
        self.test = test
        self.average = complex(average)
        self.size = size
        self.dimension = dimension
        self.reference = complex(test.reference(dimension))
        self.residual = abs(self.average - self.reference)
        self.normalized = self.residual * math.sqrt(group.spec.q)

    def csv_row(self):
        """`q, ensemble_size, test_id, re(avg), im(avg), normalized_residual`."""
        return [self.group.spec.q, self.size, self.test.test_id, repr(self.average.real),
                repr(self.average.imag), repr(self.normalized)]


def _eigen_matrix(thetas):
    """Stacks eigenvalue rows; characters with a different dimension are
    rejected since the tests compare against one unitary group."""
    dims = set(theta.dimension for theta in thetas)
    if len(dims) != 1:
        raise DomainError('Ensemble mixes Theta dimensions {0}.'.format(sorted(dims)))
    return np.array([theta.eigenvalues for theta in thetas], dtype=complex).reshape(
        len(thetas), dims.pop())


def ensemble_average(group, filter_name, test, threads=1, thetas=None):
    """(1/#ensemble) sum of test(Theta_chi) over the filtered characters."""
    if thetas is None:
        thetas = theta_classes(group, ensemble_selector(group, filter_name), threads)
    if not thetas:
        raise DomainError('The {0} ensemble of {1} is empty.'.format(filter_name, group.modulus))
    eigenvalues = _eigen_matrix(thetas)
    values = test(eigenvalues)
    average = complex(np.sum(values)) / len(thetas)
    return EnsembleStat(group, filter_name, test, average, len(thetas), eigenvalues.shape[1])


def schur_sum_hypothesis(group):
    """(ell >= 4 and M squarefree) or (ell = 0 and deg M >= 2)."""
    if group.ell >= 4:
        return group.k == 0 or is_squarefree(group.m)
    return group.ell == 0 and group.k >= 2


def schur_sum_residual(alpha, beta, n, group, table):
    """|(1/|G|) sum over chi != chi_0 of q^-n S(n, alpha, chi) conj(S(n, beta, chi))
    - sum over lam_1 <= ell + deg M - 1 of alpha_hat conj(beta_hat)| sqrt(q)."""
    q = group.spec.q
    if not schur_sum_hypothesis(group):
        logger.warning('%s lies outside the Schur-sum hypothesis.', group.modulus)
    sa = all_char_sums(n, alpha, group, table)
    sb = all_char_sums(n, beta, group, table)
    measured = complex(np.sum(sa[1:] * np.conj(sb[1:]))) / (group.order * q ** n)
    top = group.ell + group.k - 1
    fa = fourier_coefficients(alpha, n)
    fb = fourier_coefficients(beta, n)
    predicted = complex(fa.pairing(fb, lambda lam: lam[0] <= top))
    return abs(measured - predicted) * math.sqrt(q)


def lemschur_residual(lam, chi, n, table, theta=None):
    """|S(n, chi_lam, chi) - q^(n/2) (-1)^n s_{lam'}(Theta_chi)| / q^((n-1)/2)."""
    lam = lam if isinstance(lam, Partition) else Partition(lam)
    if chi.is_trivial:
        raise DomainError('The trivial character is excluded.')
    if chi.is_quadratic:
        raise DomainError('Character {0} is quadratic; chi^2 must be nontrivial.'.format(
            chi.char_id))
    if lam.n != n:
        raise DomainError('Partition {0} is not a partition of {1}.'.format(lam, n))
    q = chi.group.spec.q
    if theta is None:
        theta = theta_class(chi)
    measured = char_sum(n, SnCharacter(lam), chi, table)
    schur = complex(schur_batch(lam.conjugate(), theta.eigenvalues.reshape(1, -1))[0])
    predicted = q ** (n / 2) * (-1) ** n * schur
    return abs(measured - predicted) / q ** ((n - 1) / 2)


def twisted_average_hypothesis(group):
    """ell >= 3, except ell = 3 in characteristic 2 or 5."""
    if group.ell < 3:
        return False
    return not (group.ell == 3 and group.spec.p in (2, 5))


def twisted_average_residual(group, delta, test, threads=1, thetas=None):
    """|(1/#prim) sum over primitive chi of test(Theta_chi) psi_Delta(chi)| sqrt(q)
    for a group of R_{ell,1} and a nonzero constant Delta."""
    if group.k != 0:
        raise DomainError('Twisted averages are taken over R_{ell,1}.')
    if not twisted_average_hypothesis(group):
        logger.warning('%s with p = %d lies outside the twisted-average hypothesis.',
                       group.modulus, group.spec.p)
    selector = ensemble_selector(group, 'primitive')
    if thetas is None:
        thetas = theta_classes(group, selector, threads)
    if not thetas:
        raise DomainError('No primitive characters modulo {0}.'.format(group.modulus))
    weights = gauss_averages(group, delta)[[theta.char_id for theta in thetas]]
    values = test(_eigen_matrix(thetas))
    average = complex(np.sum(values * weights)) / len(thetas)
    return abs(average) * math.sqrt(group.spec.q)


def weil_bound_violations(group, delta):
    """Primitive characters with |psi_Delta(chi)| above ell."""
    selector = ensemble_selector(group, 'primitive')
    weights = np.abs(gauss_averages(group, delta))
    return int(np.count_nonzero(selector & (weights > group.ell + 1e-9)))


def additive_label_distribution(group):
    """Counts of characters by the phases of psi_chi on F_q.

    Returns (counts, uniform, trivial_is_imprimitive): every label should
    occur equally often, and the trivial label should be carried by exactly
    the imprimitive characters.
    """
    phases = additive_phases(group)
    labels, counts = np.unique(phases, axis=0, return_counts=True)
    table = dict((tuple(int(x) for x in label), int(c)) for label, c in zip(labels, counts))
    trivial = np.all(phases == 0, axis=1)
    primitive = group.flags()[0]
    return (table, len(set(counts.tolist())) == 1,
            bool(np.array_equal(trivial, ~primitive)))


def count_checks(group):
    """Exact counts of primitive, odd, primitive odd and quadratic characters."""
    primitive, odd, _ = group.flags()
    counts = {'order': group.order,
              'primitive': primitive_count(group),
              'odd': int(np.count_nonzero(odd)),
              'even': even_count(group),
              'primitive_odd': int(np.count_nonzero(primitive & odd)),
              'quadratic': quad_torsion_count(group)}
    counts['primitive_odd_fraction'] = counts['primitive_odd'] / float(group.order)
    return counts


def haar_unitaries(N, samples, seed, batch=ORACLE_BATCH):
    """Yields batches of Haar-distributed N x N unitary matrices: QR of a
    complex Gaussian matrix with the phases of diag(R) moved into Q."""
    rng = np.random.default_rng(seed)
    done = 0
    while done < samples:
        size = min(batch, samples - done)
        z = (rng.standard_normal((size, N, N))
             + 1j * rng.standard_normal((size, N, N))) / math.sqrt(2)
        q, r = np.linalg.qr(z)
        d = np.diagonal(r, axis1=-2, axis2=-1)
        q *= (d / np.abs(d))[:, None, :]
        done += size
        yield q


def unitary_oracle(test, N, samples=DEFAULT_SAMPLES, seed=0):
    """(mean, standard error) of test over Haar-random U(N)."""
    total = 0j
    total_sq = 0.0
    for unitaries in haar_unitaries(N, samples, seed):
        values = test(np.linalg.eigvals(unitaries))
        total += complex(np.sum(values))
        total_sq += float(np.sum(np.abs(values) ** 2))
    average = total / samples
    variance = max(total_sq / samples - abs(average) ** 2, 0.0)
    return average, math.sqrt(variance / samples)
