"""
Hayes characters: the relation R_{ell,M}, its unit group and the characters
of that group.

Two monic polynomials are equivalent modulo R_{ell,M} when they agree modulo
M and share their first ell next-to-leading coefficients. The classes of
polynomials coprime to M form a finite abelian group, the direct sum of
(1 + T F_q[T]) / (1 + T^(ell+1) F_q[T]) and (F_q[T]/M)^x; a class is
identified by the truncated reversal of a representative (its short part)
and its residue mod M.

Group elements are handled as integer keys
    key = short_key * q**deg(M) + residue_index
where short_key = sum(code(c_i) * q**(i-1)) over the next-to-leading
coefficients c_1..c_ell and residue_index is the polynomial index of the
residue. Characters are indexed by exponent vectors against a computed
cyclic decomposition, and evaluated through a discrete-log table.
"""

from .algebra import (Poly, PolyIndex, conv_arrays, reduce_arrays, euler_phi,
                      factorization)
from .arithfun import (Values, residue_indices, unit_residues)
from .errors import (DomainError, ResourceError)
from . import parallel
import logging
import math
import numpy as np
import sympy


logger = logging.getLogger(__name__)

DEFAULT_GROUP_CAP = 2 * 10 ** 6

# Characters processed per block when testing kernels.
FLAG_BLOCK = 4096


class HayesModulus(object):
    """The relation R_{ell,M}; M is normalized to be monic."""
    def __init__(self, ell, modulus):
        if not isinstance(ell, int) or ell < 0:
            raise DomainError('Short-interval depth must be a nonnegative integer.')
        if modulus.is_zero:
            raise DomainError('The modulus M must be nonzero.')
        self.ell = ell
        self.modulus = modulus.monic()
        self.spec = modulus.spec

    @classmethod
    def short(cls, spec, ell):
        """R_{ell,1}."""
        return cls(ell, Poly.constant(spec, 1))

    @property
    def m_degree(self):
        return self.modulus.degree

    def __eq__(self, other):
        return (isinstance(other, HayesModulus) and self.ell == other.ell
                and self.modulus == other.modulus)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.ell, self.modulus))

    def __str__(self):
        return 'R(ell={0}, M={1})'.format(self.ell, self.modulus)

    __repr__ = __str__


def short_part(f, ell):
    """1 + c_1 T + ... + c_ell T^ell from the next-to-leading coefficients of
    f; coefficients beyond the degree count as 0."""
    n = f.degree
    codes = [1] + [f.coefficient(n - i) if n - i >= 0 else 0 for i in range(1, ell + 1)]
    return Poly.from_codes(f.spec, codes)


class UnitClass(object):
    """A unit of M_q / R_{ell,M} as (residue mod M, short part)."""
    def __init__(self, modulus, dirichlet_part, short):
        self.modulus = modulus
        self.dirichlet_part = dirichlet_part
        self.short_part = short

    def __mul__(self, other):
        if self.modulus != other.modulus:
            raise TypeError('Classes belong to different relations.')
        truncation = Poly.monomial(self.modulus.spec, self.modulus.ell + 1)
        return UnitClass(self.modulus,
                         (self.dirichlet_part * other.dirichlet_part) % self.modulus.modulus,
                         (self.short_part * other.short_part) % truncation)

    @property
    def key(self):
        q = self.modulus.spec.q
        short_key = sum(self.short_part.coefficient(i) * q ** (i - 1)
                        for i in range(1, self.modulus.ell + 1))
        res_index = PolyIndex(self.modulus.spec).encode(self.dirichlet_part)
        return short_key * q ** self.modulus.m_degree + res_index

    def __eq__(self, other):
        return (isinstance(other, UnitClass) and self.modulus == other.modulus
                and self.dirichlet_part == other.dirichlet_part
                and self.short_part == other.short_part)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.modulus, self.dirichlet_part, self.short_part))

    def __repr__(self):
        return 'UnitClass({0}, {1})'.format(self.dirichlet_part, self.short_part)


def class_of(f, modulus):
    """The class of a monic f modulo R_{ell,M}, or None when f is not
    coprime to M."""
    if not f.is_monic:
        raise DomainError('{0} is not monic.'.format(f))
    residue = f % modulus.modulus
    if modulus.m_degree > 0:
        g = residue
        h = modulus.modulus
        while not g.is_zero:
            g, h = h % g, g
        if h.degree != 0:
            return None
    return UnitClass(modulus, residue, short_part(f, modulus.ell))


class UnitGroup(object):
    """The unit group of M_q / R_{ell,M} with a cyclic decomposition.

    Attributes after construction:
        keys        element keys in ascending order (element position = row)
        orders      cyclic factor orders d_i (prime powers)
        generators  element keys of the generators
        dlog        (|G|, r) exponent vectors of every element
    """
    def __init__(self, modulus, cap=DEFAULT_GROUP_CAP, strict_parity=False,
                 threads=1):
        self.modulus = modulus
        self.spec = spec = modulus.spec
        self.ell = modulus.ell
        self.m = modulus.modulus
        self.k = modulus.m_degree
        self.strict_parity = strict_parity
        self.threads = threads
        q = spec.q

        self.order = q ** self.ell * euler_phi(self.m)
        if self.order > cap:
            raise ResourceError('Unit group of {0} has {1} elements, above the cap '
                                'of {2}.'.format(modulus, self.order, cap))

        self.index = PolyIndex(spec)
        self.res_size = q ** self.k
        self.key_size = q ** self.ell * self.res_size
        self.identity = 1 if self.k > 0 else 0

        units = np.flatnonzero(unit_residues(self.m)).astype(np.int64)
        self.keys = (np.arange(q ** self.ell, dtype=np.int64)[:, None] * self.res_size
                     + units[None, :]).ravel()
        self.position = np.full(self.key_size, -1, dtype=np.int64)
        self.position[self.keys] = np.arange(self.order)

        self._decompose()
        self.exponent = 1
        for d in self.orders:
            self.exponent = self.exponent * d // math.gcd(self.exponent, d)
        self.scale = np.array([self.exponent // d for d in self.orders], dtype=np.int64)
        # One table of |G|-exponent roots keeps every product of values coherent.
        self.roots = np.exp(2j * np.pi * np.arange(self.exponent) / self.exponent)

        self._class_positions = {}
        self._flags = None
        logger.debug('Unit group of %s: order %d, cyclic factors %s',
                     modulus, self.order, self.orders)

    # Element arithmetic on key arrays.
    def _split(self, keys):
        keys = np.asarray(keys, dtype=np.int64)
        return keys // self.res_size, keys % self.res_size

    def mul(self, a, b):
        """Products of element keys, broadcasting."""
        sa, ra = self._split(a)
        sb, rb = self._split(b)
        spec = self.spec
        if self.ell:
            ones_a = np.ones(sa.shape + (1,), dtype=np.int64)
            ones_b = np.ones(sb.shape + (1,), dtype=np.int64)
            da = np.concatenate([ones_a, self.index.digits(self.ell, sa)], axis=-1)
            db = np.concatenate([ones_b, self.index.digits(self.ell, sb)], axis=-1)
            short = self.index.indices(conv_arrays(spec, da, db)[..., 1:self.ell + 1])
        else:
            short = np.zeros(np.broadcast_shapes(sa.shape, sb.shape), dtype=np.int64)
        if self.k:
            product = conv_arrays(spec, self.index.digits(self.k, ra),
                                  self.index.digits(self.k, rb))
            res = self.index.indices(reduce_arrays(spec, product, self.m))
        else:
            res = np.zeros_like(short)
        return short * self.res_size + res

    def power(self, a, exponent):
        """a**exponent for a nonnegative integer exponent."""
        a = np.asarray(a, dtype=np.int64)
        result = np.full(a.shape, self.identity, dtype=np.int64)
        base = a
        while exponent:
            if exponent & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            exponent >>= 1
        return result

    def _decompose(self):
        """Cyclic decomposition, one Sylow subgroup at a time.

        In each Sylow r-subgroup an element x of maximal order r^k in the
        quotient by the span H of the generators found so far is taken; its
        power x^(r^k) lies in H with exponents divisible by r^k, and dividing
        those out gives a generator whose cyclic group meets H trivially.
        """
        factors = sorted(sympy.factorint(self.order).items())
        generators, orders, coords = [], [], []
        all_keys = self.keys
        for r, a in factors:
            cofactor = self.order // r ** a
            sylow = np.unique(self.power(all_keys, cofactor))
            gens, ords, h_keys, h_coords = self._sylow_basis(sylow, r)
            lookup = np.full(self.key_size, -1, dtype=np.int64)
            lookup[h_keys] = np.arange(len(h_keys))
            # CRT idempotent projecting onto the r-part.
            idem = (cofactor * pow(cofactor, -1, r ** a)) % self.order
            component = self.power(all_keys, idem)
            coords.append(h_coords[lookup[component]])
            generators.extend(gens)
            orders.extend(ords)
        self.generators = tuple(int(g) for g in generators)
        self.orders = tuple(int(d) for d in orders)
        if coords:
            self.dlog = np.concatenate(coords, axis=1)
        else:
            self.dlog = np.zeros((self.order, 0), dtype=np.int64)

    def _sylow_basis(self, sylow, r):
        h_keys = np.array([self.identity], dtype=np.int64)
        h_coords = np.zeros((1, 0), dtype=np.int64)
        lookup = np.full(self.key_size, -1, dtype=np.int64)
        lookup[self.identity] = 0
        gens, ords = [], []
        while len(h_keys) < len(sylow):
            y = sylow.copy()
            depth = np.zeros(len(sylow), dtype=np.int64)
            pending = lookup[y] < 0
            while pending.any():
                y[pending] = self.power(y[pending], r)
                depth[pending] += 1
                pending = lookup[y] < 0
            chosen = int(np.argmax(depth))
            k = int(depth[chosen])
            x = int(sylow[chosen])
            step = r ** k
            a = h_coords[lookup[int(self.power(x, step))]]
            if np.any(a % step):
                raise ArithmeticError('Basis extraction failed for {0}.'.format(self.modulus))
            g = x
            for gen, d, ai in zip(gens, ords, a):
                g = int(self.mul(g, self.power(gen, (-(int(ai) // step)) % d)))
            cyclic = [self.identity]
            for _ in range(step - 1):
                cyclic.append(int(self.mul(cyclic[-1], g)))
            cyclic = np.array(cyclic, dtype=np.int64)
            new_keys = self.mul(cyclic[:, None], h_keys[None, :]).ravel()
            new_coords = np.concatenate(
                [np.tile(h_coords, (step, 1)),
                 np.repeat(np.arange(step, dtype=np.int64), len(h_keys))[:, None]], axis=1)
            h_keys, h_coords = new_keys, new_coords
            lookup[h_keys] = np.arange(len(h_keys))
            gens.append(g)
            ords.append(step)
        return gens, ords, h_keys, h_coords

    # Classes of polynomials.
    def key_of(self, f):
        """Element key of a monic polynomial, or -1 if it is not a unit."""
        cls = class_of(f, self.modulus)
        if cls is None:
            return -1
        return cls.key

    def class_keys(self, n, indices=None):
        """Element keys of monic polynomials of degree n (keys of non-units
        included)."""
        q = self.spec.q
        digits = self.index.digits(n, indices)
        short = np.zeros(digits.shape[:-1], dtype=np.int64)
        for i in range(1, self.ell + 1):
            if n - i >= 0:
                short += digits[..., n - i] * q ** (i - 1)
        if self.k:
            res = residue_indices(self.spec, n, self.m, indices)
        else:
            res = np.zeros_like(short)
        return short * self.res_size + res

    def class_positions(self, n):
        """Element position of every monic polynomial of degree n; -1 marks
        polynomials not coprime to M."""
        try:
            return self._class_positions[n]
        except KeyError:
            pass
        size = self.spec.q ** n

        def block(start, stop):
            keys = self.class_keys(n, np.arange(start, stop, dtype=np.int64))
            return self.position[keys]

        positions = np.concatenate(parallel.map_chunks(block, size, self.threads))
        self._class_positions[n] = positions
        return positions

    def element_position(self, key):
        return int(self.position[key]) if key >= 0 else -1

    # Characters.
    def exponent_vectors(self):
        """(|G|, r) exponent vectors of all characters, in char_id order."""
        if not self.orders:
            return np.zeros((1, 0), dtype=np.int64)
        return np.stack(np.unravel_index(np.arange(self.order), self.orders),
                        axis=1).astype(np.int64)

    def phases(self, exponents, positions=None):
        """Phase (in units of 2 pi / exponent) of a character at elements."""
        dlog = self.dlog if positions is None else self.dlog[positions]
        weights = np.asarray(exponents, dtype=np.int64) * self.scale
        return (dlog * weights).sum(axis=-1) % self.exponent

    def trivial_on(self, positions):
        """Boolean array over characters: trivial on every listed element."""
        vectors = self.exponent_vectors() * self.scale
        dlog = self.dlog[positions]
        out = np.empty(self.order, dtype=bool)
        for start in range(0, self.order, FLAG_BLOCK):
            block = vectors[start:start + FLAG_BLOCK]
            phases = (dlog @ block.T) % self.exponent
            out[start:start + FLAG_BLOCK] = np.all(phases == 0, axis=0)
        return out

    def short_kernel(self):
        """Positions of the kernel of reduction to R_{ell-1,M}: short part
        1 + c T^ell and residue 1."""
        q = self.spec.q
        keys = np.arange(q, dtype=np.int64) * q ** (self.ell - 1) * self.res_size + self.identity
        return self.position[keys]

    def prime_kernel(self, prime):
        """Positions of the kernel of reduction to R_{ell,M/P}: short part 1
        and residue = 1 mod M/P."""
        cofactor = self.m // prime
        residues = [Poly.constant(self.spec, 1) + cofactor * self.index.decode(t)
                    for t in range(self.spec.q ** prime.degree)]
        keys = np.array([self.index.encode(r % self.m) for r in residues], dtype=np.int64)
        positions = self.position[keys]
        return positions[positions >= 0]

    def scalar_positions(self):
        """Positions of the embedded nonzero constants (short part 1)."""
        keys = np.arange(1, self.spec.q, dtype=np.int64)
        return self.position[keys]

    def flags(self):
        """Arrays (primitive, odd, quadratic) over characters."""
        if self._flags is not None:
            return self._flags
        primitive = np.ones(self.order, dtype=bool)
        if self.ell > 0:
            primitive &= ~self.trivial_on(self.short_kernel())
        if self.k > 0:
            for prime, _ in factorization(self.m):
                primitive &= ~self.trivial_on(self.prime_kernel(prime))

        if self.k == 0 or (self.ell > 0 and not self.strict_parity):
            odd = np.ones(self.order, dtype=bool)
        else:
            odd = ~self.trivial_on(self.scalar_positions())

        if self.orders:
            vectors = self.exponent_vectors()
            quadratic = np.all((2 * vectors) % np.array(self.orders) == 0, axis=1)
        else:
            quadratic = np.ones(1, dtype=bool)
        self._flags = (primitive, odd, quadratic)
        return self._flags

    def character(self, char_id):
        return HayesCharacter(self, char_id)

    def representatives(self):
        """Element positions of the monic polynomials of degree ell + deg M
        coprime to M; each class occurs exactly once."""
        positions = self.class_positions(self.ell + self.k)
        return positions[positions >= 0]


def build_unit_group(modulus, cap=DEFAULT_GROUP_CAP, strict_parity=False, threads=1):
    """Unit group of M_q / R_{ell,M} with discrete logs."""
    return UnitGroup(modulus, cap=cap, strict_parity=strict_parity, threads=threads)


def characters(group):
    """All |G| characters in char_id order."""
    return [HayesCharacter(group, i) for i in range(group.order)]


class HayesCharacter(object):
    """A character of a UnitGroup given by its exponent vector."""
    def __init__(self, group, char_id):
        if not 0 <= char_id < group.order:
            raise DomainError('Character id {0} out of range.'.format(char_id))
        self.group = group
        self.char_id = int(char_id)
        if group.orders:
            self.exponents = tuple(int(x) for x in np.unravel_index(char_id, group.orders))
        else:
            self.exponents = ()

    @classmethod
    def from_exponents(cls, group, exponents):
        exponents = tuple(int(k) % d for k, d in zip(exponents, group.orders))
        if not exponents:
            return cls(group, 0)
        return cls(group, int(np.ravel_multi_index(exponents, group.orders)))

    @property
    def is_trivial(self):
        return self.char_id == 0

    @property
    def is_primitive(self):
        return bool(self.group.flags()[0][self.char_id])

    @property
    def is_odd(self):
        return bool(self.group.flags()[1][self.char_id])

    @property
    def is_quadratic(self):
        """chi^2 is trivial."""
        return bool(self.group.flags()[2][self.char_id])

    @property
    def order(self):
        result = 1
        for k, d in zip(self.exponents, self.group.orders):
            part = d // math.gcd(k, d)
            result = result * part // math.gcd(result, part)
        return result

    def conj(self):
        return HayesCharacter.from_exponents(self.group, [-k for k in self.exponents])

    def element_values(self):
        """Values on the group elements, in position order."""
        return self.group.roots[self.group.phases(self.exponents)]

    def values(self, n):
        """Values on the monic polynomials of degree n; 0 off the units."""
        positions = self.group.class_positions(n)
        out = np.zeros(len(positions), dtype=complex)
        units = positions >= 0
        out[units] = self.group.roots[self.group.phases(self.exponents, positions[units])]
        return out

    def __call__(self, f):
        """evaluate_char: chi(f) for a monic f."""
        key = self.group.key_of(f)
        if key < 0:
            return 0j
        position = self.group.element_position(key)
        return complex(self.group.roots[self.group.phases(self.exponents, position)])

    def twist(self, c):
        """chi_c(f) = chi(f(cT) / c^deg f) for a character modulo R_{ell,1}."""
        return twist(self, c)

    def __eq__(self, other):
        return (isinstance(other, HayesCharacter) and self.group is other.group
                and self.char_id == other.char_id)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((id(self.group), self.char_id))

    def __repr__(self):
        return 'HayesCharacter({0}, id={1}, exponents={2})'.format(
            self.group.modulus, self.char_id, self.exponents)


def evaluate_char(chi, f):
    return chi(f)


def is_primitive(chi):
    return chi.is_primitive


def is_odd(chi):
    return chi.is_odd


def char_sum(n, alpha, chi, table):
    """S(n, alpha, chi) = sum over monic f of degree n of alpha(f) chi(f)."""
    values = Values.tabulate(alpha, table, n)
    weights = values.data * chi.values(n)
    partial = parallel.map_chunks(lambda a, b: np.sum(weights[a:b]), len(weights),
                                  chi.group.threads)
    return complex(np.sum(np.array(partial, dtype=complex))) / values.denom


def class_sums(values, group, n):
    """Sums of tabulated values over each unit class of degree-n monics."""
    positions = group.class_positions(n)
    units = positions >= 0
    return values.take(units).weighted_sums(positions[units], group.order)


def all_char_sums(n, alpha, group, table):
    """S(n, alpha, chi) for every character, in char_id order.

    The class sums W(x) are transformed over the cyclic decomposition:
    S(chi_k) = sum_x W(x) exp(2 pi i sum_i k_i x_i / d_i).
    """
    values = Values.tabulate(alpha, table, n)
    return transform_class_sums(class_sums(values, group, n), group)


def transform_class_sums(sums, group):
    """Character transform of class sums given as (array, denominator)."""
    weights, denom = sums
    weights = np.asarray(weights, dtype=complex)
    if not group.orders:
        return weights / denom
    grid = np.zeros(group.order, dtype=complex)
    grid[np.ravel_multi_index(tuple(group.dlog.T), group.orders)] = weights
    spectrum = np.fft.ifftn(grid.reshape(group.orders)) * group.order
    return spectrum.ravel() / denom


def twist(chi, c):
    """The twist chi_c of a character modulo R_{ell,1}."""
    group = chi.group
    if group.k != 0:
        raise DomainError('Twisting is defined for characters modulo R_{ell,1} only.')
    if group.ell < 1:
        raise DomainError('Twisting needs ell >= 1.')
    spec = group.spec
    c = spec.element(c)
    if not c:
        raise DomainError('Twist parameter must be nonzero.')
    images = twist_keys(group, np.array(group.generators, dtype=np.int64), c)
    coords = group.dlog[group.position[images]]
    weights = np.array(chi.exponents, dtype=np.int64) * group.scale
    phases = (coords * weights).sum(axis=1) % group.exponent
    exponents = [int(ph) // int(s) for ph, s in zip(phases, group.scale)]
    return HayesCharacter.from_exponents(group, exponents)


def twist_keys(group, keys, c):
    """Keys of sigma_c(x): the i-th short coefficient is divided by c^i."""
    spec = group.spec
    inv = c.inverse()
    digits = group.index.digits(group.ell, keys // group.res_size)
    for i in range(1, group.ell + 1):
        digits[..., i - 1] = spec.vmul(digits[..., i - 1], (inv ** i).code)
    return group.index.indices(digits) * group.res_size + keys % group.res_size


def induced_additive_character(chi, x):
    """psi_chi(x) = chi(T^ell + x) for a character modulo R_{ell,1}."""
    group = chi.group
    if group.k != 0 or group.ell < 1:
        raise DomainError('Additive characters come from R_{ell,1} with ell >= 1.')
    spec = group.spec
    f = Poly.monomial(spec, group.ell) + Poly.constant(spec, x)
    return chi(f)


def gauss_average(chi, delta):
    """A(chi, delta) = sum over c in F_q^x of psi_chi(delta c^ell) / sqrt(q)."""
    spec = chi.group.spec
    delta = spec.element(delta)
    if not delta:
        raise DomainError('Gauss averages need a nonzero shift.')
    ell = chi.group.ell
    total = sum(induced_additive_character(chi, delta * c ** ell) for c in spec.units())
    return total / math.sqrt(spec.q)


def additive_phases(group):
    """(|G|, q) phases of psi_chi(x) = chi(T^ell + x) for every character
    and every x in code order, in units of 2 pi / group.exponent."""
    if group.k != 0 or group.ell < 1:
        raise DomainError('Additive characters come from R_{ell,1} with ell >= 1.')
    q = group.spec.q
    keys = np.arange(q, dtype=np.int64) * q ** (group.ell - 1)
    dlog = group.dlog[group.position[keys]]
    vectors = group.exponent_vectors() * group.scale
    return (vectors @ dlog.T) % group.exponent


def gauss_averages(group, delta):
    """A(chi, delta) for every character, in char_id order."""
    spec = group.spec
    delta = spec.element(delta)
    if not delta:
        raise DomainError('Gauss averages need a nonzero shift.')
    phases = additive_phases(group)
    columns = [(delta * c ** group.ell).code for c in spec.units()]
    return group.roots[phases[:, columns]].sum(axis=1) / math.sqrt(spec.q)


def quad_torsion_count(group):
    """Number of characters with chi^2 trivial, by enumeration."""
    return int(np.count_nonzero(group.flags()[2]))


def primitive_count(group):
    return int(np.count_nonzero(group.flags()[0]))


def even_count(group):
    """Characters that are not odd under the group's parity convention."""
    return int(np.count_nonzero(~group.flags()[1]))


def orthogonality_residuals(group):
    """Largest deviations in the two orthogonality relations over a
    representative set: (characters, classes)."""
    reps = group.representatives()
    vectors = group.exponent_vectors() * group.scale
    phases = (group.dlog[reps] @ vectors.T) % group.exponent
    matrix = group.roots[phases]
    size = float(group.order)
    by_chars = matrix.conj().T @ matrix / size
    by_classes = matrix @ matrix.conj().T / size
    eye = np.eye(group.order)
    return (float(np.max(np.abs(by_chars - eye))),
            float(np.max(np.abs(by_classes - eye))))


def character_rows(group):
    """CSV rows `char_id, exponent_vector, order, primitive, odd`."""
    primitive, odd, _ = group.flags()
    for chi in characters(group):
        yield [chi.char_id, ';'.join(str(k) for k in chi.exponents), chi.order,
               int(primitive[chi.char_id]), int(odd[chi.char_id])]
