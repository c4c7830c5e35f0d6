"""Fixed data, seeds and the piecewise-linear maps attached to them.

Coordinates are fixed once and for all by the initial seed:

* N = Z^n with basis e_i, and N° = sum of Z d_i e_i;
* points of M° are integer vectors in the basis f_i = e_i^*/d_i.

With these conventions the pairing of n in N with m in M° is
sum n_i m_i / d_i and p1*(e_i) has f-coordinates eps0[i][j] = lam[i][j] d_j.
A seed is stored as the matrix whose rows are its basis vectors in these
global coordinates.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from functools import reduce

from . import _linalg as la


class InvalidData(ValueError):
    pass


def _lcm(a, b):
    return a * b // gcd(a, b)


def parse_rational(x):
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def format_rational(x):
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


@dataclass(frozen=True)
class LatticePoint:
    """An integer vector tagged with the lattice it lives in."""

    coords: tuple
    lattice: str = "M"

    LATTICES = ("N", "N0", "M", "Mt", "Nt0")

    def __post_init__(self):
        if self.lattice not in self.LATTICES:
            raise ValueError("unknown lattice tag %r" % self.lattice)
        object.__setattr__(self, "coords", la.as_int_tuple(self.coords))

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)


@dataclass(frozen=True)
class FixedData:
    rank: int
    skew: tuple
    d: tuple
    frozen: frozenset = frozenset()
    name: str = ""
    # number of trailing indices that are the X-part of a principal extension
    principal: int = 0

    def __post_init__(self):
        n = self.rank
        skew = tuple(tuple(Fraction(x) for x in row) for row in self.skew)
        object.__setattr__(self, "skew", skew)
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        object.__setattr__(self, "frozen", frozenset(int(i) for i in self.frozen))
        if n < 1:
            raise InvalidData("rank must be positive")
        if len(skew) != n or any(len(r) != n for r in skew):
            raise InvalidData("skew form must be %dx%d" % (n, n))
        if len(self.d) != n or any(x < 1 for x in self.d):
            raise InvalidData("multipliers d must be %d positive integers" % n)
        if any(i < 0 or i >= n for i in self.frozen):
            raise InvalidData("frozen index out of range")
        for i in range(n):
            for j in range(n):
                if skew[i][j] != -skew[j][i]:
                    raise InvalidData("form is not skew-symmetric at (%d,%d)" % (i, j))
        if reduce(gcd, self.d) != 1:
            raise InvalidData("gcd of multipliers must be 1")
        uf = self.unfrozen
        for i in range(n):
            for j in range(n):
                if (i in uf or j in uf) and (skew[i][j] * self.d[j]).denominator != 1:
                    raise InvalidData("exchange entry eps[%d][%d] is not integral" % (i, j))
        for i in uf:
            if not any(skew[i]):
                raise InvalidData("unfrozen row %d of the form is zero" % i)

    @property
    def unfrozen(self):
        return tuple(i for i in range(self.rank) if i not in self.frozen)

    @property
    def eps0(self):
        """Exchange matrix of the initial seed (Fractions)."""
        return [[self.skew[i][j] * self.d[j] for j in range(self.rank)] for i in range(self.rank)]

    def form(self, a, b):
        """{a, b} for a, b in N (global coordinates)."""
        s = Fraction(0)
        for i, x in enumerate(a):
            if x:
                row = self.skew[i]
                for j, y in enumerate(b):
                    if y:
                        s += x * row[j] * y
        return s

    def pairing(self, n, m):
        """<n, m> for n in N and m in M° (f-coordinates)."""
        s = Fraction(0)
        for x, y, dd in zip(n, m, self.d):
            if x and y:
                s += Fraction(x * y, dd)
        return s

    def covector(self, n):
        """The covector in f-coordinates representing <n, .>."""
        return [Fraction(x, dd) for x, dd in zip(n, self.d)]

    def pstar(self, n):
        """p1*(n) in f-coordinates; integral for n supported on unfrozen indices."""
        out = [Fraction(0)] * self.rank
        for i, x in enumerate(n):
            if x:
                row = self.skew[i]
                for j in range(self.rank):
                    if row[j]:
                        out[j] += x * row[j] * self.d[j]
        return out

    def n0_prime_factor(self, n):
        """Smallest t > 0 with t*n in N°."""
        t = 1
        for x, dd in zip(n, self.d):
            if x:
                x = int(x)
                t = _lcm(t, dd // gcd(abs(x), dd))
        return t

    def variable_name(self, i):
        base = self.rank - self.principal
        if i < base:
            return "A%d" % (i + 1)
        return "X%d" % (i - base + 1)


def load_fixed_data(doc):
    """Build FixedData from a seed document (a dict)."""
    for key in ("rank", "skew", "d"):
        if key not in doc:
            raise InvalidData("seed document lacks field %r" % key)
    skew = [[parse_rational(x) for x in row] for row in doc["skew"]]
    return FixedData(
        rank=int(doc["rank"]),
        skew=skew,
        d=doc["d"],
        frozen=frozenset(doc.get("frozen", [])),
        name=doc.get("name", ""),
        principal=int(doc.get("principal", 0)),
    )


def dump_fixed_data(gamma):
    doc = {
        "rank": gamma.rank,
        "skew": [[format_rational(x) for x in row] for row in gamma.skew],
        "d": list(gamma.d),
        "frozen": sorted(gamma.frozen),
        "name": gamma.name,
    }
    if gamma.principal:
        doc["principal"] = gamma.principal
    return doc


@dataclass(frozen=True)
class Seed:
    basis: tuple
    path: tuple = field(default=(), compare=False)

    def __post_init__(self):
        basis = tuple(la.as_int_tuple(r) for r in self.basis)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "path", tuple(self.path))
        if abs(la.det(basis)) != 1:
            raise InvalidData("seed basis must be unimodular")

    @classmethod
    def identity(cls, n):
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def rank(self):
        return len(self.basis)

    def to_global(self, coeffs):
        """Global N-coordinates of sum coeffs[i] * e_i (seed basis)."""
        return la.vecmat(coeffs, self.basis)

    def from_global(self, n):
        """Seed coordinates of a global N-vector."""
        return la.vecmat(n, la.inverse(self.basis))


def exchange_matrix(s, gamma):
    """eps_ij = {e_i, e_j} d_j for the basis of s."""
    n = gamma.rank
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            x = gamma.form(s.basis[i], s.basis[j]) * gamma.d[j]
            row.append(int(x) if x.denominator == 1 else x)
        out.append(row)
    return out


def mutate_seed(s, k, gamma):
    if k in gamma.frozen or not 0 <= k < gamma.rank:
        raise InvalidData("cannot mutate at frozen or invalid index %r" % (k,))
    eps = exchange_matrix(s, gamma)
    ek = s.basis[k]
    rows = []
    for i, row in enumerate(s.basis):
        if i == k:
            rows.append(tuple(-x for x in row))
        else:
            c = max(eps[i][k], 0)
            rows.append(tuple(x + c * y for x, y in zip(row, ek)))
    return Seed(tuple(rows), s.path + (k,))


def seed_from_path(gamma, path, s0=None):
    s = s0 if s0 is not None else Seed.identity(gamma.rank)
    for k in path:
        s = mutate_seed(s, k, gamma)
    return s


def v_vectors(s, gamma):
    """v_i = p1*(e_i) for the seed basis, in global f-coordinates."""
    return [la.as_int_tuple(gamma.pstar(e)) if i not in gamma.frozen else tuple(gamma.pstar(e))
            for i, e in enumerate(s.basis)]


def f_basis(s, gamma):
    """The basis f_i = e_i^*/d_i of the seed, in global f-coordinates."""
    inv_t = la.transpose(la.inverse(s.basis))
    n = gamma.rank
    return [la.as_int_tuple(Fraction(gamma.d[j], gamma.d[i]) * inv_t[i][j] for j in range(n))
            for i in range(n)]


def check_injectivity(gamma, s=None):
    s = s if s is not None else Seed.identity(gamma.rank)
    rows = [gamma.pstar(s.basis[i]) for i in gamma.unfrozen]
    return la.rank(rows) == len(rows)


def principal_extension(gamma, s=None):
    """Principal-coefficient data of rank 2n built on the seed s.

    The result is expressed in coordinates where s is the identity seed and
    the extra basis vectors are (0, f_i).
    """
    n = gamma.rank
    s = s if s is not None else Seed.identity(n)
    lam = [[gamma.form(s.basis[i], s.basis[j]) for j in range(n)] for i in range(n)]
    big = [[Fraction(0)] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            big[i][j] = lam[i][j]
        big[i][n + i] = Fraction(1, gamma.d[i])
        big[n + i][i] = -Fraction(1, gamma.d[i])
    frozen = set(gamma.frozen) | set(range(n, 2 * n))
    name = (gamma.name + " principal") if gamma.name else "principal"
    prin = FixedData(2 * n, big, tuple(gamma.d) * 2, frozenset(frozen), name, principal=n)
    return prin, Seed.identity(2 * n)


def langlands_dual(gamma, s=None):
    """Dual data: d_i -> D/d_i and the form scaled by 1/D on N°.

    The dual lattice is N° with basis d_i e_i; the returned data and seed
    are written in that basis.
    """
    n = gamma.rank
    s = s if s is not None else Seed.identity(n)
    big_d = reduce(_lcm, gamma.d)
    skew = [[gamma.skew[i][j] * gamma.d[i] * gamma.d[j] / big_d for j in range(n)] for i in range(n)]
    dual = FixedData(n, skew, tuple(big_d // x for x in gamma.d), gamma.frozen,
                     (gamma.name + " dual") if gamma.name else "dual", gamma.principal)
    basis = [la.as_int_tuple(Fraction(gamma.d[i] * s.basis[i][j], gamma.d[j]) for j in range(n))
             for i in range(n)]
    return dual, Seed(tuple(basis), s.path)


def _ek_data(k, s, gamma):
    ek = s.basis[k]
    cov = [Fraction(gamma.d[k] * x, dd) for x, dd in zip(ek, gamma.d)]
    vk = gamma.pstar(ek)
    return cov, vk


def tropical_mutation(k, x, s, gamma):
    """T_k(x) = x + v_k <d_k e_k, x> on the half-space <e_k, x> >= 0."""
    cov, vk = _ek_data(k, s, gamma)
    t = la.dot(cov, x)
    x = [Fraction(y) for y in x]
    if t <= 0:
        return x
    return [a + t * b for a, b in zip(x, vk)]


def tropical_mutation_inverse(k, x, s, gamma):
    cov, vk = _ek_data(k, s, gamma)
    t = la.dot(cov, x)
    x = [Fraction(y) for y in x]
    if t <= 0:
        return x
    return [a - t * b for a, b in zip(x, vk)]


def tropical_branch(k, s, gamma, side):
    """Matrix (acting on column vectors) of the linear branch of T_k on H_{k,side}."""
    n = gamma.rank
    mat = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    if side > 0:
        cov, vk = _ek_data(k, s, gamma)
        for i in range(n):
            for j in range(n):
                mat[i][j] += vk[i] * cov[j]
    return mat


def c_vectors(gamma, s0, path):
    """Rows of the right block of the extended exchange matrix after `path`."""
    prin, t = principal_extension(gamma, s0)
    n = gamma.rank
    for k in path:
        if k in gamma.frozen or not 0 <= k < n:
            raise InvalidData("invalid mutation index %r" % (k,))
        t = mutate_seed(t, k, prin)
    eps = exchange_matrix(t, prin)
    return [tuple(eps[i][n:]) for i in range(n)]


def extended_exchange_matrix(gamma, s0, path):
    prin, t = principal_extension(gamma, s0)
    n = gamma.rank
    for k in path:
        t = mutate_seed(t, k, prin)
    eps = exchange_matrix(t, prin)
    return [list(eps[i]) for i in range(n)]
