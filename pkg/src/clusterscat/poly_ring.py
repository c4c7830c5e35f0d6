"""Exact Laurent polynomials and truncated series, with wall-crossing automorphisms.

Two kinds of polynomial objects live here.

``Laurent``
    a finite map from exponent vectors (global f-coordinates) to Fractions.

``Series``
    a truncated power series in y_i = z^{v_i}, where v_i = p1*(e_i) for the
    basis of a fixed seed.  Exponents are seed coordinates of points of N+,
    so the degree of a term is just the sum of its exponent.  Under the
    injectivity assumption this is a faithful picture of the completed ring
    near a given monomial, and truncation is a matter of dropping terms.

A ``Grading`` ties the two together: it knows the seed, and converts a
series exponent n into p1*(n).
"""

from fractions import Fraction
from math import factorial

from . import _linalg as la
from .lattice_seed import format_rational


# -- univariate helpers (coefficient lists, index = power of t) -----------

def umul(a, b, k):
    out = [Fraction(0)] * (k + 1)
    for i, x in enumerate(a[: k + 1]):
        if not x:
            continue
        for j, y in enumerate(b[: k + 1 - i]):
            if y:
                out[i + j] += x * y
    return out


def ulog(a, k):
    """log of a series with constant term 1."""
    if a[0] != 1:
        raise ValueError("log needs constant term 1")
    g = [Fraction(0)] + [Fraction(x) for x in a[1: k + 1]]
    g += [Fraction(0)] * (k + 1 - len(g))
    out = [Fraction(0)] * (k + 1)
    power = [Fraction(1)] + [Fraction(0)] * k
    for r in range(1, k + 1):
        power = umul(power, g, k)
        if not any(power):
            break
        sgn = 1 if r % 2 else -1
        for i, x in enumerate(power):
            if x:
                out[i] += sgn * x / r
    return out


def uexp(g, k):
    """exp of a series with zero constant term."""
    if g and g[0] != 0:
        raise ValueError("exp needs zero constant term")
    g = [Fraction(x) for x in g[: k + 1]] + [Fraction(0)] * max(0, k + 1 - len(g))
    out = [Fraction(1)] + [Fraction(0)] * k
    power = [Fraction(1)] + [Fraction(0)] * k
    for r in range(1, k + 1):
        power = umul(power, g, k)
        if not any(power):
            break
        f = Fraction(1, factorial(r))
        for i, x in enumerate(power):
            if x:
                out[i] += f * x
    return out


def upow(a, e, k):
    """a^e for a with constant term 1 and rational e."""
    e = Fraction(e)
    if e == 0:
        return [Fraction(1)] + [Fraction(0)] * k
    if e.denominator == 1 and e > 0 and e <= 8:
        out = [Fraction(1)] + [Fraction(0)] * k
        for _ in range(int(e)):
            out = umul(out, a, k)
        return out
    lg = ulog(a, k)
    return uexp([e * x for x in lg], k)


# -- grading ---------------------------------------------------------------

class Grading:
    """Degree bookkeeping for one seed of some fixed data."""

    def __init__(self, gamma, seed):
        self.gamma = gamma
        self.seed = seed
        self.rank = gamma.rank
        self.unfrozen = gamma.unfrozen
        self.basis = seed.basis
        self.v = [tuple(gamma.pstar(e)) for e in seed.basis]

    def key(self):
        return (self.gamma, self.seed.basis)

    def n_global(self, n):
        return la.vecmat(n, self.basis)

    def pstar(self, n):
        out = [Fraction(0)] * self.rank
        for i, x in enumerate(n):
            if x:
                for j, y in enumerate(self.v[i]):
                    if y:
                        out[j] += x * y
        return out

    def degree(self, n):
        return sum(n[i] for i in self.unfrozen)

    def covector(self, n):
        """Covector (f-coordinates) of the pairing with the seed vector n."""
        return self.gamma.covector(self.n_global(n))

    def n0_prime_factor(self, n):
        return self.gamma.n0_prime_factor(self.n_global(n))

    def unit(self, i):
        return tuple(int(i == j) for j in range(self.rank))

    def seed_coords(self, n_glob):
        return la.vecmat(n_glob, la.inverse(self.basis))


# -- truncated multivariate series -------------------------------------------

def _deg(e):
    return sum(e)


class Series:
    """Truncated series sum c_n y^n; terms of degree > order are dropped."""

    __slots__ = ("terms", "order")

    def __init__(self, terms=None, order=0):
        self.order = order
        t = {}
        if terms:
            for e, c in terms.items():
                if c and _deg(e) <= order:
                    t[tuple(e)] = Fraction(c)
        self.terms = t

    @classmethod
    def one(cls, rank, order):
        return cls({(0,) * rank: 1}, order)

    def copy(self):
        s = Series(None, self.order)
        s.terms = dict(self.terms)
        return s

    def __eq__(self, other):
        return isinstance(other, Series) and self.terms == other.terms

    def __repr__(self):
        return "Series(%r, order=%d)" % (self.terms, self.order)

    def truncate(self, k):
        s = Series(None, k)
        s.terms = {e: c for e, c in self.terms.items() if _deg(e) <= k}
        return s

    def __add__(self, other):
        k = min(self.order, other.order)
        t = {e: c for e, c in self.terms.items() if _deg(e) <= k}
        for e, c in other.terms.items():
            if _deg(e) <= k:
                v = t.get(e, 0) + c
                if v:
                    t[e] = v
                else:
                    t.pop(e, None)
        s = Series(None, k)
        s.terms = t
        return s

    def __neg__(self):
        s = Series(None, self.order)
        s.terms = {e: -c for e, c in self.terms.items()}
        return s

    def __sub__(self, other):
        return self + (-other)

    def scale(self, a):
        a = Fraction(a)
        s = Series(None, self.order)
        if a:
            s.terms = {e: a * c for e, c in self.terms.items()}
        return s

    def __mul__(self, other):
        if not isinstance(other, Series):
            return self.scale(other)
        k = min(self.order, other.order)
        t = {}
        b = [(e, _deg(e), c) for e, c in other.terms.items()]
        for e1, c1 in self.terms.items():
            d1 = _deg(e1)
            if d1 > k:
                continue
            for e2, d2, c2 in b:
                if d1 + d2 > k:
                    continue
                e = tuple(x + y for x, y in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        s = Series(None, k)
        s.terms = {e: c for e, c in t.items() if c}
        return s

    def constant(self):
        for e, c in self.terms.items():
            if not any(e):
                return c
        return Fraction(0)

    def min_degree(self):
        return min((_deg(e) for e in self.terms), default=None)

    def homogeneous(self, k):
        return {e: c for e, c in self.terms.items() if _deg(e) == k}

    def is_one(self, k=None):
        k = self.order if k is None else k
        for e, c in self.terms.items():
            if _deg(e) <= k and (any(e) or c != 1):
                return False
        return True if self.constant() == 1 else False

    def rank(self, rank=None):
        """Number of variables, read off a term unless given."""
        if rank is not None:
            return rank
        if not self.terms:
            raise ValueError("the rank of an empty series is unknown; pass it explicitly")
        return len(next(iter(self.terms)))

    def exp(self, rank=None):
        if self.constant():
            raise ValueError("exp needs zero constant term")
        rank = self.rank(rank)
        out = Series.one(rank, self.order)
        if not self.terms:
            return out
        power = Series.one(rank, self.order)
        for r in range(1, self.order + 1):
            power = power * self
            if not power.terms:
                break
            out = out + power.scale(Fraction(1, factorial(r)))
        return out

    def log(self):
        if self.constant() != 1:
            raise ValueError("log needs constant term 1")
        rank = self.rank()
        g = self - Series.one(rank, self.order)
        out = Series(None, self.order)
        power = Series.one(rank, self.order)
        for r in range(1, self.order + 1):
            power = power * g
            if not power.terms:
                break
            out = out + power.scale(Fraction(1 if r % 2 else -1, r))
        return out

    def inverse(self):
        c = self.constant()
        if not c:
            raise ValueError("series is not invertible")
        rank = self.rank()
        g = Series.one(rank, self.order) - self.scale(1 / c)
        out = Series.one(rank, self.order)
        power = Series.one(rank, self.order)
        for _ in range(self.order):
            power = power * g
            if not power.terms:
                break
            out = out + power
        return out.scale(1 / c)

    def __pow__(self, e):
        e = int(e)
        if e == 0:
            return Series.one(self.rank(), self.order)
        base = self if e > 0 else self.inverse()
        out = Series.one(self.rank(), self.order)
        for _ in range(abs(e)):
            out = out * base
        return out


# -- Laurent polynomials ---------------------------------------------------

class Laurent:
    """Finite sum of c z^m with exact rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for e, c in terms.items():
                c = Fraction(c)
                if c:
                    e = la.as_int_tuple(e)
                    self.terms[e] = self.terms.get(e, 0) + c
            self.terms = {e: c for e, c in self.terms.items() if c}

    @classmethod
    def monomial(cls, m, c=1):
        return cls({tuple(m): c})

    def __eq__(self, other):
        return isinstance(other, Laurent) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return "Laurent(%r)" % (self.terms,)

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e, 0) + c
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        out = Laurent()
        out.terms = t
        return out

    def __neg__(self):
        out = Laurent()
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Laurent):
            other = Fraction(other)
            out = Laurent()
            if other:
                out.terms = {e: c * other for e, c in self.terms.items()}
            return out
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        out = Laurent()
        out.terms = {e: c for e, c in t.items() if c}
        return out

    __rmul__ = __mul__

    def __pow__(self, e):
        e = int(e)
        if e < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials have Laurent inverses")
            (m, c), = self.terms.items()
            return Laurent({tuple(-x for x in m): 1 / c}) ** (-e)
        rank = len(next(iter(self.terms))) if self.terms else 0
        out = Laurent({(0,) * rank: 1})
        for _ in range(e):
            out = out * self
        return out

    def is_monomial(self):
        return len(self.terms) == 1

    def exact_div(self, other):
        """self / other, assuming the quotient is a Laurent polynomial."""
        if not other.terms:
            raise ZeroDivisionError("division by zero polynomial")
        if other.is_monomial():
            return self * (other ** -1)
        if not self.terms:
            return Laurent()
        quot = Laurent()
        rem = Laurent(dict(self.terms))
        lead = max(other.terms)
        lc = other.terms[lead]
        # lex order is a group order, so an exact quotient has its terms
        # between min(self) - min(other) and max(self) - max(other)
        floor = tuple(a - b for a, b in zip(min(self.terms), min(other.terms)))
        while rem.terms:
            top = max(rem.terms)
            e = tuple(a - b for a, b in zip(top, lead))
            if e < floor:
                raise ValueError("division is not exact")
            q = Laurent({e: rem.terms[top] / lc})
            quot = quot + q
            rem = rem - q * other
        return quot

    def coefficients(self):
        return list(self.terms.values())

    def render(self, names):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms):
            c = self.terms[e]
            mono = "*".join(
                (names[i] if x == 1 else "%s^%d" % (names[i], x)) for i, x in enumerate(e) if x)
            if not mono:
                parts.append(format_rational(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(format_rational(c) + "*" + mono)
        return " + ".join(parts)


class TruncatedLaurent:
    """z^base times a Series in the y-variables of a grading.

    Terms are z^(base + p1*(n)) with coefficient c_n.
    """

    __slots__ = ("grading", "base", "series")

    def __init__(self, grading, base, series):
        self.grading = grading
        self.base = tuple(Fraction(x) for x in base)
        self.series = series

    @property
    def order(self):
        return self.series.order

    def to_laurent(self):
        t = {}
        for n, c in self.series.terms.items():
            m = tuple(a + b for a, b in zip(self.base, self.grading.pstar(n)))
            t[m] = t.get(m, 0) + c
        return Laurent(t)

    def __eq__(self, other):
        return self.to_laurent() == other.to_laurent()

    def __repr__(self):
        return "TruncatedLaurent(base=%r, %r)" % (self.base, self.series)


# -- wall functions -----------------------------------------------------------

class WallFunction:
    """f = 1 + sum_l c_l t^l with t = z^{p1*(n0)}, stored up to an order."""

    __slots__ = ("n0", "coeffs")

    def __init__(self, n0, coeffs):
        self.n0 = tuple(int(x) for x in n0)
        if any(x < 0 for x in self.n0) or not any(self.n0):
            raise ValueError("wall direction must lie in N+")
        self.coeffs = tuple(Fraction(c) for c in coeffs)

    def __eq__(self, other):
        return (isinstance(other, WallFunction) and self.n0 == other.n0
                and _strip(self.coeffs) == _strip(other.coeffs))

    def __hash__(self):
        return hash((self.n0, _strip(self.coeffs)))

    def __repr__(self):
        return "WallFunction(%r, %r)" % (self.n0, [format_rational(c) for c in self.coeffs])

    @property
    def step(self):
        return sum(self.n0)

    def ulist(self, k):
        """Coefficient list in t truncated to t-degree k."""
        out = [Fraction(1)] + list(self.coeffs[:k])
        return out + [Fraction(0)] * (k + 1 - len(out))

    def t_order(self, order):
        return order // self.step

    def truncated(self, order):
        k = self.t_order(order)
        return WallFunction(self.n0, _strip(self.coeffs[:k]))

    def is_trivial(self, order):
        return not any(self.coeffs[: self.t_order(order)])

    def times(self, other, order):
        assert self.n0 == other.n0
        k = self.t_order(order)
        prod = umul(self.ulist(k), other.ulist(k), k)
        return WallFunction(self.n0, _strip(prod[1:]))

    def power(self, e, order):
        k = self.t_order(order)
        return WallFunction(self.n0, _strip(upow(self.ulist(k), e, k)[1:]))

    def to_series(self, rank, order):
        k = self.t_order(order)
        t = {(0,) * rank: Fraction(1)}
        for l, c in enumerate(self.coeffs[:k], start=1):
            if c:
                t[tuple(l * x for x in self.n0)] = c
        return Series(t, order)

    def to_laurent(self, grading, order):
        return TruncatedLaurent(grading, [0] * grading.rank, self.to_series(grading.rank, order)).to_laurent()

    @classmethod
    def from_log(cls, n0, logs, order):
        """exp(sum_l a_l t^l) given a_1, a_2, ..."""
        step = sum(n0)
        k = order // step
        g = [Fraction(0)] + [Fraction(x) for x in logs[:k]]
        return cls(n0, _strip(uexp(g, k)[1:]))


def _strip(cs):
    cs = list(cs)
    while cs and not cs[-1]:
        cs.pop()
    return tuple(cs)


def factor_binomial_powers(f, order):
    """Exponents c_l with f = prod (1 + t^l)^{c_l} up to the given order."""
    k = f.t_order(order)
    lg = ulog(f.ulist(k), k)
    c = [Fraction(0)] * (k + 1)
    for j in range(1, k + 1):
        rest = lg[j]
        for l in range(1, j):
            if j % l == 0 and c[l]:
                r = j // l
                rest -= c[l] * Fraction(1 if r % 2 else -1, r)
        c[j] = rest
    return [(l, c[l]) for l in range(1, k + 1) if c[l]]


def tropicalize(g, x, geometric=False):
    """min over exponents of <m, -x> (or <m, x> with geometric=True)."""
    if not g.terms:
        raise ValueError("cannot tropicalize the zero polynomial")
    if any(c <= 0 for c in g.terms.values()):
        raise ValueError("tropicalization needs positive coefficients")
    sgn = 1 if geometric else -1
    return min(sgn * la.dot(m, x) for m in g.terms)


# -- automorphisms --------------------------------------------------------------

def crossing_data(grading, n0):
    """(covector of <n0',.>, integer list w_i = <n0', v_i>)."""
    t = grading.n0_prime_factor(n0)
    cov = [t * x for x in grading.covector(n0)]
    w = [la.dot(cov, v) for v in grading.v]
    return cov, w


def apply_crossing(elem_base, series, f, sign, grading, cache=None):
    """Apply theta_f^sign to z^base * series; returns the new series.

    The base exponent is unchanged.  Each term y^n picks up the factor
    f^(sign * <n0', base + p1*(n)>).
    """
    order = series.order
    cov, w = crossing_data(grading, f.n0) if cache is None else cache
    p0 = la.dot(cov, elem_base)
    if p0.denominator != 1:
        raise ValueError("exponent pairing is not integral")
    p0 = int(p0)
    w = [int(x) for x in w]
    n0 = f.n0
    step = f.step
    powers = {}
    out = {}
    for n, c in series.terms.items():
        e = sign * (p0 + sum(a * b for a, b in zip(n, w) if a))
        if e == 0:
            out[n] = out.get(n, 0) + c
            continue
        room = (order - sum(n)) // step
        key = (e, room)
        fp = powers.get(key)
        if fp is None:
            fp = upow(f.ulist(room), e, room)
            powers[key] = fp
        for l, a in enumerate(fp):
            if a:
                m = tuple(x + l * y for x, y in zip(n, n0)) if l else n
                out[m] = out.get(m, 0) + c * a
    s = Series(None, order)
    s.terms = {e: c for e, c in out.items() if c}
    return s


def wall_crossing(f, m, sign, order, grading):
    """theta_f^sign(z^m) as a TruncatedLaurent."""
    one = Series.one(grading.rank, order)
    return TruncatedLaurent(grading, m, apply_crossing(m, one, f, sign, grading))


class RingAutomorphism:
    """An element of the wall-crossing group, stored by its generator images.

    images[j] is the unit u_j with theta(z^{f_j}) = u_j z^{f_j}, where f_j is
    the global f-basis.
    """

    def __init__(self, grading, images, order):
        self.grading = grading
        self.images = [s.truncate(order) for s in images]
        self.order = order

    @classmethod
    def identity(cls, grading, order):
        return cls(grading, [Series.one(grading.rank, order) for _ in range(grading.rank)], order)

    @classmethod
    def crossing(cls, grading, f, sign, order):
        return cls.identity(grading, order).then_cross(f, sign)

    def then_cross(self, f, sign):
        """theta_f^sign composed after self."""
        cache = crossing_data(self.grading, f.n0)
        ims = []
        for j, u in enumerate(self.images):
            base = [int(i == j) for i in range(self.grading.rank)]
            ims.append(apply_crossing(base, u, f, sign, self.grading, cache))
        out = RingAutomorphism.__new__(RingAutomorphism)
        out.grading, out.images, out.order = self.grading, ims, self.order
        return out

    def is_identity(self, k=None):
        return all(u.is_one(k) for u in self.images)

    def __eq__(self, other):
        k = min(self.order, other.order)
        return all(a.truncate(k) == b.truncate(k) for a, b in zip(self.images, other.images))

    def _y_images(self):
        """Units Y_i with theta(y_i) = Y_i y_i."""
        g = self.grading
        out = []
        invs = {}
        for i in range(g.rank):
            if i not in g.unfrozen:
                out.append(None)
                continue
            acc = Series.one(g.rank, self.order)
            for j, x in enumerate(g.v[i]):
                x = int(x)
                if x > 0:
                    acc = acc * (self.images[j] ** x)
                elif x < 0:
                    if j not in invs:
                        invs[j] = self.images[j].inverse()
                    acc = acc * (invs[j] ** (-x))
            out.append(acc)
        return out

    def act_series(self, s):
        """Apply to a series in the y-variables."""
        ys = self._y_images()
        out = Series(None, s.order)
        for n, c in s.terms.items():
            term = Series({n: c}, s.order)
            for i, a in enumerate(n):
                if a:
                    term = term * (ys[i] ** a)
            out = out + term
        return out

    def act(self, elem):
        """Apply to a TruncatedLaurent."""
        g = self.grading
        base = elem.base
        factor = Series.one(g.rank, elem.order)
        for j, x in enumerate(base):
            if x:
                factor = factor * (self.images[j] ** int(x))
        return TruncatedLaurent(g, base, factor * self.act_series(elem.series))

    def inverse(self):
        """Inverse by fixed-point iteration on images."""
        inv = RingAutomorphism(self.grading, [u.inverse() for u in self.images], self.order)
        for _ in range(self.order + 1):
            # inv(z^f_j) must satisfy self(inv(z^f_j)) = z^f_j
            nxt = []
            for j in range(self.grading.rank):
                # self(u z^f) = self(u) * images[j] z^f, so u = inv-applied fix point
                corr = self.images[j].inverse()
                nxt.append(inv.act_series(corr))
            cand = RingAutomorphism(self.grading, nxt, self.order)
            if cand == inv:
                break
            inv = cand
        return inv


def compose(a, b, order=None):
    """(a o b): first b, then a."""
    k = min(a.order, b.order) if order is None else order
    ims = []
    for j in range(a.grading.rank):
        ims.append((a.images[j] * a.act_series(b.images[j].truncate(k))).truncate(k))
    return RingAutomorphism(a.grading, ims, k)


def log_leading(theta, order):
    """Degree-`order` components c_n of log(theta), given theta = id below it."""
    g = theta.grading
    k = order - 1
    found = {}
    for j, u in enumerate(theta.images):
        for e, c in u.terms.items():
            dg = sum(e)
            if dg == 0:
                if c != 1:
                    raise ValueError("automorphism is not unipotent")
            elif dg <= k:
                raise ValueError("automorphism is not the identity to order %d" % k)
            elif dg == order:
                found.setdefault(e, {})[j] = c
    out = []
    for n, per in sorted(found.items()):
        cov = g.covector(n)
        cn = None
        for j, c in per.items():
            if cov[j] == 0:
                raise ValueError("image not in the span of a log derivation")
            val = c / cov[j]
            if cn is None:
                cn = val
            elif cn != val:
                raise ValueError("inconsistent log derivation at %r" % (n,))
        for j in range(g.rank):
            if cov[j] and j not in per:
                raise ValueError("inconsistent log derivation at %r" % (n,))
        if cn:
            out.append((n, cn))
    return out


def exp_derivation(grading, comps, order):
    """Automorphism exp(sum c_n y^n d_n) for homogeneous components (to that degree)."""
    ims = []
    for j in range(grading.rank):
        t = {(0,) * grading.rank: Fraction(1)}
        for n, c in comps:
            v = c * grading.covector(n)[j]
            if v:
                t[tuple(n)] = t.get(tuple(n), 0) + v
        ims.append(Series(t, order))
    return RingAutomorphism(grading, ims, order)
