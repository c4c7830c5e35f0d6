"""Broken lines and the theta functions they sum to, with structure constants.

Exponents of monomials are global f-coordinates of M°.  Every monomial met
on a broken line for the diagram D of a seed has the form z^(m0 + p1*(n))
with n in N+ (seed coordinates), so lines are bookkept by n.

Broken lines are found by tracing backwards from the endpoint Q: for each
candidate final exponent m0 + p1*(n) the last segment is followed from Q in
direction +m, and at every wall hit the trace may bend, removing j*n0 from n.
The trace is accepted once n is used up.
"""

import random
from fractions import Fraction
from math import gcd

from . import _linalg as la
from .cone_geom import DegenerateError, random_rational
from .lattice_seed import (InvalidData, Seed, exchange_matrix, f_basis, mutate_seed,
                           principal_extension, tropical_branch, tropical_mutation,
                           tropical_mutation_inverse)
from .poly_ring import Laurent, Series, TruncatedLaurent, crossing_data, umul, upow
from .scattering import PiecewisePath, mutate_diagram, mutual_validity, path_ordered_product


class StabilizationError(ValueError):
    """Structure constant differs between the two sampling distances."""

    def __init__(self, values):
        ValueError.__init__(self, "structure constant did not stabilize: %r" % (values,))
        self.values = values


class BrokenLine:
    """Segments are (start, exponent, coefficient); start is None on the first one."""

    __slots__ = ("segments", "endpoint", "m0", "n")

    def __init__(self, segments, endpoint, m0, n):
        self.segments = segments
        self.endpoint = tuple(endpoint)
        self.m0 = tuple(m0)
        self.n = tuple(n)

    @property
    def exponent(self):
        return self.segments[-1][1]

    @property
    def coefficient(self):
        return self.segments[-1][2]

    @property
    def bends(self):
        return len(self.segments) - 1

    def degree(self, unfrozen):
        return sum(self.n[i] for i in unfrozen)

    def __repr__(self):
        return "BrokenLine(%r, c=%s, bends=%d)" % (self.exponent, self.coefficient, self.bends)


class ThetaExpansion:
    __slots__ = ("basepoint", "chamber", "m0", "series", "order", "lines")

    def __init__(self, basepoint, chamber, m0, series, order, lines=None):
        self.basepoint = tuple(basepoint)
        self.chamber = chamber
        self.m0 = tuple(m0)
        self.series = series
        self.order = order
        self.lines = lines

    def to_laurent(self):
        return self.series.to_laurent()

    def __repr__(self):
        return "ThetaExpansion(m0=%r, %r)" % (self.m0, self.to_laurent())


def _vec(x):
    return tuple(Fraction(a) for a in x)


def _add(a, b, s=1):
    return tuple(x + s * y for x, y in zip(a, b))


def points_of_degree_at_most(grading, k):
    """All n in N+ (frozen coordinates zero) of degree <= k."""
    uf = list(grading.unfrozen)
    rank = grading.rank
    out = []

    def rec(i, left, cur):
        if i == len(uf):
            n = [0] * rank
            for j, x in zip(uf, cur):
                n[j] = x
            out.append(tuple(n))
            return
        for x in range(left + 1):
            rec(i + 1, left - x, cur + [x])
    rec(0, k, [])
    out.sort(key=lambda n: (sum(n), n))
    return out


def chamber_tag(grading, q):
    """'+' or '-' when q lies inside the positive or negative chamber of the seed."""
    vals = [la.dot(grading.covector(grading.unit(i)), q) for i in grading.unfrozen]
    if all(v > 0 for v in vals):
        return "+"
    if all(v < 0 for v in vals):
        return "-"
    return None


def _idot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _homogeneous(x):
    """(integer vector X, positive integer D) with x = X / D."""
    den = 1
    for v in x:
        den = den * v.denominator // gcd(den, v.denominator)
    return tuple(int(v * den) for v in x), den


def _reduce(vec, den):
    g = den
    for v in vec:
        g = gcd(g, v)
        if g == 1:
            return vec, den
    return tuple(v // g for v in vec), den // g


class _Tracer:
    """Backward tracing with points kept as integer vectors over a common denominator."""

    def __init__(self, diagram, m0, order):
        self.d = diagram
        self.g = diagram.grading
        self.m0 = _vec(m0)
        self.order = order
        self.walls = diagram.live_walls(order)
        self.cross = {}
        self.data = []
        for w in self.walls:
            if w.n0 not in self.cross:
                self.cross[w.n0] = crossing_data(self.g, w.n0)[0]
            _, implicit = w.support.relative_interior_point()
            imp = set(implicit)
            self.data.append((w, tuple(int(c) for c in w.cov),
                              [tuple(int(c) for c in e) for e in w.support.eqs],
                              [(tuple(int(c) for c in a), a in imp) for a in w.support.ineqs]))
        self._exp = {}

    def exponent(self, n):
        e = self._exp.get(n)
        if e is None:
            e = _add(self.m0, self.g.pstar(n))
            self._exp[n] = e
        return e

    def _int_exponent(self, n):
        e = self.exponent(n)
        if any(v.denominator != 1 for v in e):
            raise ValueError("exponent is not a lattice point")
        return tuple(int(v) for v in e)

    def hits(self, x, m):
        """Wall groups met by the ray x + s m (s > 0), nearest first.

        x = (X, D) homogeneous, m an integer vector.  Returns
        [(s, point, walls)] with point homogeneous.
        """
        X, D = x
        found = {}
        for w, cov, eqs, ineqs in self.data:
            a = _idot(cov, m)
            b = _idot(cov, X)
            if a == 0:
                if b == 0 and self._inside(X, eqs, ineqs):
                    raise DegenerateError("segment runs inside a wall")
                continue
            # s = -b / (a D) > 0
            if (b > 0) == (a > 0) or b == 0:
                continue
            P = tuple(a * xi - b * mi for xi, mi in zip(X, m))
            den = a * D
            if den < 0:
                P, den = tuple(-v for v in P), -den
            res = self._inside(P, eqs, ineqs, True)
            if not res:
                continue
            if res == 2:
                raise DegenerateError("segment meets the boundary of a wall")
            s = Fraction(-b, a * D)
            found.setdefault(s, (P, den, []))[2].append(w)
        out = []
        for s in sorted(found):
            P, den, ws = found[s]
            if len({w.n0 for w in ws}) > 1:
                raise DegenerateError("segment passes through a joint")
            out.append((s, _reduce(P, den), ws))
        return out

    @staticmethod
    def _inside(P, eqs, ineqs, boundary=False):
        """0 outside, 1 inside, 2 on the relative boundary (when asked)."""
        for e in eqs:
            if _idot(e, P):
                return 0
        edge = False
        for a, implicit in ineqs:
            v = _idot(a, P)
            if v < 0:
                return 0
            if v == 0 and not implicit:
                edge = True
        return 2 if (boundary and edge) else 1

    def trace(self, q, n_total):
        """All broken lines ending at q with final exponent m0 + p1*(n_total)."""
        out = []
        uf = self.g.unfrozen

        def rec(x, n, bends):
            m = self._int_exponent(n)
            if not any(m):
                return
            groups = self.hits(x, m)
            if not any(n[i] for i in uf):
                out.append(self._assemble(q, n_total, bends))
                return
            for s, p, ws in groups:
                n0 = ws[0].n0
                jmax = min(n[i] // n0[i] for i in range(len(n0)) if n0[i])
                if jmax == 0:
                    continue
                f = [Fraction(1)] + [Fraction(0)] * jmax
                for w in ws:
                    f = umul(f, w.fn.ulist(jmax), jmax)
                cov = self.cross[n0]
                for j in range(1, jmax + 1):
                    prev = tuple(a - j * b for a, b in zip(n, n0))
                    e = la.dot(cov, self.exponent(prev))
                    if e.denominator != 1:
                        raise ValueError("exponent pairing is not integral")
                    c = upow(f[:j + 1], abs(int(e)), j)[j]
                    if c:
                        rec(p, prev, bends + [(p, prev, c)])

        rec(_homogeneous(_vec(q)), tuple(n_total), [])
        return out

    def _assemble(self, q, n_total, bends):
        # bends were collected walking backwards from q
        coeff = Fraction(1)
        segs = []
        start = None
        for (P, den), prev, c in reversed(bends):
            segs.append((start, self.exponent(prev), coeff))
            coeff *= c
            start = tuple(Fraction(v, den) for v in P)
        segs.append((start, self.exponent(n_total), coeff))
        return BrokenLine(segs, q, self.m0, n_total)


def broken_lines(diagram, m0, q, order=None, within=None):
    """All broken lines for `diagram` with initial exponent m0, ending at q, up to `order`.

    With `within` set, only lines whose final exponent is m0 + p1*(n) with
    n <= within componentwise are traced.
    """
    k = diagram.order if order is None else order
    if k > diagram.order:
        raise ValueError("order exceeds the diagram's order")
    if not any(m0):
        raise ValueError("broken lines need a nonzero initial exponent")
    tr = _Tracer(diagram, m0, k)
    q = _vec(q)
    for w in tr.walls:
        if w.support.contains(q):
            raise DegenerateError("basepoint lies on a wall")
    lines = []
    for n in points_of_degree_at_most(diagram.grading, k):
        if within is None or all(a <= b for a, b in zip(n, within)):
            lines.extend(tr.trace(q, n))
    return lines


def theta_function(diagram, m0, q, order=None, within=None):
    k = diagram.order if order is None else order
    g = diagram.grading
    m0 = _vec(m0)
    if not any(m0):
        return ThetaExpansion(q, chamber_tag(g, q), m0,
                              TruncatedLaurent(g, m0, Series.one(g.rank, k)), k, [])
    lines = broken_lines(diagram, m0, q, k, within)
    terms = {}
    for ln in lines:
        terms[ln.n] = terms.get(ln.n, 0) + ln.coefficient
    s = Series(None, k)
    s.terms = {n: c for n, c in terms.items() if c}
    return ThetaExpansion(q, chamber_tag(g, q), m0, TruncatedLaurent(g, m0, s), k, lines)


def generic_basepoint(diagram, rng=None, chamber=None, avoid=()):
    """A random point off all walls; inside the given chamber ('+'/'-') if asked."""
    rng = rng if rng is not None else random.Random(11)
    g = diagram.grading
    fb = f_basis(diagram.seed, diagram.gamma)
    covs = [w.cov for w in diagram.walls] + list(avoid)
    for _ in range(200):
        coef = [random_rational(rng) for _ in range(g.rank)]
        if chamber is not None:
            sgn = 1 if chamber == "+" else -1
            for i in g.unfrozen:
                coef[i] = sgn * abs(coef[i]) + sgn * Fraction(1, 1000)
        x = [Fraction(0)] * g.rank
        for c, f in zip(coef, fb):
            x = [a + c * b for a, b in zip(x, f)]
        if all(la.dot(c, x) != 0 for c in covs):
            return tuple(x)
    raise DegenerateError("no generic basepoint found")


def theta_path_invariance(diagram, m0, q1, q2, order=None, rng=None):
    """theta_{q2} equals the path-ordered product from q1 to q2 applied to theta_{q1}."""
    k = diagram.order if order is None else order
    if tuple(q1) == tuple(q2):
        return True
    rng = rng if rng is not None else random.Random(5)
    t1 = theta_function(diagram, m0, q1, k)
    t2 = theta_function(diagram, m0, q2, k)
    theta = None
    paths = [[q1, q2]]
    for _ in range(20):
        mid = generic_basepoint(diagram, rng)
        paths.append([q1, mid, q2])
    for path in paths:
        try:
            theta = path_ordered_product(diagram, PiecewisePath(path), k)
            break
        except (DegenerateError, ValueError):
            continue
    if theta is None:
        raise DegenerateError("no generic path between the basepoints")
    moved = theta.act(t1.series)
    return moved.series.truncate(k) == t2.series.series.truncate(k)


def _solve_pstar(grading, vec):
    """n (seed coordinates, frozen part zero) with p1*(n) = vec, or None."""
    uf = list(grading.unfrozen)
    rows = [list(grading.v[i]) for i in uf]
    # solve sum_i a_i rows[i] = vec via the transposed system
    aug = [[rows[i][j] for i in range(len(uf))] + [Fraction(vec[j])] for j in range(grading.rank)]
    red, piv = la.row_echelon(aug)
    if len(uf) in piv:
        return None
    if len(piv) < len(uf):
        raise ValueError("p1* is not injective on the unfrozen part")
    a = [Fraction(0)] * len(uf)
    for r, c in zip(red, piv):
        a[c] = r[-1]
    if any(x.denominator != 1 for x in a):
        return None
    n = [0] * grading.rank
    for i, x in zip(uf, a):
        n[i] = int(x)
    return tuple(n)


def theta_mutation_invariance(diagram, k, m0, q, order=None):
    """theta in the mutated diagram at T_k(q), T_k(m0) equals T_{k,+-} of theta at q, m0.

    Both sides are compared on exponents whose coefficients are determined
    by the source diagram's order and by the mutated one's.
    """
    order = diagram.order if order is None else order
    gamma, s = diagram.gamma, diagram.seed
    g = diagram.grading
    side = la.dot(gamma.covector(s.basis[k]), q)
    if side == 0:
        raise DegenerateError("basepoint on the mutation hyperplane")
    mat = tropical_branch(k, s, gamma, 1 if side > 0 else -1)

    def tmap(x):
        return tuple(la.dot(r, x) for r in mat)

    target = mutate_diagram(diagram, k)
    g2 = target.grading
    ok = mutual_validity(diagram, target, k)
    # the exponent moves by the piecewise-linear T_k, the ring by q's branch
    tm0 = tuple(tropical_mutation(k, m0, s, gamma))
    left = theta_function(target, tm0, tmap(q), order).to_laurent()
    right = theta_function(diagram, m0, q, order).to_laurent()
    right = Laurent({tmap(e): c for e, c in right.terms.items()})
    inv = la.inverse(mat)

    # outside the positive cones a side is exactly zero, so always comparable
    def comparable(e):
        n2 = _solve_pstar(g2, _add(e, tm0, -1))
        if n2 is not None and min(n2) >= 0 and (not ok(n2) or g2.degree(n2) > order):
            return False
        back = tuple(la.dot(r, e) for r in inv)
        n1 = _solve_pstar(g, _add(back, m0, -1))
        return n1 is None or min(n1) < 0 or g.degree(n1) <= order

    keys = {e for e in list(left.terms) + list(right.terms) if comparable(e)}
    return all(left.terms.get(e, 0) == right.terms.get(e, 0) for e in keys)


# -- structure constants ------------------------------------------------------------

def _hyperplane_distance(diagram, q, w):
    best = None
    for wall in diagram.walls:
        a = la.dot(wall.cov, q)
        if a == 0:
            continue
        b = la.dot(wall.cov, w)
        if b == 0:
            continue
        r = abs(a) / (2 * abs(b))
        best = r if best is None else min(best, r)
    return Fraction(1) if best is None else best


def _coefficient_of_product(t1, t2, q):
    l1, l2 = t1.to_laurent(), t2.to_laurent()
    q = la.as_int_tuple(q)
    out = Fraction(0)
    for e, c in l1.terms.items():
        other = tuple(a - b for a, b in zip(q, e))
        c2 = l2.terms.get(other)
        if c2:
            out += c * c2
    return out


def _alpha_at(diagram, p1, p2, q, z, n):
    if not any(p1):
        return Fraction(int(tuple(p2) == tuple(q)))
    if not any(p2):
        return Fraction(int(tuple(p1) == tuple(q)))
    # only pairs with n1 + n2 = n reach z^q, so n1, n2 <= n
    k = diagram.grading.degree(n)
    t1 = theta_function(diagram, p1, z, k, within=n)
    t2 = theta_function(diagram, p2, z, k, within=n)
    return _coefficient_of_product(t1, t2, q)


def structure_constant(diagram, p1, p2, q, order=None, rng=None):
    """alpha(p1, p2, q): broken-line pairs ending near q with exponents summing to q."""
    k = diagram.order if order is None else order
    g = diagram.grading
    p1, p2, q = _vec(p1), _vec(p2), _vec(q)
    n = _solve_pstar(g, _add(q, _add(p1, p2), -1))
    if n is None or any(x < 0 for x in n):
        return 0
    if g.degree(n) > k:
        raise ValueError("order too small for this triple")
    rng = rng if rng is not None else random.Random(17)
    covs = [w.cov for w in diagram.walls]
    for _ in range(50):
        w = tuple(random_rational(rng) for _ in range(g.rank))
        delta = _hyperplane_distance(diagram, q, w)
        vals = []
        try:
            for d in (delta, delta / 2):
                z = tuple(a + d * b for a, b in zip(q, w))
                if any(la.dot(c, z) == 0 for c in covs):
                    raise DegenerateError("sample point on a wall")
                vals.append(_alpha_at(diagram, p1, p2, q, z, n))
        except DegenerateError:
            continue
        if vals[0] != vals[1]:
            raise StabilizationError(vals)
        a = vals[0]
        if a.denominator != 1 or a < 0:
            raise ValueError("structure constant %s is not a nonnegative integer" % a)
        return int(a)
    raise DegenerateError("no generic sample point near q")


def theta_product(diagram, p1, p2, order=None, rng=None):
    """{q: alpha(p1, p2, q)} over all q up to the order."""
    k = diagram.order if order is None else order
    g = diagram.grading
    p1, p2 = _vec(p1), _vec(p2)
    if not any(p2):
        return {p1: 1}
    if not any(p1):
        return {p2: 1}
    rng = rng if rng is not None else random.Random(19)
    out = {}
    base = _add(p1, p2)
    for n in points_of_degree_at_most(g, k):
        q = _add(base, g.pstar(n))
        a = structure_constant(diagram, p1, p2, q, k, rng)
        if a:
            out[q] = a
    return out


def check_product_identity(diagram, p1, p2, table, q, order=None):
    """sum_r alpha(r) theta_{q, r} == theta_{q, p1} theta_{q, p2} up to the order."""
    k = diagram.order if order is None else order
    g = diagram.grading
    p1, p2 = _vec(p1), _vec(p2)
    base = _add(p1, p2)
    lhs = Laurent()
    for r, a in table.items():
        n = _solve_pstar(g, _add(r, base, -1))
        lhs = lhs + theta_function(diagram, r, q, k - g.degree(n)).to_laurent() * a
    rhs = theta_function(diagram, p1, q, k).to_laurent() * theta_function(diagram, p2, q, k).to_laurent()

    def keep(e):
        n = _solve_pstar(g, _add(e, base, -1))
        return n is not None and g.degree(n) <= k
    rhs = Laurent({e: c for e, c in rhs.terms.items() if keep(e)})
    lhs = Laurent({e: c for e, c in lhs.terms.items() if keep(e)})
    return lhs == rhs


def expand_in_theta_basis(g_poly, diagram, q, order=None):
    """Coefficients alpha with g = sum alpha(r) theta_{q, r} up to the order.

    Greedy peeling: a term minimal for the order m <= m + p1*(N+) is the
    leading term of exactly one theta function, which is subtracted.
    Degrees are measured from the minimal exponents of g.
    """
    k = diagram.order if order is None else order
    gr = diagram.grading

    def above(a, b):
        n = _solve_pstar(gr, _add(a, b, -1))
        if n is None or any(x < 0 for x in n):
            return None
        return gr.degree(n)

    rem = dict(g_poly.terms)
    roots = [e for e in rem if not any(o != e and above(e, o) is not None for o in rem)]

    def height(e):
        hs = [above(e, r) for r in roots]
        hs = [h for h in hs if h is not None]
        return min(hs) if hs else None

    out = {}
    while True:
        live = {e: c for e, c in rem.items() if c and height(e) is not None and height(e) <= k}
        if not live:
            break
        mins = [e for e in live if not any(o != e and above(e, o) is not None for o in live)]
        e = min(mins, key=lambda x: (height(x), x))
        c = live[e]
        out[e] = out.get(e, 0) + c
        th = theta_function(diagram, e, q, k - height(e)).to_laurent()
        for t, a in th.terms.items():
            rem[t] = rem.get(t, 0) - c * a
        rem = {t: v for t, v in rem.items() if v}
    return {e: c for e, c in out.items() if c}


def is_polynomial_up_to_order(diagram, m0, q, order=None):
    """'stable' when no broken line of top degree exists, 'growing' otherwise."""
    k = diagram.order if order is None else order
    if not any(m0):
        return "stable"
    lines = broken_lines(diagram, m0, q, k)
    uf = diagram.grading.unfrozen
    return "growing" if any(ln.degree(uf) == k for ln in lines) else "stable"


def _piece_slope(forms, x, m):
    vals = [la.dot(l, x) for l in forms]
    lo = min(vals)
    return min(la.dot(l, m) for l, v in zip(forms, vals) if v == lo)


def _segment_point(line, i):
    segs = line.segments
    start, m, _ = segs[i]
    end = segs[i + 1][0] if i + 1 < len(segs) else line.endpoint
    if start is None:
        return tuple(a + b for a, b in zip(end, m))
    return tuple((a + b) / 2 for a, b in zip(start, end))


def convexity_violation(forms, lines):
    """First (line, bend index) where dw fails to increase on the exponents, else None.

    w(x) = min over the linear forms; the slope on a segment is taken at its
    midpoint (a point beyond the first bend for the initial ray).
    """
    for line in lines:
        prev = None
        for i, (_, m, _) in enumerate(line.segments):
            slope = _piece_slope(forms, _segment_point(line, i), m)
            if prev is not None and slope < prev:
                return line, i
            prev = slope
    return None


def min_convexity_check(forms, lines):
    return convexity_violation(forms, lines) is None


# -- g-vectors and cluster monomials -------------------------------------------------

def _check_monomial(gamma, m):
    m = list(m)
    if len(m) != gamma.rank:
        raise InvalidData("exponent has the wrong length")
    if any(Fraction(m[i]) < 0 for i in gamma.unfrozen):
        raise InvalidData("cluster monomials need nonnegative unfrozen exponents")
    return m


def g_vector(gamma, s0, path, m):
    """Global f-coordinates of the g-vector of prod A_{i;v}^{m_i} for the seed v at `path`."""
    s0 = s0 if s0 is not None else Seed.identity(gamma.rank)
    m = _check_monomial(gamma, m)
    seeds = [s0]
    for k in path:
        seeds.append(mutate_seed(seeds[-1], k, gamma))
    fb = f_basis(seeds[-1], gamma)
    x = [Fraction(0)] * gamma.rank
    for c, f in zip(m, fb):
        if c:
            x = [a + c * b for a, b in zip(x, f)]
    for k, s in zip(reversed(path), reversed(seeds[:-1])):
        x = tropical_mutation_inverse(k, x, s, gamma)
    return la.as_int_tuple(x)


def cluster_monomial_laurent(gamma, s0, path, m, principal=False):
    """The cluster monomial in the initial variables, by replaying exchange relations."""
    s0 = s0 if s0 is not None else Seed.identity(gamma.rank)
    if principal:
        gamma, s0 = principal_extension(gamma, s0)
        m = list(m) + [0] * (gamma.rank - len(m))
    m = _check_monomial(gamma, m)
    n = gamma.rank
    cur = [Laurent.monomial([int(i == j) for j in range(n)]) for i in range(n)]
    s = s0
    for k in path:
        if k in gamma.frozen:
            raise InvalidData("cannot mutate at frozen index %r" % (k,))
        eps = exchange_matrix(s, gamma)
        pos = Laurent.monomial([0] * n)
        neg = Laurent.monomial([0] * n)
        for i in range(n):
            e = eps[k][i]
            if e > 0:
                pos = pos * cur[i] ** int(e)
            elif e < 0:
                neg = neg * cur[i] ** int(-e)
        cur[k] = (pos + neg).exact_div(cur[k])
        s = mutate_seed(s, k, gamma)
    out = Laurent.monomial([0] * n)
    for i, e in enumerate(m):
        e = int(e)
        if e:
            out = out * cur[i] ** e
    return out


def _required_order(grading, g, poly):
    need = 0
    for e in poly.terms:
        n = _solve_pstar(grading, _add(e, g, -1))
        if n is None or any(x < 0 for x in n):
            return None
        need = max(need, grading.degree(n))
    return need


def theta_equals_cluster_monomial(gamma, s0, path, m, order=None, diagram=None, rng=None):
    """Compare theta at the g-vector (basepoint in C+) with the replayed cluster monomial."""
    from .scattering import scatter
    s0 = s0 if s0 is not None else Seed.identity(gamma.rank)
    g = g_vector(gamma, s0, path, m)
    poly = cluster_monomial_laurent(gamma, s0, path, m)
    if diagram is None:
        from .poly_ring import Grading
        need = _required_order(Grading(gamma, s0), g, poly)
        if need is None:
            return False
        k = max(need, order or 0, 1)
        diagram = scatter(gamma, s0, k)
    k = diagram.order if order is None else order
    need = _required_order(diagram.grading, g, poly)
    if need is None:
        return False
    if need > k:
        raise ValueError("order %d too small; the cluster monomial needs %d" % (k, need))
    q = generic_basepoint(diagram, rng, chamber="+")
    th = theta_function(diagram, g, q, k).to_laurent()
    return th == poly
