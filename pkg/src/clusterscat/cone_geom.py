"""Exact rational polyhedral cones and the bits of geometry built on them.

A cone is {x : e.x = 0 for e in eqs, a.x >= 0 for a in ineqs}.  Feasibility
and dimension questions are answered with a small exact simplex, set up so
that the origin is always a feasible vertex and no phase one is needed.
"""

import random
from fractions import Fraction

from . import _linalg as la


class DegenerateError(ValueError):
    """A path or basepoint touches the singular locus; resample."""


# -- exact simplex ----------------------------------------------------------

def _simplex_max(obj, rows, rhs):
    """max obj.x subject to rows.x <= rhs, x >= 0, where rhs >= 0.

    Dense tableau with Bland's rule.  Returns (value, x).
    """
    m = len(rows)
    n = len(obj)
    tab = [list(r) + [Fraction(int(i == j)) for j in range(m)] + [Fraction(b)]
           for i, (r, b) in enumerate(zip(rows, rhs))]
    z = [-Fraction(c) for c in obj] + [Fraction(0)] * m + [Fraction(0)]
    basis = [n + i for i in range(m)]
    width = n + m
    while True:
        col = next((j for j in range(width) if z[j] < 0), None)
        if col is None:
            break
        best = None
        for i in range(m):
            a = tab[i][col]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            raise ValueError("unbounded linear program")
        r = best[1]
        piv = tab[r][col]
        if piv != 1:
            tab[r] = [x / piv for x in tab[r]]
        prow = tab[r]
        nz = [(j, x) for j, x in enumerate(prow) if x]
        for i in range(m):
            if i != r:
                f = tab[i][col]
                if f:
                    row = tab[i]
                    for j, x in nz:
                        row[j] -= f * x
        f = z[col]
        if f:
            for j, x in nz:
                z[j] -= f * x
        basis[r] = col
    x = [Fraction(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            x[b] = tab[i][-1]
    return z[-1], x


def _max_over_box(obj_rows, ineqs, strict_rows, dim):
    """Solve max s (or max obj) over {a.y >= 0, b.y >= s for b in strict_rows, |y_j| <= 1}.

    Variables are y = u - w with u, w in [0,1]^dim plus s in [0,1].
    If obj_rows is None the objective is s, otherwise it is obj_rows.y.
    """
    rows, rhs = [], []
    nv = 2 * dim + 1
    for a in ineqs:
        rows.append([-x for x in a] + [x for x in a] + [Fraction(0)])
        rhs.append(0)
    for b in strict_rows:
        rows.append([-x for x in b] + [x for x in b] + [Fraction(1)])
        rhs.append(0)
    for j in range(2 * dim + 1):
        r = [Fraction(0)] * nv
        r[j] = Fraction(1)
        rows.append(r)
        rhs.append(1)
    if obj_rows is None:
        obj = [Fraction(0)] * (2 * dim) + [Fraction(1)]
    else:
        obj = list(obj_rows) + [-x for x in obj_rows] + [Fraction(0)]
    val, x = _simplex_max(obj, rows, rhs)
    y = [x[j] - x[dim + j] for j in range(dim)]
    return val, y


# -- cones ------------------------------------------------------------------

def _prim(v):
    return la.primitive(v)


class Cone:
    __slots__ = ("eqs", "ineqs", "ambient", "_dim", "_interior", "_basis")

    def __init__(self, eqs=(), ineqs=(), ambient=None):
        eqs = [_prim(e) for e in eqs if any(e)]
        ineqs = [_prim(a) for a in ineqs if any(a)]
        if ambient is None:
            ambient = len((eqs or ineqs)[0])
        self.ambient = ambient
        # canonical equalities: reduced echelon basis, primitive
        if eqs:
            red, piv = la.row_echelon(eqs)
            # inequalities only matter modulo the equalities
            reduced = []
            for a in ineqs:
                a = [Fraction(x) for x in a]
                for r, p in zip(red, piv):
                    if a[p]:
                        f = a[p]
                        a = [x - f * y for x, y in zip(a, r)]
                if any(a):
                    reduced.append(_prim(a))
            ineqs = reduced
            eqs = sorted(_prim(r) for r in red)
        self.eqs = tuple(eqs)
        self.ineqs = tuple(sorted(set(ineqs)))
        self._dim = None
        self._interior = None
        self._basis = None

    def __repr__(self):
        return "Cone(eqs=%r, ineqs=%r)" % (self.eqs, self.ineqs)

    def key(self):
        return (self.eqs, self.ineqs)

    def __eq__(self, other):
        return isinstance(other, Cone) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    @classmethod
    def full(cls, n):
        return cls((), (), n)

    @classmethod
    def hyperplane(cls, cov):
        return cls([cov], (), len(cov))

    def span_basis(self):
        """Basis of the linear space cut out by the equalities."""
        if self._basis is None:
            self._basis = la.nullspace(list(self.eqs), self.ambient) if self.eqs else [
                [Fraction(int(i == j)) for j in range(self.ambient)] for i in range(self.ambient)]
        return self._basis

    def _reduced(self, covs):
        basis = self.span_basis()
        return [[la.dot(c, b) for b in basis] for c in covs]

    def _lift(self, y):
        basis = self.span_basis()
        x = [Fraction(0)] * self.ambient
        for c, b in zip(y, basis):
            if c:
                for j, v in enumerate(b):
                    if v:
                        x[j] += c * v
        return x

    def relative_interior_point(self):
        """A point strictly inside w.r.t. every non-implicit inequality.

        Returns (point, implicit) where implicit lists the inequalities that
        vanish on the whole cone.
        """
        if self._interior is not None:
            return self._interior
        basis = self.span_basis()
        dim = len(basis)
        if dim == 0:
            self._interior = ([Fraction(0)] * self.ambient, list(self.ineqs))
            return self._interior
        red = self._reduced(self.ineqs)
        val, y = _max_over_box(None, [], red, dim)
        if val > 0:
            self._interior = (self._lift(y), [])
            return self._interior
        implicit = []
        strict = []
        for a, r in zip(self.ineqs, red):
            if not any(r):
                implicit.append(a)
                continue
            v, _ = _max_over_box(r, red, [], dim)
            if v > 0:
                strict.append(r)
            else:
                implicit.append(a)
        if strict:
            val, y = _max_over_box(None, [r for r in red], strict, dim)
            assert val > 0
            point = self._lift(y)
        else:
            point = [Fraction(0)] * self.ambient
        self._interior = (point, implicit)
        return self._interior

    def dim(self):
        if self._dim is None:
            _, implicit = self.relative_interior_point()
            self._dim = self.ambient - la.rank(list(self.eqs) + list(implicit)) if (self.eqs or implicit) else self.ambient
        return self._dim

    def linear_span_eqs(self):
        """Equalities defining the linear span of the cone."""
        _, implicit = self.relative_interior_point()
        rows = list(self.eqs) + list(implicit)
        if not rows:
            return []
        red, _ = la.row_echelon(rows)
        return [_prim(r) for r in red]

    def is_empty_interior(self):
        return self.dim() < len(self.span_basis())

    def canonical(self):
        """Move implicit equalities into eqs and drop redundant inequalities."""
        eqs = self.linear_span_eqs()
        c = Cone(eqs, [a for a in self.ineqs], self.ambient)
        c.ineqs = tuple(a for a in c.ineqs if _nonzero_mod(a, c.eqs))
        keep = list(c.ineqs)
        basis = c.span_basis()
        if not basis:
            return Cone(eqs, (), self.ambient)
        for a in list(keep):
            others = [b for b in keep if b != a]
            # redundant iff minimum of a over cone defined by the others is >= 0
            sub = Cone(c.eqs, others, self.ambient)
            red_others = sub._reduced(others)
            r = sub._reduced([a])[0]
            v, _ = _max_over_box([-x for x in r], red_others, [], len(basis))
            if v <= 0:
                keep = others
        out = Cone(eqs, keep, self.ambient)
        return out

    def contains(self, x, strict=False):
        for e in self.eqs:
            if la.dot(e, x) != 0:
                return False
        for a in self.ineqs:
            v = la.dot(a, x)
            if v < 0 or (strict and v == 0):
                return False
        return True

    def on_boundary(self, x):
        """x in the cone but some non-implicit inequality vanishes at x."""
        if not self.contains(x):
            return False
        _, implicit = self.relative_interior_point()
        imp = set(implicit)
        return any(la.dot(a, x) == 0 for a in self.ineqs if a not in imp)

    def intersect(self, other):
        return intersect(self, other)

    def generators(self):
        """Extreme rays and lineality basis, by brute enumeration (small cones only)."""
        from itertools import combinations
        c = self.canonical()
        n = self.ambient
        eqs = list(c.eqs)
        lin = la.nullspace(eqs + list(c.ineqs), n) if (eqs or c.ineqs) else [
            [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        need = n - len(lin) - 1 - la.rank(eqs) if eqs else n - len(lin) - 1
        rays = set()
        for sub in combinations(c.ineqs, max(need, 0)):
            rows = eqs + list(sub) + [list(v) for v in lin]
            ns = la.nullspace(rows, n) if rows else []
            if len(ns) != 1:
                continue
            v = ns[0]
            for cand in (v, [-x for x in v]):
                if all(la.dot(a, cand) >= 0 for a in c.ineqs):
                    rays.add(_prim(cand))
        return sorted(rays), [_prim(v) for v in lin]


def _nonzero_mod(a, eqs):
    if not eqs:
        return True
    return la.rank(list(eqs) + [a]) > la.rank(list(eqs))


def cone_dim(c):
    return c.dim()


def intersect(a, b):
    if a.ambient != b.ambient:
        raise ValueError("ambient dimensions differ")
    return Cone(a.eqs + b.eqs, a.ineqs + b.ineqs, a.ambient)


def contains(c, x, strict=False):
    return c.contains(x, strict)


def random_rational(rng, scale=1000):
    return Fraction(rng.randint(-scale, scale), rng.randint(scale // 2, scale))


def generic_point(c, rng=None, avoid=(), tries=60):
    """A random point in the relative interior of c, off every covector in avoid.

    Covectors that vanish on the whole span of c are ignored.
    """
    rng = rng if rng is not None else random.Random(0)
    x0, implicit = c.relative_interior_point()
    span_eqs = c.linear_span_eqs()
    span = la.nullspace(span_eqs, c.ambient) if span_eqs else [
        [Fraction(int(i == j)) for j in range(c.ambient)] for i in range(c.ambient)]
    relevant = [h for h in avoid if any(la.dot(h, b) for b in span)]
    strict = [a for a in c.ineqs if a not in set(implicit)]
    for attempt in range(tries):
        r = [Fraction(0)] * c.ambient
        for b in span:
            t = random_rational(rng)
            for j, v in enumerate(b):
                r[j] += t * v
        delta = Fraction(1)
        for _ in range(40):
            x = [p + delta * q for p, q in zip(x0, r)]
            if all(la.dot(a, x) > 0 for a in strict):
                break
            delta /= 2
        else:
            continue
        if all(la.dot(h, x) != 0 for h in relevant):
            return x
    raise DegenerateError("could not find a generic point")


# -- regions of an arrangement --------------------------------------------------

def split_regions(base, cuts):
    """Full-dimensional pieces of `base` cut by the hyperplanes in `cuts`."""
    target = base.dim()
    span_eqs = base.linear_span_eqs()
    span = la.nullspace(span_eqs, base.ambient) if span_eqs else [
        [Fraction(int(i == j)) for j in range(base.ambient)] for i in range(base.ambient)]
    regions = [base]
    seen = set()
    for h in cuts:
        if not any(la.dot(h, b) for b in span):
            continue
        hk = _prim([la.dot(h, b) for b in span])
        if hk in seen or tuple(-x for x in hk) in seen:
            continue
        seen.add(hk)
        new = []
        for r in regions:
            pieces = []
            for sgn in (1, -1):
                piece = Cone(r.eqs, r.ineqs + (tuple(sgn * x for x in h),), r.ambient)
                if piece.dim() == target:
                    pieces.append(piece)
            if len(pieces) == 2:
                new.extend(pieces)
            else:
                new.append(r)
        regions = new
    return regions


def nonnegative_on(c, a):
    """True when the linear form a is >= 0 on all of c."""
    basis = c.span_basis()
    if not basis:
        return True
    r = c._reduced([a])[0]
    if not any(r):
        return True
    v, _ = _max_over_box([-x for x in r], c._reduced(list(c.ineqs)), [], len(basis))
    return v <= 0


def convex_union(a, b):
    """The cone a | b when that union is convex (same span, same dimension), else None."""
    a, b = a.canonical(), b.canonical()
    if a.eqs != b.eqs:
        return None
    keep = [h for h in a.ineqs if nonnegative_on(b, h)]
    keep += [h for h in b.ineqs if nonnegative_on(a, h)]
    u = Cone(a.eqs, keep, a.ambient)
    target = u.dim()
    if a.dim() != target or b.dim() != target:
        return None
    rng = random.Random(3)
    for cell in split_regions(u, list(a.ineqs) + list(b.ineqs)):
        x = generic_point(cell, rng)
        if not (a.contains(x) or b.contains(x)):
            return None
    return u.canonical()


# -- paths ----------------------------------------------------------------------

class PiecewisePath:
    def __init__(self, vertices):
        self.vertices = [tuple(Fraction(x) for x in v) for v in vertices]
        for a, b in zip(self.vertices, self.vertices[1:]):
            if a == b:
                raise ValueError("consecutive path vertices coincide")

    def reversed(self):
        return PiecewisePath(self.vertices[::-1])

    def __len__(self):
        return len(self.vertices)


def path_crossings(path, walls):
    """Crossing events (t, id, sign) with t in [segment index, +1).

    walls: iterable of (id, cone, covector) where covector defines the
    wall's hyperplane with the sign of n0.
    """
    events = []
    verts = path.vertices
    for si, (p, q) in enumerate(zip(verts, verts[1:])):
        seg = []
        for wid, cone, cov in walls:
            hp = la.dot(cov, p)
            hq = la.dot(cov, q)
            if hp == 0 or hq == 0:
                if hp == 0 and hq == 0:
                    if cone.contains(p) or cone.contains(q):
                        raise DegenerateError("path runs inside a wall")
                    continue
                x = p if hp == 0 else q
                if cone.contains(x):
                    raise DegenerateError("path vertex on a wall")
                continue
            if (hp > 0) == (hq > 0):
                continue
            t = hp / (hp - hq)
            x = [a + t * (b - a) for a, b in zip(p, q)]
            if not cone.contains(x):
                continue
            if cone.on_boundary(x):
                raise DegenerateError("path crosses a wall boundary")
            sign = 1 if hq - hp < 0 else -1
            seg.append((t, wid, sign, cov))
        seg.sort(key=lambda e: e[0])
        for i in range(1, len(seg)):
            if seg[i][0] == seg[i - 1][0] and la.rank([seg[i][3], seg[i - 1][3]]) > 1:
                raise DegenerateError("path passes through a joint")
        events.extend((si + t, wid, sign) for t, wid, sign, _ in seg)
    return events


# -- loops around codimension-two subspaces ------------------------------------------

def _angle_key(v):
    """Sort key for the angle of a nonzero 2-vector, in [0, 2pi)."""
    x, y = v
    half = 0 if (y > 0 or (y == 0 and x > 0)) else 1
    return half, v


def _angle_cmp_sort(vecs):
    from functools import cmp_to_key

    def cmp(a, b):
        ha, hb = _angle_key(a[0])[0], _angle_key(b[0])[0]
        if ha != hb:
            return ha - hb
        cr = a[0][0] * b[0][1] - a[0][1] * b[0][0]
        if cr > 0:
            return -1
        if cr < 0:
            return 1
        return 0
    return sorted(vecs, key=cmp_to_key(cmp))


class Joint:
    """A codimension-two cell with a witness point and its incident walls."""

    def __init__(self, span, cell, witness, incident, kind):
        self.span = span          # Cone: the linear span (two equalities)
        self.cell = cell          # Cone: the cell inside the span
        self.witness = witness
        self.incident = incident  # list of wall ids
        self.kind = kind

    def __repr__(self):
        return "Joint(%s, witness=%r, incident=%r)" % (self.kind, self.witness, self.incident)


def transverse_plane(span_eqs):
    """The orthogonal complement of the span: the two covectors themselves."""
    a, b = span_eqs
    return [Fraction(x) for x in a], [Fraction(x) for x in b]


def plane_coords(a, b, v):
    """Coordinates (s, t) of the orthogonal projection of v onto span(a, b)."""
    g11, g12, g22 = la.dot(a, a), la.dot(a, b), la.dot(b, b)
    r1, r2 = la.dot(a, v), la.dot(b, v)
    det = g11 * g22 - g12 * g12
    return ((r1 * g22 - r2 * g12) / det, (g11 * r2 - g12 * r1) / det)


def local_rays(a, b, witness, cone, cov):
    """Directions (in plane coordinates) in which a wall leaves the witness."""
    # the line cov^perp inside span(a, b)
    ca, cb = la.dot(cov, a), la.dot(cov, b)
    direction = (cb, -ca)
    if direction == (0, 0):
        raise DegenerateError("wall hyperplane does not contain the joint")
    tight = [h for h in cone.ineqs if la.dot(h, witness) == 0]
    out = []
    for sgn in (1, -1):
        s, t = sgn * direction[0], sgn * direction[1]
        vec = [s * x + t * y for x, y in zip(a, b)]
        if all(la.dot(h, vec) >= 0 for h in tight):
            out.append((s, t))
    if not out:
        raise DegenerateError("wall meets the joint only in lower dimension")
    return out


def transverse_loop_order(span_eqs, witness, walls):
    """Counterclockwise cyclic crossing sequence [(id, sign, ray)] around a joint.

    walls: (id, cone, covector) for every wall containing the witness.
    The sign is +1 when <n0, gamma'> < 0 at the crossing.
    """
    a, b = transverse_plane(span_eqs)
    rays = []
    for wid, cone, cov in walls:
        for r in local_rays(a, b, witness, cone, cov):
            # tangent of the counterclockwise loop at angle r
            tang = [-r[1] * x + r[0] * y for x, y in zip(a, b)]
            val = la.dot(cov, tang)
            if val == 0:
                raise DegenerateError("loop tangent to a wall")
            rays.append((r, wid, 1 if val < 0 else -1))
    ordered = _angle_cmp_sort(rays)
    return [(wid, sign, r) for r, wid, sign in ordered]
