"""Consistent scattering diagrams to finite order.

The construction is local and order by order: at each step every joint
(codimension-two cell of the current diagram) is visited, the automorphism
of a small loop around it is computed, its lowest nontrivial homogeneous part
is read off, and new walls j - R_{>=0} p1*(alpha) are added so that the loop
becomes trivial at that degree.
"""

import random
from fractions import Fraction
from itertools import combinations

from . import _linalg as la
from .cone_geom import (Cone, DegenerateError, Joint, PiecewisePath, convex_union, generic_point,
                        intersect, path_crossings, plane_coords, split_regions,
                        transverse_loop_order, random_rational)
from .lattice_seed import (FixedData, Seed, check_injectivity, exchange_matrix, f_basis,
                           mutate_seed, tropical_branch, tropical_mutation_inverse)
from .poly_ring import Grading, RingAutomorphism, WallFunction, log_leading


class Wall:
    __slots__ = ("id", "n0", "support", "fn", "incoming", "cov")

    def __init__(self, wid, n0, support, fn, incoming, cov):
        self.id = wid
        self.n0 = tuple(n0)
        self.support = support
        self.fn = fn
        self.incoming = incoming
        self.cov = cov

    @property
    def degree(self):
        return sum(self.n0)

    def __repr__(self):
        return "Wall(%s, n0=%r, %r, %r)" % (self.id, self.n0, self.support, self.fn)

    def key(self):
        return (self.n0, self.support.key())


class ScatteringDiagram:
    def __init__(self, gamma, seed, order, walls):
        self.gamma = gamma
        self.seed = seed
        self.order = order
        self.walls = list(walls)
        self.grading = Grading(gamma, seed)

    def __repr__(self):
        return "ScatteringDiagram(order=%d, %d walls)" % (self.order, len(self.walls))

    def live_walls(self, order=None):
        k = self.order if order is None else order
        return [w for w in self.walls if w.degree <= k and not w.fn.is_trivial(k)]

    def wall(self, wid):
        for w in self.walls:
            if w.id == wid:
                return w
        raise KeyError(wid)

    def outgoing(self):
        return [w for w in self.walls if not w.incoming]


def wall_covector(grading, n0):
    return la.primitive(grading.covector(n0))


def make_wall(grading, wid, n0, support, fn):
    cov = wall_covector(grading, n0)
    incoming = support.contains(grading.pstar(n0))
    return Wall(wid, n0, support, fn, incoming, cov)


def initial_diagram(gamma, s=None, order=1):
    s = s if s is not None else Seed.identity(gamma.rank)
    if not check_injectivity(gamma, s):
        raise ValueError("fixed data fails the injectivity assumption; use the principal extension")
    g = Grading(gamma, s)
    walls = []
    for i in gamma.unfrozen:
        n0 = g.unit(i)
        cov = wall_covector(g, n0)
        walls.append(make_wall(g, "w%d" % len(walls), n0, Cone.hyperplane(cov), WallFunction(n0, [1])))
    return ScatteringDiagram(gamma, s, order, walls)


# -- joints -------------------------------------------------------------------

def _span_key(rows):
    red, _ = la.row_echelon(rows)
    return tuple(sorted(la.primitive(r) for r in red))


def enumerate_joints(diagram, order=None, rng=None):
    """All codimension-two cells of the wall arrangement with their witnesses."""
    rng = rng if rng is not None else random.Random(12345)
    walls = diagram.live_walls(order)
    n = diagram.gamma.rank
    g = diagram.grading
    spans = {}
    for w1, w2 in combinations(walls, 2):
        if la.rank([w1.cov, w2.cov]) < 2:
            continue
        key = _span_key([w1.cov, w2.cov])
        if key in spans:
            continue
        if intersect(w1.support, w2.support).dim() == n - 2:
            spans[key] = True
    for w in walls:
        for h in w.support.ineqs:
            if la.rank([w.cov, h]) == 2:
                spans.setdefault(_span_key([w.cov, h]), True)
    joints = []
    for key in sorted(spans):
        eqs = [list(r) for r in key]
        span = Cone(eqs, (), n)
        cands, pieces = [], []
        for w in walls:
            if la.rank(eqs + [w.cov]) != 2:
                continue
            p = intersect(w.support, span)
            if p.dim() == n - 2:
                cands.append(w)
                pieces.append(p.canonical())
        if not cands:
            continue
        cuts = []
        for p in pieces:
            cuts.extend(p.ineqs)
        others = [w.cov for w in walls if la.rank(eqs + [w.cov]) != 2]
        for cell in split_regions(span, cuts):
            x = generic_point(cell, rng, avoid=others)
            inc = [w for w in cands if w.support.contains(x)]
            if not inc:
                continue
            boundary = any(w.support.on_boundary(x) for w in inc)
            if not boundary and la.rank([w.cov for w in inc]) < 2:
                continue
            perp = any(any(la.dot(e, g.pstar(w.n0)) for e in eqs) for w in inc)
            joints.append(Joint(span, cell, x, [w.id for w in inc],
                                "perpendicular" if perp else "parallel"))
    return joints


def loop_automorphism(diagram, joint, order):
    eqs = [list(r) for r in joint.span.eqs]
    inc = [diagram.wall(wid) for wid in joint.incident]
    seq = transverse_loop_order(eqs, joint.witness, [(w.id, w.support, w.cov) for w in inc])
    theta = RingAutomorphism.identity(diagram.grading, order)
    byid = {w.id: w for w in inc}
    for wid, sign, _ in seq:
        theta = theta.then_cross(byid[wid].fn, sign)
    return theta, seq


def _sweep(cell, p, h, eqs):
    """cell - R_{>=0} p, inside the hyperplane h."""
    gsel = None
    for e in eqs:
        gp = la.dot(e, p)
        if gp:
            gsel, gpv = [Fraction(x) for x in e], gp
            break
    if gsel is None:
        raise ValueError("direction is tangent to the joint")
    ineqs = [[-x / gpv for x in gsel]]
    for c in cell.ineqs:
        cp = la.dot(c, p)
        ineqs.append([a - cp / gpv * b for a, b in zip(c, gsel)])
    return Cone([h], ineqs, cell.ambient).canonical()


def _merge(grading, walls, order):
    groups = {}
    for w in walls:
        k = w.key()
        if k in groups:
            old = groups[k]
            groups[k] = make_wall(grading, old.id, old.n0, old.support, old.fn.times(w.fn, order))
        else:
            groups[k] = w
    out = [w for w in groups.values() if not w.fn.is_trivial(order)]
    out.sort(key=lambda w: (w.degree, w.n0, w.support.key()))
    return [make_wall(grading, "w%d" % i, w.n0, w.support, w.fn) for i, w in enumerate(out)]


def merge_convex(grading, walls, order):
    """Glue walls with equal n0 and function whose supports form a convex cone."""
    walls = list(walls)
    changed = True
    while changed:
        changed = False
        for i, j in combinations(range(len(walls)), 2):
            a, b = walls[i], walls[j]
            if a.n0 != b.n0 or a.fn.truncated(order).coeffs != b.fn.truncated(order).coeffs:
                continue
            u = convex_union(a.support, b.support)
            if u is None:
                continue
            walls[i] = make_wall(grading, a.id, a.n0, u, a.fn)
            del walls[j]
            changed = True
            break
    return _merge(grading, walls, order)


def corrections(diagram, joint, k, final_order):
    """Walls making the loop at `joint` trivial in degree k."""
    g = diagram.grading
    theta, _ = loop_automorphism(diagram, joint, k)
    comps = log_leading(theta, k)
    eqs = [list(r) for r in joint.span.eqs]
    a, b = [Fraction(x) for x in eqs[0]], [Fraction(x) for x in eqs[1]]
    out = []
    for alpha, c in comps:
        p = g.pstar(alpha)
        h = la.primitive(g.covector(alpha))
        r = plane_coords(a, b, [-x for x in p])
        tang = [-r[1] * x + r[0] * y for x, y in zip(a, b)]
        val = la.dot(h, tang)
        if val == 0:
            raise DegenerateError("correction ray tangent to the loop")
        eps = 1 if val < 0 else -1
        n0 = la.primitive(alpha)
        ell = next(x // y for x, y in zip(alpha, n0) if y)
        t = g.n0_prime_factor(n0)
        logs = [Fraction(0)] * (ell - 1) + [Fraction(-eps * ell) * c / t]
        fn = WallFunction.from_log(n0, logs, final_order)
        support = _sweep(joint.cell, p, h, eqs)
        out.append((n0, support, fn))
    return out


def scatter(gamma, s=None, order=2, rng=None, progress=None):
    """The consistent diagram of (gamma, s) up to degree `order`."""
    d = initial_diagram(gamma, s, order)
    g = d.grading
    rng = rng if rng is not None else random.Random(2024)
    for k in range(2, order + 1):
        cur = ScatteringDiagram(gamma, d.seed, k - 1, d.walls)
        joints = enumerate_joints(cur, k - 1, rng)
        new = []
        for j in joints:
            if j.kind == "parallel":
                continue
            for n0, support, fn in corrections(cur, j, k, order):
                new.append(make_wall(g, "new", n0, support, fn))
        d = ScatteringDiagram(gamma, d.seed, order, _merge(g, d.walls + new, order))
        if progress:
            progress(k, len(joints), len(d.walls))
    d.walls = merge_convex(g, d.walls, order)
    return d


def truncate_diagram(d, order):
    walls = [make_wall(d.grading, w.id, w.n0, w.support, w.fn.truncated(order))
             for w in d.walls if w.degree <= order and not w.fn.is_trivial(order)]
    return ScatteringDiagram(d.gamma, d.seed, order, walls)


# -- path-ordered products ----------------------------------------------------------

def path_ordered_product(diagram, path, order=None):
    k = diagram.order if order is None else order
    if not isinstance(path, PiecewisePath):
        path = PiecewisePath(path)
    walls = diagram.live_walls(k)
    byid = {w.id: w for w in walls}
    events = path_crossings(path, [(w.id, w.support, w.cov) for w in walls])
    theta = RingAutomorphism.identity(diagram.grading, k)
    for _, wid, sign in events:
        theta = theta.then_cross(byid[wid].fn, sign)
    return theta


def random_generic_point(diagram, rng, box=None):
    n = diagram.gamma.rank
    covs = [w.cov for w in diagram.walls]
    for _ in range(100):
        x = [random_rational(rng) for _ in range(n)]
        if all(la.dot(c, x) != 0 for c in covs):
            return x
    raise DegenerateError("no generic point found")


def check_consistency(diagram, order=None, trials=50, rng=None, loops=5):
    """Loop automorphisms around sampled joints, plus random closed loops."""
    k = diagram.order if order is None else order
    rng = rng if rng is not None else random.Random(7)
    joints = enumerate_joints(diagram, k, rng)
    pick = joints if len(joints) <= trials else rng.sample(joints, trials)
    checked = 0
    for j in pick:
        theta, seq = loop_automorphism(diagram, j, k)
        checked += 1
        if not theta.is_identity(k):
            return {"ok": False, "kind": "joint", "witness": [str(x) for x in j.witness],
                    "incident": j.incident, "images": _bad_images(theta, k), "checked": checked}
    done = 0
    tries = 0
    while done < loops and tries < 20 * loops:
        tries += 1
        pts = [random_generic_point(diagram, rng) for _ in range(3)]
        try:
            theta = path_ordered_product(diagram, pts + [pts[0]], k)
        except (DegenerateError, ValueError):
            continue
        done += 1
        if not theta.is_identity(k):
            return {"ok": False, "kind": "loop", "witness": [[str(x) for x in p] for p in pts],
                    "images": _bad_images(theta, k), "checked": checked + done}
    return {"ok": True, "joints": len(joints), "checked": checked + done}


def _bad_images(theta, k):
    out = []
    for j, u in enumerate(theta.images):
        if not u.is_one(k):
            out.append({"generator": j, "terms": {str(e): str(c) for e, c in sorted(u.terms.items())}})
    return out


# -- mutation of diagrams ---------------------------------------------------------

def mutate_diagram(diagram, k):
    """T_k of a diagram, based at the mutated seed."""
    gamma, s = diagram.gamma, diagram.seed
    if k in gamma.frozen:
        raise ValueError("cannot mutate at a frozen index")
    s2 = mutate_seed(s, k, gamma)
    g, g2 = diagram.grading, Grading(gamma, s2)
    n = gamma.rank
    ek = s.basis[k]
    cov_k = la.primitive(gamma.covector(ek))
    eps_k = [x for x in exchange_matrix(s, gamma)]
    out = []
    for w in diagram.walls:
        if w.n0 == g.unit(k):
            if w.support.dim() == n - 1 and not w.support.ineqs:
                continue
            raise ValueError("unexpected extra wall inside e_k-perp")
        for side in (-1, 1):
            half = Cone((), [[side * x for x in cov_k]], n)
            piece = intersect(w.support, half)
            if piece.dim() != n - 1:
                continue
            mat = tropical_branch(k, s, gamma, side)
            inv = la.inverse(mat)
            eqs = [la.vecmat(c, inv) for c in piece.eqs]
            ineqs = [la.vecmat(c, inv) for c in piece.ineqs]
            support = Cone(eqs, ineqs, n).canonical()
            # n0 in seed coordinates of s2
            a = list(w.n0)
            if side > 0:
                shift = sum(a[i] * eps_k[i][k] for i in range(n))
                a[k] += shift
            glob = g.n_global(a)
            n2 = la.as_int_tuple(g2.seed_coords(glob))
            if any(x < 0 for x in n2):
                raise ValueError("transported wall leaves N+")
            fn = WallFunction(n2, w.fn.coeffs)
            out.append(make_wall(g2, "m", n2, support, fn))
    unit = g2.unit(k)
    out.append(make_wall(g2, "m", unit, Cone.hyperplane(wall_covector(g2, unit)), WallFunction(unit, [1])))
    walls = _merge(g2, out, diagram.order)
    return ScatteringDiagram(gamma, s2, diagram.order, walls)


def mutual_validity(source, target, k):
    """Predicate on target-seed exponents whose coefficients both sides determine.

    `target` is mu_k(source).  A target exponent n' is accepted when its
    target degree and the largest source degree of any exponent below it
    (componentwise) are within the orders of the respective diagrams.
    """
    eps = exchange_matrix(source.seed, source.gamma)
    uf = source.gamma.unfrozen
    # the k-th source coordinate of a preimage is at most sum n'_i [+-eps_ik]_+,
    # the sign depending on the side of e_k-perp; |eps_ik| covers both
    w = {i: 1 + abs(eps[i][k]) for i in uf}

    def ok(n2):
        if sum(n2[i] for i in uf) > target.order:
            return False
        return sum(n2[i] * w[i] for i in uf if i != k) <= source.order
    return ok


def _group_by_hyperplane(walls):
    groups = {}
    for w in walls:
        groups.setdefault(la.primitive(w.n0), []).append(w)
    return groups


def _product(fns, n0, order):
    out = WallFunction(n0, [])
    for f in fns:
        out = out.times(WallFunction(n0, f.coeffs) if f.n0 == n0 else _rescale(f, n0), order)
    return out


def _rescale(f, n0):
    ell = next(x // y for x, y in zip(f.n0, n0) if y)
    coeffs = []
    for l, c in enumerate(f.coeffs, start=1):
        coeffs.extend([Fraction(0)] * (ell - 1) + [c])
    return WallFunction(n0, coeffs)


def _compare_fns(f1, f2, n0, order, valid):
    k = order // sum(n0)
    a, b = f1.ulist(k), f2.ulist(k)
    for l in range(1, k + 1):
        n = tuple(l * x for x in n0)
        if valid is not None and not valid(n):
            continue
        if a[l] != b[l]:
            return False
    return True


def equivalent(d1, d2, order=None, trials=10, rng=None, valid=None):
    """Compare g_x on every region of every wall hyperplane, plus random paths.

    Returns (ok, witness).
    """
    if d1.seed.basis != d2.seed.basis:
        raise ValueError("diagrams are based at different seeds")
    k = min(d1.order, d2.order) if order is None else order
    rng = rng if rng is not None else random.Random(99)
    g = d1.grading
    n = d1.gamma.rank
    w1, w2 = d1.live_walls(k), d2.live_walls(k)
    groups1, groups2 = _group_by_hyperplane(w1), _group_by_hyperplane(w2)
    allcovs = [w.cov for w in w1 + w2]
    for n0 in sorted(set(groups1) | set(groups2)):
        if valid is not None and not any(valid(tuple(l * x for x in n0)) for l in range(1, k + 1)):
            continue
        ws1, ws2 = groups1.get(n0, []), groups2.get(n0, [])
        cov = wall_covector(g, n0)
        plane = Cone.hyperplane(cov)
        cuts = []
        for w in ws1 + ws2:
            cuts.extend(w.support.ineqs)
        others = [c for c in allcovs if la.rank([c, cov]) == 2]
        for region in split_regions(plane, cuts):
            x = generic_point(region, rng, avoid=others + cuts)
            f1 = _product([w.fn for w in ws1 if w.support.contains(x)], n0, k)
            f2 = _product([w.fn for w in ws2 if w.support.contains(x)], n0, k)
            if not _compare_fns(f1, f2, n0, k, valid):
                return False, {"point": [str(v) for v in x], "n0": list(n0),
                               "first": [str(c) for c in f1.coeffs], "second": [str(c) for c in f2.coeffs]}
    done = 0
    tries = 0
    while done < trials and tries < 20 * trials + 20:
        tries += 1
        p = random_generic_point(d1, rng)
        q = random_generic_point(d1, rng)
        try:
            t1 = path_ordered_product(d1, [p, q], k)
            t2 = path_ordered_product(d2, [p, q], k)
        except DegenerateError:
            continue
        done += 1
        for j in range(n):
            a, b = t1.images[j].terms, t2.images[j].terms
            for e in set(a) | set(b):
                if valid is not None and any(e) and not valid(e):
                    continue
                if a.get(e, 0) != b.get(e, 0):
                    return False, {"path": [[str(v) for v in p], [str(v) for v in q]],
                                   "generator": j, "exponent": list(e)}
    return True, None


# -- cluster chambers ---------------------------------------------------------------

class Chamber:
    def __init__(self, cone, vertex, sign="+", linear=None):
        self.cone = cone
        self.vertex = tuple(vertex)
        self.sign = sign
        self.linear = linear

    def __repr__(self):
        return "Chamber(%r, %r)" % (self.vertex, self.cone)


def chamber_of_path(gamma, s0, path):
    """T_v^{-1}(C+) for the seed reached by `path`, with T_v's linear branch."""
    n = gamma.rank
    seeds = [s0]
    for k in path:
        seeds.append(mutate_seed(seeds[-1], k, gamma))
    sv = seeds[-1]
    fb = f_basis(sv, gamma)
    x = [Fraction(0)] * n
    for i in gamma.unfrozen:
        x = [a + b for a, b in zip(x, fb[i])]
    y = x
    for k, s in zip(reversed(path), reversed(seeds[:-1])):
        y = tropical_mutation_inverse(k, y, s, gamma)
    mat = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    z = y
    for k, s in zip(path, seeds[:-1]):
        ek = s.basis[k]
        side = la.dot(gamma.covector(ek), z)
        if side == 0:
            raise DegenerateError("chamber interior on a mutation hyperplane")
        br = tropical_branch(k, s, gamma, 1 if side > 0 else -1)
        mat = la.matmul(br, mat)
        z = [la.dot(r, z) for r in br]
    ineqs = [la.vecmat(gamma.covector(sv.basis[i]), mat) for i in gamma.unfrozen]
    return Chamber(Cone((), ineqs, n).canonical(), path, "+", mat)


class ChamberComplex:
    def __init__(self, chambers):
        self.chambers = chambers

    def __iter__(self):
        return iter(self.chambers)

    def __len__(self):
        return len(self.chambers)

    def lookup(self, point):
        for c in self.chambers:
            if c.cone.contains(point):
                return c
        return None


def cluster_chambers(gamma, s=None, depth=2):
    s = s if s is not None else Seed.identity(gamma.rank)
    seen = {}
    frontier = [()]
    for level in range(depth + 1):
        nxt = []
        for path in frontier:
            ch = chamber_of_path(gamma, s, path)
            key = ch.cone.key()
            if key not in seen:
                seen[key] = ch
            if level < depth:
                for k in gamma.unfrozen:
                    if not path or path[-1] != k:
                        nxt.append(path + (k,))
        frontier = nxt
    return ChamberComplex(list(seen.values()))
