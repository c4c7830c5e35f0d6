"""Command line interface, JSON documents, verification suites and SVG output.

All numbers in documents are exact: integers stay integers and rationals are
strings "p/q".  Documents are emitted with sorted keys and a fixed indent so
that emit(parse(text)) == text.
"""

import argparse
import json
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from itertools import product as iproduct

from .cone_geom import Cone, DegenerateError
from .lattice_seed import (InvalidData, Seed, c_vectors, dump_fixed_data, format_rational,
                           load_fixed_data, mutate_seed, parse_rational, principal_extension)
from .poly_ring import Laurent, WallFunction, factor_binomial_powers
from .scattering import (ScatteringDiagram, check_consistency, equivalent, make_wall,
                         mutate_diagram, mutual_validity, scatter)
from .theta import (StabilizationError, cluster_monomial_laurent,
                    expand_in_theta_basis, g_vector, generic_basepoint, theta_function,
                    theta_path_invariance, theta_product, _required_order)

THREADS_ENV = "CLUSTERSCAT_THREADS"
SUITES = ("consistency", "positivity", "mutation", "signs", "cluster-theta")


class UsageError(Exception):
    pass


# -- documents ------------------------------------------------------------------------

def emit(doc):
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def parse(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidData("not a JSON document: %s" % e)


def _rat(v):
    return [format_rational(x) for x in v]


def _int_rows(rows):
    return [[int(x) for x in r] for r in rows]


def fixed_data_from_doc(doc, principal=False):
    gamma = load_fixed_data(doc)
    if (principal or doc.get("extension") == "principal") and not gamma.principal:
        gamma, _ = principal_extension(gamma)
    return gamma


def names(gamma):
    return [gamma.variable_name(i) for i in range(gamma.rank)]


def wall_label(diagram, w):
    """'1 + c1*z^v + c2*z^2v + ...' in increasing powers."""
    g = diagram.grading
    v = g.pstar(w.n0)
    parts = ["1"]
    for l, c in enumerate(w.fn.truncated(diagram.order).coeffs, start=1):
        if c:
            mono = Laurent.monomial([l * x for x in v], c)
            parts.append(mono.render(names(diagram.gamma)))
    return " + ".join(parts).replace("+ -", "- ")


def diagram_to_doc(d):
    walls = []
    for w in d.walls:
        walls.append({
            "normal": list(w.n0),
            "support": {"eq": _int_rows(w.support.eqs), "ineq": _int_rows(w.support.ineqs)},
            "coeffs": _rat(w.fn.coeffs),
            "incoming": bool(w.incoming),
            "function": wall_label(d, w),
        })
    return {
        "kind": "diagram",
        "fixed_data": dump_fixed_data(d.gamma),
        "seed": _int_rows(d.seed.basis),
        "order": d.order,
        "walls": walls,
    }


def diagram_from_doc(doc):
    if doc.get("kind") != "diagram" or "walls" not in doc:
        raise InvalidData("not a diagram document")
    gamma = load_fixed_data(doc["fixed_data"])
    seed = Seed(tuple(tuple(r) for r in doc["seed"]))
    order = int(doc["order"])
    d = ScatteringDiagram(gamma, seed, order, [])
    walls = []
    for i, w in enumerate(doc["walls"]):
        n0 = tuple(int(x) for x in w["normal"])
        sup = Cone(w["support"]["eq"], w["support"]["ineq"], gamma.rank)
        fn = WallFunction(n0, [parse_rational(c) for c in w["coeffs"]])
        walls.append(make_wall(d.grading, "w%d" % i, n0, sup, fn))
    d.walls = walls
    return d


def laurent_terms(poly):
    return [{"exponent": list(e), "coefficient": format_rational(c)}
            for e, c in sorted(poly.terms.items())]


def theta_to_doc(diagram, th):
    poly = th.to_laurent()
    return {
        "kind": "theta",
        "fixed_data": dump_fixed_data(diagram.gamma),
        "seed": _int_rows(diagram.seed.basis),
        "order": th.order,
        "m0": _rat(th.m0),
        "basepoint": _rat(th.basepoint),
        "chamber": th.chamber,
        "terms": laurent_terms(poly),
        "polynomial": poly.render(names(diagram.gamma)),
    }


def product_to_doc(diagram, p1, p2, table):
    factors = sorted([_rat(p1), _rat(p2)])
    rows = [{"q": _rat(q), "alpha": int(a)} for q, a in sorted(table.items())]
    return {
        "kind": "product",
        "fixed_data": dump_fixed_data(diagram.gamma),
        "order": diagram.order,
        "factors": factors,
        "constants": rows,
    }


def parse_vector(text, rank=None):
    try:
        v = [parse_rational(x) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise UsageError("cannot parse vector %r" % text)
    if rank is not None:
        if len(v) > rank:
            raise UsageError("vector %r is longer than the rank %d" % (text, rank))
        v += [Fraction(0)] * (rank - len(v))
    return v


def parse_laurent(text, rank):
    """'e1,e2,...=c; ...' into a Laurent polynomial."""
    terms = {}
    for part in text.split(";"):
        if not part.strip():
            continue
        if "=" in part:
            e, c = part.split("=", 1)
        else:
            e, c = part, "1"
        exp = tuple(int(x) for x in parse_vector(e, rank))
        terms[exp] = terms.get(exp, 0) + parse_rational(c)
    return Laurent(terms)


# -- verification suites ----------------------------------------------------------------

def _result(name, ok, checked, witness=None, **extra):
    out = {"suite": name, "pass": bool(ok), "checked": checked}
    if witness is not None:
        out["witness"] = witness
    out.update(extra)
    return out


def _small_exponent(rng, gamma, bound=2):
    while True:
        m = [rng.randint(-bound, bound) for _ in range(gamma.rank)]
        if any(m[i] for i in gamma.unfrozen):
            return m


def suite_consistency(diagram, rng, loops=50, pairs=5):
    rep = check_consistency(diagram, diagram.order, trials=loops, rng=rng)
    if not rep["ok"]:
        return _result("consistency", False, rep["checked"], rep)
    done = 0
    attempts = 0
    while done < pairs and attempts < 10 * pairs:
        attempts += 1
        m0 = _small_exponent(rng, diagram.gamma)
        q1, q2 = generic_basepoint(diagram, rng), generic_basepoint(diagram, rng)
        try:
            ok = theta_path_invariance(diagram, m0, q1, q2, rng=rng)
        except DegenerateError:
            continue
        done += 1
        if not ok:
            return _result("consistency", False, rep["checked"] + done,
                           {"m0": _rat(m0), "q1": _rat(q1), "q2": _rat(q2)})
    return _result("consistency", True, rep["checked"] + done)


def wall_positivity(diagram):
    """None, or the first wall whose function has a non-integral or negative binomial exponent."""
    for w in diagram.walls:
        for l, c in factor_binomial_powers(w.fn, diagram.order):
            if c < 0 or Fraction(c).denominator != 1:
                return {"wall": list(w.n0), "t_degree": l, "exponent": format_rational(c)}
    return None


def suite_positivity(diagram, rng, samples=5):
    bad = wall_positivity(diagram)
    if bad:
        return _result("positivity", False, len(diagram.walls), bad)
    done = 0
    for _ in range(4 * samples):
        if done >= samples:
            break
        m0 = _small_exponent(rng, diagram.gamma)
        try:
            th = theta_function(diagram, m0, generic_basepoint(diagram, rng))
        except DegenerateError:
            continue
        done += 1
        for e, c in th.to_laurent().terms.items():
            if c <= 0 or c.denominator != 1:
                return _result("positivity", False, len(diagram.walls) + done,
                               {"m0": _rat(m0), "exponent": list(e), "coefficient": format_rational(c)})
    return _result("positivity", True, len(diagram.walls) + done)


def suite_mutation(diagram, rng, trials=10):
    gamma = diagram.gamma
    checked = 0
    for k in gamma.unfrozen:
        moved = mutate_diagram(diagram, k)
        target = scatter(gamma, mutate_seed(diagram.seed, k, gamma), diagram.order)
        ok, wit = equivalent(moved, target, diagram.order, trials=trials, rng=rng,
                             valid=mutual_validity(diagram, target, k))
        checked += 1
        if not ok:
            return _result("mutation", False, checked, {"k": k, "detail": wit})
    return _result("mutation", True, checked)


def sign_coherent(vectors, coords):
    for j in coords:
        vals = [v[j] for v in vectors]
        if any(x > 0 for x in vals) and any(x < 0 for x in vals):
            return False
    return True


def same_sign(v):
    return not (any(x > 0 for x in v) and any(x < 0 for x in v))


def random_path(rng, gamma, max_len):
    uf = list(gamma.unfrozen)
    return [rng.choice(uf) for _ in range(rng.randint(0, max_len))]


def sign_check(gamma, path):
    """None when c- and g-vectors at the end of `path` are sign-coherent, else a witness."""
    uf = list(gamma.unfrozen)
    cv = c_vectors(gamma, None, path)
    for i in uf:
        if not same_sign(cv[i]):
            return {"path": list(path), "c_vector": _rat(cv[i])}
    gs = []
    for i in uf:
        m = [0] * gamma.rank
        m[i] = 1
        gs.append(g_vector(gamma, None, path, m))
    if not sign_coherent(gs, uf):
        return {"path": list(path), "g_vectors": [list(g) for g in gs]}
    return None


def suite_signs(gamma, rng, paths=50, max_len=8):
    for t in range(paths):
        bad = sign_check(gamma, random_path(rng, gamma, max_len))
        if bad:
            return _result("signs", False, t + 1, bad)
    return _result("signs", True, paths)


def suite_cluster_theta(gamma, rng, max_len=2, max_order=10):
    """theta at g-vectors against replayed cluster variables, for all short paths."""
    uf = list(gamma.unfrozen)
    jobs = []
    for l in range(max_len + 1):
        for path in iproduct(uf, repeat=l):
            for i in uf:
                m = [0] * gamma.rank
                m[i] = 1
                jobs.append((path, m))
    from .poly_ring import Grading
    gr = Grading(gamma, Seed.identity(gamma.rank))
    need = {}
    for path, m in jobs:
        g = g_vector(gamma, None, path, m)
        poly = cluster_monomial_laurent(gamma, None, path, m)
        need[(path, tuple(m))] = (g, poly, _required_order(gr, g, poly))
    orders = [v[2] for v in need.values() if v[2] is not None and v[2] <= max_order]
    diagram = scatter(gamma, None, max(orders + [1]))
    q = generic_basepoint(diagram, rng, chamber="+")
    checked = skipped = 0
    for (path, m), (g, poly, k) in need.items():
        if k is None:
            return _result("cluster-theta", False, checked, {"path": list(path), "m": m,
                                                             "reason": "not a theta polynomial shape"})
        if k > max_order:
            skipped += 1
            continue
        th = theta_function(diagram, g, q, diagram.order).to_laurent()
        checked += 1
        if th != poly:
            return _result("cluster-theta", False, checked, {"path": list(path), "m": m})
    return _result("cluster-theta", True, checked, skipped=skipped)


def _run_suite(args):
    name, gamma_doc, diagram_doc, order, seed_rng, opts = args
    rng = random.Random("%s:%s" % (seed_rng, name))
    gamma = load_fixed_data(gamma_doc)
    t0 = time.perf_counter()
    if name in ("consistency", "positivity", "mutation"):
        d = diagram_from_doc(diagram_doc) if diagram_doc else scatter(gamma, None, order)
        if name == "consistency":
            res = suite_consistency(d, rng)
        elif name == "positivity":
            res = suite_positivity(d, rng)
        else:
            res = suite_mutation(d, rng)
    elif name == "signs":
        res = suite_signs(gamma, rng, paths=opts.get("paths", 50))
    else:
        res = suite_cluster_theta(gamma, rng, max_len=opts.get("depth", 2))
    if opts.get("timings"):
        res["seconds"] = round(time.perf_counter() - t0, 3)
    return res


def verify(gamma, suites, order, seed_rng=0, diagram=None, threads=1, **opts):
    gdoc = dump_fixed_data(gamma)
    ddoc = diagram_to_doc(diagram) if diagram is not None else None
    jobs = [(s, gdoc, ddoc, order, seed_rng, opts) for s in suites]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(_run_suite, jobs))
    else:
        results = [_run_suite(j) for j in jobs]
    return {
        "kind": "report",
        "fixed_data": gdoc,
        "order": order,
        "seed_rng": seed_rng,
        "suites": results,
        "pass": all(r["pass"] for r in results),
    }


# -- SVG ----------------------------------------------------------------------------------

def _clip(dx, dy, window, two_sided):
    """Segment of {t*(dx,dy)} (t >= 0, or all t) inside the window, by Liang-Barsky."""
    x0, y0, x1, y1 = window
    lo, hi = (-1e18 if two_sided else 0.0), 1e18
    for p, q in ((-dx, -x0), (dx, x1), (-dy, -y0), (dy, y1)):
        if p == 0:
            if q < 0:
                return None
            continue
        t = q / p
        if p < 0:
            lo = max(lo, t)
        else:
            hi = min(hi, t)
    if lo > hi:
        return None
    return (lo * dx, lo * dy), (hi * dx, hi * dy)


def wall_slices(diagram, plane):
    """For each wall, its trace on the coordinate plane: (wall, direction, two_sided)."""
    i, j = plane
    n = diagram.gamma.rank
    out = []
    for w in diagram.walls:
        c = w.support
        rows = [(e[i], e[j]) for e in c.eqs]
        if not any(a or b for a, b in rows):
            raise UsageError("slice is not transverse to wall %s" % w.id)
        a, b = next((a, b) for a, b in rows if a or b)
        for vec in ([-b, a], [b, -a]):
            x = [0] * n
            x[i], x[j] = vec
            if c.contains(x):
                other = [0] * n
                other[i], other[j] = -vec[0], -vec[1]
                out.append((w, (vec[0], vec[1]), c.contains(other)))
                break
    return out


def render_svg(diagram, plane=(0, 1), window=(-3, -3, 3, 3), size=400):
    x0, y0, x1, y1 = [float(v) for v in window]
    lines = ['<?xml version="1.0" encoding="UTF-8"?>',
             '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" viewBox="0 0 %d %d">'
             % (size, size, size, size)]
    if x1 > x0 and y1 > y0:
        sx, sy = size / (x1 - x0), size / (y1 - y0)

        def px(x, y):
            return (x - x0) * sx, (y1 - y) * sy
        seen = set()
        for w, (dx, dy), two in wall_slices(diagram, plane):
            seg = _clip(float(dx), float(dy), (x0, y0, x1, y1), two)
            if seg is None:
                continue
            (ax, ay), (bx, by) = px(*seg[0]), px(*seg[1])
            if abs(ax - bx) < 1e-9 and abs(ay - by) < 1e-9:
                continue
            lab = wall_label(diagram, w)
            lines.append('  <line x1="%.3f" y1="%.3f" x2="%.3f" y2="%.3f" stroke="black" stroke-width="1.5"/>'
                         % (ax, ay, bx, by))
            key = (round(bx, 1), round(by, 1))
            off = 14 * sum(1 for k in seen if k == key)
            seen.add(key)
            lines.append('  <text x="%.3f" y="%.3f" font-size="11" font-family="monospace">%s</text>'
                         % (min(max(bx, 2), size - 120), min(max(by + off, 12), size - 4), _xml(lab)))
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _xml(s):
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


# -- commands ----------------------------------------------------------------------------

def _read_doc(path):
    try:
        with open(path) as fh:
            return parse(fh.read())
    except OSError as e:
        raise UsageError(str(e))


def _write(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _gamma(args):
    doc = _read_doc(args.seed)
    if doc.get("kind") == "diagram":
        return load_fixed_data(doc["fixed_data"]), diagram_from_doc(doc)
    return fixed_data_from_doc(doc, getattr(args, "principal", False)), None


def _diagram(args, order=None):
    gamma, d = _gamma(args)
    k = args.order if order is None else order
    if d is not None and (k is None or d.order >= k):
        return d
    return scatter(gamma, None, k if k is not None else 4)


def _basepoint(args, d):
    if getattr(args, "basepoint", None):
        return tuple(parse_vector(args.basepoint, d.gamma.rank))
    rng = random.Random(args.seed_rng)
    ch = None if args.basepoint_chamber == "generic" else args.basepoint_chamber
    return generic_basepoint(d, rng, chamber=ch)


def cmd_scatter(args):
    gamma, _ = _gamma(args)
    d = scatter(gamma, None, args.order, rng=random.Random(args.seed_rng))
    _write(emit(diagram_to_doc(d)), args.out)
    return 0


def cmd_theta(args):
    d = _diagram(args)
    m0 = parse_vector(args.m0, d.gamma.rank)
    th = theta_function(d, m0, _basepoint(args, d), args.order)
    _write(emit(theta_to_doc(d, th)), args.out)
    return 0


def cmd_product(args):
    d = _diagram(args)
    p1 = parse_vector(args.p1, d.gamma.rank)
    p2 = parse_vector(args.p2, d.gamma.rank)
    if sorted([p1, p2]) != [p1, p2]:
        p1, p2 = p2, p1
    table = theta_product(d, p1, p2, args.order, rng=random.Random(args.seed_rng))
    _write(emit(product_to_doc(d, p1, p2, table)), args.out)
    return 0


def _path(text):
    return [int(x) for x in text.split(",") if x.strip()] if text else []


def cmd_gvector(args):
    gamma, _ = _gamma(args)
    path = _path(args.path)
    m = [int(x) for x in parse_vector(args.m, gamma.rank)]
    g = g_vector(gamma, None, path, m)
    poly = cluster_monomial_laurent(gamma, None, path, m)
    doc = {"kind": "gvector", "fixed_data": dump_fixed_data(gamma), "path": path, "m": m,
           "g_vector": list(g), "cluster_monomial": poly.render(names(gamma))}
    _write(emit(doc), args.out)
    return 0


def cmd_cvectors(args):
    gamma, _ = _gamma(args)
    path = _path(args.path)
    cv = c_vectors(gamma, None, path)
    rows = [_rat(cv[i]) for i in gamma.unfrozen]
    doc = {"kind": "cvectors", "fixed_data": dump_fixed_data(gamma), "path": path,
           "c_vectors": rows, "sign_coherent": all(same_sign(cv[i]) for i in gamma.unfrozen)}
    _write(emit(doc), args.out)
    return 0


def cmd_mutate(args):
    d = _diagram(args)
    out = mutate_diagram(d, args.k)
    _write(emit(diagram_to_doc(out)), args.out)
    return 0


def cmd_expand(args):
    d = _diagram(args)
    g = parse_laurent(args.laurent, d.gamma.rank)
    q = _basepoint(args, d)
    coeffs = expand_in_theta_basis(g, d, q, args.order)
    doc = {"kind": "expansion", "fixed_data": dump_fixed_data(d.gamma), "order": d.order,
           "basepoint": _rat(q),
           "coefficients": [{"q": list(e), "alpha": format_rational(c)} for e, c in sorted(coeffs.items())]}
    _write(emit(doc), args.out)
    return 0


def cmd_verify(args):
    gamma, d = _gamma(args)
    suites = list(SUITES) if args.suite == "all" else [args.suite]
    if d is not None:
        order = d.order
    else:
        order = args.order if args.order is not None else 4
    threads = int(os.environ.get(THREADS_ENV, "1") or 1)
    rep = verify(gamma, suites, order, args.seed_rng, diagram=d, threads=threads,
                 timings=args.timings, paths=args.paths, depth=args.depth)
    _write(emit(rep), args.out)
    return 0 if rep["pass"] else 1


def cmd_svg(args):
    doc = _read_doc(args.diagram)
    d = diagram_from_doc(doc)
    plane = tuple(int(x) for x in args.plane.split(","))
    if len(plane) != 2 or not all(0 <= p < d.gamma.rank for p in plane) or plane[0] == plane[1]:
        raise UsageError("--plane needs two distinct coordinate indices")
    window = [float(x) for x in args.window.split(",")]
    if len(window) != 4:
        raise UsageError("--window needs x0,y0,x1,y1")
    _write(render_svg(d, plane, window), args.out)
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="clusterscat",
                                description="Exact scattering diagrams and theta functions.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, order=True):
        sp.add_argument("seed", help="seed document or diagram document (JSON)")
        sp.add_argument("--principal", action="store_true", help="use principal coefficients")
        if order:
            sp.add_argument("--order", type=int, default=None)
        sp.add_argument("--seed-rng", type=int, default=0)
        sp.add_argument("--out", default=None)

    sp = sub.add_parser("scatter", help="build the consistent diagram to an order")
    common(sp, order=False)
    sp.add_argument("--order", type=int, required=True)
    sp.set_defaults(func=cmd_scatter)

    sp = sub.add_parser("theta", help="theta function by broken lines")
    common(sp)
    sp.add_argument("--m0", required=True)
    sp.add_argument("--basepoint-chamber", choices=["+", "-", "generic"], default="+")
    sp.add_argument("--basepoint", default=None)
    sp.set_defaults(func=cmd_theta)

    sp = sub.add_parser("product", help="structure constants of a theta product")
    common(sp)
    sp.add_argument("--p1", required=True)
    sp.add_argument("--p2", required=True)
    sp.set_defaults(func=cmd_product)

    sp = sub.add_parser("gvector", help="g-vector and cluster monomial at the end of a path")
    common(sp, order=False)
    sp.add_argument("--path", default="")
    sp.add_argument("--m", required=True)
    sp.set_defaults(func=cmd_gvector)

    sp = sub.add_parser("cvectors", help="c-vectors at the end of a path")
    common(sp, order=False)
    sp.add_argument("--path", default="")
    sp.set_defaults(func=cmd_cvectors)

    sp = sub.add_parser("mutate", help="apply T_k to a diagram")
    common(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.set_defaults(func=cmd_mutate)

    sp = sub.add_parser("expand", help="expand a Laurent polynomial in theta functions")
    common(sp)
    sp.add_argument("--laurent", required=True, help="terms 'e1,e2=c;...'")
    sp.add_argument("--basepoint-chamber", choices=["+", "-", "generic"], default="+")
    sp.add_argument("--basepoint", default=None)
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("verify", help="run verification suites")
    common(sp)
    sp.add_argument("--suite", choices=list(SUITES) + ["all"], default="all")
    sp.add_argument("--paths", type=int, default=50, help="random paths for the signs suite")
    sp.add_argument("--depth", type=int, default=2, help="path length for cluster-theta")
    sp.add_argument("--timings", action="store_true", help="add wall-clock seconds (not deterministic)")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("svg", help="render a 2D slice of a diagram")
    sp.add_argument("diagram")
    sp.add_argument("--plane", default="0,1")
    sp.add_argument("--window", default="-3,-3,3,3")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_svg)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DegenerateError, StabilizationError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 1
    except (UsageError, InvalidData, KeyError, ValueError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
