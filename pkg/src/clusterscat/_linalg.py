"""Small exact linear algebra over the rationals.

Matrices are lists of rows.  Everything is Fraction based; the sizes met in
this package are tiny (at most 6 or so columns), so plain Gaussian
elimination is fast enough and keeps the results exact.
"""

from fractions import Fraction
from math import gcd


def fracs(v):
    return [Fraction(x) for x in v]


def dot(a, b):
    s = 0
    for x, y in zip(a, b):
        if x and y:
            s += x * y
    return s


def row_echelon(rows):
    """Return (reduced rows, pivot columns)."""
    m = [fracs(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                p = i
                break
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows):
    return len(row_echelon(rows)[1])


def nullspace(rows, ncols):
    """Basis of {x : rows . x = 0}."""
    red, piv = row_echelon(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, c in zip(red, piv):
            x[c] = -r[f]
        basis.append(x)
    return basis


def inverse(mat):
    n = len(mat)
    aug = [fracs(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    red, piv = row_echelon(aug)
    if piv[:n] != list(range(n)) or len(red) < n:
        raise ValueError("singular matrix")
    return [row[n:] for row in red]


def matmul(a, b):
    bt = list(zip(*b))
    return [[dot(row, col) for col in bt] for row in a]


def transpose(a):
    return [list(r) for r in zip(*a)]


def vecmat(v, a):
    """Row vector times matrix."""
    out = [Fraction(0)] * len(a[0])
    for x, row in zip(v, a):
        if x:
            for j, y in enumerate(row):
                if y:
                    out[j] += x * y
    return out


def det(mat):
    m = [fracs(r) for r in mat]
    n = len(m)
    sign = 1
    out = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            sign = -sign
        out *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return sign * out


def primitive(v):
    """Scale a rational vector to a primitive integer vector (same direction)."""
    v = fracs(v)
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def as_int_tuple(v):
    out = []
    for x in v:
        x = Fraction(x)
        if x.denominator != 1:
            raise ValueError("non-integral vector %r" % (v,))
        out.append(int(x))
    return tuple(out)
