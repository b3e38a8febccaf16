"""Small exact linear algebra over the rationals.

Everything here works on tuples of Fractions (or ints); matrices are lists of
row tuples.  Sizes stay tiny (ambient rank at most 3, plus one homogenizing
coordinate), so plain Gaussian elimination is the right tool.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


Vec = tuple  # tuple of Fraction/int, used informally throughout


def frac_vec(v) -> tuple:
    return tuple(x if type(x) is Fraction else Fraction(x) for x in v)


def vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vec_neg(a):
    return tuple(-x for x in a)


def vec_scale(c, a):
    return tuple(c * x for x in a)


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def is_zero(a) -> bool:
    return all(x == 0 for x in a)


def primitive(v) -> tuple:
    """Scale a rational vector to a primitive integer vector (same direction).

    The zero vector maps to itself.
    """
    if all(type(x) is int for x in v):
        ints = list(v)
    else:
        v = frac_vec(v)
        denom = 1
        for x in v:
            denom = denom * x.denominator // gcd(denom, x.denominator)
        ints = [int(x * denom) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x if x >= 0 else -x)
    if g == 0:
        return tuple(0 for _ in ints)
    return tuple(x // g for x in ints)


def sign_normalized(v) -> tuple:
    """Flip sign so the first nonzero coordinate is positive (for line reps)."""
    for x in v:
        if x != 0:
            return v if x > 0 else vec_neg(v)
    return v


def rref(rows):
    """Reduced row echelon form.  Returns (new_rows, pivot_columns).

    Accepts int or Fraction entries; arithmetic promotes as needed.
    """
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c]
        if type(inv) is int:
            inv = Fraction(inv)
        rows[r] = [x / inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return [tuple(row) for row in rows[:r]], pivots


def rank(rows) -> int:
    return len(rref(rows)[0])


def nullspace(rows, ncols=None):
    """Basis of {x : A x = 0} as primitive integer vectors."""
    if not rows:
        if ncols is None:
            raise ValueError("ncols required for empty system")
        return [tuple(1 if i == j else 0 for j in range(ncols)) for i in range(ncols)]
    ncols = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -red[i][f]
        basis.append(primitive(v))
    return basis


def solve(rows, rhs):
    """Solve A x = b.  Returns one solution tuple, or None if inconsistent.

    If the system is underdetermined an arbitrary solution is returned.
    """
    if not rows:
        return None
    ncols = len(rows[0])
    aug = [tuple(frac_vec(r)) + (Fraction(b),) for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    for row in red:
        if all(x == 0 for x in row[:-1]) and row[-1] != 0:
            return None
    x = [Fraction(0)] * ncols
    for i, p in enumerate(pivots):
        if p == ncols:
            return None
        x[p] = red[i][-1]
    return tuple(x)


def solve_unique(rows, rhs):
    """Solve A x = b requiring a unique solution; None otherwise."""
    if not rows or rank(rows) < len(rows[0]):
        return None
    return solve(rows, rhs)


def det(rows) -> Fraction:
    rows = [list(frac_vec(r)) for r in rows]
    n = len(rows)
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            result = -result
        result *= rows[c][c]
        inv = rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = Fraction(rows[i][c]) / inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return result


def integer_kernel_basis(int_rows, ncols):
    """Basis of the saturated lattice {x in Z^n : A x = 0} for integer A.

    Column-style Hermite reduction on the transpose; the unimodular column
    operations keep the kernel lattice saturated.
    """
    if not int_rows:
        return [tuple(1 if i == j else 0 for j in range(ncols)) for i in range(ncols)]
    m = len(int_rows)
    a = [[int(int_rows[i][j]) for j in range(ncols)] for i in range(m)]
    u = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]

    def col(mat, j):
        return [mat[i][j] for i in range(len(mat))]

    def addmul_col(mat, dst, src, f):
        for i in range(len(mat)):
            mat[i][dst] += f * mat[i][src]

    def swap_col(mat, i, j):
        for row in mat:
            row[i], row[j] = row[j], row[i]

    r = 0
    for i in range(m):
        # clear row i to the right of column r
        while True:
            nz = [j for j in range(r, ncols) if a[i][j] != 0]
            if not nz:
                break
            jmin = min(nz, key=lambda j: abs(a[i][j]))
            if jmin != r:
                swap_col(a, r, jmin)
                swap_col(u, r, jmin)
            done = True
            for j in range(r + 1, ncols):
                if a[i][j] != 0:
                    f = -(a[i][j] // a[i][r])
                    addmul_col(a, j, r, f)
                    addmul_col(u, j, r, f)
                    if a[i][j] != 0:
                        done = False
            if done:
                break
        if a[i][r] if r < ncols else 0:
            r += 1
            if r == ncols:
                break
    kernel = []
    for j in range(r, ncols):
        if all(a[i][j] == 0 for i in range(m)):
            kernel.append(primitive(col(u, j)))
    return kernel


def lattice_basis_of_span(vectors, ncols):
    """Canonical integer basis of (rational span of `vectors`) intersected Z^n."""
    red, _ = rref(vectors)
    if not red:
        return []
    # span = kernel of its orthogonal complement
    comp = nullspace(red, ncols)
    if not comp:
        basis = [tuple(1 if i == j else 0 for j in range(ncols)) for i in range(ncols)]
    else:
        int_rows = [primitive(v) for v in comp]
        basis = integer_kernel_basis(int_rows, ncols)
    return sorted(sign_normalized(b) for b in basis)
