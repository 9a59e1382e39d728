"""Exact integer / rational linear algebra kernels.

All arithmetic is done with Python ints and ``fractions.Fraction``; nothing
in this package ever touches floating point.  Matrices are sequences of row
vectors.  Integer routines (HNF, SNF, kernels) never leave the integers;
rational routines are plain Gaussian elimination over Fraction.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (x, y, g) with x*a + y*b == g == gcd(a, b) and g >= 0."""
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def hnf(rows, transform: bool = False):
    """Row-style Hermite normal form of an integer matrix.

    Returns the list of nonzero HNF rows (pivots positive, entries above a
    pivot reduced into [0, pivot)).  With ``transform=True`` also returns a
    unimodular U with ``U * rows == H`` padded by zero rows, so the tail rows
    of U are a basis of the left kernel.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    H = [list(map(int, r)) for r in rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)] if transform else None
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if H[i][c]), None)
        if piv is None:
            continue
        H[r], H[piv] = H[piv], H[r]
        if U is not None:
            U[r], U[piv] = U[piv], U[r]
        for i in range(r + 1, m):
            if not H[i][c]:
                continue
            a, b = H[r][c], H[i][c]
            x, y, g = xgcd(a, b)
            ag, bg = a // g, b // g
            Hr, Hi = H[r], H[i]
            for j in range(n):
                t = x * Hr[j] + y * Hi[j]
                Hi[j] = ag * Hi[j] - bg * Hr[j]
                Hr[j] = t
            if U is not None:
                Ur, Ui = U[r], U[i]
                for j in range(m):
                    t = x * Ur[j] + y * Ui[j]
                    Ui[j] = ag * Ui[j] - bg * Ur[j]
                    Ur[j] = t
        if H[r][c] < 0:
            H[r] = [-v for v in H[r]]
            if U is not None:
                U[r] = [-v for v in U[r]]
        p = H[r][c]
        for i in range(r):
            q = H[i][c] // p
            if q:
                Hi, Hr = H[i], H[r]
                for j in range(n):
                    Hi[j] -= q * Hr[j]
                if U is not None:
                    Ui, Ur = U[i], U[r]
                    for j in range(m):
                        Ui[j] -= q * Ur[j]
        r += 1
        if r == m:
            break
    result = [tuple(row) for row in H[:r]]
    if transform:
        return result, [tuple(row) for row in U]
    return result


def left_kernel(rows, n_cols=None):
    """Basis of {x in Z^m : x * rows == 0} (combinations of rows vanishing).

    The returned basis is saturated (it spans the full rational kernel and
    the quotient is torsion free); this is automatic for kernels.
    """
    m = len(rows)
    if m == 0:
        return []
    H, U = hnf(rows, transform=True)
    return [list(U[i]) for i in range(len(H), m)]


def right_kernel(rows, n_cols):
    """Basis of {v in Z^n : rows * v == 0}."""
    t = [[rows[i][j] for i in range(len(rows))] for j in range(n_cols)]
    return left_kernel(t, len(rows))


def saturate_rows(rows, n_cols):
    """Saturation of the row lattice: (Q-row-span) intersected with Z^n.

    Computed as the kernel of the kernel; needs no fraction arithmetic.
    """
    live = [r for r in rows if any(r)]
    if not live:
        return []
    ker = right_kernel(live, n_cols)
    if not ker:
        return [list(r) for r in hnf([[int(i == j) for j in range(n_cols)]
                                      for i in range(n_cols)])]
    t = [[ker[i][j] for i in range(len(ker))] for j in range(n_cols)]
    return [list(r) for r in hnf(left_kernel(t, len(ker)))]


def snf_invariants(rows):
    """Nontrivial invariant factors d1 | d2 | ... of an integer matrix."""
    A = [list(map(int, r)) for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    res = []
    t = 0
    while t < m and t < n:
        # find a nonzero entry in the remaining block
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j]:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i, j = piv
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            # clear column t
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    a, b = A[t][t], A[i][t]
                    if b % a == 0:
                        q = b // a
                        for j in range(t, n):
                            A[i][j] -= q * A[t][j]
                    else:
                        x, y, g = xgcd(a, b)
                        ag, bg = a // g, b // g
                        for j in range(t, n):
                            u, v = A[t][j], A[i][j]
                            A[t][j] = x * u + y * v
                            A[i][j] = ag * v - bg * u
                        done = False
            # clear row t
            for j in range(t + 1, n):
                if A[t][j]:
                    a, b = A[t][t], A[t][j]
                    if b % a == 0:
                        q = b // a
                        for i in range(t, m):
                            A[i][j] -= q * A[i][t]
                    else:
                        x, y, g = xgcd(a, b)
                        ag, bg = a // g, b // g
                        for i in range(t, m):
                            u, v = A[i][t], A[i][j]
                            A[i][t] = x * u + y * v
                            A[i][j] = ag * v - bg * u
                        done = False
            if not done:
                continue
            # divisibility: pivot must divide the rest of the block
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % A[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            for j in range(t, n):
                A[t][j] += A[bad][j]
        res.append(abs(A[t][t]))
        t += 1
    # normalize divisibility chain (the loop above already enforces it)
    return [d for d in res if d != 1]


def snf_with_transforms(rows, n_cols=None):
    """Smith form with transforms: returns (diag, U, V) with U*A*V diagonal.

    diag is the list of diagonal entries (nonnegative, divisibility chain),
    padded conceptually by zeros; U is m x m and V is n x n, both unimodular.
    """
    A = [list(map(int, r)) for r in rows]
    m = len(A)
    n = n_cols if n_cols is not None else (len(A[0]) if m else 0)
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_op(x, y, g, ag, bg, r1, r2):
        Ar1, Ar2 = A[r1], A[r2]
        Ur1, Ur2 = U[r1], U[r2]
        for j in range(n):
            u, v = Ar1[j], Ar2[j]
            Ar1[j] = x * u + y * v
            Ar2[j] = ag * v - bg * u
        for j in range(m):
            u, v = Ur1[j], Ur2[j]
            Ur1[j] = x * u + y * v
            Ur2[j] = ag * v - bg * u

    def col_op(x, y, g, ag, bg, c1, c2):
        for i in range(m):
            u, v = A[i][c1], A[i][c2]
            A[i][c1] = x * u + y * v
            A[i][c2] = ag * v - bg * u
        for i in range(n):
            u, v = V[i][c1], V[i][c2]
            V[i][c1] = x * u + y * v
            V[i][c2] = ag * v - bg * u

    diag = []
    t = 0
    while t < m and t < n:
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j]:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i, j = piv
        if i != t:
            A[t], A[i] = A[i], A[t]
            U[t], U[i] = U[i], U[t]
        if j != t:
            for row in A:
                row[t], row[j] = row[j], row[t]
            for row in V:
                row[t], row[j] = row[j], row[t]
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    a, b = A[t][t], A[i][t]
                    if b % a == 0:
                        q = b // a
                        for j in range(n):
                            A[i][j] -= q * A[t][j]
                        for j in range(m):
                            U[i][j] -= q * U[t][j]
                    else:
                        x, y, g = xgcd(a, b)
                        row_op(x, y, g, a // g, b // g, t, i)
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    a, b = A[t][t], A[t][j]
                    if b % a == 0:
                        q = b // a
                        for i in range(m):
                            A[i][j] -= q * A[i][t]
                        for i in range(n):
                            V[i][j] -= q * V[i][t]
                    else:
                        x, y, g = xgcd(a, b)
                        col_op(x, y, g, a // g, b // g, t, j)
                        done = False
            if not done:
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % A[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            for j in range(n):
                A[t][j] += A[bad][j]
            for j in range(m):
                U[t][j] += U[bad][j]
        if A[t][t] < 0:
            for j in range(n):
                A[t][j] = -A[t][j]
            for j in range(m):
                U[t][j] = -U[t][j]
        diag.append(A[t][t])
        t += 1
    return diag, [tuple(r) for r in U], [tuple(r) for r in V]


# ---------------------------------------------------------------------------
# rational elimination

def rref(rows):
    """Reduced row echelon form over Q.  Returns (rows, pivot_columns)."""
    M = [[Fraction(x) for x in r] for r in rows]
    m = len(M)
    n = len(M[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [v * inv for v in M[r]]
        for i in range(m):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return [tuple(row) for row in M[:r]], pivots


def span_basis(rows):
    """Echelonized basis of the Q-span of the given row vectors."""
    basis, _ = rref([r for r in rows if any(r)])
    return basis


def in_span(basis_rows, v) -> bool:
    return solve_coords(basis_rows, v) is not None


def solve_coords(basis_rows, v):
    """Coefficients x with sum(x_i * basis_rows[i]) == v, or None.

    basis_rows must be linearly independent.
    """
    r = len(basis_rows)
    if r == 0:
        return () if not any(v) else None
    n = len(v)
    # augmented system over the transpose: columns are the basis rows
    M = [[Fraction(basis_rows[i][j]) for i in range(r)] + [Fraction(v[j])]
         for j in range(n)]
    reduced, pivots = rref(M)
    coeffs = [Fraction(0)] * r
    for row, p in zip(reduced, pivots):
        if p == r:
            return None  # inconsistent
        coeffs[p] = row[r]
    return tuple(coeffs)


def mat_apply(A, v):
    """Apply matrix A (list of rows) to column vector v."""
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def mat_mul(A, B):
    n = len(B)
    p = len(B[0])
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(n))
                       for j in range(p)) for i in range(len(A)))


def mat_identity(n, one=1):
    return tuple(tuple(one if i == j else 0 * one for j in range(n)) for i in range(n))


def mat_inv(A):
    """Inverse of a square matrix over Q, or None if singular."""
    n = len(A)
    M = [[Fraction(A[i][j]) for j in range(n)] +
         [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    reduced, pivots = rref(M)
    if pivots != list(range(n)):
        return None
    return tuple(tuple(row[n:]) for row in reduced)


def det(A):
    """Determinant over Q by fraction-free-ish Gaussian elimination."""
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    sign = 1
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            sign = -sign
        result *= M[c][c]
        inv = 1 / M[c][c]
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] * inv
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return result * sign


def lcm_list(values) -> int:
    out = 1
    for v in values:
        if v:
            out = out * v // gcd(out, v)
    return out
