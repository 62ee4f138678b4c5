"""Exact linear algebra: Fraction matrices and integer Hermite normal form.

Matrices are tuples of row tuples.  Everything here is desk scale
(dimension <= 32), so classical fraction-free or Gaussian algorithms are
used; no effort is made to be clever about coefficient growth.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import List, Sequence, Tuple

Matrix = Tuple[Tuple[Fraction, ...], ...]


def mat(rows) -> Matrix:
    return tuple(tuple(Fraction(c) for c in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(a: Matrix, v: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def vec_mat(v: Sequence[Fraction], a: Matrix) -> Tuple[Fraction, ...]:
    return tuple(sum(v[i] * a[i][j] for i in range(len(v))) for j in range(len(a[0])))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def mat_det(a: Matrix) -> Fraction:
    n = len(a)
    m = [list(row) for row in a]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = Fraction(1) / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] == 0:
                continue
            f = m[r][col] * inv
            for c in range(col, n):
                m[r][c] -= f * m[col][c]
    return det


def mat_inv(a: Matrix) -> Matrix:
    n = len(a)
    m = [list(row) + [Fraction(1 if i == j else 0) for j in range(n)]
         for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        m[col], m[pivot] = m[pivot], m[col]
        inv = Fraction(1) / m[col][col]
        m[col] = [c * inv for c in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return tuple(tuple(row[n:]) for row in m)


def solve(a: Matrix, v: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    return mat_vec(mat_inv(a), tuple(Fraction(c) for c in v))


def kernel(a: Matrix) -> List[Tuple[Fraction, ...]]:
    """Basis of the right kernel {x : a x = 0} over Q."""
    if not a:
        return []
    rows = [list(r) for r in a]
    ncols = len(rows[0])
    pivots = {}
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots[c] = r
        r += 1
        if r == len(rows):
            break
    basis = []
    free = [c for c in range(ncols) if c not in pivots]
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for pc, pr in pivots.items():
            vec[pc] = -rows[pr][fc]
        basis.append(tuple(vec))
    return basis


# ---------------------------------------------------------------------------
# Integer lattices (row convention: rows of the matrix generate the lattice)
# ---------------------------------------------------------------------------

def hnf_rows(rows: Sequence[Sequence[int]]) -> Tuple[Tuple[int, ...], ...]:
    """Canonical row Hermite normal form of the lattice spanned by `rows`.

    Output rows are sorted by pivot column; pivots positive; entries above
    each pivot reduced to [0, pivot).  Zero rows are dropped, so equal
    lattices give equal tuples.
    """
    remaining = [list(map(int, r)) for r in rows if any(r)]
    if not remaining:
        return ()
    ncols = len(remaining[0])
    result: List[List[int]] = []
    pivot_cols: List[int] = []
    for col in range(ncols):
        having = [r for r in remaining if r[col] != 0]
        remaining = [r for r in remaining if r[col] == 0]
        if not having:
            continue
        # Euclid on the col entries until a single row survives
        while len(having) > 1:
            having.sort(key=lambda r: abs(r[col]))
            head = having[0]
            new_having = [head]
            for r in having[1:]:
                q = r[col] // head[col]
                rr = [a - q * b for a, b in zip(r, head)]
                if rr[col] != 0:
                    new_having.append(rr)
                elif any(rr):
                    remaining.append(rr)
            having = new_having
        piv = having[0]
        if piv[col] < 0:
            piv = [-c for c in piv]
        result.append(piv)
        pivot_cols.append(col)
    # reduce entries above each pivot into [0, pivot); ascending pivot order
    # so a later subtraction cannot disturb an already-reduced column
    for j in range(len(result)):
        for i in range(j + 1, len(result)):
            pc = pivot_cols[i]
            q = result[j][pc] // result[i][pc]
            if q:
                result[j] = [a - q * b for a, b in zip(result[j], result[i])]
    return tuple(tuple(r) for r in result)


def _pivot_col(row) -> int:
    for i, c in enumerate(row):
        if c != 0:
            return i
    return len(row)


def hnf_det(hnf: Sequence[Sequence[int]]) -> int:
    """Product of pivots of a full-rank HNF (the lattice index in Z^n)."""
    det = 1
    for row in hnf:
        det *= row[_pivot_col(row)]
    return det


def lattice_sum(a, b):
    return hnf_rows(list(a) + list(b))


def rational_hnf(rows: Sequence[Sequence[Fraction]]):
    """HNF of a rational-row lattice: returns (integer_hnf, denominator)."""
    den = 1
    for r in rows:
        for c in r:
            f = Fraction(c)
            den = den * f.denominator // gcd(den, f.denominator)
    int_rows = [[int(Fraction(c) * den) for c in r] for r in rows]
    h = hnf_rows(int_rows)
    # normalize gcd between entries and denominator
    g = den
    for r in h:
        for c in r:
            g = gcd(g, abs(c))
            if g == 1:
                break
    if g > 1:
        h = tuple(tuple(c // g for c in r) for r in h)
        den //= g
    return h, den


def lll_transform(gram: Matrix, delta: Fraction = Fraction(3, 4)) -> Tuple[Tuple[int, ...], ...]:
    """LLL over an exact PSD Gram matrix; returns the unimodular row transform.

    The reduced basis is U @ (old basis).  Exact rational arithmetic
    throughout; dimensions here are tiny so the GSO is recomputed per sweep.
    """
    n = len(gram)
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def cur(i, j):
        return sum(U[i][k] * gram[k][l] * U[j][l] for k in range(n) for l in range(n))

    def gso():
        mu = [[Fraction(0)] * n for _ in range(n)]
        bstar = [Fraction(0)] * n
        for i in range(n):
            bstar[i] = cur(i, i)
            for j in range(i):
                if bstar[j] == 0:
                    continue
                mu[i][j] = (cur(i, j) - sum(mu[i][t] * mu[j][t] * bstar[t]
                                            for t in range(j))) / bstar[j]
                bstar[i] -= mu[i][j] ** 2 * bstar[j]
        return mu, bstar

    k = 1
    guard = 0
    while k < n:
        guard += 1
        if guard > 10000:
            break
        mu, bstar = gso()
        for j in range(k - 1, -1, -1):
            q = mu[k][j]
            r = (q.numerator * 2 + q.denominator) // (2 * q.denominator)  # round
            if r:
                U[k] = [a - r * b for a, b in zip(U[k], U[j])]
                mu, bstar = gso()
        if bstar[k] >= (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            U[k], U[k - 1] = U[k - 1], U[k]
            k = max(k - 1, 1)
    return tuple(tuple(r) for r in U)


def lattice_intersect(rows_a: Sequence[Sequence[Fraction]],
                      rows_b: Sequence[Sequence[Fraction]]):
    """Intersection of two full-rank rational lattices (rows = bases).

    Uses duality: (A cap B) = (A* + B*)* with duals w.r.t. the standard
    inner product.
    """
    A = mat(rows_a)
    B = mat(rows_b)
    Ad = transpose(mat_inv(A))
    Bd = transpose(mat_inv(B))
    h, den = rational_hnf(list(Ad) + list(Bd))
    S = mat([[Fraction(c, den) for c in row] for row in h])
    inter = transpose(mat_inv(S))
    return inter
