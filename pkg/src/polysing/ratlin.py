"""Exact integer/rational linear algebra: gcd identities, Smith form, solving, determinants.

Matrices are row-major lists (or tuples) of equal-length rows with int or
Fraction entries; nothing here ever touches floating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DegenerateInput, ShapeError

Rat = Fraction

Vector = tuple
Matrix = Sequence[Sequence]


def _dims(a: Matrix) -> tuple[int, int]:
    m = len(a)
    n = len(a[0]) if m else 0
    if any(len(row) != n for row in a):
        raise ShapeError("ragged matrix")
    return m, n


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0.

    y is reduced to the smallest-absolute-value representative modulo a/g
    (ties resolved to the nonnegative one), which pins the output uniquely.
    """
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    g, bx, by = old_r, old_x, old_y
    if g < 0:
        g, bx, by = -g, -bx, -by
    if g == 0:
        return 0, 1, 0
    # reduce the b-coefficient modulo a/g, compensating on the a-side
    mod = abs(a) // g
    if mod:
        by = by % mod
        if 2 * by > mod:
            by -= mod
        bx = (g - by * b) // a
    return g, bx, by


def ext_gcd_multi(values: Sequence[int]) -> tuple[int, list[int]]:
    """gcd of a nonempty integer list together with a Bezout certificate.

    Folds a two-term extended gcd over the list left to right; the right-hand
    coefficient of each step is normalized as in :func:`ext_gcd`, so equal
    inputs always give byte-identical output.
    """
    if not values:
        raise DegenerateInput("ext_gcd_multi needs a nonempty list")
    g = abs(values[0])
    coeffs = [1 if values[0] >= 0 else -1]
    if values[0] == 0:
        coeffs = [1]
    for v in values[1:]:
        if g == 0:
            if v == 0:
                coeffs.append(0)
                continue
            coeffs = [0] * len(coeffs)
            coeffs.append(1 if v > 0 else -1)
            g = abs(v)
            continue
        g_new, x, y = ext_gcd(g, v)
        coeffs = [c * x for c in coeffs]
        coeffs.append(y)
        g = g_new
    if g == 0:
        raise DegenerateInput("all-zero input to ext_gcd_multi")
    return g, coeffs


def vec_gcd(v: Sequence[int]) -> int:
    return math.gcd(*[abs(int(x)) for x in v]) if v else 0


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries (zero stays zero)."""
    g = vec_gcd(v)
    if g == 0:
        return tuple(0 for _ in v)
    return tuple(int(x) // g for x in v)


def scale_to_int(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Clear denominators and make the result primitive."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
    return primitive([int(Fraction(x) * den) for x in v])


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v, strict=True))


def vec_add(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vec_sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v, strict=True))


@dataclass(frozen=True)
class SmithForm:
    """U @ A @ V is diagonal with a divisibility chain; U, V unimodular."""

    diagonal: tuple[int, ...]
    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(a: Matrix) -> SmithForm:
    """Smith normal form by gcd pivoting, tracking both unimodular transforms."""
    m, n = _dims(a)
    d = [[int(x) for x in row] for row in a]
    u = _identity(m)
    v = _identity(n)

    def row_op(i, j, q):  # row_i -= q * row_j
        d[i] = [x - q * y for x, y in zip(d[i], d[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for row in d:
            row[i] -= q * row[j]
        for row in v:
            row[i] -= q * row[j]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def negate_row(i):
        d[i] = [-x for x in d[i]]
        u[i] = [-x for x in u[i]]

    size = min(m, n)
    for k in range(size):
        # move a nonzero entry of minimal magnitude to the pivot
        while True:
            best = None
            for i in range(k, m):
                for j in range(k, n):
                    if d[i][j] != 0 and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            i, j = best
            if i != k:
                swap_rows(k, i)
            if j != k:
                swap_cols(k, j)
            dirty = False
            for i in range(k + 1, m):
                if d[i][k] != 0:
                    row_op(i, k, d[i][k] // d[k][k])
                    dirty = dirty or d[i][k] != 0
            for j in range(k + 1, n):
                if d[k][j] != 0:
                    col_op(j, k, d[k][j] // d[k][k])
                    dirty = dirty or d[k][j] != 0
            if not dirty and all(d[i][k] == 0 for i in range(k + 1, m)) and all(
                d[k][j] == 0 for j in range(k + 1, n)
            ):
                break
        if d[k][k] < 0:
            negate_row(k)

    # enforce the divisibility chain d_k | d_{k+1}
    changed = True
    while changed:
        changed = False
        for k in range(size - 1):
            violates = (
                d[k + 1][k + 1] != 0
                if d[k][k] == 0
                else d[k + 1][k + 1] % d[k][k] != 0
            )
            if violates:
                # fold the offending entry back into the pivot column and re-reduce
                col_op(k, k + 1, -1)  # col_k += col_{k+1}
                a2 = d[k][k]
                b2 = d[k + 1][k]
                g, x, y = ext_gcd(a2, b2)
                # rows (k, k+1) <- (x*row_k + y*row_{k+1}, ...) keeping det +-1
                rk = [x * p + y * q for p, q in zip(d[k], d[k + 1])]
                uk = [x * p + y * q for p, q in zip(u[k], u[k + 1])]
                s, t = (b2 // g, -(a2 // g)) if g else (0, 1)
                rk1 = [s * p + t * q for p, q in zip(d[k], d[k + 1])]
                uk1 = [s * p + t * q for p, q in zip(u[k], u[k + 1])]
                d[k], d[k + 1] = rk, rk1
                u[k], u[k + 1] = uk, uk1
                for j in range(k + 1, n):
                    if d[k][j] != 0:
                        col_op(j, k, d[k][j] // d[k][k])
                if d[k][k] < 0:
                    negate_row(k)
                if d[k + 1][k + 1] < 0:
                    negate_row(k + 1)
                changed = True
    diag = tuple(d[k][k] for k in range(size))
    return SmithForm(diag, tuple(tuple(r) for r in u), tuple(tuple(r) for r in v))


def determinant(a: Matrix):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    m, n = _dims(a)
    if m != n:
        raise ShapeError(f"determinant needs a square matrix, got {m}x{n}")
    if n == 0:
        return 1
    work = [[Fraction(x) if isinstance(x, Fraction) else int(x) for x in row] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if work[k][k] == 0:
            pivot_row = next((i for i in range(k + 1, n) if work[i][k] != 0), None)
            if pivot_row is None:
                return 0 * work[0][0]
            work[k], work[pivot_row] = work[pivot_row], work[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = work[i][j] * work[k][k] - work[i][k] * work[k][j]
                if isinstance(num, Fraction):
                    work[i][j] = num / prev
                else:
                    work[i][j] = num // prev
            work[i][k] = 0
        prev = work[k][k]
    return sign * work[n - 1][n - 1]


@dataclass(frozen=True)
class Unique:
    x: tuple[Fraction, ...]


@dataclass(frozen=True)
class Inconsistent:
    """certificate y satisfies y @ A = 0 and y . b != 0."""

    certificate: tuple[Fraction, ...]


@dataclass(frozen=True)
class Underdetermined:
    particular: tuple[Fraction, ...]
    nullspace: tuple[tuple[Fraction, ...], ...]


Solution = Unique | Inconsistent | Underdetermined


def solve_exact(a: Matrix, b: Sequence) -> Solution:
    """Classify and solve A x = b exactly over the rationals."""
    m, n = _dims(a)
    if len(b) != m:
        raise ShapeError("right-hand side length mismatch")
    r = [[Fraction(x) for x in row] for row in a]
    e = [[Fraction(1) if i == j else Fraction(0) for j in range(m)] for i in range(m)]
    rhs = [Fraction(x) for x in b]

    pivots: list[tuple[int, int]] = []
    row = 0
    for col in range(n):
        piv = next((i for i in range(row, m) if r[i][col] != 0), None)
        if piv is None:
            continue
        r[row], r[piv] = r[piv], r[row]
        e[row], e[piv] = e[piv], e[row]
        rhs[row], rhs[piv] = rhs[piv], rhs[row]
        inv = 1 / r[row][col]
        r[row] = [x * inv for x in r[row]]
        e[row] = [x * inv for x in e[row]]
        rhs[row] *= inv
        for i in range(m):
            if i != row and r[i][col] != 0:
                f = r[i][col]
                r[i] = [x - f * y for x, y in zip(r[i], r[row])]
                e[i] = [x - f * y for x, y in zip(e[i], e[row])]
                rhs[i] -= f * rhs[row]
        pivots.append((row, col))
        row += 1
        if row == m:
            break
    for i in range(row, m):
        if rhs[i] != 0:
            return Inconsistent(tuple(e[i]))
    pivot_cols = {c for _, c in pivots}
    x = [Fraction(0)] * n
    for rr, cc in pivots:
        x[cc] = rhs[rr]
    free = [c for c in range(n) if c not in pivot_cols]
    if not free:
        return Unique(tuple(x))
    basis = []
    for f in free:
        vec = [Fraction(0)] * n
        vec[f] = Fraction(1)
        for rr, cc in pivots:
            vec[cc] = -r[rr][f]
        basis.append(tuple(vec))
    return Underdetermined(tuple(x), tuple(basis))


def _int_rank(a: Matrix) -> int:
    rows = [list(r) for r in a]
    m = len(rows)
    n = len(rows[0]) if m else 0
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, m) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        a0 = pr[col]
        for i in range(rank + 1, m):
            b0 = rows[i][col]
            if b0:
                g = math.gcd(a0, b0)
                fa, fb = a0 // g, b0 // g
                rows[i] = [fa * y - fb * x for y, x in zip(rows[i], pr)]
        rank += 1
        if rank == m:
            break
    return rank


def matrix_rank(a: Matrix) -> int:
    m, n = _dims(a)
    if m == 0 or n == 0:
        return 0
    if all(isinstance(x, int) for row in a for x in row):
        return _int_rank(a)
    r = [[Fraction(x) for x in row] for row in a]
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, m) if r[i][col] != 0), None)
        if piv is None:
            continue
        r[rank], r[piv] = r[piv], r[rank]
        inv = 1 / r[rank][col]
        r[rank] = [x * inv for x in r[rank]]
        for i in range(m):
            if i != rank and r[i][col] != 0:
                f = r[i][col]
                r[i] = [x - f * y for x, y in zip(r[i], r[rank])]
        rank += 1
        if rank == m:
            break
    return rank


def saturated_basis(rows: Sequence[Sequence[int]], ambient: int) -> list[tuple[int, ...]]:
    """Basis of the saturation of the row lattice, i.e. of (span rows) cap Z^ambient.

    Comes from the Smith decomposition: with U A V = D the first rank rows of
    V^-1 span the saturation.
    """
    rows = [tuple(int(x) for x in r) for r in rows]
    if not rows:
        return []
    sf = smith_normal_form(rows)
    rank = sum(1 for x in sf.diagonal if x != 0)
    v_inv = invert_unimodular(sf.right)
    return [tuple(v_inv[i]) for i in range(rank)]


def invert_unimodular(v: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(v)
    sol_cols = []
    for j in range(n):
        b = [Fraction(1) if i == j else Fraction(0) for i in range(n)]
        res = solve_exact(v, b)
        assert isinstance(res, Unique)
        sol_cols.append([int(x) for x in res.x])
    return [[sol_cols[j][i] for j in range(n)] for i in range(n)]
