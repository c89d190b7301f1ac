"""Exact integer and rational linear algebra.

Integer kernel lattices, exact determinants, rational linear solves, and
exact convex-hull membership via a phase-1 simplex with Bland's rule.
Everything is arbitrary precision: plain ``int`` for lattice work,
``fractions.Fraction`` for rational pivoting.  No floating point anywhere.

Matrices are passed around as sequences of equal-length integer rows; all
operations are pure and never mutate their arguments.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

# Exact scalar type used throughout the package for rational results.
Rational = Fraction

IntRows = Sequence[Sequence[int]]


def _copy_rows(rows: IntRows) -> list[list[int]]:
    out = [[int(x) for x in row] for row in rows]
    if out:
        width = len(out[0])
        for i, row in enumerate(out):
            if len(row) != width:
                raise ValueError(f"ragged matrix: row {i} has length {len(row)}, expected {width}")
    return out


def vector_gcd(vec: Sequence[int]) -> int:
    g = 0
    for x in vec:
        g = gcd(g, x)
    return g


def make_primitive(vec: Sequence[int]) -> tuple[int, ...]:
    """Divide out the content and fix the sign of the first nonzero entry to +."""
    g = vector_gcd(vec)
    if g == 0:
        return tuple(vec)
    out = [x // g for x in vec]
    for x in out:
        if x:
            if x < 0:
                out = [-y for y in out]
            break
    return tuple(out)


def kernel_lattice(rows: IntRows) -> list[tuple[int, ...]]:
    """Basis of the integer left-kernel lattice ``{c : c^T M = 0}``.

    Row-reduces M over the integers while carrying a unimodular transform, so
    the returned basis generates the full lattice (not a finite-index
    sublattice) and every basis vector is primitive.  Empty list when M has
    full row rank.
    """
    h = _copy_rows(rows)
    m = len(h)
    ncols = len(h[0]) if m else 0
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    r = 0
    for col in range(ncols):
        while True:
            live = [i for i in range(r, m) if h[i][col] != 0]
            if not live:
                break
            if len(live) == 1:
                i = live[0]
                h[r], h[i] = h[i], h[r]
                u[r], u[i] = u[i], u[r]
                r += 1
                break
            pivot = min(live, key=lambda i: abs(h[i][col]))
            p = h[pivot][col]
            for i in live:
                if i == pivot:
                    continue
                q = h[i][col] // p
                if q:
                    hi, hp = h[i], h[pivot]
                    for j in range(col, ncols):
                        hi[j] -= q * hp[j]
                    ui, up = u[i], u[pivot]
                    for j in range(m):
                        ui[j] -= q * up[j]
    return [make_primitive(u[i]) for i in range(r, m)]


def determinant(rows: IntRows) -> int:
    """Exact determinant via Bareiss fraction-free elimination."""
    a = _copy_rows(rows)
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant requires a square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            ai, ak = a[i], a[k]
            for j in range(k + 1, n):
                ai[j] = (ai[j] * pivot - aik * ak[j]) // prev
            ai[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def _row_reduce(
    aug: list[list[Fraction]], ncols: int
) -> tuple[list[int], bool]:
    """In-place Gauss-Jordan on an augmented matrix.

    Reduces the first `ncols` columns; returns (pivot column list, consistent)
    where consistency checks that no row reads 0 = nonzero in the augmented
    part.
    """
    m = len(aug)
    width = len(aug[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot_row = None
        for i in range(r, m):
            if aug[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        aug[r], aug[pivot_row] = aug[pivot_row], aug[r]
        inv = 1 / aug[r][col]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
    # Rows below the last pivot are zero in the reduced columns, so any
    # residue in the augmented part marks an inconsistent system.
    consistent = all(not any(row[ncols:]) for row in aug[r:]) if width > ncols else True
    return pivots, consistent


def solve_rational(
    rows: IntRows, rhs: Sequence[Fraction | int]
) -> Optional[tuple[tuple[Fraction, ...], int]]:
    """Solve ``M x = b`` exactly over the rationals.

    Returns ``(particular_solution, num_free)`` with free variables set to
    zero and ``num_free = cols - rank(M)``, or None when inconsistent.
    """
    mat = _copy_rows(rows)
    m = len(mat)
    if len(rhs) != m:
        raise ValueError(f"rhs length {len(rhs)} does not match {m} rows")
    ncols = len(mat[0]) if m else 0
    aug = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(mat)]
    pivots, consistent = _row_reduce(aug, ncols)
    if not consistent:
        return None
    x = [Fraction(0)] * ncols
    for r, col in enumerate(pivots):
        x[col] = aug[r][ncols]
    return tuple(x), ncols - len(pivots)


def rank_rational(rows: IntRows) -> int:
    mat = _copy_rows(rows)
    if not mat:
        return 0
    aug = [[Fraction(x) for x in row] for row in mat]
    pivots, _ = _row_reduce(aug, len(mat[0]))
    return len(pivots)


def convex_feasible(rows: IntRows) -> Optional[tuple[Fraction, ...]]:
    """Exact test whether the zero vector lies in the convex hull of `rows`.

    Returns rational weights lambda with lambda_j >= 0, sum 1 and
    ``sum_j lambda_j rows[j] = 0`` when feasible, else None.  Solved as a
    phase-1 simplex with Bland's rule (guaranteed termination), pivoting in
    exact rational arithmetic.
    """
    pts = _copy_rows(rows)
    m = len(pts)
    if m == 0:
        return None
    dim = len(pts[0])
    ncon = dim + 1
    zero, one = Fraction(0), Fraction(1)
    # Tableau columns: m lambda variables, ncon artificials, rhs.
    tableau = []
    for i in range(dim):
        tableau.append([Fraction(pts[j][i]) for j in range(m)]
                       + [one if k == i else zero for k in range(ncon)] + [zero])
    tableau.append([one] * m + [one if k == dim else zero for k in range(ncon)] + [one])
    basis = [m + k for k in range(ncon)]
    # Phase-1 objective: minimize the sum of artificials.  Reduced-cost row.
    cost = [zero] * (m + ncon + 1)
    for row in tableau:
        for j in range(m):
            cost[j] -= row[j]
        cost[-1] -= row[-1]
    while True:
        enter = None
        for j in range(m + ncon):
            if cost[j] < 0:
                enter = j
                break
        if enter is None:
            break
        leave = None
        best = None
        for i in range(ncon):
            coeff = tableau[i][enter]
            if coeff > 0:
                ratio = tableau[i][-1] / coeff
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            raise ArithmeticError("phase-1 simplex objective unbounded")
        piv = tableau[leave][enter]
        tableau[leave] = [x / piv for x in tableau[leave]]
        for i in range(ncon):
            if i != leave and tableau[i][enter] != 0:
                f = tableau[i][enter]
                tableau[i] = [x - f * y for x, y in zip(tableau[i], tableau[leave])]
        if cost[enter] != 0:
            f = cost[enter]
            cost = [x - f * y for x, y in zip(cost, tableau[leave])]
        basis[leave] = enter
    if cost[-1] != 0:
        return None
    lam = [zero] * m
    for i, var in enumerate(basis):
        if var < m:
            lam[var] = tableau[i][-1]
        elif tableau[i][-1] != 0:
            return None  # artificial stuck at a nonzero level: infeasible
    return tuple(lam)
