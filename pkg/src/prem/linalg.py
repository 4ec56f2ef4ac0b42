"""Exact linear algebra over the rationals.

Matrices are lists of rows of :class:`fractions.Fraction`; everything is
done with plain Gaussian elimination, which is fast enough at the scale of
this library (systems of at most a few dozen unknowns).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

Vec = tuple
Q0 = Fraction(0)
Q1 = Fraction(1)


def vec(xs) -> tuple:
    return tuple(Fraction(x) for x in xs)


def vec_add(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(c, a: Sequence) -> tuple:
    c = Fraction(c)
    return tuple(c * x for x in a)


def dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Q0)


def norm_sq(a: Sequence) -> Fraction:
    return dot(a, a)


def dist_sq(a: Sequence, b: Sequence) -> Fraction:
    return norm_sq(vec_sub(a, b))


def mat_copy(m: Sequence[Sequence]) -> list:
    return [[Fraction(x) for x in row] for row in m]


def rref(m: Sequence[Sequence]) -> tuple[list, list[int], int]:
    """Reduced row echelon form.

    Returns ``(matrix, pivot_columns, rank)``.  Pivots are chosen left to
    right, so the result is deterministic.
    """
    a = mat_copy(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, rows):
            if a[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        inv = Q1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots, r


def rank(m: Sequence[Sequence]) -> int:
    if not m:
        return 0
    return rref(m)[2]


def solve(a: Sequence[Sequence], b: Sequence) -> Optional[list]:
    """One exact solution of ``a x = b``, or ``None`` when inconsistent.

    Free variables are set to zero, so the result is deterministic.
    """
    rows = len(a)
    if rows == 0:
        return []
    cols = len(a[0])
    aug = [list(map(Fraction, row)) + [Fraction(bv)] for row, bv in zip(a, b)]
    red, pivots, r = rref(aug)
    # Inconsistent iff a pivot lands in the augmented column.
    if r and pivots and pivots[-1] == cols:
        return None
    x = [Q0] * cols
    for i, c in enumerate(pivots):
        x[c] = red[i][cols]
    return x


def solve_unique(a: Sequence[Sequence], b: Sequence) -> Optional[list]:
    """Solution of ``a x = b`` when it is unique; ``None`` otherwise."""
    if not a:
        return None
    cols = len(a[0])
    x = solve(a, b)
    if x is None:
        return None
    if rank(a) != cols:
        return None
    return x


def affinely_independent(points: Sequence[Sequence]) -> bool:
    """True iff the points span an affine subspace of dimension ``len-1``."""
    pts = [vec(p) for p in points]
    if len(pts) <= 1:
        return True
    diffs = [list(vec_sub(p, pts[0])) for p in pts[1:]]
    return rank(diffs) == len(pts) - 1


def linearly_independent(vectors: Sequence[Sequence]) -> bool:
    vs = [list(map(Fraction, v)) for v in vectors]
    if not vs:
        return True
    return rank(vs) == len(vs)


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull of the points (-1 for the empty set)."""
    pts = [vec(p) for p in points]
    if not pts:
        return -1
    diffs = [list(vec_sub(p, pts[0])) for p in pts[1:]]
    return rank(diffs) if diffs else 0


def point_to_affine_hull_dist_sq(p: Sequence, hull_points: Sequence[Sequence]) -> Fraction:
    """Exact squared Euclidean distance from ``p`` to the affine hull of
    ``hull_points`` (which must be non-empty)."""
    p = vec(p)
    base = vec(hull_points[0])
    dirs = [vec_sub(q, base) for q in hull_points[1:]]
    r = vec_sub(p, base)
    if not dirs:
        return norm_sq(r)
    # Normal equations G t = rhs; consistent because G is a Gram matrix.
    g = [[dot(u, v) for v in dirs] for u in dirs]
    rhs = [dot(u, r) for u in dirs]
    t = solve(g, rhs)
    if t is None:  # pragma: no cover - Gram systems are always consistent
        raise ArithmeticError("inconsistent Gram system")
    proj = base
    for c, u in zip(t, dirs):
        proj = vec_add(proj, vec_scale(c, u))
    return dist_sq(p, proj)
