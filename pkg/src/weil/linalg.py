"""Exact linear algebra over the rationals.

Matrices are lists of rows, entries are :class:`fractions.Fraction` (ints are
accepted on input).  Everything here is plain Gauss-Jordan elimination; the
matrices that show up in this package are at most a few hundred columns wide.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def zeros(m: int, n: int) -> Matrix:
    return [[Fraction(0)] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def transpose(a: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence], inner: int | None = None) -> Matrix:
    """Product of an m x k and a k x n matrix.

    ``inner`` is only needed when ``a`` has no rows and ``b`` has no columns
    to infer shapes from.
    """
    m = len(a)
    n = len(b[0]) if b else 0
    out = zeros(m, n)
    for i, row in enumerate(a):
        acc = out[i]
        for k, x in enumerate(row):
            if x:
                for j, y in enumerate(b[k]):
                    if y:
                        acc[j] += x * y
    return out


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in a]


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form.

    Returns ``(R, pivots)`` where ``R`` holds only the nonzero rows and
    ``pivots[i]`` is the pivot column of ``R[i]``.
    """
    a = to_matrix(rows)
    if ncols is None:
        ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(a):
            break
        p = next((i for i in range(r, len(a)) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        if piv != 1:
            a[r] = [x / piv for x in a[r]]
        prow = a[r]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], prow)]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(a: Sequence[Sequence], ncols: int) -> Matrix:
    """Basis of ``{v : a v = 0}`` as rows, itself in reduced echelon form."""
    r, pivots = rref(a, ncols)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, pc in zip(r, pivots):
            v[pc] = -row[free]
        basis.append(v)
    return echelon_basis(basis, ncols)


def echelon_basis(vectors: Sequence[Sequence], ncols: int) -> Matrix:
    """Canonical basis of the span: the nonzero rows of the RREF."""
    return rref(vectors, ncols)[0]


def same_span(u: Sequence[Sequence], v: Sequence[Sequence], ncols: int) -> bool:
    return echelon_basis(u, ncols) == echelon_basis(v, ncols)


def in_span(basis: Matrix, pivots: Sequence[int], v: Sequence) -> list[Fraction] | None:
    """Coordinates of ``v`` in an RREF basis, or None if ``v`` is outside the span.

    For a reduced echelon basis the coordinates are just the entries of ``v``
    at the pivot columns, so membership is a single reconstruction check.
    """
    coords = [Fraction(v[p]) for p in pivots]
    n = len(v)
    recon = [Fraction(0)] * n
    for c, row in zip(coords, basis):
        if c:
            for j, x in enumerate(row):
                if x:
                    recon[j] += c * x
    if any(recon[j] != v[j] for j in range(n)):
        return None
    return coords


def solve(a: Sequence[Sequence], b: Sequence, ncols: int) -> list[Fraction] | None:
    """One solution of ``a x = b``, or None when inconsistent."""
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    r, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(r, pivots):
        x[pc] = row[ncols]
    return x


def solve_many(a: Sequence[Sequence], b: Sequence[Sequence], ncols: int) -> Matrix | None:
    """Solve ``a X = b`` for a matrix ``X`` (ncols x b-width), or None.

    Free variables are set to zero; callers that need uniqueness check
    ``rank(a) == ncols`` themselves.
    """
    width = len(b[0]) if b else 0
    aug = [list(row) + list(brow) for row, brow in zip(a, b)]
    r, pivots = rref(aug, ncols + width)
    if any(p >= ncols for p in pivots):
        return None
    x = zeros(ncols, width)
    for row, pc in zip(r, pivots):
        x[pc] = row[ncols:]
    return x


def inverse(a: Sequence[Sequence]) -> Matrix | None:
    n = len(a)
    if any(len(row) != n for row in a):
        return None
    aug = [list(row) + e for row, e in zip(to_matrix(a), identity(n))]
    r, pivots = rref(aug, 2 * n)
    if n and (len(pivots) < n or pivots[n - 1] != n - 1):
        return None
    return [row[n:] for row in r]


def is_invertible(a: Sequence[Sequence]) -> bool:
    n = len(a)
    if any(len(row) != n for row in a):
        return False
    return rank(a, n) == n


def block_diag(blocks: Sequence[Matrix], shapes: Sequence[tuple[int, int]]) -> Matrix:
    """Block diagonal matrix; ``shapes`` gives (rows, cols) so empty blocks work."""
    m = sum(s[0] for s in shapes)
    n = sum(s[1] for s in shapes)
    out = zeros(m, n)
    r0 = c0 = 0
    for blk, (br, bc) in zip(blocks, shapes):
        for i in range(br):
            for j in range(bc):
                out[r0 + i][c0 + j] = Fraction(blk[i][j])
        r0 += br
        c0 += bc
    return out


def fstr(x) -> str:
    """Render a rational as ``p`` or ``p/q``."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
