"""Exact integer matrix helpers: products, determinants, Smith normal form.

Matrices are tuples of row tuples of Python ints, so everything here is
arbitrary precision and hashable.
"""

from __future__ import annotations

from typing import NamedTuple

__all__ = [
    "identity_matrix",
    "mat_mul",
    "mat_vec",
    "mat_sub",
    "det_int",
    "adjugate",
    "unimodular_inverse",
    "SmithNormalForm",
    "smith_normal_form",
    "integer_kernel_basis",
]

Matrix = tuple[tuple[int, ...], ...]


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    cols = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a
    )


def mat_vec(a: Matrix, v) -> tuple[int, ...]:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def det_int(matrix: Matrix) -> int:
    """Fraction-free Bareiss elimination; exact for integer input."""
    n = len(matrix)
    if n == 0:
        return 1
    a = [list(row) for row in matrix]
    sign = 1
    prev = 1
    for t in range(n - 1):
        if a[t][t] == 0:
            pivot = next((i for i in range(t + 1, n) if a[i][t] != 0), None)
            if pivot is None:
                return 0
            a[t], a[pivot] = a[pivot], a[t]
            sign = -sign
        for i in range(t + 1, n):
            for j in range(t + 1, n):
                a[i][j] = (a[i][j] * a[t][t] - a[i][t] * a[t][j]) // prev
            a[i][t] = 0
        prev = a[t][t]
    return sign * a[n - 1][n - 1]


def _cofactor_det(matrix: list[list[int]]) -> int:
    return det_int(tuple(tuple(row) for row in matrix))


def adjugate(matrix: Matrix) -> Matrix:
    """Transposed cofactor matrix; matrix @ adjugate == det * identity."""
    n = len(matrix)
    if n == 1:
        return ((1,),)
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [matrix[r][c] for c in range(n) if c != j]
                for r in range(n)
                if r != i
            ]
            adj[j][i] = (-1) ** (i + j) * _cofactor_det(minor)
    return tuple(tuple(row) for row in adj)


def unimodular_inverse(matrix: Matrix, det: int | None = None) -> Matrix:
    """Integer inverse of a matrix with determinant +-1 (via the adjugate)."""
    if det is None:
        det = det_int(matrix)
    if det not in (1, -1):
        raise ValueError(f"matrix is not unimodular (det {det})")
    adj = adjugate(matrix)
    if det == 1:
        return adj
    return tuple(tuple(-x for x in row) for row in adj)


class SmithNormalForm(NamedTuple):
    """U A V = diag with U, V unimodular and diag a divisibility chain."""

    diag: tuple[int, ...]
    left: Matrix
    right: Matrix


def _swap_rows(a, u, i, j):
    a[i], a[j] = a[j], a[i]
    u[i], u[j] = u[j], u[i]


def _swap_cols(a, v, i, j):
    for row in a:
        row[i], row[j] = row[j], row[i]
    for row in v:
        row[i], row[j] = row[j], row[i]


def _add_row(a, u, dst, src, q):
    # row_dst += q * row_src
    ad, asrc = a[dst], a[src]
    for c in range(len(ad)):
        ad[c] += q * asrc[c]
    ud, usrc = u[dst], u[src]
    for c in range(len(ud)):
        ud[c] += q * usrc[c]


def _add_col(a, v, dst, src, q):
    for row in a:
        row[dst] += q * row[src]
    for row in v:
        row[dst] += q * row[src]


def smith_normal_form(matrix) -> SmithNormalForm:
    """Diagonalize an integer matrix over Z with unimodular transforms.

    Returns diag of length min(rows, cols) with nonnegative entries, each
    dividing the next, zeros at the end.
    """
    a = [list(int(x) for x in row) for row in matrix]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    if any(len(row) != nc for row in a):
        raise ValueError("ragged matrix")
    u = [list(row) for row in identity_matrix(nr)]
    v = [list(row) for row in identity_matrix(nc)]

    def pivot_at(t):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                x = a[i][j]
                if x != 0 and (best is None or abs(x) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        return best

    t = 0
    while t < min(nr, nc):
        pos = pivot_at(t)
        if pos is None:
            break
        _swap_rows(a, u, t, pos[0])
        _swap_cols(a, v, t, pos[1])
        while True:
            # reduce the pivot column
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    _add_row(a, u, i, t, -q)
                    if a[i][t]:
                        _swap_rows(a, u, t, i)
                        dirty = True
            if dirty:
                continue
            # reduce the pivot row
            for j in range(t + 1, nc):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    _add_col(a, v, j, t, -q)
                    if a[t][j]:
                        _swap_cols(a, v, t, j)
                        dirty = True
            if dirty:
                continue
            # pivot must divide every remaining entry
            offender = None
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if a[i][j] % a[t][t]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            _add_row(a, u, t, offender, 1)
        if a[t][t] < 0:
            for c in range(nc):
                a[t][c] = -a[t][c]
            for c in range(nr):
                u[t][c] = -u[t][c]
        t += 1

    diag = tuple(a[i][i] for i in range(min(nr, nc)))
    return SmithNormalForm(
        diag,
        tuple(tuple(row) for row in u),
        tuple(tuple(row) for row in v),
    )


def integer_kernel_basis(matrix) -> tuple[tuple[int, ...], ...]:
    """Basis of the integer kernel {x : A x = 0}, from the Smith form of A."""
    snf = smith_normal_form(matrix)
    nc = len(snf.right)
    cols = []
    for idx in range(nc):
        d = snf.diag[idx] if idx < len(snf.diag) else 0
        if d == 0:
            cols.append(tuple(snf.right[r][idx] for r in range(nc)))
    return tuple(cols)
