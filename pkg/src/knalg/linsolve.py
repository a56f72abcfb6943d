"""Exact linear algebra over the rationals: reduced row echelon form,
solving, nullspaces, inversion.  Dense and small; everything here runs
on matrices with at most a few hundred rows."""
from __future__ import annotations

from .scalars import Q, QONE, QZERO


def rref(rows):
    """Reduced row echelon form.  Returns (new_rows, pivot_columns)."""
    mat = [[Q(c) for c in row] for row in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = None
        for i in range(r, len(mat)):
            if mat[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = QONE / mat[r][col]
        mat[r] = [inv * c for c in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col]:
                factor = mat[i][col]
                mat[i] = [a - factor * b for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    return mat, pivots


def solve(rows, rhs):
    """One solution of A x = b, or None if inconsistent.  Free variables
    are set to zero."""
    if not rows:
        return []
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    mat, pivots = rref(aug)
    ncols = len(rows[0])
    if ncols in pivots:
        return None
    x = [QZERO] * ncols
    for r, col in enumerate(pivots):
        x[col] = mat[r][-1]
    return x


def nullspace(rows):
    """Basis of the kernel of A, one vector per free column."""
    if not rows:
        return []
    ncols = len(rows[0])
    mat, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [QZERO] * ncols
        v[fc] = QONE
        for r, pc in enumerate(pivots):
            v[pc] = -mat[r][fc]
        basis.append(v)
    return basis


def invert(rows):
    """Inverse of a square matrix; raises ValueError if singular."""
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ValueError("matrix must be square")
    aug = [list(row) + [QONE if i == j else QZERO for j in range(n)] for i, row in enumerate(rows)]
    mat, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in mat]


def mat_vec(rows, x):
    out = []
    for row in rows:
        acc = QZERO
        for a, b in zip(row, x):
            acc += a * b
        out.append(acc)
    return out
