"""Exact matrix helpers for small jet matrices (n <= ~6)."""

from __future__ import annotations

from .errors import SingularityError
from .jets import Jet


def jet_det(rows) -> Jet:
    """Determinant of a square matrix of jets, by memoized cofactor expansion."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix is not square")
    memo: dict = {}

    def minor(row_start: int, cols: tuple) -> Jet:
        if row_start == n:
            return Jet.const(rows[0][0].n_vars, rows[0][0].order, 1)
        key = (row_start, cols)
        cached = memo.get(key)
        if cached is not None:
            return cached
        total = None
        for pos, col in enumerate(cols):
            term = rows[row_start][col] * minor(row_start + 1, cols[:pos] + cols[pos + 1 :])
            if pos % 2:
                term = -term
            total = term if total is None else total + term
        memo[key] = total
        return total

    return minor(0, tuple(range(n)))


def jet_matrix_inverse(rows) -> list[list[Jet]]:
    """Inverse of a jet matrix via adjugate over determinant.

    Requires the constant-term matrix to be invertible; each entry is
    (-1)^(i+j) * minor(j, i) * reciprocal(det), exact to the common order.
    """
    n = len(rows)
    det = jet_det(rows)
    if not det.constant_term():
        raise SingularityError("jet matrix is singular at the origin")
    det_inv = det.reciprocal()
    inv = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            sub = [
                [rows[r][c] for c in range(n) if c != i]
                for r in range(n)
                if r != j
            ]
            cof = jet_det(sub) if sub else Jet.const(rows[0][0].n_vars, rows[0][0].order, 1)
            if (i + j) % 2:
                cof = -cof
            inv[i][j] = cof * det_inv
    return inv


