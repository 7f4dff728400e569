"""Small dense matrices over commutative rings: determinants, adjugates, exact rank."""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .gaussian import GaussianRational


def det(mat: Sequence[Sequence]):
    """Determinant by cofactor expansion, memoising minors row by row (no division)."""
    k = len(mat)
    if k == 0:
        raise ValueError("empty matrix")
    if any(len(row) != k for row in mat):
        raise ValueError("matrix must be square")
    minors = {(): None}
    for r, row in enumerate(mat):
        nxt = {}
        for s in combinations(range(k), r + 1):
            acc = None
            for pos, c in enumerate(s):
                entry = row[c]
                if entry == 0:
                    continue
                if r:
                    sub = minors[s[:pos] + s[pos + 1:]]
                    if sub is None:
                        continue
                    term = entry * sub
                else:
                    term = entry
                if (r - pos) % 2:
                    term = -term
                acc = term if acc is None else acc + term
            nxt[s] = acc
        minors = nxt
    out = minors[tuple(range(k))]
    return mat[0][0] * 0 if out is None else out


def adjugate(mat: Sequence[Sequence]) -> list:
    """adj(M) with M adj(M) = det(M) I."""
    k = len(mat)
    if k == 1:
        return [[mat[0][0] * 0 + 1]]
    out = [[None] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            minor = [[mat[r][c] for c in range(k) if c != j] for r in range(k) if r != i]
            d = det(minor)
            out[j][i] = -d if (i + j) % 2 else d
    return out


def exact_rank(rows: Sequence[Sequence]) -> int:
    """Rank of a matrix with entries in Q(i), by Gaussian elimination."""
    m = [[GaussianRational.coerce(x) for x in row] for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = m[rank][col].inverse()
        for r in range(rank + 1, len(m)):
            if m[r][col]:
                f = m[r][col] * inv
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank
