"""Wedge products, Plücker coordinates and Hermitian pairings of polynomial vectors.

Vectors are plain tuples whose entries are :class:`HermPoly` (or
:class:`RationalFn`) values.  Plücker coordinates are indexed by k-subsets of
``range(n)`` in lexicographic order.

Every pairing accepts an optional diagonal weight vector ``w`` (positive
rationals): ``<v, u>_w = sum w_i v_i conj(u_i)``.  With ``w_i = C(n, i)`` the
exact frame ``(1, z, ..., z^n)`` realises the Veronese curve without square
roots, since its standard norm equals the weighted norm of the monomials.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb, prod
from typing import Sequence

from .algebra.hermpoly import HermPoly
from .errors import DimensionMismatch


def plucker_subsets(n: int, k: int) -> list:
    """All k-subsets of range(n), in the lexicographic order used for coordinates."""
    return list(combinations(range(n), k))


def plucker_position(subset: Sequence[int], n: int) -> int:
    """Lexicographic rank of a strictly increasing subset among C(n, k)."""
    k = len(subset)
    if any(b <= a for a, b in zip(subset, subset[1:])) or (k and (subset[0] < 0 or subset[-1] >= n)):
        raise ValueError("subset must be strictly increasing inside range(n)")
    pos, prev = 0, -1
    for i, s in enumerate(subset):
        for c in range(prev + 1, s):
            pos += comb(n - c - 1, k - i - 1)
        prev = s
    return pos


def plucker_weights(weights: Sequence | None, n: int, k: int) -> list | None:
    """Induced weights on the k-th exterior power of a diagonal metric."""
    if weights is None:
        return None
    if len(weights) != n:
        raise DimensionMismatch(f"{len(weights)} weights for dimension {n}")
    return [prod((Fraction(weights[i]) for i in s), start=Fraction(1)) for s in plucker_subsets(n, k)]


def _check_dims(vectors, n):
    for v in vectors:
        if len(v) != n:
            raise DimensionMismatch(f"vector of length {len(v)} in dimension {n}")


def wedge_extend(coords: Sequence | None, r: int, v: Sequence, n: int) -> tuple:
    """Given the Plücker coordinates of an r-fold wedge, return those of (that) ^ v.

    ``coords`` is ``None`` for the empty wedge (r = 0).  The new coordinate on
    an (r+1)-subset S expands the minor along its last row, which is v.
    """
    if len(v) != n:
        raise DimensionMismatch(f"vector of length {len(v)} in dimension {n}")
    if r >= n:
        raise DimensionMismatch(f"cannot wedge {r + 1} vectors in dimension {n}")
    zero = _zero_like([v])
    if r == 0:
        return tuple(v)
    prev = dict(zip(combinations(range(n), r), coords))
    out = []
    for s in combinations(range(n), r + 1):
        acc = None
        for pos, c in enumerate(s):
            entry = v[c]
            if entry.is_zero():
                continue
            sub = prev[s[:pos] + s[pos + 1:]]
            if sub.is_zero():
                continue
            term = entry * sub
            if (r - pos) % 2:
                term = -term
            acc = term if acc is None else acc + term
        out.append(zero if acc is None else acc)
    return tuple(out)


def wedge(vectors: Sequence[Sequence], n: int | None = None) -> tuple:
    """Plücker coordinates of v_1 ^ ... ^ v_k.

    Entry S is the k x k minor on columns S, rows in the given order.  Minors
    are built row by row by cofactor expansion along the newest row, reusing
    all minors of the previous level; no division is ever performed.
    """
    vectors = [tuple(v) for v in vectors]
    k = len(vectors)
    if n is None:
        if not vectors:
            raise DimensionMismatch("wedge of no vectors needs an explicit dimension")
        n = len(vectors[0])
    _check_dims(vectors, n)
    if not 1 <= k <= n:
        raise DimensionMismatch(f"cannot wedge {k} vectors in dimension {n}")
    coords = None
    for r, v in enumerate(vectors):
        coords = wedge_extend(coords, r, v, n)
    return coords


def _zero_like(vectors):
    for v in vectors:
        for e in v:
            return e * 0
    return HermPoly()


def hermitian_pairing(v: Sequence, w: Sequence, weights: Sequence | None = None):
    """sum_i weights_i * v_i * conj(w_i)."""
    if len(v) != len(w):
        raise DimensionMismatch(f"pairing of lengths {len(v)} and {len(w)}")
    if weights is not None and len(weights) != len(v):
        raise DimensionMismatch(f"{len(weights)} weights for dimension {len(v)}")
    total = None
    for i, (a, b) in enumerate(zip(v, w)):
        if a.is_zero() or b.is_zero():
            continue
        term = a * b.conj()
        if weights is not None and weights[i] != 1:
            term = term * weights[i]
        total = term if total is None else total + term
    return _zero_like([v]) if total is None else total


def norm_square(v: Sequence, weights: Sequence | None = None):
    """sum_i weights_i |v_i|^2, a real polynomial that vanishes only for v = 0."""
    if not v:
        return HermPoly()
    return hermitian_pairing(v, v, weights)


def gram_matrix(vectors: Sequence[Sequence], weights: Sequence | None = None) -> list:
    """G[i][j] = <v_j, v_i>, so that G is Hermitian with G[i][i] = |v_i|^2."""
    m = len(vectors)
    g = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            g[i][j] = hermitian_pairing(vectors[j], vectors[i], weights)
            g[j][i] = g[i][j].conj() if i != j else g[i][j]
    return g
