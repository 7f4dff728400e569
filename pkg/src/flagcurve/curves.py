"""Holomorphic curves, their harmonic sequences and primitive lifts into flags.

Everything here is exact.  Frames are tuples of polynomial vectors; a
subbundle is represented by any frame spanning it at generic z, so frames are
rescaled freely by nonzero polynomials to stay inside Q(i)[z, zbar].

The holomorphic Plücker section of the osculating space psi_0 + ... + psi_j is
built from the frame of psi_0 and its z-derivatives, taken in order of
(derivative order, frame index) and kept greedily while they stay independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .algebra.gaussian import GaussianRational
from .algebra.hermpoly import HermPoly, content_gcd, gcd_univariate, scalar_content
from .algebra.matrix import adjugate, det, exact_rank
from .algebra.ratfn import RationalFn, laplace_log
from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    NonHolomorphic,
    NonTerminating,
    NotAFlag,
    NotImmersion,
    RankDeficient,
    SingularGram,
)
from .exterior import gram_matrix, hermitian_pairing, norm_square, plucker_weights, wedge_extend

Vector = tuple  # tuple of HermPoly


def _check_weights(weights, n):
    if weights is None:
        return None
    weights = tuple(Fraction(w) for w in weights)
    if len(weights) != n:
        raise DimensionMismatch(f"{len(weights)} weights for dimension {n}")
    if any(w <= 0 for w in weights):
        raise ValueError("Hermitian weights must be positive")
    return None if all(w == 1 for w in weights) else weights


def _as_vector(v, n) -> Vector:
    v = tuple(HermPoly._coerce(e) for e in v)
    if len(v) != n:
        raise DimensionMismatch(f"frame vector of length {len(v)} in dimension {n}")
    return v


@dataclass(frozen=True)
class HolCurve:
    """A holomorphic curve into G_k(C^n), given by k vectors of polynomials in z.

    ``weights`` (optional, positive rationals) define the Hermitian form
    ``sum w_i v_i conj(u_i)`` in which the curve is measured.  ``compact``
    records whether the curve is meant on the whole sphere.
    """

    n: int
    frame: tuple
    weights: tuple | None = None
    compact: bool = True

    def __post_init__(self):
        if self.n < 1:
            raise DimensionMismatch("ambient dimension must be positive")
        frame = tuple(_as_vector(v, self.n) for v in self.frame)
        if not frame:
            raise DimensionMismatch("a curve needs at least one frame vector")
        if len(frame) > self.n:
            raise DimensionMismatch(f"{len(frame)} frame vectors in dimension {self.n}")
        for v in frame:
            for e in v:
                if not e.is_holomorphic():
                    raise NonHolomorphic(f"frame entry {e} depends on zbar")
        object.__setattr__(self, "frame", frame)
        object.__setattr__(self, "weights", _check_weights(self.weights, self.n))

    @property
    def rank(self) -> int:
        return len(self.frame)

    def plucker(self) -> Vector:
        """Plücker section of the frame with polynomial and scalar content removed."""
        coords = None
        for r, v in enumerate(self.frame):
            coords = wedge_extend(coords, r, v, self.n)
        if all(c.is_zero() for c in coords):
            raise RankDeficient("frame vectors are dependent")
        return remove_content(coords)

    def is_independent(self) -> bool:
        coords = None
        for r, v in enumerate(self.frame):
            coords = wedge_extend(coords, r, v, self.n)
        return any(not c.is_zero() for c in coords)

    def coefficient_rows(self) -> list:
        """One row in C^n per (frame vector, power of z)."""
        rows = []
        for v in self.frame:
            top = max(e.degree_z() for e in v)
            for d in range(top + 1):
                row = [e.coefficient(d, 0) for e in v]
                if any(row):
                    rows.append(row)
        return rows

    def is_full(self) -> bool:
        """True when no proper subspace of C^n contains the curve."""
        return exact_rank(self.coefficient_rows()) == self.n

    def transform(self, matrix: Sequence[Sequence], weights=None) -> HolCurve:
        """Apply a constant matrix to every frame vector."""
        mat = [[GaussianRational.coerce(x) for x in row] for row in matrix]
        if len(mat) != self.n or any(len(row) != self.n for row in mat):
            raise DimensionMismatch("transform must be an n x n matrix")
        frame = []
        for v in self.frame:
            frame.append(tuple(sum((v[c] * mat[r][c] for c in range(self.n) if mat[r][c]), HermPoly())
                               for r in range(self.n)))
        w = self.weights if weights is None else weights
        return HolCurve(self.n, tuple(frame), w, self.compact)

    def derivative_vectors(self, order: int) -> list:
        """Frame vectors differentiated ``order`` times, in frame order."""
        out = list(self.frame)
        for _ in range(order):
            out = [tuple(e.diff("z") for e in v) for v in out]
        return out


def remove_content(coords: Sequence[HermPoly]) -> Vector:
    """Divide a holomorphic vector by the gcd of its entries and a rational scalar."""
    nonzero = [c for c in coords if not c.is_zero()]
    if not nonzero:
        raise RankDeficient("zero section")
    g = nonzero[0]
    for c in nonzero[1:]:
        if g.is_constant():
            break
        g = gcd_univariate(g, c)
    if not g.is_constant():
        coords = tuple(c / g if not c.is_zero() else c for c in coords)
    s = scalar_content(coords)
    if s != 1:
        coords = tuple(c * (1 / s) for c in coords)
    return tuple(coords)


@dataclass(frozen=True)
class Subbundle:
    """A subbundle of the trivial C^n bundle, spanned generically by ``frame``."""

    n: int
    frame: tuple
    index: int = 0
    weights: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "frame", tuple(_as_vector(v, self.n) for v in self.frame))
        object.__setattr__(self, "weights", _check_weights(self.weights, self.n))

    @property
    def rank(self) -> int:
        return len(self.frame)

    def gram(self) -> list:
        return gram_matrix(self.frame, self.weights)


@dataclass(frozen=True)
class HarmonicSequence:
    curve: HolCurve
    terms: tuple

    @property
    def ranks(self) -> tuple:
        return tuple(t.rank for t in self.terms)

    @property
    def p(self) -> int:
        return len(self.terms) - 1

    @property
    def n(self) -> int:
        return self.curve.n

    def __len__(self):
        return len(self.terms)


def _projected_derivatives(psi: Subbundle):
    """Fraction-free projections det(G) * (d f - proj_psi d f) for each frame vector f.

    Returns ``(G, det G, [v_1, ..., v_k])``.
    """
    frame, w = psi.frame, psi.weights
    g = gram_matrix(frame, w)  # g[e][c] = <f_c, f_e>
    d = det(g)
    if d.is_zero():
        raise SingularGram("Gram matrix of the frame vanishes identically")
    adj = adjugate(g)
    k = len(frame)
    out = []
    for f in frame:
        df = tuple(e.diff("z") for e in f)
        b = [hermitian_pairing(df, fe, w) for fe in frame]
        x = [sum((adj[c][e] * b[e] for e in range(k)), HermPoly()) for c in range(k)]
        v = []
        for i in range(psi.n):
            acc = df[i] * d
            for c in range(k):
                if not x[c].is_zero() and not frame[c][i].is_zero():
                    acc = acc - x[c] * frame[c][i]
            v.append(acc)
        out.append(tuple(v))
    return g, d, out


def _reduce_vector(v: Vector) -> Vector:
    g = content_gcd(v)
    if not g.is_constant():
        v = tuple(e / g for e in v)
    s = scalar_content(v)
    return v if s == 1 else tuple(e * (1 / s) for e in v)


def gauss_transform(psi: Subbundle) -> Subbundle:
    """psi_1 = image of A'_psi: derivatives of the frame projected onto psi^perp."""
    _, _, vs = _projected_derivatives(psi)
    chosen, coords = [], None
    for v in vs:
        if all(e.is_zero() for e in v):
            continue
        v = _reduce_vector(v)
        nxt = wedge_extend(coords, len(chosen), v, psi.n)
        if any(not c.is_zero() for c in nxt):
            chosen.append(v)
            coords = nxt
    return Subbundle(psi.n, tuple(chosen), psi.index + 1, psi.weights)


def projection_gamma(psi: Subbundle) -> RationalFn:
    """tr A'_psi (A'_psi)^* computed from the projected derivatives.

    With v_a = det(G) P(d f_a) and V the Gram matrix of the v's, the trace is
    tr(adj(G) V) / det(G)^3.  This is independent of the Plücker route.
    """
    g, d, vs = _projected_derivatives(psi)
    adj = adjugate(g)
    vg = gram_matrix(vs, psi.weights)
    k = len(vs)
    tr = sum((adj[a][b] * vg[b][a] for a in range(k) for b in range(k)), HermPoly())
    return RationalFn(tr, d * d * d)


def harmonic_sequence(curve: HolCurve) -> HarmonicSequence:
    """psi_0, psi_1, ... obtained by iterating the Gauss transform until rank 0."""
    psi = Subbundle(curve.n, curve.frame, 0, curve.weights)
    if not curve.is_independent():
        raise SingularGram("frame of psi_0 is dependent")
    terms = [psi]
    while True:
        nxt = gauss_transform(terms[-1])
        if nxt.rank == 0:
            break
        terms.append(nxt)
        if len(terms) > curve.n or sum(t.rank for t in terms) > curve.n:
            raise NonTerminating("harmonic sequence exceeds the ambient dimension")
    for i in range(len(terms)):
        for j in range(i + 1, len(terms)):
            for u in terms[i].frame:
                for v in terms[j].frame:
                    if not hermitian_pairing(u, v, curve.weights).is_zero():
                        raise RuntimeError(f"psi_{i} and psi_{j} are not orthogonal")
    return HarmonicSequence(curve, tuple(terms))


def osculating_sections(curve: HolCurve, sizes: Sequence[int]) -> list:
    """Plücker sections of the spans of the first ``size`` greedy derivative vectors.

    Candidates are the frame vectors differentiated 0, 1, 2, ... times, in
    order of (derivative order, frame index); a candidate is kept when it is
    independent of those already kept.  One content-free section is returned
    per requested size.
    """
    sizes = sorted(set(sizes))
    if not sizes:
        return []
    if sizes[-1] > curve.n:
        raise RankDeficient(f"cannot span dimension {sizes[-1]} in C^{curve.n}")
    found = {}
    coords, count = None, 0
    current = list(curve.frame)
    for order in range(curve.n + 1):
        for v in current:
            if all(e.is_zero() for e in v):
                continue
            nxt = wedge_extend(coords, count, v, curve.n)
            if any(not c.is_zero() for c in nxt):
                coords, count = nxt, count + 1
                if count in sizes:
                    found[count] = remove_content(coords)
                if count == sizes[-1]:
                    return [found[s] for s in sizes]
        current = [tuple(e.diff("z") for e in v) for v in current]
    raise RankDeficient(f"only {count} independent derivative vectors; needed {sizes[-1]}")


def osculating_ranks(curve: HolCurve) -> tuple:
    """Dimensions of the osculating spaces span{derivatives of order <= j}."""
    ranks, coords, count = [], None, 0
    current = list(curve.frame)
    for order in range(curve.n + 1):
        for v in current:
            if count == curve.n or all(e.is_zero() for e in v):
                continue
            nxt = wedge_extend(coords, count, v, curve.n)
            if any(not c.is_zero() for c in nxt):
                coords, count = nxt, count + 1
        if ranks and ranks[-1] == count:
            break
        ranks.append(count)
        current = [tuple(e.diff("z") for e in v) for v in current]
    return tuple(ranks)


@dataclass(frozen=True)
class PrimitiveLift:
    """Psi = (psi_0, ..., psi_p) into F_{k_0, ..., k_p}, with per-level data.

    ``sections[j]`` is the holomorphic Plücker section of psi_0 + ... + psi_j,
    ``betas[j]`` its squared norm and ``gammas[j]`` = d dbar log betas[j].
    """

    sequence: HarmonicSequence
    sections: tuple
    section_weights: tuple
    betas: tuple
    gammas: tuple = field(repr=False)

    @property
    def curve(self) -> HolCurve:
        return self.sequence.curve

    @property
    def n(self) -> int:
        return self.sequence.n

    @property
    def p(self) -> int:
        return self.sequence.p

    @property
    def ranks(self) -> tuple:
        return self.sequence.ranks

    @property
    def compact(self) -> bool:
        return self.curve.compact

    @property
    def flag_type(self) -> str:
        return "F_{" + ",".join(str(k) for k in self.ranks) + "}"

    def cumulative_rank(self, j: int) -> int:
        return sum(self.ranks[: j + 1])


def primitive_lift(seq: HarmonicSequence) -> PrimitiveLift:
    """Assemble the flag lift and compute sigma_j, beta_j and gamma_j for j < p."""
    if sum(seq.ranks) != seq.n:
        raise NotAFlag(f"ranks {seq.ranks} do not add up to n = {seq.n}")
    curve = seq.curve
    cum = [sum(seq.ranks[: j + 1]) for j in range(seq.p)]
    if osculating_ranks(curve)[: seq.p] != tuple(cum):
        raise RuntimeError("osculating ranks disagree with the harmonic sequence")
    sections = tuple(osculating_sections(curve, cum)) if cum else ()
    sweights = tuple(plucker_weights(curve.weights, curve.n, k) for k in cum)
    betas = tuple(norm_square(s, w) for s, w in zip(sections, sweights))
    gammas = tuple(laplace_log(b) for b in betas)
    for j, g in enumerate(gammas):
        if g.is_zero():
            raise NotImmersion(f"gamma_{j} vanishes identically")
    return PrimitiveLift(seq, sections, sweights, betas, gammas)


def lift_curve(curve: HolCurve) -> PrimitiveLift:
    """harmonic_sequence followed by primitive_lift."""
    return primitive_lift(harmonic_sequence(curve))


def osculating_plucker(lift: PrimitiveLift, j: int) -> HolCurve:
    """sigma_j as a rank-one curve in C^{C(n, k_0 + ... + k_j)}."""
    if not 0 <= j < lift.p:
        raise IndexOutOfRange(f"level {j} outside 0..{lift.p - 1}")
    dim = comb(lift.n, lift.cumulative_rank(j))
    return HolCurve(dim, (lift.sections[j],), lift.section_weights[j], lift.compact)
