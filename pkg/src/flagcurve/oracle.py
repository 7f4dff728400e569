"""Floating-point backend and independent numerical checks.

The float backend handles curves whose coefficients leave Q(i) (square roots
of binomials, irrational weights).  Quantities are evaluated pointwise from
the holomorphic derivative vectors of the frame:

* gamma_j by projection: with e_i the new order-j derivatives projected off
  the (j-1)-th osculating space and a_i their next derivatives projected off
  the j-th, gamma_j = tr(G_e^{-1} G_a);
* curvature from truncated Taylor jets in (dz, dzbar) of the Gram
  determinants beta_j, so no finite differences are involved.

The finite-difference and quadrature routines are deliberately naive and
serve only as cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import factorial
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NonPositive, RankAmbiguous, RankDeficient

RANK_TOL = 1e-9
AMBIGUOUS_BAND = (1e-12, 1e-6)
# A fixed, generic-looking base point for rank decisions.
GENERIC_POINT = 0.3183098861837907 + 0.2718281828459045j


def classify_singular_value(s: float) -> bool:
    """True if ``s`` counts as nonzero; RankAmbiguous inside the ambiguity band."""
    lo, hi = AMBIGUOUS_BAND
    if lo < s < hi:
        raise RankAmbiguous(f"singular value {s:.3e} inside ({lo:g}, {hi:g})")
    return s > RANK_TOL


# -- jets -------------------------------------------------------------------------

# A jet of order m is an array [..., m+1, m+1]; entry [a, b] is the coefficient
# of dz^a dzbar^b in the Taylor expansion (each variable truncated at degree m).

def jet_mul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    m = x.shape[-1]
    out = np.zeros(np.broadcast_shapes(x.shape, y.shape), dtype=np.result_type(x, y))
    for a1 in range(m):
        for b1 in range(m):
            xa = x[..., a1, b1]
            for a2 in range(m - a1):
                for b2 in range(m - b1):
                    out[..., a1 + a2, b1 + b2] += xa * y[..., a2, b2]
    return out


def jet_log(x: np.ndarray) -> np.ndarray:
    """log of a jet with positive constant term."""
    m = x.shape[-1]
    c0 = x[..., 0, 0]
    if np.any(np.real(c0) <= 0):
        raise NonPositive("log of a jet with nonpositive constant term")
    t = x / c0[..., None, None]
    t[..., 0, 0] = 0
    out = np.zeros_like(t)
    power = t
    for k in range(1, 2 * (m - 1) + 1):
        out += ((-1) ** (k + 1) / k) * power
        power = jet_mul(power, t)
    out[..., 0, 0] += np.log(c0)
    return out


def jet_ddbar(x: np.ndarray) -> np.ndarray:
    """d^2/dz dzbar of a jet, lowering its order by one."""
    m = x.shape[-1]
    a = np.arange(1, m)
    return x[..., 1:, 1:] * (a[:, None] * a[None, :])


def jet_det(mat: list) -> np.ndarray:
    """Determinant of a square matrix of jets (list of lists), by memoised minors."""
    k = len(mat)
    minors = {(): None}
    for r in range(k):
        nxt = {}
        for s in _subsets(k, r + 1):
            acc = None
            for pos, c in enumerate(s):
                term = mat[r][c] if r == 0 else jet_mul(mat[r][c], minors[s[:pos] + s[pos + 1:]])
                if (r - pos) % 2:
                    term = -term
                acc = term if acc is None else acc + term
            nxt[s] = acc
        minors = nxt
    return minors[tuple(range(k))]


@lru_cache(maxsize=None)
def _subsets(k, r):
    from itertools import combinations

    return tuple(combinations(range(k), r))


def curvature_from_jets(rho: np.ndarray) -> np.ndarray:
    """K = -2 (d dbar log rho) / rho from a jet of rho of order >= 1."""
    lr = jet_log(rho)
    return np.real(-2.0 * lr[..., 1, 1] / rho[..., 0, 0])


# -- float curves -------------------------------------------------------------------

def _poly_vector_derivs(coeffs: np.ndarray, z: np.ndarray, order: int) -> np.ndarray:
    """Taylor coefficients u^(a)(z)/a! for a = 0..order of vector polynomials.

    ``coeffs`` has shape (m, n, D+1); the result has shape (*z.shape, m, order+1, n).
    """
    m, n, d1 = coeffs.shape
    z = np.asarray(z, dtype=np.complex128)
    out = np.zeros(z.shape + (m, order + 1, n), dtype=np.complex128)
    powers = np.stack([z ** p for p in range(d1)], axis=-1) if d1 else None
    for a in range(order + 1):
        for d in range(a, d1):
            # binom(d, a) z^(d-a) is the a-th Taylor coefficient of z^d.
            c = factorial(d) // (factorial(a) * factorial(d - a))
            out[..., :, a, :] += c * coeffs[:, :, d] * powers[..., d - a][..., None, None]
    return out


def _row_degree(r: np.ndarray) -> int:
    scale = np.abs(r).max()
    nz = np.nonzero(np.abs(r).max(axis=0) > 1e-13 * scale)[0]
    return int(nz[-1]) if len(nz) else 0


@dataclass(frozen=True)
class FloatCurve:
    """Holomorphic curve with double-precision coefficients.

    ``coeffs[i, c, d]`` is the coefficient of z^d in component c of frame
    vector i, measured in the standard Hermitian form (weights already folded
    in as square roots).
    """

    n: int
    coeffs: np.ndarray
    compact: bool = True

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.ndim != 3 or c.shape[1] != self.n:
            raise DimensionMismatch("coefficients must have shape (k, n, degree+1)")
        if c.shape[0] == 0 or c.shape[0] > self.n:
            raise DimensionMismatch(f"{c.shape[0]} frame vectors in dimension {self.n}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        u = self.vectors(GENERIC_POINT, 0)[:, 0, :]
        s = np.linalg.svd(_unit_rows(u), compute_uv=False)
        if not classify_singular_value(s[-1]):
            raise RankDeficient("frame is numerically dependent")

    @property
    def rank(self) -> int:
        return self.coeffs.shape[0]

    @classmethod
    def from_entries(cls, n: int, frames: Sequence[Sequence[dict]], weights=None, compact=True):
        """Build from per-entry ``{(a, 0): complex}`` maps (see parse_float_poly)."""
        deg = 0
        for v in frames:
            if len(v) != n:
                raise DimensionMismatch(f"frame vector of length {len(v)} in dimension {n}")
            for e in v:
                for (a, b) in e:
                    if b:
                        raise ValueError("float frames must be holomorphic")
                    deg = max(deg, a)
        coeffs = np.zeros((len(frames), n, deg + 1), dtype=np.complex128)
        for i, v in enumerate(frames):
            for c, e in enumerate(v):
                for (a, _), val in e.items():
                    coeffs[i, c, a] = val
        if weights is not None:
            w = np.asarray([float(x) for x in weights])
            if len(w) != n or np.any(w <= 0):
                raise ValueError("weights must be n positive numbers")
            coeffs = coeffs * np.sqrt(w)[None, :, None]
        return cls(n, coeffs, compact)

    @classmethod
    def from_exact(cls, curve) -> FloatCurve:
        """Float image of an exact :class:`~flagcurve.curves.HolCurve`."""
        entries = [[{m: complex(c) for m, c in e.terms.items()} for e in v] for v in curve.frame]
        return cls.from_entries(curve.n, entries, curve.weights, curve.compact)

    def vectors(self, z, order: int) -> np.ndarray:
        """Shape (*z.shape, k, order+1, n): Taylor coefficients of the frame."""
        return _poly_vector_derivs(self.coeffs, z, order)

    def inverted(self) -> FloatCurve:
        """The same curve in the chart w = 1/z.

        The frame is first row-reduced so that its leading coefficient
        vectors stay independent; each row i is then replaced by
        w^{deg_i} u_i(1/w), which spans the same plane and is regular at w = 0.
        """
        rows = [r.copy() for r in self.coeffs]
        for _ in range(64 * len(rows) * self.coeffs.shape[2]):
            degs = [_row_degree(r) for r in rows]
            lead = np.array([r[:, d] for r, d in zip(rows, degs)])
            _, sv, vh = np.linalg.svd(lead.T)
            if sv[-1] > RANK_TOL * max(sv[0], 1.0):
                break
            c = np.conj(vh[-1])
            m = max((i for i in range(len(rows)) if abs(c[i]) > 1e-8), key=lambda i: degs[i])
            new = np.zeros_like(rows[m])
            for i, r in enumerate(rows):
                shift = degs[m] - degs[i]
                new[:, shift:] += c[i] * r[:, : r.shape[1] - shift]
            new[:, degs[m]] = 0
            rows[m] = new / c[m]
        else:
            raise RankAmbiguous("frame could not be row-reduced at infinity")
        out = np.zeros_like(self.coeffs)
        for i, r in enumerate(rows):
            d = _row_degree(r)
            out[i, :, : d + 1] = r[:, d::-1]
        return FloatCurve(self.n, out, self.compact)

    def transform(self, u: np.ndarray) -> FloatCurve:
        """Apply a constant matrix to every frame vector."""
        return FloatCurve(self.n, np.einsum("rc,icd->ird", np.asarray(u), self.coeffs), self.compact)


def _unit_rows(u: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(u, axis=-1, keepdims=True)
    norms[norms == 0] = 1.0
    return u / norms


@dataclass(frozen=True)
class FloatSequence:
    """Harmonic sequence of a :class:`FloatCurve`, evaluated pointwise.

    ``selected`` lists (derivative order, frame index) of the greedily chosen
    osculating vectors; ``ranks`` are k_0, ..., k_p.
    """

    curve: FloatCurve
    selected: tuple
    ranks: tuple

    @property
    def p(self) -> int:
        return len(self.ranks) - 1

    @property
    def n(self) -> int:
        return self.curve.n

    @property
    def compact(self) -> bool:
        return self.curve.compact

    def cumulative_rank(self, j: int) -> int:
        return sum(self.ranks[: j + 1])

    def _osc(self, z, extra: int) -> np.ndarray:
        """Selected osculating vectors with ``extra`` further Taylor coefficients.

        Shape (*z.shape, m, extra+1, n).  Entry [.., i, a, :] is the a-th Taylor
        coefficient of the i-th selected vector.
        """
        top = max(o for o, _ in self.selected)
        raw = self.curve.vectors(z, top + extra)
        out = []
        for o, i in self.selected:
            # Taylor coefficients of u^(o): binom(o+a, a) * o! * c_{o+a} with c the
            # Taylor coefficients of u; the o! only rescales the vector.
            cols = [raw[..., i, o + a, :] * _binom(o + a, a) for a in range(extra + 1)]
            out.append(np.stack(cols, axis=-2))
        return np.stack(out, axis=-3)

    def beta_jets(self, j: int, z, order: int = 2) -> np.ndarray:
        """Jets of the Gram determinant of the first k^(j) osculating vectors.

        The vectors are first recombined so that their values at z are
        orthonormal.  That change of frame is constant in (dz, dzbar), so it
        scales beta by a constant and leaves every log-derivative intact,
        while keeping the determinant well conditioned.
        """
        m = self.cumulative_rank(j)
        u = self._osc(z, order)[..., :m, :, :]
        return _gram_det_jets(u)

    def gamma_jet(self, j: int, z, order: int = 1) -> np.ndarray:
        """Jet of gamma_j in the local coordinate of this chart."""
        return jet_ddbar(jet_log(self.beta_jets(j, z, order + 1)))

    @cached_property
    def inverse(self) -> FloatSequence:
        """The sequence of the same curve read in the chart w = 1/z."""
        inv = float_harmonic_sequence(self.curve.inverted())
        if inv.ranks != self.ranks:
            raise RankAmbiguous("ranks differ between the two charts")
        return inv

    def gamma_log(self, j: int, z) -> np.ndarray:
        """gamma_j = d dbar log beta_j via jets."""
        self._check_level(j)
        return on_sphere(z, lambda x: np.real(self.gamma_jet(j, x, 0)[..., 0, 0]),
                         lambda w: np.real(self.inverse.gamma_jet(j, w, 0)[..., 0, 0]), density=True)

    def gamma(self, j: int, z) -> np.ndarray:
        """gamma_j = tr A'(A')^* via projections (independent of the jet route)."""
        self._check_level(j)
        return on_sphere(z, lambda x: self._gamma_projection(j, x),
                         lambda w: self.inverse._gamma_projection(j, w), density=True)

    def _check_level(self, j):
        if not 0 <= j < self.p:
            raise IndexError(f"level {j} outside 0..{self.p - 1}")

    def _gamma_projection(self, j: int, z) -> np.ndarray:
        z = np.asarray(z, dtype=np.complex128)
        lo, hi = self.cumulative_rank(j - 1) if j else 0, self.cumulative_rank(j)
        u = self._osc(z, 1)
        e = u[..., lo:hi, 0, :]
        nxt = u[..., lo:hi, 1, :]
        e = _project_off(e, u[..., :lo, 0, :])
        a = _project_off(nxt, u[..., :hi, 0, :])
        ge = np.einsum("...in,...kn->...ik", np.conj(e), e)
        ga = np.einsum("...in,...kn->...ik", np.conj(a), a)
        return np.real(np.trace(np.linalg.solve(ge, ga), axis1=-2, axis2=-1))

    def projector(self, j: int, z) -> np.ndarray:
        """Orthogonal projector onto psi_j at a single point."""
        lo, hi = self.cumulative_rank(j - 1) if j else 0, self.cumulative_rank(j)
        u = self._osc(np.asarray(z, dtype=np.complex128), 0)[..., :, 0, :]
        e = _project_off(u[..., lo:hi, :], u[..., :lo, :])
        q, _ = np.linalg.qr(np.swapaxes(e, -1, -2))
        return q @ np.conj(np.swapaxes(q, -1, -2))


def _gram_det_jets(u: np.ndarray) -> np.ndarray:
    """Jets of det <u_c(z+h), u_r(z+h)> for Taylor data u of shape (..., m, order+1, n)."""
    m = u.shape[-3]
    vals = u[..., :, 0, :]  # (..., m, n)
    _, r = np.linalg.qr(np.swapaxes(vals, -1, -2))  # vals^T = Q R
    # New vectors R^{-T} u have orthonormal values at h = 0.
    rinv_t = np.swapaxes(np.linalg.inv(r), -1, -2)
    u = np.einsum("...ij,...jan->...ian", rinv_t, u)
    gram = [[None] * m for _ in range(m)]
    for a in range(m):
        for c in range(m):
            # <u_c(z+h), u_a(z+h)>: the coefficient of h^s hbar^t is <U_c[s], U_a[t]>.
            gram[a][c] = np.einsum("...sn,...tn->...st", u[..., c, :, :], np.conj(u[..., a, :, :]))
    return jet_det(gram)


def _binom(a: int, b: int) -> int:
    return factorial(a) // (factorial(b) * factorial(a - b))


def _project_off(v: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Remove from the rows of v their components in the span of the rows of basis."""
    if basis.shape[-2] == 0:
        return v
    q, _ = np.linalg.qr(np.swapaxes(basis, -1, -2))  # (..., n, r)
    coef = np.einsum("...nr,...kn->...kr", np.conj(q), v)
    return v - np.einsum("...nr,...kr->...kn", q, coef)


def float_harmonic_sequence(curve: FloatCurve) -> FloatSequence:
    """Ranks of psi_0, psi_1, ... decided by singular values at a generic point."""
    raw = curve.vectors(GENERIC_POINT, curve.n)
    selected, basis, ranks = [], [], []
    for order in range(curve.n + 1):
        before = len(selected)
        for i in range(curve.rank):
            if len(selected) == curve.n:
                break
            v = raw[i, order, :]
            if np.linalg.norm(v) == 0:
                continue
            trial = _unit_rows(np.array(basis + [v]))
            s = np.linalg.svd(trial, compute_uv=False)
            if classify_singular_value(s[-1]):
                selected.append((order, i))
                basis.append(v)
        if len(selected) == before:
            break
        ranks.append(len(selected) - before)
    return FloatSequence(curve, tuple(selected), tuple(ranks))


# -- exact levels seen through the float interface ---------------------------------

class ExactLevels:
    """Jets of exact beta_j polynomials, for float weights on an exact lift."""

    def __init__(self, betas):
        self.betas = tuple(betas)
        self._derivs = {}

    @property
    def p(self) -> int:
        return len(self.betas)

    def _deriv(self, j, a, b):
        key = (j, a, b)
        if key not in self._derivs:
            p = self.betas[j]
            for _ in range(a):
                p = p.diff("z")
            for _ in range(b):
                p = p.diff("zbar")
            self._derivs[key] = p
        return self._derivs[key]

    def beta_jets(self, j: int, z, order: int = 2) -> np.ndarray:
        z = np.asarray(z, dtype=np.complex128)
        out = np.zeros(z.shape + (order + 1, order + 1), dtype=np.complex128)
        for a in range(order + 1):
            for b in range(order + 1):
                out[..., a, b] = self._deriv(j, a, b)(z) / (factorial(a) * factorial(b))
        return out

    def gamma_jet(self, j: int, z, order: int = 1) -> np.ndarray:
        return jet_ddbar(jet_log(self.beta_jets(j, z, order + 1)))

    @cached_property
    def inverse(self) -> ExactLevels:
        """beta_j read in the chart w = 1/z: |w|^(2N) beta_j(1/w)."""
        out = []
        for b in self.betas:
            top = max(b.degrees())
            out.append(type(b).from_terms({(top - a, top - c): v for (a, c), v in b.terms.items()}))
        return ExactLevels(out)

    def gamma(self, j: int, z) -> np.ndarray:
        return on_sphere(z, lambda x: np.real(self.gamma_jet(j, x, 0)[..., 0, 0]),
                         lambda w: np.real(self.inverse.gamma_jet(j, w, 0)[..., 0, 0]), density=True)


def on_sphere(z, inner: Callable, outer: Callable, density: bool = False):
    """Evaluate with ``inner`` where |z| <= 1 and with ``outer`` at w = 1/z elsewhere.

    Far from the origin every beta_j is dominated by a log-harmonic monomial
    and the curvature data is a tiny remainder, so the chart w = 1/z is used
    there.  Scalars are invariant; a density picks up |dw/dz|^2 = |w|^4.
    """
    z = np.asarray(z, dtype=np.complex128)
    flat = z.reshape(-1)
    far = np.abs(flat) > 1
    out = np.empty(flat.shape, dtype=float)
    if np.any(~far):
        out[~far] = inner(flat[~far])
    if np.any(far):
        w = 1 / flat[far]
        vals = np.asarray(outer(w), dtype=float)
        out[far] = vals * np.abs(w) ** 4 if density else vals
    return out.reshape(z.shape) if z.shape else float(out[0])


def _local_curvature(levels, weights, z):
    rho = None
    for j, lam in enumerate(weights):
        g = float(lam) * levels.gamma_jet(j, z, 1)
        rho = g if rho is None else rho + g
    return curvature_from_jets(rho)


def weighted_curvature(levels, weights: Sequence[float], z) -> np.ndarray:
    """K of rho = sum lambda_j gamma_j at z, from gamma jets of order 1."""
    return on_sphere(z, lambda x: _local_curvature(levels, weights, x),
                     lambda w: _local_curvature(levels.inverse, weights, w))


def weighted_density(levels, weights: Sequence[float], z) -> np.ndarray:
    return sum(float(lam) * np.asarray(levels.gamma(j, z)) for j, lam in enumerate(weights))


# -- finite differences and quadrature -----------------------------------------------

def fd_mixed_log(beta_eval: Callable, z: complex, h: float = 1e-4) -> float:
    """(1/4) Laplacian of log beta at z by the five-point stencil."""
    if h <= 0:
        raise ValueError("step must be positive")
    pts = [z, z + h, z - h, z + 1j * h, z - 1j * h]
    vals = []
    for p in pts:
        v = beta_eval(p)
        v = float(np.real(v))
        if not v > 0:
            raise NonPositive(f"beta = {v} at {p}")
        vals.append(np.log(v))
    lap = (vals[1] + vals[2] + vals[3] + vals[4] - 4 * vals[0]) / (h * h)
    return 0.25 * lap


def latitude_points(phi, theta) -> np.ndarray:
    phi = np.asarray(phi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    return (1.0 / np.tan(phi / 2)) * np.exp(1j * theta)


def quadrature_degree(gamma_eval: Callable, tol: float = 1e-8, start: int = 16,
                      max_nodes: int = 1024) -> float:
    """(1/pi) of the integral of gamma over the plane.

    With z = cot(phi/2) e^{i theta} the plane becomes the rectangle
    (0, pi) x [0, 2 pi) and dx dy = r (1/2) csc^2(phi/2) dphi dtheta.
    Gauss-Legendre in phi and the trapezoid rule in theta are doubled
    together until successive estimates differ by less than ``tol``.
    """
    prev = None
    n = start
    while n <= max_nodes:
        x, w = np.polynomial.legendre.leggauss(n)
        phi = 0.5 * np.pi * (x + 1)
        wphi = 0.5 * np.pi * w
        theta = 2 * np.pi * np.arange(n) / n
        r = 1.0 / np.tan(phi / 2)
        jac = r * 0.5 / np.sin(phi / 2) ** 2
        phase = np.exp(1j * theta)
        inner = np.empty(n)
        step = max(1, 65536 // n)
        for lo in range(0, n, step):
            z = r[lo:lo + step, None] * phase[None, :]
            inner[lo:lo + step] = np.real(np.asarray(gamma_eval(z))).mean(axis=1) * 2 * np.pi
        est = float(np.sum(wphi * jac * inner) / np.pi)
        if prev is not None and abs(est - prev) < tol:
            return est
        prev = est
        n *= 2
    raise NoConvergence(f"quadrature did not settle to {tol:g} within {max_nodes} nodes")
