"""Veronese closed forms, the tensor lift eta and the factorisation certificate.

A lift of a Veronese-type curve has every beta_j equal to a constant times a
power of (1 + z zbar).  The certificate below recognises the slightly larger
family beta_j = c_j |h_j(z)|^2 (1 + z zbar)^{N_j}, and, for a Veronese curve
seen through a Moebius change of coordinate, beta_j = c_j Q^{N_j} with one
positive definite Hermitian form Q = a + b z + conj(b) zbar + c z zbar.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb, factorial, prod, sqrt
from typing import Sequence

import numpy as np

from .algebra.gaussian import GaussianRational
from .algebra.hermpoly import ONE_PLUS_ZZBAR, HermPoly, factor_out, norm_square_factor
from .algebra.ratfn import RationalFn, laplace_log
from .curves import HolCurve, PrimitiveLift
from .errors import DimensionOverflow, IndexOutOfRange, NotReal, ZeroPolynomial
from .exterior import norm_square
from .flagmetric import degrees
from .geometry import InvariantMetric, constant_value, curvature, induced_metric, per_level_constancy
from .oracle import FloatCurve

MAX_TENSOR_DIMENSION = 10 ** 6
# Tensor sections up to this many components are expanded explicitly.
EXPLICIT_TENSOR_LIMIT = 4096


# -- closed forms --------------------------------------------------------------------

def veronese_curve(n: int, compact: bool = True) -> HolCurve:
    """Exact V^n: frame (1, z, ..., z^n) measured with weights C(n, r)."""
    if n < 1:
        raise IndexOutOfRange("Veronese degree must be at least 1")
    frame = (tuple(HermPoly.monomial(r) for r in range(n + 1)),)
    return HolCurve(n + 1, frame, tuple(comb(n, r) for r in range(n + 1)), compact)


def veronese_float_curve(n: int) -> FloatCurve:
    """V^n with the sqrt(C(n, r)) coefficients written out."""
    coeffs = np.zeros((1, n + 1, n + 1), dtype=np.complex128)
    for r in range(n + 1):
        coeffs[0, r, r] = sqrt(comb(n, r))
    return FloatCurve(n + 1, coeffs)


def veronese_component(n: int, j: int, r: int):
    """f_{j,r}: component r of the standard frame of V_j^n, as a function of z."""
    if not (0 <= j <= n and 0 <= r <= n):
        raise IndexOutOfRange(f"need 0 <= j, r <= {n}")
    terms = []
    for k in range(n - r + 1):
        if 0 <= j - k <= r:
            terms.append(((-1) ** k * comb(r, j - k) * comb(n - r, k), r - j + k, k))
    scale = factorial(j) * sqrt(comb(n, r))

    def f(z):
        z = np.asarray(z, dtype=np.complex128)
        zb = np.conj(z)
        s = sum(c * z ** a * zb ** b for c, a, b in terms) if terms else np.zeros_like(z)
        return scale * s / (1 + z * zb) ** j

    return f


def veronese_gamma(n: int, j: int) -> RationalFn:
    """gamma_j = (j+1)(n-j) / (1 + z zbar)^2; zero at the end of the sequence (j = n)."""
    if not 0 <= j <= n:
        raise IndexOutOfRange(f"level {j} outside 0..{n}")
    return RationalFn((j + 1) * (n - j), ONE_PLUS_ZZBAR ** 2)


def veronese_curvature(n: int, j: int) -> Fraction:
    """K(V_j^n) = 4 / (n + 2 j (n - j))."""
    if not 0 <= j <= n:
        raise IndexOutOfRange(f"level {j} outside 0..{n}")
    return Fraction(4, n + 2 * j * (n - j))


# -- tensor lift -----------------------------------------------------------------------

@dataclass(frozen=True)
class TensorSection:
    """eta = sigma_0^{k_0} (x) ... (x) sigma_{p-1}^{k_{p-1}}, kept factorised."""

    factors: tuple
    factor_weights: tuple
    multiplicities: tuple

    @property
    def dim(self) -> int:
        return prod(len(f) ** k for f, k in zip(self.factors, self.multiplicities))

    def _flat(self):
        out = []
        for f, w, k in zip(self.factors, self.factor_weights, self.multiplicities):
            out.extend([(f, w)] * k)
        return out

    def components(self) -> list:
        """All components in Kronecker order (first factor slowest)."""
        if self.dim > EXPLICIT_TENSOR_LIMIT:
            raise DimensionOverflow(f"{self.dim} components is too many to expand")
        comps = [HermPoly.constant(1)]
        for f, _ in self._flat():
            comps = [a * b for a in comps for b in f]
        return comps

    def weights(self) -> list | None:
        if all(w is None for w in self.factor_weights):
            return None
        ws = [Fraction(1)]
        for f, w in self._flat():
            w = [Fraction(1)] * len(f) if w is None else w
            ws = [a * b for a in ws for b in w]
        return ws

    def to_curve(self) -> HolCurve:
        return HolCurve(self.dim, (tuple(self.components()),), self.weights())

    def norm_square(self) -> HermPoly:
        """||eta||^2, from the components when small, else as prod ||sigma_j||^(2 k_j)."""
        if self.dim <= EXPLICIT_TENSOR_LIMIT:
            return norm_square(self.components(), self.weights())
        return prod((norm_square(f, w) ** k for f, w, k in
                     zip(self.factors, self.factor_weights, self.multiplicities)), start=HermPoly.constant(1))


def tensor_lift(lift: PrimitiveLift, k: Sequence[int]) -> TensorSection:
    """The holomorphic curve eta whose Fubini-Study metric is sum_j k_j gamma_j."""
    k = tuple(k)
    if len(k) != lift.p:
        raise IndexOutOfRange(f"{len(k)} multiplicities for {lift.p} levels")
    if any(not isinstance(x, int) or x < 1 for x in k):
        raise ValueError("tensor multiplicities must be positive integers")
    sec = TensorSection(lift.sections, lift.section_weights, k)
    if sec.dim > MAX_TENSOR_DIMENSION:
        raise DimensionOverflow(f"tensor lift has dimension {sec.dim} > {MAX_TENSOR_DIMENSION}")
    return sec


# -- certificates ------------------------------------------------------------------------

@dataclass(frozen=True)
class LevelCertificate:
    exponent: int
    constant: Fraction
    factor: HermPoly
    base: HermPoly = ONE_PLUS_ZZBAR

    def reconstruct(self) -> HermPoly:
        return self.base ** self.exponent * self.factor * self.factor.conj() * self.constant


def factor_certificate(beta: HermPoly) -> LevelCertificate | None:
    """beta = c |h(z)|^2 (1 + z zbar)^N with h monic, or None."""
    if beta.is_zero():
        raise ZeroPolynomial("certificate of the zero polynomial")
    if not beta.is_real():
        raise NotReal("certificate needs a real polynomial")
    n, rest = factor_out(beta, ONE_PLUS_ZZBAR)
    found = norm_square_factor(rest)
    if found is None:
        return None
    cert = LevelCertificate(n, found[0], found[1])
    if cert.reconstruct() != beta:
        raise RuntimeError("certificate does not reconstruct beta")
    return cert


def mobius_certificate(beta: HermPoly) -> LevelCertificate | None:
    """beta = c Q^N with Q = 1 + b z + conj(b) zbar + q z zbar positive definite, or None."""
    if beta.is_zero():
        raise ZeroPolynomial("certificate of the zero polynomial")
    if not beta.is_real():
        raise NotReal("certificate needs a real polynomial")
    n, m = beta.degrees()
    c0 = beta.terms.get((0, 0))
    if n != m or c0 is None:
        return None
    one = HermPoly.constant(1)
    if n == 0:
        return LevelCertificate(0, c0.re, one, one)
    p = beta * (1 / c0.re)
    # Q is read off from the z, zbar and z zbar coefficients of Q^n.
    b = p.terms.get((1, 0), GaussianRational(0)) / n
    bb = (b * b.conjugate()).re
    q = (p.terms.get((1, 1), GaussianRational(0)).re - n * (n - 1) * bb) / n
    if q - bb <= 0:
        return None
    base = HermPoly.from_terms({(0, 0): 1, (1, 0): b, (0, 1): b.conjugate(), (1, 1): q})
    if base ** n != p:
        return None
    return LevelCertificate(n, c0.re, one, base)


class Verdict(str, Enum):
    CONSTANT_CURVATURE_ALL_METRICS = "CONSTANT_CURVATURE_ALL_METRICS"
    MOBIUS_VERONESE = "MOBIUS_VERONESE"
    LOCALLY_VERONESE = "LOCALLY_VERONESE"
    NOT_CONSTANT = "NOT_CONSTANT"
    BRANCHED_CONSTANT = "BRANCHED_CONSTANT"
    INCONCLUSIVE_ALARM = "INCONCLUSIVE_ALARM"


@dataclass(frozen=True)
class CongruenceCertificate:
    levels: tuple  # LevelCertificate or None per level
    verdict: Verdict

    @property
    def alphas(self) -> tuple | None:
        if self.verdict not in (Verdict.CONSTANT_CURVATURE_ALL_METRICS, Verdict.MOBIUS_VERONESE):
            return None
        return tuple(c.exponent for c in self.levels)

    @property
    def base(self) -> HermPoly | None:
        """The Hermitian form Q shared by all levels of a MOBIUS_VERONESE certificate."""
        if self.verdict is not Verdict.MOBIUS_VERONESE:
            return None
        return next(c.base for c in self.levels if c.exponent)

    @property
    def factors(self) -> tuple:
        return tuple(None if c is None else c.factor for c in self.levels)


def congruence_from_betas(betas: Sequence[HermPoly]) -> CongruenceCertificate:
    """Verdict from the factorisation of each beta_j alone (no alarm check)."""
    levels = tuple(factor_certificate(b) for b in betas)
    if any(c is None for c in levels):
        mob = tuple(mobius_certificate(b) for b in betas)
        if all(c is not None for c in mob) and len({c.base for c in mob if c.exponent}) == 1:
            return CongruenceCertificate(mob, Verdict.MOBIUS_VERONESE)
        verdict = Verdict.NOT_CONSTANT
    elif all(c.factor.is_constant() for c in levels):
        verdict = Verdict.CONSTANT_CURVATURE_ALL_METRICS
    else:
        verdict = Verdict.LOCALLY_VERONESE
    return CongruenceCertificate(levels, verdict)


def congruence_test(lift: PrimitiveLift, probe: Sequence | None = None) -> CongruenceCertificate:
    """Factorisation certificate for every level of an exact lift.

    When some level does not factor, the curvature for the ``probe`` weights
    (all ones by default) is still checked.  If it is constant anyway the
    lift is either branched, which Gauss-Bonnet detects on a compact curve as
    K * sum lambda_j delta_j > 4 (BRANCHED_CONSTANT), or the verdict is
    INCONCLUSIVE_ALARM, a case that should never occur for an immersion.
    """
    cert = congruence_from_betas(lift.betas)
    if cert.verdict is Verdict.CONSTANT_CURVATURE_ALL_METRICS:
        alphas = per_level_constancy(lift)
        if alphas is None or tuple(alphas) != tuple(Fraction(a) for a in cert.alphas):
            raise RuntimeError("factorisation and per-level constancy disagree")
        return cert
    if cert.verdict is Verdict.NOT_CONSTANT:
        weights = tuple(probe) if probe is not None else (1,) * lift.p
        metric = InvariantMetric(weights)
        value = constant_value(curvature(induced_metric(lift, metric)))
        if value is not None:
            if lift.compact:
                total = value * sum(w * d for w, d in zip(metric.weights, degrees(lift)))
                if total != 4:
                    return CongruenceCertificate(cert.levels, Verdict.BRANCHED_CONSTANT)
            return CongruenceCertificate(cert.levels, Verdict.INCONCLUSIVE_ALARM)
    return cert


def tensor_metric_sides(lift: PrimitiveLift, k: Sequence[int]) -> tuple:
    """(d dbar log ||eta||^2, sum_j k_j gamma_j) for the tensor lift with multiplicities k."""
    eta = tensor_lift(lift, k)
    lhs = laplace_log(eta.norm_square())
    rhs = sum((g * kj for g, kj in zip(lift.gammas, k)), RationalFn(0))
    return lhs, rhs
