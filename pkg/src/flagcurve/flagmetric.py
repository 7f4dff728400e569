"""Degrees, areas and the area-maximising invariant metric (sum of squared weights = 1)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .curves import PrimitiveLift
from .errors import IndexOutOfRange, NonCompactDomain, NoConvergence, WeightCountMismatch, ZeroDegrees
from .geometry import InvariantMetric
from .oracle import quadrature_degree

# Largest accepted distance between a quadrature estimate and its rounding.
QUADRATURE_ROUNDING = 0.25


def degree(lift, j: int) -> int:
    """delta_j: max component degree of the coprime Plücker section sigma_j.

    Float lifts have no exact section, so their degree is the quadrature
    integral of gamma_j, rounded (refused if it is not near an integer).
    """
    if not 0 <= j < lift.p:
        raise IndexOutOfRange(f"level {j} outside 0..{lift.p - 1}")
    if isinstance(lift, PrimitiveLift):
        return int(max(e.degree_z() for e in lift.sections[j] if not e.is_zero()))
    est = quadrature_degree(lambda z: lift.gamma(j, z), tol=1e-9)
    rounded = round(est)
    if abs(est - rounded) >= QUADRATURE_ROUNDING:
        raise NoConvergence(f"quadrature degree {est} is not close to an integer")
    return int(rounded)


def degrees(lift) -> tuple:
    return tuple(degree(lift, j) for j in range(lift.p))


def quadrature_degrees(lift, tol: float = 1e-9) -> tuple:
    """Unrounded (1/pi) integrals of gamma_j over the plane."""
    out = []
    for j in range(lift.p):
        if isinstance(lift, PrimitiveLift):
            g = lift.gammas[j]
            out.append(quadrature_degree(lambda z, g=g: g(z).real, tol=tol))
        else:
            out.append(quadrature_degree(lambda z, j=j: lift.gamma(j, z), tol=tol))
    return tuple(out)


@dataclass(frozen=True)
class AreaReport:
    """Area of Psi in a given invariant metric.

    ``pi_coefficient`` is sum lambda_j delta_j (exact Fraction when the weights
    are rational), so the area is pi times it.
    """

    weights: tuple
    degrees: tuple
    pi_coefficient: Fraction | float
    maximizer: bool = False

    @property
    def value(self) -> float:
        return math.pi * float(self.pi_coefficient)


def area(lift, m: InvariantMetric | Sequence) -> AreaReport:
    """A(Psi) = pi sum_j lambda_j delta_j, for curves on the whole sphere."""
    if not lift.compact:
        raise NonCompactDomain("area needs a curve defined on the whole sphere")
    if not isinstance(m, InvariantMetric):
        m = InvariantMetric(tuple(m))
    if len(m) != lift.p:
        raise WeightCountMismatch(f"{len(m)} weights for {lift.p} levels")
    ds = degrees(lift)
    coef = sum((w * d for w, d in zip(m.weights, ds)), Fraction(0) if m.exact else 0.0)
    best = maximize_area(ds)
    is_max = math.isclose(float(coef), best.max_pi_coefficient, rel_tol=1e-12) and math.isclose(
        sum(float(w) ** 2 for w in m.weights), 1.0, rel_tol=1e-12)
    return AreaReport(m.weights, ds, coef, is_max)


@dataclass(frozen=True)
class Maximizer:
    """lambda* = delta / |delta|: the exact integer direction plus its float normalisation."""

    direction: tuple
    norm_square: int

    @property
    def norm(self) -> float:
        return math.sqrt(self.norm_square)

    @property
    def weights(self) -> tuple:
        return tuple(d / self.norm for d in self.direction)

    @property
    def max_pi_coefficient(self) -> float:
        return self.norm

    @property
    def max_area(self) -> float:
        return math.pi * self.norm

    def metric(self) -> InvariantMetric:
        return InvariantMetric(self.weights)


def maximize_area(deltas: Sequence[int]) -> Maximizer:
    """Maximise pi sum lambda_j delta_j subject to sum lambda_j^2 = 1.

    By Cauchy-Schwarz the unique maximiser is delta / |delta|.  A zero degree
    would force a zero weight, which is not an invariant metric.
    """
    ds = tuple(int(d) for d in deltas)
    if not ds or any(d < 0 for d in ds):
        raise ValueError("degrees must be nonnegative integers")
    if any(d == 0 for d in ds):
        raise ZeroDegrees("a zero degree admits no positive maximising weight")
    return Maximizer(ds, sum(d * d for d in ds))
