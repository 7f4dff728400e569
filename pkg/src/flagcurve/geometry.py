"""Induced metrics, curvature, Kähler angles and constancy tests.

A lift is either an exact :class:`~flagcurve.curves.PrimitiveLift` or a float
:class:`~flagcurve.oracle.FloatSequence`.  Exact lifts with exact weights give
exact rational functions; any float ingredient switches to pointwise
evaluation through Taylor jets.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .algebra.gaussian import GaussianRational
from .algebra.hermpoly import ONE_PLUS_ZZBAR
from .algebra.ratfn import RationalFn, laplace_log_fn
from .curves import PrimitiveLift
from .errors import IndexOutOfRange, NonPositive, PoleHit, WeightCountMismatch, ZeroMetric
from .oracle import ExactLevels, latitude_points, weighted_curvature

POLE_TOL = 1e-12
FLOAT_CONSTANCY_TOL = 1e-8
GRID_PHI, GRID_THETA = 64, 8


@dataclass(frozen=True)
class InvariantMetric:
    """Consecutive weights lambda_0, ..., lambda_{p-1} of a U(n)-invariant metric."""

    weights: tuple

    def __post_init__(self):
        ws = tuple(self.weights)
        if not ws:
            raise WeightCountMismatch("at least one weight is required")
        if all(isinstance(w, (int, Fraction)) for w in ws):
            ws = tuple(Fraction(w) for w in ws)
        else:
            ws = tuple(float(w) for w in ws)
        if any(not w > 0 for w in ws):
            raise NonPositive("invariant-metric weights must be positive")
        object.__setattr__(self, "weights", ws)

    @property
    def exact(self) -> bool:
        return isinstance(self.weights[0], Fraction)

    def __len__(self):
        return len(self.weights)

    def as_floats(self) -> tuple:
        return tuple(float(w) for w in self.weights)

    @classmethod
    def parse(cls, text: str) -> InvariantMetric:
        """Comma-separated ``p/q`` rationals or decimals; any decimal means float mode."""
        parts = [t.strip() for t in text.split(",") if t.strip()]
        if not parts:
            raise ValueError("empty weight list")
        exact = [("." not in t and "e" not in t.lower()) for t in parts]
        if all(exact):
            return cls(tuple(Fraction(t) for t in parts))
        if any(exact):
            warnings.warn("mixed rational and decimal weights; using floating point", stacklevel=2)
        return cls(tuple(float(Fraction(t)) if "/" in t else float(t) for t in parts))


class FloatField:
    """A pointwise-evaluable real function of z."""

    def __init__(self, fn: Callable):
        self._fn = fn

    def __call__(self, z):
        return self._fn(z)


@dataclass(frozen=True)
class MetricDensity:
    """rho in Psi^* g = rho dz dzbar.

    Exact densities carry ``rho``; float ones carry the per-level jet source
    and weights and evaluate pointwise.
    """

    backend: str
    rho: RationalFn | None = None
    levels: object = None
    weights: tuple = ()

    def __call__(self, z):
        if self.rho is not None:
            return np.real(self.rho(z))
        return sum(w * np.asarray(self.levels.gamma(j, z)) for j, w in enumerate(self.weights))


_SAMPLE_POINTS = np.array([0.1 + 0.2j, -0.7 + 0.3j, 1.3 - 0.4j, -0.2 - 1.1j, 2.1 + 0.9j,
                           0.55 + 0.05j, -1.6 - 1.7j, 0.9 + 1.8j, -3.0 + 0.1j, 0.01 - 0.6j])


def _levels(lift):
    if isinstance(lift, PrimitiveLift):
        return ExactLevels(lift.betas)
    return lift


def gamma(lift, j: int):
    """gamma_j = d dbar log ||sigma_j||^2 (a RationalFn for exact lifts)."""
    if not 0 <= j < lift.p:
        raise IndexOutOfRange(f"level {j} outside 0..{lift.p - 1}")
    if isinstance(lift, PrimitiveLift):
        return lift.gammas[j]
    return FloatField(lambda z, j=j: lift.gamma(j, z))


def induced_metric(lift, m: InvariantMetric | Sequence) -> MetricDensity:
    """rho = sum_j lambda_j gamma_j."""
    if not isinstance(m, InvariantMetric):
        m = InvariantMetric(tuple(m))
    if len(m) != lift.p:
        raise WeightCountMismatch(f"{len(m)} weights for {lift.p} levels")
    if isinstance(lift, PrimitiveLift) and m.exact:
        rho = sum((g * w for g, w in zip(lift.gammas, m.weights)), RationalFn(0))
        if rho.is_zero():
            raise ZeroMetric("induced metric vanishes identically")
        dens = MetricDensity("exact", rho=rho)
    else:
        dens = MetricDensity("float", levels=_levels(lift), weights=m.as_floats())
    vals = dens(_SAMPLE_POINTS)
    if np.any(~(np.asarray(vals) > 0)):
        raise NonPositive("induced metric is not positive at the sample points")
    return dens


def curvature(rho: MetricDensity):
    """Gaussian curvature K = -2 d dbar log(rho) / rho."""
    if rho.rho is not None:
        if rho.rho.is_zero():
            raise ZeroMetric("zero metric has no curvature")
        return laplace_log_fn(rho.rho) * (-2) / rho.rho
    return FloatField(lambda z: weighted_curvature(rho.levels, rho.weights, z))


def constant_value(f: RationalFn):
    """The constant c with num(f) = c den(f), or None.  Real constants come back as Fractions."""
    c = f.constant_value()
    if c is None:
        return None
    return c.re if c.is_real() else c


def kahler_tan_sq(lift, j: int):
    """tan^2(theta_j / 2) = gamma_{j-1} / gamma_j, with gamma_{-1} = 0."""
    if not 0 <= j < lift.p:
        raise IndexOutOfRange(f"Kähler angle index {j} outside 0..{lift.p - 1}")
    if isinstance(lift, PrimitiveLift):
        if j == 0:
            return RationalFn(0)
        return lift.gammas[j - 1] / lift.gammas[j]
    if j == 0:
        return FloatField(lambda z: np.zeros(np.shape(z)))
    return FloatField(lambda z: lift.gamma(j - 1, z) / lift.gamma(j, z))


def per_level_constancy(lift: PrimitiveLift):
    """(alpha_0, ..., alpha_{p-1}) if every gamma_j = alpha_j / (1 + z zbar)^2, else None."""
    alphas = []
    for g in lift.gammas:
        c = (g * ONE_PLUS_ZZBAR ** 2).constant_value()
        if c is None or not c.is_real():
            return None
        alphas.append(c.re)
    return tuple(alphas)


def latitude_eval(f, phi: float, theta: float = 0.0):
    """f at z = cot(phi/2) e^{i theta}, for phi strictly inside (0, pi)."""
    if not 0 < phi < np.pi:
        raise ValueError("phi must lie strictly between 0 and pi")
    z = complex(latitude_points(phi, theta))
    if isinstance(f, RationalFn):
        d = complex(f.den(z))
        if abs(d) <= POLE_TOL:
            raise PoleHit(f"denominator vanishes at phi={phi}, theta={theta}")
        return complex(f.num(z)) / d
    val = f(np.asarray(z))
    val = complex(np.asarray(val))
    if not np.isfinite(val):
        raise PoleHit(f"non-finite value at phi={phi}, theta={theta}")
    return val


def latitude_grid(n: int) -> np.ndarray:
    """n uniform latitudes strictly inside (0, pi): midpoints of n equal cells."""
    if n < 2:
        raise ValueError("a latitude grid needs at least 2 samples")
    return np.pi * (2 * np.arange(n) + 1) / (2 * n)


def phase_grid(n: int) -> np.ndarray:
    if n < 2:
        raise ValueError("a phase grid needs at least 2 samples")
    return 2 * np.pi * np.arange(n) / n


def grid_values(f, n_phi: int = GRID_PHI, n_theta: int = GRID_THETA) -> np.ndarray:
    """Real values of f on the (phi, theta) grid, shape (n_phi, n_theta)."""
    z = latitude_points(latitude_grid(n_phi)[:, None], phase_grid(n_theta)[None, :])
    vals = f(z)
    return np.real(np.asarray(vals, dtype=complex))


def float_constancy(f, tol: float = FLOAT_CONSTANCY_TOL):
    """(is_constant, mean, spread) of f over the standard 64 x 8 grid."""
    vals = grid_values(f)
    spread = float(vals.max() - vals.min())
    return spread <= tol, float(vals.mean()), spread
