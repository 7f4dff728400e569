"""Harmonic sequences of holomorphic curves, primitive lifts into flag manifolds,
and the metric invariants of those lifts (exact over Q(i), with a float backend)."""

from .algebra.gaussian import GaussianRational
from .algebra.hermpoly import HermPoly, conj, diff, factor_out, gcd_univariate, norm_square_factor
from .algebra.parse import parse_hol, parse_poly
from .algebra.ratfn import RationalFn, laplace_log
from .curves import (
    HarmonicSequence,
    HolCurve,
    PrimitiveLift,
    Subbundle,
    gauss_transform,
    harmonic_sequence,
    lift_curve,
    osculating_plucker,
    primitive_lift,
)
from .exterior import hermitian_pairing, norm_square, wedge
from .flagmetric import area, degree, degrees, maximize_area
from .geometry import (
    InvariantMetric,
    MetricDensity,
    constant_value,
    curvature,
    gamma,
    induced_metric,
    kahler_tan_sq,
    latitude_eval,
    per_level_constancy,
)
from .oracle import FloatCurve, fd_mixed_log, float_harmonic_sequence, quadrature_degree
from .veronese import (
    Verdict,
    congruence_test,
    factor_certificate,
    mobius_certificate,
    tensor_lift,
    veronese_component,
    veronese_gamma,
)

__version__ = "0.1.0"
