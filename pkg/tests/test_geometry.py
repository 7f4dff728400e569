import random
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from support import ONE_PLUS_ZZBAR, ZZ, rank2_sextic, conic, example1, positive_rationals, random_lift

from flagcurve import (
    HermPoly,
    InvariantMetric,
    MetricDensity,
    RationalFn,
    constant_value,
    curvature,
    gamma,
    induced_metric,
    kahler_tan_sq,
    latitude_eval,
    lift_curve,
    per_level_constancy,
)
from flagcurve.errors import IndexOutOfRange, NonPositive, PoleHit, WeightCountMismatch, ZeroMetric
from flagcurve.geometry import float_constancy, grid_values, latitude_grid
from flagcurve.oracle import fd_mixed_log, float_harmonic_sequence
from flagcurve.veronese import veronese_curve, veronese_float_curve

ONE = HermPoly.constant(1)


def density(alpha):
    return MetricDensity("exact", rho=RationalFn(alpha, ONE_PLUS_ZZBAR ** 2))


def test_gamma_examples():
    lift = lift_curve(conic(1))
    x = ZZ
    assert gamma(lift, 1) == RationalFn((ONE + x + x ** 2) * 4, (x * 4 + 1 + x ** 2) ** 2)
    assert gamma(lift_curve(example1()), 1) == RationalFn(ONE + x * (x + 4), (ONE + x * (x + 1)) ** 2)
    with pytest.raises(IndexOutOfRange):
        gamma(lift, 2)
    seq = float_harmonic_sequence(veronese_float_curve(3))
    z = np.array([0.3 + 0.1j, -2 + 1j])
    for j in range(3):
        assert np.allclose(gamma(seq, j)(z), (j + 1) * (3 - j) / (1 + abs(z) ** 2) ** 2, atol=1e-12)


def test_invariant_metric():
    assert InvariantMetric((1, Fraction(1, 2))).exact
    assert not InvariantMetric((1, 0.5)).exact
    with pytest.raises(NonPositive):
        InvariantMetric((1, 0))
    with pytest.raises(WeightCountMismatch):
        InvariantMetric(())
    assert InvariantMetric.parse("1, 2/3").weights == (1, Fraction(2, 3))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        m = InvariantMetric.parse("1, 0.5")
    assert not m.exact and caught


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_veronese_density_with_unit_weights(n):
    lift = lift_curve(veronese_curve(n))
    rho = induced_metric(lift, (1,) * n)
    assert rho.rho == RationalFn(Fraction(n * (n + 1) * (n + 2), 6), ONE_PLUS_ZZBAR ** 2)


def test_induced_metric_single_level_and_errors():
    lift = lift_curve(veronese_curve(1))
    assert induced_metric(lift, (1,)).rho == lift.gammas[0]
    with pytest.raises(WeightCountMismatch):
        induced_metric(lift, (1, 1))
    ex = lift_curve(example1())
    rho = induced_metric(ex, (2 / 5 ** 0.5, 1 / 5 ** 0.5))
    assert rho.backend == "float"
    vals = grid_values(rho)
    want = grid_values(lambda z: 2 / 5 ** 0.5 * ex.gammas[0](z) + 1 / 5 ** 0.5 * ex.gammas[1](z))
    assert np.allclose(vals, want, rtol=1e-12, atol=0)


def test_curvature_examples():
    for alpha in (1, 4, Fraction(7, 3)):
        assert constant_value(curvature(density(alpha))) == 4 / Fraction(alpha)
    for n in range(1, 6):
        for j in range(n + 1):
            a = n + 2 * j * (n - j)
            assert constant_value(curvature(density(a))) == Fraction(4, a)
    with pytest.raises(ZeroMetric):
        curvature(MetricDensity("exact", rho=RationalFn(0)))


def test_conic_curvature_is_not_constant():
    lift = lift_curve(conic(1))
    k = curvature(induced_metric(lift, (1, 1)))
    assert constant_value(k) is None
    # values from an independent symbolic computation
    assert latitude_eval(k, np.pi / 2).real == pytest.approx(4 / 3, rel=1e-14)
    assert complex(k(0j)).real == pytest.approx(52 / 25, rel=1e-14)
    assert complex(k(0.5 + 1j / 3)).real == pytest.approx(0.6882486308154812, rel=1e-12)
    k12 = curvature(induced_metric(lift, (1, 2)))
    assert complex(k12(0j)).real == pytest.approx(4 / 3, rel=1e-14)
    assert complex(k12(1 + 0j)).real == pytest.approx(3 / 4, rel=1e-14)
    assert abs(latitude_eval(k, 1.0) - latitude_eval(k, 2.0)) > 1e-6


def test_conic_curvature_matches_finite_differences_at_equator():
    lift = lift_curve(conic(1))
    rho = induced_metric(lift, (1, 1))
    k = curvature(rho)
    z = 1.0 + 0j
    r = float(np.real(rho(z)))
    fd = -2 * fd_mixed_log(lambda w: np.real(rho(w)), z) / r
    assert fd == pytest.approx(latitude_eval(k, np.pi / 2).real, rel=1e-6)


def test_constant_value():
    assert constant_value(RationalFn(ONE_PLUS_ZZBAR ** 2 * 4, ONE_PLUS_ZZBAR ** 2)) == 4
    for n in (2, 3, 4):
        k = curvature(induced_metric(lift_curve(veronese_curve(n)), (1,) * n))
        assert constant_value(k) == Fraction(4 * 6, n * (n + 1) * (n + 2))
    assert constant_value(RationalFn(ZZ)) is None


def test_kahler_angles():
    for n in (2, 3, 4, 5):
        lift = lift_curve(veronese_curve(n))
        assert kahler_tan_sq(lift, 0).is_zero()
        for j in range(1, n):
            assert constant_value(kahler_tan_sq(lift, j)) == Fraction(j * (n - j + 1), (j + 1) * (n - j))
    lift = lift_curve(conic(1))
    t = kahler_tan_sq(lift, 1)
    assert constant_value(t) is None
    assert complex(t(0j)) == pytest.approx(0.25) and complex(t(1 + 0j)) == pytest.approx(2)
    with pytest.raises(IndexOutOfRange):
        kahler_tan_sq(lift, 2)


def test_per_level_constancy():
    assert per_level_constancy(lift_curve(veronese_curve(3))) == (3, 4, 3)
    assert per_level_constancy(lift_curve(example1())) is None
    assert per_level_constancy(lift_curve(conic(1))) is None
    assert per_level_constancy(lift_curve(rank2_sextic())) is None


def test_latitude_eval():
    f = RationalFn(1, ONE_PLUS_ZZBAR ** 2)
    assert latitude_eval(f, np.pi / 2, 0.7) == pytest.approx(0.25)
    k = curvature(induced_metric(lift_curve(veronese_curve(2)), (1, 1)))
    for phi in latitude_grid(7):
        assert latitude_eval(k, phi) == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(PoleHit):
        latitude_eval(RationalFn(1, ZZ - 1), np.pi / 2)
    with pytest.raises(ValueError):
        latitude_eval(f, 0.0)


def test_float_constancy_of_veronese_plane():
    seq = float_harmonic_sequence(veronese_float_curve(2))
    k = curvature(induced_metric(seq, (1.0, 1.0)))
    const, mean, spread = float_constancy(k)
    assert const and mean == pytest.approx(1.0, abs=1e-12) and spread < 1e-8


def test_constant_lifts_have_constant_curvature_for_random_weights():
    rng = random.Random(8)
    for n in (2, 3, 4):
        lift = lift_curve(veronese_curve(n))
        alphas = per_level_constancy(lift)
        for _ in range(5):
            lam = [Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(lift.p)]
            k = curvature(induced_metric(lift, lam))
            assert constant_value(k) == 4 / sum(l * a for l, a in zip(lam, alphas))


_GAMMAS = [lift_curve(conic(1)).gammas, lift_curve(example1()).gammas, lift_curve(conic(2)).gammas]


@settings(max_examples=500)
@given(st.sampled_from(_GAMMAS), positive_rationals, positive_rationals, positive_rationals)
def test_scaling_covariance(gammas, l0, l1, c):
    rho = gammas[0] * l0 + gammas[1] * l1
    k = curvature(MetricDensity("exact", rho=rho))
    kc = curvature(MetricDensity("exact", rho=rho * c))
    assert kc == k / c


@settings(max_examples=300)
@given(positive_rationals)
def test_round_sphere_curvature(alpha):
    assert constant_value(curvature(density(alpha))) == 4 / alpha


def test_kahler_boundary_on_random_lifts():
    rng = random.Random(21)
    for _ in range(10):
        assert kahler_tan_sq(random_lift(rng), 0).is_zero()
