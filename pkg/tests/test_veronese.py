import random
from fractions import Fraction
from math import comb, sqrt

import numpy as np
import pytest
from support import ONE_PLUS_ZZBAR, Z, ZBAR, ZZ, conic, example1, random_lift

from flagcurve import (
    HermPoly,
    HolCurve,
    RationalFn,
    Verdict,
    congruence_test,
    constant_value,
    curvature,
    factor_certificate,
    induced_metric,
    laplace_log,
    lift_curve,
    per_level_constancy,
    tensor_lift,
    veronese_component,
    veronese_gamma,
)
from flagcurve.errors import DimensionOverflow, IndexOutOfRange, NotReal
from flagcurve.veronese import (
    congruence_from_betas,
    tensor_metric_sides,
    mobius_certificate,
    veronese_curvature,
    veronese_curve,
)

ONE = HermPoly.constant(1)


def test_component_examples():
    z = np.array([0.4 - 0.2j, 1.5 + 1j])
    assert np.allclose(veronese_component(2, 0, 1)(z), sqrt(2) * z)
    at0 = [complex(veronese_component(2, 1, r)(0j)) for r in range(3)]
    assert at0[0] == 0 and at0[2] == 0 and abs(at0[1]) == pytest.approx(sqrt(2))
    for n in range(1, 5):
        for j in range(n + 1):
            for r in range(n + 1):
                assert np.isfinite(veronese_component(n, j, r)(1 + 0j))
    with pytest.raises(IndexOutOfRange):
        veronese_component(2, 3, 0)


def test_components_span_the_harmonic_sequence():
    # f_{j+1} is the projection of f_j' off f_j; check orthogonality and the norm ratio
    n, z = 4, 0.3 + 0.7j
    vecs = [np.array([complex(veronese_component(n, j, r)(z)) for r in range(n + 1)]) for j in range(n + 1)]
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            assert abs(np.vdot(vecs[j], vecs[i])) < 1e-12
    for j in range(n):
        ratio = np.vdot(vecs[j + 1], vecs[j + 1]).real / np.vdot(vecs[j], vecs[j]).real
        assert ratio == pytest.approx(complex(veronese_gamma(n, j)(z)).real, rel=1e-12)


def test_gamma_and_curvature_closed_forms():
    assert veronese_gamma(2, 0) == RationalFn(2, ONE_PLUS_ZZBAR ** 2)
    assert veronese_gamma(4, 3) == RationalFn(4, ONE_PLUS_ZZBAR ** 2)
    assert veronese_gamma(3, 3).is_zero()
    with pytest.raises(IndexOutOfRange):
        veronese_gamma(2, 3)
    assert veronese_curvature(3, 1) == Fraction(4, 7)
    for n in range(1, 6):
        lift = lift_curve(veronese_curve(n))
        assert lift.gammas == tuple(veronese_gamma(n, j) for j in range(n))
        for j in range(n + 1):
            prev = veronese_gamma(n, j - 1) if j else RationalFn(0)
            k = curvature(induced_metric_from(prev + veronese_gamma(n, j)))
            assert constant_value(k) == veronese_curvature(n, j)


def induced_metric_from(rho):
    from flagcurve import MetricDensity
    return MetricDensity("exact", rho=rho)


def test_tensor_lift_norms():
    lift = lift_curve(example1())
    eta = tensor_lift(lift, (2, 1))
    assert eta.dim == comb(5, 2) ** 2 * comb(5, 4)
    assert eta.norm_square() == lift.betas[0] ** 2 * lift.betas[1]
    single = tensor_lift(lift_curve(veronese_curve(1)), (1,))
    assert single.components() == list(lift_curve(veronese_curve(1)).sections[0])


def test_lemma_on_conic():
    lift = lift_curve(conic(1))
    lhs, rhs = tensor_metric_sides(lift, (1, 2))
    assert lhs == rhs == lift.gammas[0] + lift.gammas[1] * 2


def test_tensor_lift_errors():
    lift = lift_curve(example1())
    with pytest.raises(DimensionOverflow):
        tensor_lift(lift, (5, 3))
    with pytest.raises(ValueError):
        tensor_lift(lift, (0, 1))
    with pytest.raises(IndexOutOfRange):
        tensor_lift(lift, (1,))


def test_large_tensor_norm_uses_factors():
    lift = lift_curve(example1())
    eta = tensor_lift(lift, (3, 2))
    assert eta.dim > 4096
    with pytest.raises(DimensionOverflow):
        eta.components()
    assert laplace_log(eta.norm_square()) == lift.gammas[0] * 3 + lift.gammas[1] * 2


def test_factor_certificate_examples():
    c = factor_certificate(ONE_PLUS_ZZBAR ** 4)
    assert (c.exponent, c.constant, c.factor) == (4, 1, ONE)
    c = factor_certificate(ONE_PLUS_ZZBAR ** 2 * (Z * 2 + ZBAR * 2 + ZZ * 2 + 2))
    assert (c.exponent, c.constant, c.factor) == (2, 2, Z + 1)
    assert factor_certificate(ONE + ZZ + ZZ ** 2) is None
    with pytest.raises(NotReal):
        factor_certificate(Z + 1)


def test_congruence_verdicts():
    cert = congruence_test(lift_curve(example1()))
    assert cert.verdict is Verdict.NOT_CONSTANT
    assert cert.levels[0] is not None and cert.levels[1] is None
    line = congruence_test(lift_curve(veronese_curve(1)))
    assert line.verdict is Verdict.CONSTANT_CURVATURE_ALL_METRICS and line.alphas == (1,)
    beta = ONE_PLUS_ZZBAR ** 3 * (Z + 1) * (ZBAR + 1)
    local = congruence_from_betas([beta])
    assert local.verdict is Verdict.LOCALLY_VERONESE and local.factors == (Z + 1,)


def test_mobius_certificate():
    q = HermPoly.from_terms({(0, 0): 1, (1, 0): Fraction(1, 2), (0, 1): Fraction(1, 2), (1, 1): 3})
    c = mobius_certificate(q ** 3 * 5)
    assert (c.exponent, c.constant, c.base) == (3, 5, q)
    assert c.reconstruct() == q ** 3 * 5
    assert mobius_certificate(ONE_PLUS_ZZBAR ** 2).base == ONE_PLUS_ZZBAR
    # indefinite form, and a product of two different forms
    assert mobius_certificate(ONE + Z + ZBAR + ZZ * Fraction(1, 2)) is None
    assert mobius_certificate(q * ONE_PLUS_ZZBAR) is None


def test_reparametrised_veronese_is_recognised():
    # V^2 composed with z -> (2z + 1) / (z + 3)
    u, v = Z * 2 + 1, Z + 3
    lift = lift_curve(HolCurve(3, ((v * v, u * v, u * u),), (1, 2, 1)))
    cert = congruence_test(lift)
    assert cert.verdict is Verdict.MOBIUS_VERONESE
    assert cert.alphas == (2, 2)
    assert cert.base == (u * u.conj() + v * v.conj()) * Fraction(1, 10)
    rng = random.Random(21)
    for _ in range(5):
        lam = [Fraction(rng.randint(1, 7), rng.randint(1, 7)) for _ in range(2)]
        k = curvature(induced_metric(lift, lam))
        assert constant_value(k) == 4 / sum(l * a for l, a in zip(lam, cert.alphas))


def test_branched_constant_curvature_is_not_an_alarm():
    # z -> z^2 on the sphere: constant curvature away from its two branch points
    lift = lift_curve(HolCurve(2, ((ONE, Z * Z),)))
    assert congruence_test(lift).verdict is Verdict.BRANCHED_CONSTANT
    k = constant_value(curvature(induced_metric(lift, [1])))
    assert k * 2 == 8


def test_certificate_completeness_and_soundness():
    rng = random.Random(13)
    for n in range(1, 6):
        lift = lift_curve(veronese_curve(n))
        cert = congruence_test(lift)
        assert cert.verdict is Verdict.CONSTANT_CURVATURE_ALL_METRICS
        assert cert.alphas == per_level_constancy(lift)
        for _ in range(5):
            lam = [Fraction(rng.randint(1, 7), rng.randint(1, 7)) for _ in range(lift.p)]
            k = curvature(induced_metric(lift, lam))
            assert constant_value(k) == 4 / sum(l * a for l, a in zip(lam, cert.alphas))


def test_lemma_identity_on_random_lifts():
    rng = random.Random(17)
    for _ in range(8):
        lift = random_lift(rng, max_n=3)
        k = [rng.randint(1, 3) for _ in range(lift.p)]
        lhs, rhs = tensor_metric_sides(lift, k)
        assert lhs == rhs
