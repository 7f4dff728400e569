"""Shared builders and hypothesis strategies for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path

import numpy as np
from hypothesis import strategies as st

from flagcurve import HermPoly, HolCurve, lift_curve
from flagcurve.algebra.gaussian import GaussianRational
from flagcurve.algebra.hermpoly import ONE_PLUS_ZZBAR, Z, ZBAR
from flagcurve.curvefile import CurveFile
from flagcurve.errors import FlagCurveError

DATA = Path(__file__).resolve().parent.parent / "data"

ZZ = Z * ZBAR


def data_file(name: str) -> Path:
    return DATA / name


def load_lift(name: str):
    return lift_curve(CurveFile.load(DATA / name).build())


def conic(a) -> HolCurve:
    """psi_0^a = (1, a z, z^2)."""
    return HolCurve(3, [[HermPoly.constant(1), Z * a, Z ** 2]])


def example1() -> HolCurve:
    """The rank-2 curve in C^5 with frames f_0 = (1, 0, 2z, 2z^2, z^2), g_0 = (0, 1, 0, z^2, 0)."""
    one, zero = HermPoly.constant(1), HermPoly.constant(0)
    return HolCurve(5, [[one, zero, Z * 2, Z ** 2 * 2, Z ** 2], [zero, one, zero, Z ** 2, zero]])


def rank2_sextic() -> HolCurve:
    """The rank-2 degree-6 curve, with the sqrt(6) absorbed into a coordinate weight."""
    one, zero = HermPoly.constant(1), HermPoly.constant(0)
    f = [one, zero, -(Z ** 2), Z ** 3 * -2, Z ** 4 * -3]
    g = [zero, one, Z, Z ** 2 * 3, Z ** 3 * 4]
    return HolCurve(5, [f, g], (1, 1, 6, 1, 1))


# -- random exact data -------------------------------------------------------------------

def small_gaussian(rng: random.Random, imag: float = 0.3) -> GaussianRational:
    re = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    im = Fraction(rng.randint(-3, 3), rng.randint(1, 2)) if rng.random() < imag else 0
    return GaussianRational(re, im)


def random_hol(rng: random.Random, deg: int) -> HermPoly:
    return HermPoly.from_terms({(d, 0): small_gaussian(rng) for d in range(deg + 1) if rng.random() < 0.6})


def random_lift(rng: random.Random, max_n: int = 4, max_deg: int = 3):
    """A random full exact curve with n <= max_n, lifted; retries until the lift exists."""
    while True:
        n = rng.randint(2, max_n)
        k = rng.choice([1, 1, 2]) if n >= 3 else 1
        frame = [[random_hol(rng, rng.randint(0, max_deg)) for _ in range(n)] for _ in range(k)]
        try:
            curve = HolCurve(n, frame)
            if not curve.is_full():
                continue
            return lift_curve(curve)
        except FlagCurveError:
            continue


def random_signed_permutation(rng: random.Random, n: int) -> list:
    perm = list(range(n))
    rng.shuffle(perm)
    units = [1, -1, GaussianRational(0, 1), GaussianRational(0, -1)]
    mat = [[0] * n for _ in range(n)]
    for i, j in enumerate(perm):
        mat[i][j] = rng.choice(units)
    return mat


fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)
gaussians = st.builds(GaussianRational, fractions, st.one_of(st.just(Fraction(0)), fractions))


@st.composite
def herm_polys(draw, max_deg: int = 3, max_terms: int = 4):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        a = draw(st.integers(0, max_deg))
        b = draw(st.integers(0, max_deg))
        terms[(a, b)] = draw(gaussians)
    return HermPoly.from_terms(terms)


@st.composite
def hol_polys(draw, max_deg: int = 3):
    cs = draw(st.lists(gaussians, min_size=1, max_size=max_deg + 1))
    return HermPoly.from_terms({(d, 0): c for d, c in enumerate(cs)})


@st.composite
def real_polys(draw, max_deg: int = 2, max_terms: int = 3):
    """Nonzero real polynomials p + conj(p) + c with a positive constant term."""
    p = draw(herm_polys(max_deg, max_terms))
    c = draw(st.fractions(min_value=1, max_value=6, max_denominator=4))
    out = p + p.conj() + HermPoly.constant(c)
    return out if not out.is_zero() else HermPoly.constant(c)


positive_rationals = st.fractions(min_value=Fraction(1, 10), max_value=10, max_denominator=12).filter(lambda x: x > 0)



def fd_curvature(rho, z: complex) -> float:
    """K = -2 d dbar log(rho) / rho by finite differences, in the chart w = 1/z when |z| > 1."""
    from flagcurve.oracle import fd_mixed_log

    if abs(z) > 1:
        z = 1 / z
        dens = lambda w: float(np.real(rho(1 / w))) / abs(w) ** 4  # noqa: E731
    else:
        dens = lambda w: float(np.real(rho(w)))  # noqa: E731
    return -2 * fd_mixed_log(dens, z) / dens(z)
