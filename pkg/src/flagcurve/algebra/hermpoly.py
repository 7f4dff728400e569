"""Exact polynomials in z and zbar over the Gaussian rationals.

A :class:`HermPoly` stores its real and imaginary coefficient parts as two
``flint.fmpq_mpoly`` objects in the variables ``z`` and ``zbar``; all
arithmetic, exact division and rational gcds run inside FLINT.  Conjugation
swaps the two variables and conjugates the coefficients, so a polynomial is
real-valued exactly when it equals its conjugate.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

import flint
from flint.utils.flint_exceptions import DomainError
import numpy as np

from ..errors import ExponentOverflow, NotReal, ZeroPolynomial
from .gaussian import GaussianRational, as_fraction, format_rational, to_fmpq

MAX_EXPONENT = 2 ** 16

CTX = flint.fmpq_mpoly_ctx.get(("z", "zbar"), "deglex")
# Auxiliary contexts for the real-coordinate gcd route; t and s stand for i.
_XYT = flint.fmpq_mpoly_ctx.get(("t", "x", "y"), "lex")
_SZW = flint.fmpq_mpoly_ctx.get(("s", "z", "zbar"), "lex")

_ZERO = CTX.constant(0)


def _sort_key(mono):
    a, b = mono
    return (a + b, -a)


def _leading_key(mono):
    a, b = mono
    return (a + b, a)


class HermPoly:
    """Immutable element of Q(i)[z, zbar]."""

    __slots__ = ("re", "im", "_numeric")

    def __init__(self, re=None, im=None):
        re = _ZERO if re is None else re
        im = _ZERO if im is None else im
        if not isinstance(re, flint.fmpq_mpoly):
            re = CTX.constant(to_fmpq(as_fraction(re)))
        if not isinstance(im, flint.fmpq_mpoly):
            im = CTX.constant(to_fmpq(as_fraction(im)))
        for part in (re, im):
            if not part.is_zero() and max(part.degrees()) > MAX_EXPONENT:
                raise ExponentOverflow(f"exponent exceeds {MAX_EXPONENT}")
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)
        object.__setattr__(self, "_numeric", None)

    def __setattr__(self, name, value):
        raise AttributeError("HermPoly is immutable")

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_terms(cls, terms) -> HermPoly:
        """Build from ``{(a, b): coefficient}`` with exact coefficients."""
        re, im = {}, {}
        for (a, b), c in dict(terms).items():
            if a < 0 or b < 0:
                raise ValueError("exponents must be nonnegative")
            if a > MAX_EXPONENT or b > MAX_EXPONENT:
                raise ExponentOverflow(f"exponent exceeds {MAX_EXPONENT}")
            c = GaussianRational.coerce(c)
            if c.re:
                re[(a, b)] = to_fmpq(c.re)
            if c.im:
                im[(a, b)] = to_fmpq(c.im)
        return cls(CTX.from_dict(re), CTX.from_dict(im))

    @classmethod
    def constant(cls, c) -> HermPoly:
        c = GaussianRational.coerce(c)
        return cls(CTX.constant(to_fmpq(c.re)), CTX.constant(to_fmpq(c.im)))

    @classmethod
    def monomial(cls, a: int, b: int = 0, c=1) -> HermPoly:
        return cls.from_terms({(a, b): c})

    @staticmethod
    def _coerce(x) -> HermPoly:
        if isinstance(x, HermPoly):
            return x
        return HermPoly.constant(x)

    # -- inspection -------------------------------------------------------------

    @property
    def terms(self) -> dict:
        out: dict = {}
        for mono, c in self.re.to_dict().items():
            out[mono] = [as_fraction(c), Fraction(0)]
        for mono, c in self.im.to_dict().items():
            out.setdefault(mono, [Fraction(0), Fraction(0)])[1] = as_fraction(c)
        return {m: GaussianRational(r, i) for m, (r, i) in out.items()}

    def sorted_terms(self) -> list:
        """Terms in canonical order: ascending total degree, then descending z power."""
        return sorted(self.terms.items(), key=lambda kv: _sort_key(kv[0]))

    def coefficient(self, a: int, b: int = 0) -> GaussianRational:
        return self.terms.get((a, b), GaussianRational(0))

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def has_real_coefficients(self) -> bool:
        return self.im.is_zero()

    def is_constant(self) -> bool:
        return self.re.is_constant() and self.im.is_constant()

    def constant_value(self) -> GaussianRational:
        return self.coefficient(0, 0)

    def degrees(self) -> tuple:
        """``(max power of z, max power of zbar)``; ``(-1, -1)`` for zero."""
        if self.is_zero():
            return (-1, -1)
        ds = [p.degrees() for p in (self.re, self.im) if not p.is_zero()]
        return (int(max(d[0] for d in ds)), int(max(d[1] for d in ds)))

    def degree_z(self) -> int:
        return self.degrees()[0]

    def degree_zbar(self) -> int:
        return self.degrees()[1]

    def is_holomorphic(self) -> bool:
        return self.is_zero() or self.degree_zbar() == 0

    def is_real(self) -> bool:
        """True when the polynomial equals its own conjugate."""
        return self == self.conj()

    def leading_monomial(self) -> tuple:
        if self.is_zero():
            raise ZeroPolynomial("zero polynomial has no leading monomial")
        monos = set(self.re.monoms()) | set(self.im.monoms())
        return max(monos, key=_leading_key)

    def leading_coefficient(self) -> GaussianRational:
        return self.coefficient(*self.leading_monomial())

    def __len__(self):
        return len(set(self.re.monoms()) | set(self.im.monoms()))

    # -- arithmetic -------------------------------------------------------------

    def __add__(self, other):
        try:
            o = HermPoly._coerce(other)
        except TypeError:
            return NotImplemented
        return HermPoly(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return HermPoly(-self.re, -self.im)

    def __sub__(self, other):
        try:
            o = HermPoly._coerce(other)
        except TypeError:
            return NotImplemented
        return HermPoly(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, HermPoly):
            if self.im.is_zero() and other.im.is_zero():
                return HermPoly(self.re * other.re)
            return HermPoly(self.re * other.re - self.im * other.im,
                            self.re * other.im + self.im * other.re)
        try:
            c = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        cr, ci = to_fmpq(c.re), to_fmpq(c.im)
        return HermPoly(self.re * cr - self.im * ci, self.re * ci + self.im * cr)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers are supported")
        if self.im.is_zero():
            return HermPoly(self.re ** k)
        out = HermPoly.constant(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> HermPoly:
        return self * GaussianRational.coerce(c)

    def __truediv__(self, other):
        """Division by a nonzero scalar, or exact division by a polynomial."""
        if isinstance(other, HermPoly):
            q = self.divide(other)
            if q is None:
                raise ValueError("polynomial division is not exact")
            return q
        c = GaussianRational.coerce(other)
        return self * c.inverse()

    def divide(self, other: HermPoly) -> HermPoly | None:
        """Exact quotient ``self / other`` or ``None`` when it does not exist."""
        if other.is_zero():
            raise ZeroPolynomial("division by the zero polynomial")
        if self.is_zero():
            return HermPoly()
        ds, do = self.degrees(), other.degrees()
        if do[0] > ds[0] or do[1] > ds[1]:
            return None
        try:
            if other.im.is_zero():
                return HermPoly(self.re / other.re, self.im / other.re)
            # Multiply through by the coefficient conjugate so the divisor becomes rational.
            norm = other.re * other.re + other.im * other.im
            a = self.re * other.re + self.im * other.im
            b = self.im * other.re - self.re * other.im
            return HermPoly(a / norm, b / norm)
        except DomainError:
            return None

    def divides(self, other: HermPoly) -> bool:
        return other.divide(self) is not None

    def __eq__(self, other):
        try:
            o = HermPoly._coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((str(self.re), str(self.im)))

    # -- analytic operators -----------------------------------------------------

    def conj(self) -> HermPoly:
        zb, z = CTX.gens()[1], CTX.gens()[0]
        return HermPoly(self.re.compose(zb, z), -self.im.compose(zb, z))

    def coefficient_conj(self) -> HermPoly:
        """Conjugate the coefficients only (no variable swap)."""
        return HermPoly(self.re, -self.im)

    def diff(self, var: str = "z") -> HermPoly:
        if var not in ("z", "zbar"):
            raise ValueError("var must be 'z' or 'zbar'")
        return HermPoly(self.re.derivative(var), self.im.derivative(var))

    # -- numerics ---------------------------------------------------------------

    def _numeric_data(self):
        if self._numeric is None:
            items = list(self.terms.items())
            a = np.array([m[0] for m, _ in items], dtype=np.int64)
            b = np.array([m[1] for m, _ in items], dtype=np.int64)
            c = np.array([complex(v) for _, v in items], dtype=np.complex128)
            object.__setattr__(self, "_numeric", (a, b, c))
        return self._numeric

    def __call__(self, z):
        """Evaluate at complex ``z`` (scalar or array) in double precision."""
        a, b, c = self._numeric_data()
        z = np.asarray(z, dtype=np.complex128)
        if len(c) == 0:
            return np.zeros_like(z) if z.shape else 0j
        zz = z[..., None]
        vals = (c * zz ** a * np.conj(zz) ** b).sum(axis=-1)
        return vals if z.shape else complex(vals)

    def evaluate_exact(self, z) -> GaussianRational:
        z = GaussianRational.coerce(z)
        zb = z.conjugate()
        total = GaussianRational(0)
        for (a, b), c in self.terms.items():
            total = total + c * z ** a * zb ** b
        return total

    # -- printing ---------------------------------------------------------------

    def __str__(self):
        if self.is_zero():
            return "0"
        pieces = []
        for i, ((a, b), c) in enumerate(self.sorted_terms()):
            mono = _format_monomial(a, b)
            if c.is_real():
                neg = c.re < 0
                mag = abs(c.re)
                body = mono if (mag == 1 and mono) else format_rational(mag) + mono
                if i == 0:
                    pieces.append(("-" if neg else "") + body)
                else:
                    pieces.append((" - " if neg else " + ") + body)
            else:
                body = str(c) + mono
                pieces.append(body if i == 0 else " + " + body)
        return "".join(pieces)

    def __repr__(self):
        return f"HermPoly({str(self)!r})"


def _format_monomial(a: int, b: int) -> str:
    parts = []
    if a:
        parts.append("z" if a == 1 else f"z^{a}")
    if b:
        parts.append("zbar" if b == 1 else f"zbar^{b}")
    return " ".join(parts)


Z = HermPoly.monomial(1, 0)
ZBAR = HermPoly.monomial(0, 1)
ONE = HermPoly.constant(1)
ZERO = HermPoly()
#: The irreducible real polynomial ``1 + z zbar`` behind every round-sphere metric.
ONE_PLUS_ZZBAR = ONE + Z * ZBAR


def conj(p: HermPoly) -> HermPoly:
    return p.conj()


def diff(p: HermPoly, var: str = "z") -> HermPoly:
    return p.diff(var)


# -- gcds ---------------------------------------------------------------------

def _to_xy(p: HermPoly) -> flint.fmpq_mpoly:
    """Rewrite a real-valued polynomial in real coordinates z = x + i y."""
    t, x, y = _XYT.gens()
    zs, ws = x + t * y, x - t * y
    q = p.re.compose(zs, ws, ctx=_XYT) + t * p.im.compose(zs, ws, ctx=_XYT)
    _, r = divmod(q, t * t + 1)
    return r


def _from_xy(g: flint.fmpq_mpoly) -> HermPoly:
    s, z, w = _SZW.gens()
    r = divmod(g.compose(s, (z + w) / 2, -s * (z - w) / 2, ctx=_SZW), s * s + 1)[1]
    im = r.derivative("s")
    re = r - s * im
    zero = CTX.constant(0)
    z0, w0 = CTX.gens()
    return HermPoly(re.compose(zero, z0, w0, ctx=CTX), im.compose(zero, z0, w0, ctx=CTX))


def _rational_gcd(polys: Iterable[flint.fmpq_mpoly]) -> flint.fmpq_mpoly:
    g = CTX.constant(0)
    for p in polys:
        if p.is_zero():
            continue
        g = p if g.is_zero() else g.gcd(p)
        if g.is_constant():
            break
    return g


def poly_gcd(p: HermPoly, q: HermPoly) -> HermPoly:
    """Greatest common divisor in Q(i)[z, zbar], up to a unit.

    Exact for rational-coefficient inputs (a gcd over Q is also one over
    Q(i)) and for real-valued inputs (mapped to Q[x, y] by z = x + iy).  For
    other complex inputs only the common divisor with rational coefficients
    is found; callers use the result for reduction, never for decisions.
    """
    if p.is_zero():
        return q
    if q.is_zero():
        return p
    if p.im.is_zero() and q.im.is_zero():
        return HermPoly(p.re.gcd(q.re))
    if p.is_real() and q.is_real():
        g = _from_xy(_to_xy(p).gcd(_to_xy(q)))
        return g / g.leading_coefficient()
    g = _rational_gcd([p.re, p.im, q.re, q.im])
    return HermPoly(g) if not g.is_zero() else ONE


def content_gcd(polys: Iterable[HermPoly]) -> HermPoly:
    """A common divisor of all ``polys`` (see :func:`poly_gcd` for exactness)."""
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return ONE
    if all(p.im.is_zero() for p in polys):
        return HermPoly(_rational_gcd(p.re for p in polys))
    return HermPoly(_rational_gcd([part for p in polys for part in (p.re, p.im)]))


def scalar_content(polys: Iterable[HermPoly]) -> Fraction:
    """Positive rational c such that every coefficient of every poly / c is a
    Gaussian integer and the integer parts are jointly coprime."""
    from math import gcd, lcm

    nums, dens = [], []
    for p in polys:
        for c in p.terms.values():
            for part in (c.re, c.im):
                if part:
                    nums.append(abs(part.numerator))
                    dens.append(part.denominator)
    if not nums:
        return Fraction(1)
    return Fraction(gcd(*nums), lcm(*dens))


# -- factorisation helpers -----------------------------------------------------

def factor_out(p: HermPoly, q: HermPoly) -> tuple:
    """Largest m with q**m | p, together with the cofactor ``p / q**m``."""
    if p.is_zero():
        raise ZeroPolynomial("factor_out of the zero polynomial")
    if q.is_zero():
        raise ZeroPolynomial("cannot factor out the zero polynomial")
    if q.is_constant():
        raise ValueError("factor_out needs a nonconstant factor")
    m, r = 0, p
    while True:
        nxt = r.divide(q)
        if nxt is None:
            return m, r
        m, r = m + 1, nxt


def hermitian_matrix(p: HermPoly) -> tuple:
    """Coefficient matrix C with p = sum C[a][b] z^a zbar^b (list of lists)."""
    da, db = p.degrees()
    d = max(da, db)
    zero = GaussianRational(0)
    mat = [[zero] * (d + 1) for _ in range(d + 1)]
    for (a, b), c in p.terms.items():
        mat[a][b] = c
    return mat


def norm_square_factor(p: HermPoly):
    """Decide whether a real polynomial is ``c |h(z)|^2``.

    Returns ``(c, h)`` with ``c`` a positive rational and ``h`` monic and
    holomorphic, or ``None`` when the Hermitian coefficient matrix is not
    positive semidefinite of rank one.
    """
    if p.is_zero():
        raise ZeroPolynomial("norm_square_factor of the zero polynomial")
    if not p.is_real():
        raise NotReal("norm_square_factor requires a real polynomial")
    mat = hermitian_matrix(p)
    d = len(mat) - 1
    # Any rank-one PSD matrix has its last nonzero diagonal entry at deg h.
    pivot = max((i for i in range(d + 1) if mat[i][i]), default=None)
    if pivot is None:
        return None
    c = mat[pivot][pivot]
    if not c.is_real() or c.re <= 0:
        return None
    h = [mat[a][pivot] / c for a in range(d + 1)]
    for a in range(d + 1):
        for b in range(d + 1):
            if mat[a][b] != c * h[a] * h[b].conjugate():
                return None
    if any(h[a] for a in range(pivot + 1, d + 1)):
        return None
    hpoly = HermPoly.from_terms({(a, 0): h[a] for a in range(d + 1) if h[a]})
    return c.re, hpoly


# -- univariate ------------------------------------------------------------------

def _coeff_list(p: HermPoly) -> list:
    if not p.is_holomorphic():
        raise ValueError("expected a polynomial in z only")
    deg = p.degree_z()
    terms = p.terms
    return [terms.get((k, 0), GaussianRational(0)) for k in range(deg + 1)]


def _from_coeff_list(cs) -> HermPoly:
    return HermPoly.from_terms({(k, 0): c for k, c in enumerate(cs) if c})


def _univariate_rem(a: list, b: list) -> list:
    a = list(a)
    lead = b[-1].inverse()
    while len(a) >= len(b) and any(a):
        if not a[-1]:
            a.pop()
            continue
        f = a[-1] * lead
        shift = len(a) - len(b)
        for k, c in enumerate(b):
            a[shift + k] = a[shift + k] - f * c
        a.pop()
    while a and not a[-1]:
        a.pop()
    return a


def gcd_univariate(p: HermPoly, q: HermPoly) -> HermPoly:
    """Monic gcd of two polynomials in z over Q(i) (Euclid)."""
    if p.is_zero() and q.is_zero():
        raise ZeroPolynomial("gcd of two zero polynomials")
    if not (p.is_holomorphic() and q.is_holomorphic()):
        raise ValueError("gcd_univariate expects polynomials in z only")
    if p.im.is_zero() and q.im.is_zero():
        g = HermPoly(_rational_gcd([p.re, q.re]))
        return g / g.leading_coefficient()
    a, b = _coeff_list(p), _coeff_list(q)
    while b:
        a, b = b, _univariate_rem(a, b)
    g = _from_coeff_list(a)
    return g / g.leading_coefficient()
