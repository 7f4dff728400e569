"""Rational functions num/den over Q(i)[z, zbar] and the mixed log-Laplacian."""

from __future__ import annotations

import numpy as np

from ..errors import NotReal, ZeroPolynomial
from .gaussian import GaussianRational
from .hermpoly import ONE, HermPoly, poly_gcd


class RationalFn:
    """Quotient of two :class:`HermPoly` values kept in reduced, normalised form.

    The common factor found by :func:`poly_gcd` is cancelled and the graded-lex
    leading coefficient of the denominator is scaled to 1.  Equality is decided
    by cross-multiplication, so it never depends on how far reduction went.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, reduce: bool = True):
        num = HermPoly._coerce(num)
        den = ONE if den is None else HermPoly._coerce(den)
        if den.is_zero():
            raise ZeroPolynomial("rational function with zero denominator")
        if num.is_zero():
            num, den = HermPoly(), ONE
        elif reduce and not den.is_constant():
            g = poly_gcd(num, den)
            if not g.is_constant():
                num, den = num / g, den / g
        lead = den.leading_coefficient()
        if lead != 1:
            inv = lead.inverse()
            num, den = num * inv, den * inv
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFn is immutable")

    @staticmethod
    def _coerce(x) -> RationalFn:
        if isinstance(x, RationalFn):
            return x
        return RationalFn(HermPoly._coerce(x))

    # -- arithmetic -------------------------------------------------------------

    def __add__(self, other):
        try:
            o = RationalFn._coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == o.den:
            return RationalFn(self.num + o.num, self.den)
        return RationalFn(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        try:
            o = RationalFn._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (HermPoly, RationalFn)):
            o = RationalFn._coerce(other)
            return RationalFn(self.num * o.num, self.den * o.den)
        try:
            c = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return RationalFn(self.num * c, self.den, reduce=False)

    __rmul__ = __mul__

    def inverse(self) -> RationalFn:
        if self.num.is_zero():
            raise ZeroPolynomial("inverse of the zero rational function")
        return RationalFn(self.den, self.num, reduce=False)

    def __truediv__(self, other):
        if isinstance(other, (HermPoly, RationalFn)):
            return self * RationalFn._coerce(other).inverse()
        c = GaussianRational.coerce(other)
        return RationalFn(self.num * c.inverse(), self.den, reduce=False)

    def __rtruediv__(self, other):
        return RationalFn._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFn(self.num ** k, self.den ** k, reduce=False)

    def __eq__(self, other):
        try:
            o = RationalFn._coerce(other)
        except TypeError:
            return NotImplemented
        return self.num * o.den == o.num * self.den

    __hash__ = None

    # -- inspection -------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def conj(self) -> RationalFn:
        return RationalFn(self.num.conj(), self.den.conj(), reduce=False)

    def is_real(self) -> bool:
        return self == self.conj()

    def constant_value(self) -> GaussianRational | None:
        """The constant c with num = c * den, if there is one."""
        if self.num.is_zero():
            return GaussianRational(0)
        mono = self.den.leading_monomial()
        c = self.num.coefficient(*mono) / self.den.coefficient(*mono)
        return c if self.num == self.den * c else None

    def diff(self, var: str = "z") -> RationalFn:
        n, d = self.num, self.den
        return RationalFn(n.diff(var) * d - n * d.diff(var), d * d)

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        out = self.num(z) / self.den(z)
        return out if z.shape else complex(out)

    def __str__(self):
        num, den = str(self.num), str(self.den)
        if den == "1":
            return num
        if len(self.num) > 1 or num.startswith("-"):
            num = f"({num})"
        if len(self.den) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"RationalFn({str(self)!r})"


def _mixed_log(beta: HermPoly) -> RationalFn:
    dz = beta.diff("z")
    num = beta * dz.diff("zbar") - dz * beta.diff("zbar")
    return RationalFn(num, beta * beta)


def laplace_log(beta: HermPoly) -> RationalFn:
    """d^2/dz dzbar of log(beta) for a real, nonzero polynomial beta."""
    if beta.is_zero():
        raise ZeroPolynomial("laplace_log of the zero polynomial")
    if not beta.is_real():
        raise NotReal("laplace_log requires beta = conj(beta)")
    return _mixed_log(beta)


def laplace_log_fn(f: RationalFn) -> RationalFn:
    """Mixed log-Laplacian of a rational function, log(num) - log(den) termwise.

    The normalised parts of a real function need not be real individually (the
    denominator scaling may introduce a complex unit), but the identity holds
    for any pair of polynomials, so no realness check is made here.
    """
    if f.is_zero():
        raise ZeroPolynomial("laplace_log of the zero function")
    out = _mixed_log(f.num) if not f.num.is_constant() else RationalFn(0)
    if not f.den.is_constant():
        out = out - _mixed_log(f.den)
    return out
