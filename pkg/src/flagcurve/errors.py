"""Exception hierarchy shared by every flagcurve module."""


class FlagCurveError(Exception):
    """Base class for all errors raised by flagcurve."""


# -- algebra -----------------------------------------------------------------

class ZeroPolynomial(FlagCurveError, ZeroDivisionError):
    pass


class NotReal(FlagCurveError, ValueError):
    """A real-valued polynomial was required (P must equal its conjugate)."""


class ExponentOverflow(FlagCurveError, OverflowError):
    pass


class PolySyntaxError(FlagCurveError, ValueError):
    """Malformed polynomial text.  ``position`` is a 0-based character offset."""

    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class NonHolomorphic(PolySyntaxError):
    pass


class IrrationalCoefficient(PolySyntaxError):
    pass


# -- exterior / curves --------------------------------------------------------

class DimensionMismatch(FlagCurveError, ValueError):
    pass


class SingularGram(FlagCurveError, ArithmeticError):
    pass


class NonTerminating(FlagCurveError, RuntimeError):
    pass


class NotAFlag(FlagCurveError, ValueError):
    pass


class NotImmersion(FlagCurveError, ValueError):
    pass


class RankDeficient(FlagCurveError, ValueError):
    pass


# -- geometry / flagmetric / veronese -----------------------------------------

class WeightCountMismatch(FlagCurveError, ValueError):
    pass


class ZeroMetric(FlagCurveError, ZeroDivisionError):
    pass


class IndexOutOfRange(FlagCurveError, IndexError):
    pass


class PoleHit(FlagCurveError, ZeroDivisionError):
    pass


class NonCompactDomain(FlagCurveError, ValueError):
    pass


class ZeroDegrees(FlagCurveError, ValueError):
    pass


class DimensionOverflow(FlagCurveError, OverflowError):
    pass


# -- oracle -------------------------------------------------------------------

class NonPositive(FlagCurveError, ValueError):
    pass


class NoConvergence(FlagCurveError, RuntimeError):
    pass


class RankAmbiguous(FlagCurveError, ArithmeticError):
    pass
