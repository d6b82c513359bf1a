"""Exception hierarchy shared by all pluriharm modules."""

from __future__ import annotations


class PluriharmError(Exception):
    """Base class for every error raised by this package."""


class DomainError(PluriharmError, ValueError):
    """An argument lies outside the domain of the operation (e.g. ``||z|| >= 1``)."""


class SingularMatrix(PluriharmError, ArithmeticError):
    """Matrix is numerically singular; for ``Dh`` this means h is not locally biholomorphic."""


class BadDirection(PluriharmError, ValueError):
    """Direction vector is not a unit vector."""


class Unsupported(PluriharmError):
    """The model does not support the requested derivative."""


class NotNormalized(PluriharmError, ValueError):
    """Holomorphic map is not normalized by ``h(0) = 0, Dh(0) = I``."""


class BadSpec(PluriharmError, ValueError):
    """Malformed extremal specification or map specification document."""


class PreconditionFailed(PluriharmError):
    """A verification routine's hypothesis does not hold for the given map."""


class MembershipRefuted(PreconditionFailed):
    """Sampling found the map outside PH(alpha, k).

    The refuting membership report is attached as ``report``.
    """

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class DegenerateJacobian(PreconditionFailed):
    """``det J_f <= 0`` at a sample point."""


class DilatationCapViolated(PreconditionFailed):
    """Dilatation norm exceeds the declared cap ``c`` at a sample point."""
