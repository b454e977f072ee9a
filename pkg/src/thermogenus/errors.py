"""
Exception hierarchy for thermogenus.

All library errors derive from ThermoGenusError so callers (and the CLI) can
catch a single base class. Argument-domain errors also derive from ValueError.
"""


class ThermoGenusError(Exception):
    """Base exception for thermogenus errors."""
    pass


# Series algebra

class SeriesError(ThermoGenusError):
    """Base exception for power series arithmetic."""
    pass


class DivisionByNonUnit(SeriesError):
    """Raised when dividing by a series with zero constant term."""
    pass


class NonzeroConstantTerm(SeriesError):
    """Raised when exponentiating a series whose constant term is not zero."""
    pass


class NotDivisibleByX(SeriesError):
    """Raised when divide_by_x would discard a non-zero low coefficient."""
    pass


# Genus / characteristic classes

class GenusError(ThermoGenusError):
    """Base exception for genus and characteristic class computations."""
    pass


class InsufficientRoots(GenusError):
    """Raised when too few formal roots are requested for a stable expansion."""
    pass


class MissingCharacteristicNumber(GenusError):
    """Raised when a required characteristic number was not supplied."""
    pass


class UnknownGenusKind(GenusError):
    """Raised when a genus kind is not registered."""
    pass


class IncompleteSequence(GenusError, ValueError):
    """Raised when a multiplicative sequence stops below the degree an evaluation needs."""
    pass


class InvalidManifoldData(GenusError, ValueError):
    """Raised when manifold characteristic data is malformed or inconsistent."""
    pass


# Argument domains

class DomainError(ThermoGenusError, ValueError):
    """Base exception for arguments outside an operation's domain."""
    pass


class NonPositiveArgument(DomainError):
    """Raised when a strictly positive argument is zero or negative."""
    pass


class OutOfDomain(DomainError):
    """Raised when an argument lies outside the supported interval."""
    pass


class EmptySpectrum(DomainError):
    """Raised when a spectrum has no levels."""
    pass


class ZeroState(DomainError):
    """Raised when a truncated state has zero norm."""
    pass


class LengthMismatch(DomainError):
    """Raised when paired sequences have different lengths."""
    pass


class UnboundedNonCanonical(DomainError):
    """Raised when an unbounded trace is requested for a spectrum with no closed form."""
    pass


# Numerics

class QuadratureNonConvergence(ThermoGenusError):
    """Raised when a quadrature fails to reach the requested tolerance."""
    pass
