"""Exception types shared across the package."""


class IsotowerError(Exception):
    """Base class for all package errors."""


class InvalidInput(IsotowerError, ValueError):
    """An argument violates a documented precondition."""


class DomainError(IsotowerError, ValueError):
    """A spectrum leaves the domain of a scalar function."""


class NotInjective(IsotowerError, ValueError):
    """A linear map expected to be injective has a (numerical) kernel."""


class DegenerateAlpha(IsotowerError, ValueError):
    """The top-k eigenspace sum of alpha has dimension below k."""


class FacialViolation(IsotowerError, ValueError):
    """A facial map produced a non-ascending tuple."""


class ResolutionError(IsotowerError, RuntimeError):
    """Winding accumulation did not settle near an integer."""


class OutsideChart(IsotowerError, ValueError):
    """A point lies outside the domain of a coordinate chart."""


class NotInvertible(IsotowerError, ValueError):
    """A ring element that must be a unit is not one."""


class TooLarge(IsotowerError, ValueError):
    """Problem size exceeds the supported exact-arithmetic scale."""


class UsageError(IsotowerError, ValueError):
    """Bad command-line or suite selection."""
