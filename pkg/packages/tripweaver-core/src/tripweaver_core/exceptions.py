"""Exception hierarchy for the planner.

Infeasible schedules are *not* errors; see :class:`~tripweaver_core.types.Infeasible`.
"""


class TripweaverError(Exception):
    """Base class for all tripweaver errors."""

    def __init__(self, message: str, *, code: str | None = None) -> None:
        super().__init__(message)
        self.code = code


class DomainError(TripweaverError, ValueError):
    """Raised when an argument lies outside the domain of an operation."""

    def __init__(self, message: str) -> None:
        super().__init__(message, code="domain_error")


class VenueNotFoundError(TripweaverError, LookupError):
    """Raised when a venue id is not part of the network."""

    def __init__(self, venue_id: str) -> None:
        super().__init__(
            f"Venue not found: {venue_id!r}",
            code="venue_not_found",
        )
        self.venue_id = venue_id


class DataFormatError(TripweaverError):
    """Raised when an input file is too malformed to be trusted."""

    def __init__(self, message: str, *, source: str | None = None) -> None:
        detail = f"{source}: {message}" if source else message
        super().__init__(detail, code="format_error")
        self.source = source
