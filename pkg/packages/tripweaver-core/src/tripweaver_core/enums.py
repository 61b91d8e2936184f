"""Enumerations shared across the tripweaver packages.

These are the single source of truth for the string values written to
``network.json``, ``itinerary.json`` and the eval report.
"""

from enum import StrEnum


class Provenance(StrEnum):
    """Where a transit slot duration came from."""

    OBSERVED = "observed"
    FALLBACK = "fallback"


class InfeasibleReason(StrEnum):
    """Why a venue order cannot be scheduled against a query."""

    BUDGET = "budget"
    CLOSED = "closed"
    WAIT = "wait"


class MoveKind(StrEnum):
    """Local-search neighbourhoods explored after greedy insertion."""

    RELOCATE = "relocate"
    SWAP = "swap"
    REPLACE = "replace"


class ExportFormat(StrEnum):
    """Supported tabular itinerary export formats."""

    CSV = "csv"
    XLSX = "xlsx"
