"""CSV readers for check-ins, venue metadata and GPS traces.

All three files are UTF-8, comma separated, with integer epoch-second
timestamps.  The header row is optional.  Rows that do not parse are
skipped and counted; a stream where more than half the rows are malformed
raises :class:`~tripweaver_core.exceptions.DataFormatError`.
"""

from __future__ import annotations

import csv
import io
import logging
from collections.abc import Callable
from typing import BinaryIO, TypeVar

from pydantic import ValidationError

from tripweaver_core.exceptions import DataFormatError
from tripweaver_core.types import Venue

from tripweaver_ingest.records import CheckinRecord, GpsPoint, ParseResult

logger = logging.getLogger(__name__)

T = TypeVar("T")

CHECKIN_HEADER = ("user_id", "venue_id", "timestamp")
VENUE_HEADER = (
    "venue_id",
    "name",
    "lat",
    "lon",
    "category",
    "open_min",
    "close_min",
    "mean_stay",
)
TRACE_HEADER = ("vehicle_id", "timestamp", "lat", "lon")

#: Largest tolerated share of malformed rows.
MAX_MALFORMED_FRACTION = 0.5


def _parse_rows(
    stream: BinaryIO,
    header: tuple[str, ...],
    convert: Callable[[list[str]], T],
    *,
    source: str,
) -> ParseResult[T]:
    try:
        text = stream.read().decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DataFormatError(f"not valid UTF-8 ({exc.reason})", source=source) from exc

    records: list[T] = []
    skipped = 0
    total = 0
    index = 0
    # fields are never quoted, so a stray quote character is ordinary data
    reader = csv.reader(io.StringIO(text), quoting=csv.QUOTE_NONE)
    while True:
        try:
            row = next(reader)
        except StopIteration:
            break
        except csv.Error as exc:
            index += 1
            total += 1
            skipped += 1
            logger.debug("%s:%d: %s", source, reader.line_num, exc)
            continue
        if not row or all(not cell.strip() for cell in row):
            continue
        index += 1
        cells = [cell.strip() for cell in row]
        if index == 1 and tuple(cells) == header:
            continue
        total += 1
        if len(cells) != len(header):
            skipped += 1
            logger.debug("%s:%d: expected %d fields, got %d", source, reader.line_num, len(header), len(cells))
            continue
        try:
            records.append(convert(cells))
        except (ValueError, ValidationError) as exc:
            skipped += 1
            logger.debug("%s:%d: %s", source, reader.line_num, exc)

    if skipped:
        logger.warning("%s: skipped %d of %d rows", source, skipped, total)
    if total and skipped / total > MAX_MALFORMED_FRACTION:
        raise DataFormatError(
            f"{skipped} of {total} rows are malformed", source=source
        )
    return ParseResult(records=records, skipped=skipped)


def _checkin(cells: list[str]) -> CheckinRecord:
    user_id, venue_id, timestamp = cells
    return CheckinRecord(user_id=user_id, venue_id=venue_id, timestamp=int(timestamp))


def _venue(cells: list[str]) -> Venue:
    venue_id, name, lat, lon, category, open_min, close_min, mean_stay = cells
    return Venue(
        id=venue_id,
        name=name,
        location=(float(lat), float(lon)),
        category=category,
        open_min=int(open_min),
        close_min=int(close_min),
        mean_stay=float(mean_stay),
    )


def _gps_point(cells: list[str]) -> GpsPoint:
    vehicle_id, timestamp, lat, lon = cells
    return GpsPoint(
        vehicle_id=vehicle_id,
        timestamp=int(timestamp),
        location=(float(lat), float(lon)),
    )


def parse_checkins(stream: BinaryIO, *, source: str = "checkins.csv") -> ParseResult[CheckinRecord]:
    """Parse ``user_id,venue_id,timestamp`` rows, in file order."""
    return _parse_rows(stream, CHECKIN_HEADER, _checkin, source=source)


def parse_venues(stream: BinaryIO, *, source: str = "venues.csv") -> ParseResult[Venue]:
    """Parse venue metadata.

    Popularity and the visit histogram are left empty; they come from
    :func:`~tripweaver_ingest.profiles.build_venue_profiles`.
    """
    return _parse_rows(stream, VENUE_HEADER, _venue, source=source)


def parse_traces(stream: BinaryIO, *, source: str = "traces.csv") -> ParseResult[GpsPoint]:
    """Parse ``vehicle_id,timestamp,lat,lon`` rows, in file order."""
    return _parse_rows(stream, TRACE_HEADER, _gps_point, source=source)
