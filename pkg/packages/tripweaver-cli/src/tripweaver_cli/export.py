"""Itinerary output: the JSON document, a GeoJSON route, and CSV or XLSX tables."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any

from geojson import Feature, FeatureCollection, LineString, Point

from tripweaver_core.enums import ExportFormat
from tripweaver_core.exceptions import DomainError
from tripweaver_core.network import PoiNetwork
from tripweaver_core.scoring import DEFAULT_ALPHA, attractiveness, suitability
from tripweaver_core.types import Itinerary, Query, UserProfile

TABLE_COLUMNS = [
    "order",
    "venue_id",
    "name",
    "category",
    "arrival",
    "wait",
    "visit_start",
    "depart",
    "attractiveness",
    "suitability",
]


def format_minutes(minute: float) -> str:
    """``HH:MM`` for a minute of the day (rounded to the nearest minute)."""
    total = int(round(minute))
    return f"{total // 60:02d}:{total % 60:02d}"


def _lon_lat(location: tuple[float, float]) -> tuple[float, float]:
    return (location[1], location[0])


# ---------------------------------------------------------------------------
# itinerary.json
# ---------------------------------------------------------------------------


def itinerary_document(
    itinerary: Itinerary,
    network: PoiNetwork,
    user: UserProfile,
    query: Query,
    *,
    alpha: float = DEFAULT_ALPHA,
) -> dict[str, Any]:
    """The ``itinerary.json`` payload, with per-visit score factors."""
    visits = []
    for visit in itinerary.visits:
        venue = network.venue(visit.venue_id)
        visits.append(
            {
                "venue_id": venue.id,
                "name": venue.name,
                "category": venue.category,
                "arrival": visit.arrival,
                "wait": visit.wait,
                "visit_start": visit.visit_start,
                "depart": visit.depart,
                "attractiveness": attractiveness(user, venue, network, alpha=alpha),
                "suitability": suitability(venue, visit.visit_start, visit.depart),
            }
        )
    return {
        "query": {
            "user_id": user.user_id,
            "start_location": list(query.start_location),
            "end_location": list(query.end_location),
            "start_time": query.start_time,
            "end_time": query.end_time,
        },
        "visits": visits,
        "final_arrival": itinerary.final_arrival,
        "score": itinerary.score,
        "venue_count": itinerary.venue_count,
        "feasible": itinerary.feasible,
    }


def dumps_document(document: dict[str, Any]) -> str:
    return json.dumps(document, indent=2) + "\n"


# ---------------------------------------------------------------------------
# GeoJSON
# ---------------------------------------------------------------------------


def itinerary_geojson(itinerary: Itinerary, network: PoiNetwork, query: Query) -> FeatureCollection:
    """A Point per visit plus one LineString from start through every visit to end."""
    features = []
    path = [_lon_lat(query.start_location)]
    for order, visit in enumerate(itinerary.visits, start=1):
        venue = network.venue(visit.venue_id)
        path.append(_lon_lat(venue.location))
        features.append(
            Feature(
                geometry=Point(_lon_lat(venue.location)),
                properties={
                    "order": order,
                    "venue_id": venue.id,
                    "name": venue.name,
                    "category": venue.category,
                    "arrival": format_minutes(visit.arrival),
                    "visit_start": format_minutes(visit.visit_start),
                    "depart": format_minutes(visit.depart),
                },
            )
        )
    path.append(_lon_lat(query.end_location))
    features.append(
        Feature(
            geometry=LineString(path),
            properties={
                "kind": "route",
                "start_time": format_minutes(query.start_time),
                "final_arrival": format_minutes(itinerary.final_arrival),
                "venue_count": itinerary.venue_count,
                "feasible": itinerary.feasible,
            },
        )
    )
    return FeatureCollection(features)


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------


def itinerary_rows(document: dict[str, Any]) -> list[dict[str, Any]]:
    """Flatten the visits of an :func:`itinerary_document` into table rows."""
    return [
        {"order": i, **{k: v for k, v in visit.items() if k in TABLE_COLUMNS}}
        for i, visit in enumerate(document["visits"], start=1)
    ]


def table_format(path: Path) -> ExportFormat:
    try:
        return ExportFormat(path.suffix.lower().lstrip("."))
    except ValueError:
        raise DomainError(
            f"unsupported table format {path.suffix!r}; use .csv or .xlsx"
        ) from None


def write_table(path: Path, document: dict[str, Any]) -> None:
    """Write the itinerary visits as CSV or XLSX, chosen by *path*'s suffix."""
    rows = itinerary_rows(document)
    if table_format(path) == ExportFormat.CSV:
        path.write_bytes(_render_csv(TABLE_COLUMNS, rows))
    else:
        path.write_bytes(_render_xlsx(TABLE_COLUMNS, rows))


def _render_csv(columns: list[str], rows: list[dict[str, Any]]) -> bytes:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({c: row.get(c, "") for c in columns})
    return buf.getvalue().encode()


def _render_xlsx(columns: list[str], rows: list[dict[str, Any]]) -> bytes:
    from openpyxl import Workbook

    wb = Workbook(write_only=True)
    ws = wb.create_sheet(title="itinerary")
    ws.append(columns)
    for row in rows:
        ws.append([row.get(c) for c in columns])

    buf = io.BytesIO()
    wb.save(buf)
    return buf.getvalue()
