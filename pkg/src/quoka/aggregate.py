"""Timeline and heatmap views derived from institution-year scores."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidResolutionError
from .index import SearchIndex
from .scoring import Query, YearRange, _accumulate_scores, _check_analyzer, _institution_scores, _year_mask

# Discrete resolutions keep responses cacheable; all are exact binary floats.
ALLOWED_CELL_DEGREES = (0.25, 0.5, 1.0, 2.0, 5.0, 10.0)


@dataclass(frozen=True)
class TimelineBucket:
    year: int
    total: float
    relative: float  # total / max total, 0 when every total is 0


@dataclass(frozen=True)
class HeatmapCell:
    cell_lat_index: int
    cell_lon_index: int
    center_latitude: float
    center_longitude: float
    value: float


def timeline(query: Query, index: SearchIndex) -> list[TimelineBucket]:
    """One bucket per year of the observed span; totals are sums over institutions."""
    iy = index.institution_year
    _check_analyzer(query, iy.meta)
    year_lo, year_hi = iy.year_span()
    span = year_hi - year_lo + 1
    scores = _accumulate_scores(query, iy, _year_mask(iy, None))
    totals = np.bincount(iy.doc_years - year_lo, weights=scores, minlength=span)
    peak = totals.max() if totals.size else 0.0
    return [
        TimelineBucket(
            year=year_lo + i,
            total=float(totals[i]),
            relative=float(totals[i] / peak) if peak > 0 else 0.0,
        )
        for i in range(span)
    ]


def cell_indices(latitude: float, longitude: float, cell_degrees: float) -> tuple[int, int]:
    """Equal-angle binning: floor((lat+90)/size), floor((lon+180)/size)."""
    return (
        int(math.floor((latitude + 90.0) / cell_degrees)),
        int(math.floor((longitude + 180.0) / cell_degrees)),
    )


def heatmap(
    query: Query, year_range: YearRange | None, cell_degrees: float, index: SearchIndex
) -> list[HeatmapCell]:
    """Sum institution scores into equal-angle cells; zero-value cells omitted.

    Institutions without registry coordinates (unresolved affiliations)
    still rank but never reach the map.
    """
    if float(cell_degrees) not in ALLOWED_CELL_DEGREES:
        raise InvalidResolutionError(
            f"cell_degrees must be one of {ALLOWED_CELL_DEGREES}, got {cell_degrees}"
        )
    cell_degrees = float(cell_degrees)
    cells: dict[tuple[int, int], float] = {}
    for inst_id, score, _ in _institution_scores(query, year_range, index):
        record = index.institutions.get(inst_id)
        if record is None:
            continue
        key = cell_indices(record.latitude, record.longitude, cell_degrees)
        cells[key] = cells.get(key, 0.0) + score
    return [
        HeatmapCell(
            cell_lat_index=ilat,
            cell_lon_index=ilon,
            center_latitude=(ilat + 0.5) * cell_degrees - 90.0,
            center_longitude=(ilon + 0.5) * cell_degrees - 180.0,
            value=value,
        )
        for (ilat, ilon), value in sorted(cells.items())
    ]
