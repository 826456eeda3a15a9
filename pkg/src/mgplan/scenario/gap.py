"""Capacity-gap check: peak demand against grid capacity per location."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from ..errors import ValidationError


@dataclass(frozen=True)
class CapacityGapEntry:
    location: str
    peak_demand_mw: float
    capacity_limit_mw: float
    excess_mw: float
    violated: bool


@dataclass(frozen=True)
class CapacityGapReport:
    entries: tuple[CapacityGapEntry, ...]

    def violations(self) -> tuple[CapacityGapEntry, ...]:
        return tuple(entry for entry in self.entries if entry.violated)

    def to_dict(self) -> dict:
        return {
            "entries": [
                {
                    "location": e.location,
                    "peak_demand_mw": e.peak_demand_mw,
                    "capacity_limit_mw": e.capacity_limit_mw,
                    "excess_mw": e.excess_mw,
                    "violated": e.violated,
                }
                for e in self.entries
            ]
        }

    def to_json(self, dest: str | Path | None = None) -> str:
        text = json.dumps(self.to_dict(), indent=2, sort_keys=True)
        if dest is not None:
            Path(dest).write_text(text + "\n", encoding="utf-8")
        return text


def capacity_gap(
    peaks: Mapping[str, float], limits: Mapping[str, float]
) -> CapacityGapReport:
    """Excess of peak demand above the grid capacity limit per location."""
    entries = []
    for location in sorted(peaks):
        if location not in limits:
            raise ValidationError(f"missing capacity limit for location {location!r}")
        peak = float(peaks[location])
        limit = float(limits[location])
        excess = max(0.0, peak - limit)
        entries.append(
            CapacityGapEntry(
                location=location,
                peak_demand_mw=peak,
                capacity_limit_mw=limit,
                excess_mw=excess,
                violated=excess > 0.0,
            )
        )
    return CapacityGapReport(entries=tuple(entries))
