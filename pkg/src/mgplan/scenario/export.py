"""Result persistence: sweep CSV/JSON plus per-figure plot-data files.

Numbers are fixed-format so reruns of the same spec produce identical
bytes; the wall-time column is the only run-dependent field.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

from ..errors import ValidationError
from .sweep import ScenarioResult, result_fields


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def results_to_csv(results: Sequence[ScenarioResult]) -> str:
    fields = result_fields()
    lines = [",".join(fields)]
    for row in results:
        payload = row.to_dict()
        lines.append(",".join(_fmt(payload[name]) for name in fields))
    return "\n".join(lines) + "\n"


def results_to_json(results: Sequence[ScenarioResult]) -> str:
    return json.dumps([row.to_dict() for row in results], indent=2, sort_keys=True)


def export_results(
    results: Sequence[ScenarioResult], out_dir: str | Path, basename: str = "results"
) -> list[Path]:
    """Write the sweep table (CSV + JSON) and plot-data extracts.

    Per-site curves cover emission reduction, electricity cost, the
    utility metric, and fleet $/mile; per-site grid files give the
    (nameplate scale x battery size) surface for each chemistry/shift
    slice.
    """
    if not results:
        raise ValidationError("no results to export")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    csv_path = out / f"{basename}.csv"
    csv_path.write_text(results_to_csv(results), encoding="utf-8")
    written.append(csv_path)
    json_path = out / f"{basename}.json"
    json_path.write_text(results_to_json(results) + "\n", encoding="utf-8")
    written.append(json_path)

    curves = {
        "plot_reduction_vs_site.csv": "reduction_pct",
        "plot_tec_vs_site.csv": "tec_usd_per_mwh",
        "plot_utility_metric_vs_site.csv": "utility_usd_per_kg",
        "plot_cost_per_mile_vs_site.csv": "fleet_usd_per_mile",
    }
    for filename, column in curves.items():
        lines = [
            "site_index,nameplate_mw,battery_mwh,chemistry,shift_hours," + column
        ]
        for row in results:
            lines.append(
                ",".join(
                    _fmt(v)
                    for v in (
                        row.site_index,
                        row.nameplate_mw,
                        row.battery_mwh,
                        row.chemistry,
                        row.shift_hours,
                        getattr(row, column),
                    )
                )
            )
        path = out / filename
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(path)

    written.extend(_export_grids(results, out))
    return written


_GRID_QUANTITIES = (
    "reduction_pct",
    "tec_usd_per_mwh",
    "utility_usd_per_kg",
    "fleet_usd_per_mile",
)


def _export_grids(results: Sequence[ScenarioResult], out: Path) -> list[Path]:
    written: list[Path] = []
    slices: dict[tuple[int, str, int], list[ScenarioResult]] = {}
    for row in results:
        slices.setdefault((row.site_index, row.chemistry, row.shift_hours), []).append(row)
    for (site, chem, shift), rows in sorted(slices.items()):
        for quantity in _GRID_QUANTITIES:
            lines = ["nameplate_mw,battery_mwh," + quantity]
            for row in rows:
                lines.append(
                    f"{_fmt(row.nameplate_mw)},{_fmt(row.battery_mwh)},"
                    f"{_fmt(getattr(row, quantity))}"
                )
            sign = "+" if shift >= 0 else ""
            path = out / (
                f"plot_grid_{quantity}__site{site}__{chem}__shift{sign}{shift}.csv"
            )
            path.write_text("\n".join(lines) + "\n", encoding="utf-8")
            written.append(path)
    return written
