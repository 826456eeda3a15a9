"""Sweep orchestration: run the dispatch-to-costs chain over a grid of
sites, nameplate scalings, battery sizes, chemistries, and demand shifts.

Cells are independent tasks; results are gathered, sorted by axis
coordinates, and optionally checkpointed per cell so interrupted sweeps
can resume. Output content is deterministic for a fixed spec (wall-time
fields excepted).
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .. import costs as costs_mod
from .. import stakeholders as stake_mod
from ..dispatch import (
    BatterySpec,
    SolveOptions,
    build_instance,
    solve_dispatch,
)
from ..errors import SolverFailure, ValidationError
from ..profiles import (
    UNIT_CAPACITY_FACTOR,
    UNIT_KG_PER_HOUR,
    UNIT_MW,
    HourlyProfile,
    available_capacity,
    load_profile,
    scale_profile,
    shift_profile,
)
from ..siting import catalog_from_json


@dataclass(frozen=True)
class SweepSite:
    """One solar site: a capacity-factor or MW profile plus nameplate."""

    site_index: int
    label: str
    nameplate_mw: float
    profile: HourlyProfile

    def solar_at(self, scale: float) -> tuple[HourlyProfile, float]:
        nameplate = self.nameplate_mw * scale
        if self.profile.unit == UNIT_CAPACITY_FACTOR:
            return available_capacity(self.profile, nameplate), nameplate
        return scale_profile(self.profile, scale), nameplate


@dataclass(frozen=True)
class SweepSpec:
    load: HourlyProfile
    carbon: HourlyProfile
    sites: tuple[SweepSite, ...]
    nameplate_scales: tuple[float, ...] = (1.0,)
    battery_sizes_mwh: tuple[float, ...] = (0.0,)
    chemistries: tuple[str, ...] = ("LFP",)
    shift_hours: tuple[int, ...] = (0,)
    shift_carbon: bool = True
    gep_usd_per_mwh: float = costs_mod.GRID_ELECTRICITY_PRICE
    cost_per_wdc: float = 1.0
    solar_life_years: float = costs_mod.SOLAR_LIFE_YEARS
    battery_duration_h: float = 4.0
    chemistry_params: dict[str, costs_mod.ChemistryParams] = field(
        default_factory=lambda: dict(costs_mod.CHEMISTRIES)
    )
    stack: costs_mod.CostStackParams = field(default_factory=costs_mod.CostStackParams)
    fleet_electric: stake_mod.FleetParams | None = None
    fleet_partial: stake_mod.FleetParams | None = None
    solver: SolveOptions = field(default_factory=SolveOptions)
    output_dir: Path | None = None
    workers: int = 1

    def __post_init__(self) -> None:
        for axis_name in ("sites", "nameplate_scales", "battery_sizes_mwh",
                          "chemistries", "shift_hours"):
            if not getattr(self, axis_name):
                raise ValidationError(f"sweep axis {axis_name!r} must be non-empty")
        if self.load.total() <= 0:
            raise ValidationError("sweep load profile has no positive hours")
        for chem in self.chemistries:
            if chem not in self.chemistry_params:
                costs_mod.get_chemistry(chem)

    def n_cells(self) -> int:
        return (
            len(self.sites)
            * len(self.nameplate_scales)
            * len(self.battery_sizes_mwh)
            * len(self.chemistries)
            * len(self.shift_hours)
        )

    def cell_keys(self) -> list["CellKey"]:
        keys = []
        for site in self.sites:
            for scale in self.nameplate_scales:
                for battery in self.battery_sizes_mwh:
                    for chem in self.chemistries:
                        for shift in self.shift_hours:
                            keys.append(
                                CellKey(site.site_index, scale, battery, chem, shift)
                            )
        return sorted(keys)


@dataclass(frozen=True, order=True)
class CellKey:
    site_index: int
    nameplate_scale: float
    battery_mwh: float
    chemistry: str
    shift_hours: int


_RESULT_FIELDS = (
    "site_index",
    "nameplate_scale",
    "battery_mwh",
    "chemistry",
    "shift_hours",
    "site_label",
    "nameplate_mw",
    "annual_load_mwh",
    "reduction_pct",
    "baseline_kg",
    "renewable_kg",
    "util_grid",
    "util_solar",
    "util_batt",
    "chg_grid",
    "chg_solar",
    "cycles_per_year",
    "occ_pv_usd",
    "occ_batt_usd",
    "lcopr_usd_per_mwh",
    "lcos_usd_per_mwh",
    "coc_usd_per_mwh",
    "tec_usd_per_mwh",
    "utility_tco_usd",
    "utility_years_op",
    "utility_usd_per_kg",
    "fleet_usd_per_mile",
    "fleet_partial_usd_per_mile",
    "status",
    "gap",
    "wall_time_s",
)


@dataclass(frozen=True)
class ScenarioResult:
    """One sweep cell: axis coordinates plus every derived metric."""

    site_index: int
    nameplate_scale: float
    battery_mwh: float
    chemistry: str
    shift_hours: int
    site_label: str
    nameplate_mw: float
    annual_load_mwh: float
    reduction_pct: float | None
    baseline_kg: float | None
    renewable_kg: float | None
    util_grid: float | None
    util_solar: float | None
    util_batt: float | None
    chg_grid: float | None
    chg_solar: float | None
    cycles_per_year: float | None
    occ_pv_usd: float | None
    occ_batt_usd: float | None
    lcopr_usd_per_mwh: float | None
    lcos_usd_per_mwh: float | None
    coc_usd_per_mwh: float | None
    tec_usd_per_mwh: float | None
    utility_tco_usd: float | None
    utility_years_op: float | None
    utility_usd_per_kg: float | None
    fleet_usd_per_mile: float | None
    fleet_partial_usd_per_mile: float | None
    status: str
    gap: float
    wall_time_s: float

    @property
    def key(self) -> CellKey:
        return CellKey(
            self.site_index,
            self.nameplate_scale,
            self.battery_mwh,
            self.chemistry,
            self.shift_hours,
        )

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in _RESULT_FIELDS}

    @classmethod
    def from_dict(cls, payload: dict) -> "ScenarioResult":
        return cls(**{name: payload[name] for name in _RESULT_FIELDS})


def result_fields() -> tuple[str, ...]:
    return _RESULT_FIELDS


def run_cell(spec: SweepSpec, key: CellKey) -> ScenarioResult:
    """Dispatch one cell and derive its cost and stakeholder metrics."""
    t0 = time.perf_counter()
    site = _site_by_index(spec, key.site_index)
    load = shift_profile(spec.load, key.shift_hours)
    carbon = (
        shift_profile(spec.carbon, key.shift_hours) if spec.shift_carbon else spec.carbon
    )
    solar, nameplate = site.solar_at(key.nameplate_scale)
    battery = BatterySpec(key.battery_mwh, duration_h=spec.battery_duration_h)
    instance = build_instance(load, solar, carbon, battery)
    annual_load = load.total()
    base = dict(
        site_index=key.site_index,
        nameplate_scale=key.nameplate_scale,
        battery_mwh=key.battery_mwh,
        chemistry=key.chemistry,
        shift_hours=key.shift_hours,
        site_label=site.label,
        nameplate_mw=nameplate,
        annual_load_mwh=annual_load,
    )
    try:
        result = solve_dispatch(instance, spec.solver)
    except SolverFailure as exc:
        return ScenarioResult(
            **base,
            **{name: None for name in _RESULT_FIELDS[8:-3]},
            status=f"failed: {exc}",
            gap=float("nan"),
            wall_time_s=time.perf_counter() - t0,
        )

    chem = spec.chemistry_params.get(key.chemistry) or costs_mod.get_chemistry(
        key.chemistry
    )
    occ_pv = (
        costs_mod.solar_capital_cost(nameplate, spec.cost_per_wdc)
        if nameplate > 0
        else 0.0
    )
    lcopr_val = (
        costs_mod.lcopr(occ_pv, solar, spec.solar_life_years)
        if solar.total() > 0
        else None
    )
    if key.battery_mwh > 0:
        pack = costs_mod.configure_pack(
            key.battery_mwh, chem, spec.battery_duration_h
        )
        breakdown = costs_mod.battery_capital_cost(pack, chem, spec.stack)
        occ_batt = breakdown.total_usd
        lcos_val = costs_mod.lcos(occ_batt, chem.cycles_eol, key.battery_mwh)
        coc_val = costs_mod.cost_of_charging(
            result.chg_solar, result.chg_grid, lcopr_val or 0.0, spec.gep_usd_per_mwh
        )
        cycles_eol = chem.cycles_eol
    else:
        occ_batt = 0.0
        lcos_val = None
        coc_val = None
        cycles_eol = 0.0
    tec = costs_mod.total_electricity_cost(
        result.util_solar,
        result.util_batt,
        result.util_grid,
        lcopr_val or 0.0,
        lcos_val or 0.0,
        coc_val or 0.0,
        spec.gep_usd_per_mwh,
    )
    removed = stake_mod.co2_removed(result.baseline_kg, result.renewable_kg)
    utility = stake_mod.utility_tco(
        stake_mod.UtilityInputs(
            occ_pv_usd=occ_pv,
            occ_batt_usd=occ_batt,
            tec_usd_per_mwh=tec,
            annual_load_mwh=annual_load,
            battery_cycles_eol=cycles_eol,
            cycles_per_year=result.cycles_per_year or 0.0,
            solar_life_years=spec.solar_life_years,
        )
    )
    metric = stake_mod.utility_metric(utility.tco_usd, removed)
    fleet = (
        stake_mod.fleet_metric(spec.fleet_electric, tec, annual_load)
        if spec.fleet_electric is not None
        else None
    )
    fleet_partial = (
        stake_mod.fleet_metric(spec.fleet_partial, tec, annual_load)
        if spec.fleet_partial is not None
        else None
    )
    return ScenarioResult(
        **base,
        reduction_pct=result.reduction_pct,
        baseline_kg=result.baseline_kg,
        renewable_kg=result.renewable_kg,
        util_grid=result.util_grid,
        util_solar=result.util_solar,
        util_batt=result.util_batt,
        chg_grid=result.chg_grid,
        chg_solar=result.chg_solar,
        cycles_per_year=result.cycles_per_year,
        occ_pv_usd=occ_pv,
        occ_batt_usd=occ_batt,
        lcopr_usd_per_mwh=lcopr_val,
        lcos_usd_per_mwh=lcos_val,
        coc_usd_per_mwh=coc_val,
        tec_usd_per_mwh=tec,
        utility_tco_usd=utility.tco_usd,
        utility_years_op=utility.years_op,
        utility_usd_per_kg=metric,
        fleet_usd_per_mile=fleet,
        fleet_partial_usd_per_mile=fleet_partial,
        status=result.status,
        gap=result.gap,
        wall_time_s=time.perf_counter() - t0,
    )


_WORKER_SPEC: SweepSpec | None = None


def _init_worker(spec: SweepSpec) -> None:
    global _WORKER_SPEC
    _WORKER_SPEC = spec


def _run_cell_in_worker(key: CellKey) -> ScenarioResult:
    assert _WORKER_SPEC is not None
    return run_cell(_WORKER_SPEC, key)


def run_sweep(
    spec: SweepSpec,
    resume: bool = False,
    progress_path: str | Path | None = None,
) -> list[ScenarioResult]:
    """Run every cell of the cross product and return sorted results.

    With ``resume``, cells already present in the per-cell checkpoint
    file are reused instead of re-solved. Execution order never affects
    output order (results are sorted by axis coordinates at the end).
    """
    keys = spec.cell_keys()
    if progress_path is None and spec.output_dir is not None:
        progress_path = Path(spec.output_dir) / "cells.jsonl"
    done: dict[CellKey, ScenarioResult] = {}
    if resume and progress_path is not None and Path(progress_path).exists():
        for line in Path(progress_path).read_text(encoding="utf-8").splitlines():
            if line.strip():
                row = ScenarioResult.from_dict(json.loads(line))
                done[row.key] = row
    pending = [key for key in keys if key not in done]

    writer = None
    if progress_path is not None:
        Path(progress_path).parent.mkdir(parents=True, exist_ok=True)
        writer = open(progress_path, "a" if resume else "w", encoding="utf-8")
    try:
        if spec.workers > 1 and len(pending) > 1:
            with ProcessPoolExecutor(
                max_workers=spec.workers,
                initializer=_init_worker,
                initargs=(spec,),
            ) as pool:
                for row in pool.map(_run_cell_in_worker, pending):
                    done[row.key] = row
                    if writer:
                        writer.write(json.dumps(row.to_dict(), sort_keys=True) + "\n")
                        writer.flush()
        else:
            for key in pending:
                row = run_cell(spec, key)
                done[row.key] = row
                if writer:
                    writer.write(json.dumps(row.to_dict(), sort_keys=True) + "\n")
                    writer.flush()
    finally:
        if writer:
            writer.close()
    return [done[key] for key in keys]


def load_sweep_spec(source: str | Path) -> SweepSpec:
    """Read a sweep spec from JSON; relative paths resolve against it."""
    path = Path(source)
    payload = json.loads(path.read_text(encoding="utf-8"))
    base = path.parent
    hours = int(payload.get("hours", 8760))
    load = load_profile(base / payload["load"], UNIT_MW, hours=hours)
    carbon = load_profile(base / payload["carbon"], UNIT_KG_PER_HOUR, hours=hours)

    sites: list[SweepSite] = []
    if "catalog" in payload:
        catalog = catalog_from_json(base / payload["catalog"])
        indices = payload.get("site_indices") or [p.site_index for p in catalog.parcels]
        for idx in indices:
            parcel = catalog[int(idx)]
            if parcel.representative_profile is None:
                raise ValidationError(
                    f"catalog parcel {idx} carries no representative profile"
                )
            sites.append(
                SweepSite(
                    site_index=parcel.site_index,
                    label=f"site-{parcel.site_index}",
                    nameplate_mw=parcel.nameplate_mw,
                    profile=parcel.representative_profile,
                )
            )
    for i, entry in enumerate(payload.get("sites", [])):
        profile = load_profile(base / entry["profile"], UNIT_MW, hours=hours)
        sites.append(
            SweepSite(
                site_index=int(entry.get("site_index", len(sites) + 1)),
                label=entry.get("label", f"site-{len(sites) + 1}"),
                nameplate_mw=float(entry["nameplate_mw"]),
                profile=profile,
            )
        )
    if not sites:
        raise ValidationError("sweep spec lists no sites")

    chemistry_params = dict(costs_mod.CHEMISTRIES)
    stack = costs_mod.CostStackParams()
    if "cost_config" in payload:
        chemistry_params, stack = costs_mod.load_cost_config(base / payload["cost_config"])

    solver_fields = payload.get("solver", {})
    solver = SolveOptions(**solver_fields)

    fleet_electric = (
        stake_mod.load_fleet_params(base / payload["fleet_electric"])
        if "fleet_electric" in payload
        else None
    )
    fleet_partial = (
        stake_mod.load_fleet_params(base / payload["fleet_partial"])
        if "fleet_partial" in payload
        else None
    )
    output_dir = base / payload["output_dir"] if "output_dir" in payload else None

    return SweepSpec(
        load=load,
        carbon=carbon,
        sites=tuple(sites),
        nameplate_scales=tuple(payload.get("nameplate_scales", [1.0])),
        battery_sizes_mwh=tuple(payload.get("battery_sizes_mwh", [0.0])),
        chemistries=tuple(payload.get("chemistries", ["LFP"])),
        shift_hours=tuple(int(h) for h in payload.get("shift_hours", [0])),
        shift_carbon=bool(payload.get("shift_carbon", True)),
        gep_usd_per_mwh=float(
            payload.get("gep_usd_per_mwh", costs_mod.GRID_ELECTRICITY_PRICE)
        ),
        cost_per_wdc=float(payload.get("cost_per_wdc", 1.0)),
        solar_life_years=float(
            payload.get("solar_life_years", costs_mod.SOLAR_LIFE_YEARS)
        ),
        battery_duration_h=float(payload.get("battery_duration_h", 4.0)),
        chemistry_params=chemistry_params,
        stack=stack,
        fleet_electric=fleet_electric,
        fleet_partial=fleet_partial,
        solver=solver,
        output_dir=output_dir,
        workers=int(payload.get("workers", 1)),
    )


def _site_by_index(spec: SweepSpec, site_index: int) -> SweepSite:
    for site in spec.sites:
        if site.site_index == site_index:
            return site
    raise ValidationError(f"no site with index {site_index}")
