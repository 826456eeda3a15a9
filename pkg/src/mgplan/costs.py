"""Battery pack configuration, capital-cost stacks, and levelized costs.

Pack sizing targets an 800 V pack built from 15 Ah cells with a fixed
module topology (2 parallel module strings, 10 modules per row, 4 rows).
Pack prices are chemistry constants in $/kWh; installation and
integration costs stack multiplicatively on top in a fixed order. The
levelized metrics divide capital cost by lifetime energy delivered.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import ValidationError
from .profiles import HourlyProfile

GRID_ELECTRICITY_PRICE = 160.0  # $/MWh, study-region default
SOLAR_LIFE_YEARS = 30.0

FRACTION_TOL = 1e-9


@dataclass(frozen=True)
class ChemistryParams:
    """Cost and cycle-life constants for one positive-electrode chemistry."""

    name: str
    pack_cost_usd_per_kwh: float
    cycles_eol: float
    cell_voltage_v: float
    cell_capacity_ah: float = 15.0
    pack_voltage_v: float = 800.0

    def __post_init__(self) -> None:
        for attr in (
            "pack_cost_usd_per_kwh",
            "cycles_eol",
            "cell_voltage_v",
            "cell_capacity_ah",
            "pack_voltage_v",
        ):
            if getattr(self, attr) <= 0:
                raise ValidationError(f"{attr} must be positive")


CHEMISTRIES: dict[str, ChemistryParams] = {
    "NMC811": ChemistryParams("NMC811", 150.98, 2000, 3.68),
    "NCA": ChemistryParams("NCA", 194.03, 1400, 3.67),
    "LFP": ChemistryParams("LFP", 216.17, 6000, 3.31),
}

# Module strings wired in parallel, modules per row, rows. The series
# module count is (per_row * rows) / parallel_strings = 20.
PARALLEL_MODULE_STRINGS = 2
MODULES_PER_ROW = 10
MODULE_ROWS = 4
_SERIES_MODULES = MODULES_PER_ROW * MODULE_ROWS // PARALLEL_MODULE_STRINGS


def get_chemistry(name: str) -> ChemistryParams:
    try:
        return CHEMISTRIES[name.upper().replace(" ", "").replace("-", "")]
    except KeyError:
        raise ValidationError(
            f"unknown chemistry {name!r}; expected one of {sorted(CHEMISTRIES)}"
        ) from None


@dataclass(frozen=True)
class BatteryPackSpec:
    e_rated_mwh: float
    chemistry: str
    cells_parallel: int
    series_per_module: int
    cells_per_module: int
    rated_power_mw: float


def configure_pack(
    e_rated_mwh: float, chemistry: ChemistryParams | str, duration_h: float = 4.0
) -> BatteryPackSpec:
    """Size the pack for a rated energy at the fixed module topology.

    Cells in parallel come from the energy target at pack voltage and
    cell capacity, halved for the two parallel module strings and
    rounded up; series cells per module come from the pack/cell voltage
    ratio spread over the series module count, rounded to nearest.
    """
    if e_rated_mwh <= 0:
        raise ValidationError(f"pack energy must be positive, got {e_rated_mwh}")
    chem = get_chemistry(chemistry) if isinstance(chemistry, str) else chemistry
    energy_wh = e_rated_mwh * 1e6
    cells_parallel = math.ceil(
        energy_wh / (chem.pack_voltage_v * chem.cell_capacity_ah) / PARALLEL_MODULE_STRINGS
        - 1e-9
    )
    series_per_module = int(
        math.floor((chem.pack_voltage_v / chem.cell_voltage_v) / _SERIES_MODULES + 0.5)
    )
    return BatteryPackSpec(
        e_rated_mwh=e_rated_mwh,
        chemistry=chem.name,
        cells_parallel=cells_parallel,
        series_per_module=series_per_module,
        cells_per_module=series_per_module * cells_parallel,
        rated_power_mw=e_rated_mwh / duration_h,
    )


@dataclass(frozen=True)
class CostStackParams:
    """Installation/integration cost stack applied on top of the pack.

    Percentage items compound on the running total of every line above
    them, in declaration order. The controls-and-communication rate is
    piecewise linear in rated power through the anchor points and
    clamped outside them.
    """

    sbos_frac: float = 0.23
    pcs_usd_per_kw: float = 45.0
    cnc_points_mw_usd_per_kw: tuple[tuple[float, float], ...] = (
        (1.0, 3.9),
        (10.0, 7.8),
        (100.0, 10.374),
    )
    integration_frac: float = 0.05
    epc_frac: float = 0.20
    project_dev_frac: float = 0.20
    grid_integration_frac: float = 0.015

    def __post_init__(self) -> None:
        for attr in (
            "sbos_frac",
            "integration_frac",
            "epc_frac",
            "project_dev_frac",
            "grid_integration_frac",
        ):
            value = getattr(self, attr)
            if not 0 <= value <= 1:
                raise ValidationError(f"{attr} must be within [0, 1], got {value}")


def controls_comm_rate(power_mw: float, stack: CostStackParams) -> tuple[float, bool]:
    """$/kW controls-and-communication rate; True when power was clamped
    to the supported interpolation range."""
    points = stack.cnc_points_mw_usd_per_kw
    lo_mw, hi_mw = points[0][0], points[-1][0]
    clamped = power_mw < lo_mw or power_mw > hi_mw
    p = min(max(power_mw, lo_mw), hi_mw)
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        if p <= x1:
            return y0 + (p - x0) / (x1 - x0) * (y1 - y0), clamped
    return points[-1][1], clamped


@dataclass(frozen=True)
class BatteryCostBreakdown:
    """Itemized battery-system capital cost, one entry per stack line."""

    pack_usd: float
    sbos_usd: float
    pcs_usd: float
    controls_comm_usd: float
    integration_usd: float
    epc_usd: float
    project_dev_usd: float
    grid_integration_usd: float
    total_usd: float
    power_clamped: bool = False

    def line_items(self) -> dict[str, float]:
        return {
            "pack": self.pack_usd,
            "storage_balance_of_system": self.sbos_usd,
            "power_conversion_system": self.pcs_usd,
            "controls_and_communication": self.controls_comm_usd,
            "system_integration": self.integration_usd,
            "engineering_procurement_construction": self.epc_usd,
            "project_development": self.project_dev_usd,
            "grid_integration": self.grid_integration_usd,
        }


def battery_capital_cost(
    spec: BatteryPackSpec,
    chem: ChemistryParams | str | None = None,
    stack: CostStackParams | None = None,
) -> BatteryCostBreakdown:
    """Overnight capital cost of the battery system, itemized.

    Pack cost scales with rated energy; SBOS is a fraction of pack; PCS
    and controls scale with rated power; the four percentage items each
    apply to the running total of all lines above them.
    """
    if chem is None:
        chem = get_chemistry(spec.chemistry)
    elif isinstance(chem, str):
        chem = get_chemistry(chem)
    stack = stack or CostStackParams()
    pack = chem.pack_cost_usd_per_kwh * spec.e_rated_mwh * 1000.0
    sbos = stack.sbos_frac * pack
    rated_kw = spec.rated_power_mw * 1000.0
    pcs = stack.pcs_usd_per_kw * rated_kw
    cnc_rate, clamped = controls_comm_rate(spec.rated_power_mw, stack)
    cnc = cnc_rate * rated_kw

    running = pack + sbos + pcs + cnc
    integration = stack.integration_frac * running
    running += integration
    epc = stack.epc_frac * running
    running += epc
    project_dev = stack.project_dev_frac * running
    running += project_dev
    grid_integration = stack.grid_integration_frac * running
    running += grid_integration

    return BatteryCostBreakdown(
        pack_usd=pack,
        sbos_usd=sbos,
        pcs_usd=pcs,
        controls_comm_usd=cnc,
        integration_usd=integration,
        epc_usd=epc,
        project_dev_usd=project_dev,
        grid_integration_usd=grid_integration,
        total_usd=running,
        power_clamped=clamped,
    )


def solar_capital_cost(nameplate_mw: float, cost_per_wdc: float) -> float:
    """Overnight capital cost of the solar farm: nameplate times $/W."""
    if nameplate_mw <= 0:
        raise ValidationError(f"nameplate must be > 0, got {nameplate_mw}")
    if cost_per_wdc is None or cost_per_wdc <= 0:
        raise ValidationError("solar unit cost ($/W DC) is required and must be > 0")
    return nameplate_mw * 1e6 * cost_per_wdc


def lcopr(
    occ_pv_usd: float,
    solar: HourlyProfile,
    years_op: float = SOLAR_LIFE_YEARS,
) -> float:
    """Levelized cost of photovoltaic recharge ($/MWh): capital cost over
    lifetime energy output, with no degradation."""
    if years_op <= 0:
        raise ValidationError(f"operating years must be positive, got {years_op}")
    annual_mwh = solar.total()
    if annual_mwh <= 0:
        raise ValidationError("zero annual solar output; levelized cost undefined")
    return occ_pv_usd / (years_op * annual_mwh)


def lcos(occ_batt_usd: float, cycles_eol: float, e_rated_mwh: float) -> float:
    """Levelized cost of storage ($/MWh): capital cost over lifetime
    discharged energy (end-of-life cycles times rated energy)."""
    if cycles_eol <= 0 or e_rated_mwh <= 0:
        raise ValidationError("cycles and rated energy must be positive")
    return occ_batt_usd / (cycles_eol * e_rated_mwh)


def cost_of_charging(
    chg_solar_frac: float,
    chg_grid_frac: float,
    lcopr_usd_per_mwh: float,
    gep_usd_per_mwh: float = GRID_ELECTRICITY_PRICE,
) -> float:
    """Blended $/MWh of the energy used to charge the battery.

    Fractions must sum to one, or both be zero for a battery that never
    charged (cost of charging is then zero).
    """
    for name, value in (("chg_solar_frac", chg_solar_frac), ("chg_grid_frac", chg_grid_frac)):
        if not 0 <= value <= 1 + FRACTION_TOL:
            raise ValidationError(f"{name} outside [0, 1]: {value}")
    total = chg_solar_frac + chg_grid_frac
    if total == 0:
        return 0.0
    if abs(total - 1.0) > FRACTION_TOL:
        raise ValidationError(f"charging fractions must sum to 1, got {total}")
    return chg_solar_frac * lcopr_usd_per_mwh + chg_grid_frac * gep_usd_per_mwh


def total_electricity_cost(
    util_solar: float,
    util_batt: float,
    util_grid: float,
    lcopr_usd_per_mwh: float,
    lcos_usd_per_mwh: float,
    coc_usd_per_mwh: float,
    gep_usd_per_mwh: float = GRID_ELECTRICITY_PRICE,
) -> float:
    """Utilization-weighted $/MWh of serving the excess load.

    Solar share carries the levelized solar cost, battery share carries
    charging plus storage cost, grid share carries the grid price.
    """
    total = util_solar + util_batt + util_grid
    if abs(total - 1.0) > FRACTION_TOL:
        raise ValidationError(f"utilization fractions must sum to 1, got {total}")
    return (
        util_solar * lcopr_usd_per_mwh
        + util_batt * (coc_usd_per_mwh + lcos_usd_per_mwh)
        + util_grid * gep_usd_per_mwh
    )


@dataclass(frozen=True)
class CostBreakdown:
    """Capital and levelized costs for one deployment configuration."""

    occ_pv_usd: float
    occ_batt: BatteryCostBreakdown | None
    lcopr_usd_per_mwh: float | None
    lcos_usd_per_mwh: float | None
    coc_usd_per_mwh: float | None
    tec_usd_per_mwh: float

    @property
    def occ_batt_usd(self) -> float:
        return self.occ_batt.total_usd if self.occ_batt is not None else 0.0

    def to_dict(self) -> dict:
        return {
            "occ_pv_usd": self.occ_pv_usd,
            "occ_batt_usd": self.occ_batt_usd,
            "occ_batt_items": self.occ_batt.line_items() if self.occ_batt else None,
            "lcopr_usd_per_mwh": self.lcopr_usd_per_mwh,
            "lcos_usd_per_mwh": self.lcos_usd_per_mwh,
            "coc_usd_per_mwh": self.coc_usd_per_mwh,
            "tec_usd_per_mwh": self.tec_usd_per_mwh,
        }


def solar_cost_for_lcopr_target(
    target_lcopr_usd_per_mwh: float,
    solar: HourlyProfile,
    nameplate_mw: float,
    years_op: float = SOLAR_LIFE_YEARS,
) -> float:
    """$/W DC that reproduces a target levelized solar cost.

    Calibration helper: regional benchmarks report the levelized value,
    not the unit capital cost.
    """
    if nameplate_mw <= 0:
        raise ValidationError(f"nameplate must be > 0, got {nameplate_mw}")
    annual_mwh = solar.total()
    if annual_mwh <= 0:
        raise ValidationError("zero annual solar output")
    return target_lcopr_usd_per_mwh * years_op * annual_mwh / (nameplate_mw * 1e6)


def load_cost_config(source: str | Path) -> tuple[dict[str, ChemistryParams], CostStackParams]:
    """Read chemistry and stack overrides from JSON.

    Schema: optional ``chemistries`` mapping name to any subset of the
    chemistry fields, and optional ``stack`` with cost-stack fields.
    """
    path = Path(source)
    payload = json.loads(path.read_text(encoding="utf-8"))
    chemistries = dict(CHEMISTRIES)
    for name, fields_ in payload.get("chemistries", {}).items():
        base = chemistries.get(name.upper(), None)
        if base is None:
            base = ChemistryParams(
                name=name.upper(),
                pack_cost_usd_per_kwh=fields_["pack_cost_usd_per_kwh"],
                cycles_eol=fields_["cycles_eol"],
                cell_voltage_v=fields_["cell_voltage_v"],
            )
            chemistries[base.name] = base
        else:
            chemistries[base.name] = replace(base, **fields_)
    stack_fields = payload.get("stack", {})
    if "cnc_points_mw_usd_per_kw" in stack_fields:
        stack_fields["cnc_points_mw_usd_per_kw"] = tuple(
            tuple(point) for point in stack_fields["cnc_points_mw_usd_per_kw"]
        )
    stack = CostStackParams(**stack_fields)
    return chemistries, stack
