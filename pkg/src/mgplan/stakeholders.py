"""Stakeholder cost metrics: utility $/kg of CO2 removed and fleet $/mile.

The utility carries the capital costs and pays the blended electricity
cost on the annual excess load over the system lifetime (solar life
capped at 30 years, battery life set by cycle budget over annual
cycles). The fleet operator carries vehicle costs plus the energy bill;
diesel and electric fleets share one code path with the energy term
switched between a per-mile fuel cost and the electricity bill.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import ValidationError

POWERTRAIN_ELECTRIC = "electric"
POWERTRAIN_DIESEL = "diesel"

UTILITY_SOLAR_LIFE_YEARS = 30.0
FLEET_YEARS_OP = 5.0


def co2_removed(c_base_kg: float, c_renew_kg: float) -> float:
    """Weight of excess emissions removed: baseline minus mixed-network.

    Written so the removed weight is non-negative.
    """
    if c_renew_kg < 0 or c_base_kg < 0:
        raise ValidationError("emission totals must be non-negative")
    if c_renew_kg > c_base_kg + 1e-9 * max(1.0, c_base_kg):
        raise ValidationError(
            f"mixed-network emissions {c_renew_kg} exceed baseline {c_base_kg}"
        )
    return max(0.0, c_base_kg - c_renew_kg)


@dataclass(frozen=True)
class UtilityInputs:
    occ_pv_usd: float
    occ_batt_usd: float
    tec_usd_per_mwh: float
    annual_load_mwh: float
    battery_cycles_eol: float = 0.0
    cycles_per_year: float = 0.0
    solar_life_years: float = UTILITY_SOLAR_LIFE_YEARS

    def __post_init__(self) -> None:
        for attr in (
            "occ_pv_usd",
            "occ_batt_usd",
            "tec_usd_per_mwh",
            "annual_load_mwh",
            "battery_cycles_eol",
            "cycles_per_year",
        ):
            if getattr(self, attr) < 0:
                raise ValidationError(f"{attr} must be non-negative")


@dataclass(frozen=True)
class UtilityTCO:
    tco_usd: float
    years_op: float


def utility_tco(inputs: UtilityInputs) -> UtilityTCO:
    """Capital cost plus the electricity bill over the system lifetime.

    Battery life is the cycle budget over annual cycles; an unused
    battery (zero annual cycles) leaves the solar life binding.
    """
    if inputs.cycles_per_year > 0 and inputs.battery_cycles_eol > 0:
        battery_years = inputs.battery_cycles_eol / inputs.cycles_per_year
        years_op = min(inputs.solar_life_years, battery_years)
    else:
        years_op = inputs.solar_life_years
    tco = (
        inputs.occ_pv_usd
        + inputs.occ_batt_usd
        + inputs.tec_usd_per_mwh * inputs.annual_load_mwh * years_op
    )
    return UtilityTCO(tco_usd=tco, years_op=years_op)


def utility_metric(tco_usd: float, kg_removed: float) -> float | None:
    """$ per kg of excess CO2 removed; None when nothing was removed."""
    if kg_removed < 0:
        raise ValidationError(f"kg removed must be non-negative, got {kg_removed}")
    if kg_removed == 0:
        return None
    return tco_usd / kg_removed


@dataclass(frozen=True)
class FleetParams:
    """Per-vehicle and fleet-level cost constants.

    ``vmt_total`` is the fleet-aggregate miles per year. For diesel
    fleets ``fuel_cost_usd_per_mile`` replaces the electricity bill and
    the dwell/payload penalty does not apply.
    """

    n_veh: int
    msrp_usd: float
    registration_usd: float
    subsidy_usd: float
    insurance_usd_per_year: float
    maintenance_usd_per_mile: float
    residual_frac: float
    vmt_total: float
    years_op: float = FLEET_YEARS_OP
    powertrain: str = POWERTRAIN_ELECTRIC
    penalty_usd_per_mile: float = 0.5
    fuel_cost_usd_per_mile: float = 0.0

    def __post_init__(self) -> None:
        if self.powertrain not in (POWERTRAIN_ELECTRIC, POWERTRAIN_DIESEL):
            raise ValidationError(f"unknown powertrain {self.powertrain!r}")
        if not 0 <= self.residual_frac <= 1:
            raise ValidationError(
                f"residual fraction must be in [0, 1], got {self.residual_frac}"
            )
        for attr in (
            "msrp_usd",
            "registration_usd",
            "subsidy_usd",
            "insurance_usd_per_year",
            "maintenance_usd_per_mile",
            "vmt_total",
            "penalty_usd_per_mile",
            "fuel_cost_usd_per_mile",
        ):
            if getattr(self, attr) < 0:
                raise ValidationError(f"{attr} must be non-negative")
        if self.n_veh < 0:
            raise ValidationError("vehicle count must be non-negative")


def electric_fleet_defaults(n_veh: int = 1825, vmt_total: float = 0.0) -> FleetParams:
    """Electrified-fleet cost constants for the study region."""
    return FleetParams(
        n_veh=n_veh,
        msrp_usd=334_313.0,
        registration_usd=1_500.0,
        subsidy_usd=40_000.0,
        insurance_usd_per_year=11_700.0,
        maintenance_usd_per_mile=0.055,
        residual_frac=0.25,
        vmt_total=vmt_total,
        powertrain=POWERTRAIN_ELECTRIC,
        penalty_usd_per_mile=0.5,
    )


def diesel_fleet_defaults(n_veh: int = 1825, vmt_total: float = 0.0) -> FleetParams:
    """Diesel benchmark cost constants for the study region."""
    return FleetParams(
        n_veh=n_veh,
        msrp_usd=133_841.0,
        registration_usd=1_500.0,
        subsidy_usd=0.0,
        insurance_usd_per_year=8_000.0,
        maintenance_usd_per_mile=0.086,
        residual_frac=0.35,
        vmt_total=vmt_total,
        powertrain=POWERTRAIN_DIESEL,
        penalty_usd_per_mile=0.0,
        fuel_cost_usd_per_mile=0.68,
    )


def partial_fleet_defaults(vmt_per_vehicle: float = 84_932.0) -> FleetParams:
    """Partial electrification: only high-mileage trucks switch."""
    n_veh = 1087
    return replace(
        electric_fleet_defaults(n_veh=n_veh),
        vmt_total=n_veh * vmt_per_vehicle,
    )


@dataclass(frozen=True)
class FleetTCO:
    tco_usd: float
    negative_net_initial: bool


def fleet_tco(
    params: FleetParams, tec_usd_per_mwh: float = 0.0, annual_load_mwh: float = 0.0
) -> FleetTCO:
    """Fleet total cost of ownership over the operating years.

    Per vehicle: depreciated purchase (net of residual), registration,
    subsidy, and insurance per year. Fleet-level: maintenance on total
    miles and the energy bill (electricity at the blended rate, or the
    per-mile fuel cost for diesel).
    """
    per_vehicle = (
        (1.0 - params.residual_frac) * params.msrp_usd
        + params.registration_usd
        - params.subsidy_usd
        + params.insurance_usd_per_year * params.years_op
    )
    negative = (
        (1.0 - params.residual_frac) * params.msrp_usd
        + params.registration_usd
        - params.subsidy_usd
    ) < 0
    if params.powertrain == POWERTRAIN_DIESEL:
        energy_per_year = params.fuel_cost_usd_per_mile * params.vmt_total
    else:
        energy_per_year = tec_usd_per_mwh * annual_load_mwh
    tco = (
        params.n_veh * per_vehicle
        + params.maintenance_usd_per_mile * params.vmt_total * params.years_op
        + energy_per_year * params.years_op
    )
    return FleetTCO(tco_usd=tco, negative_net_initial=negative)


def fleet_cost_per_mile(
    tco_usd: float,
    vmt_total: float,
    years_op: float,
    penalty_usd_per_mile: float = 0.0,
) -> float:
    """$/mile over the fleet's lifetime miles, plus the dwell/payload
    penalty for electrified trucks."""
    if vmt_total * years_op <= 0:
        raise ValidationError("lifetime mileage must be positive")
    return tco_usd / (vmt_total * years_op) + penalty_usd_per_mile


def fleet_metric(
    params: FleetParams, tec_usd_per_mwh: float = 0.0, annual_load_mwh: float = 0.0
) -> float:
    """Convenience chain: TCO then $/mile with the params' own penalty."""
    tco = fleet_tco(params, tec_usd_per_mwh, annual_load_mwh)
    return fleet_cost_per_mile(
        tco.tco_usd, params.vmt_total, params.years_op, params.penalty_usd_per_mile
    )


def solve_vmt_for_cost_target(
    params: FleetParams,
    target_usd_per_mile: float,
    tec_usd_per_mwh: float = 0.0,
    annual_load_mwh: float = 0.0,
) -> float:
    """Per-vehicle annual miles that reproduce a target $/mile.

    Calibration helper: the regional benchmarks report $/mile without
    stating the fleet-average mileage. With miles as the unknown, the
    per-mile cost is (fixed costs)/miles plus constant per-mile terms,
    so the fit is closed-form. The fleet electricity bill (if any) is
    treated as mileage-independent, which makes it part of the fixed
    numerator.
    """
    per_vehicle_fixed = (
        (1.0 - params.residual_frac) * params.msrp_usd
        + params.registration_usd
        - params.subsidy_usd
        + params.insurance_usd_per_year * params.years_op
    )
    per_mile_const = params.maintenance_usd_per_mile + params.penalty_usd_per_mile
    if params.powertrain == POWERTRAIN_DIESEL:
        per_mile_const += params.fuel_cost_usd_per_mile
        fixed = params.n_veh * per_vehicle_fixed
    else:
        fixed = params.n_veh * per_vehicle_fixed + tec_usd_per_mwh * annual_load_mwh * params.years_op
    slack = target_usd_per_mile - per_mile_const
    if slack <= 0:
        raise ValidationError(
            f"target {target_usd_per_mile} $/mile is below the per-mile floor {per_mile_const}"
        )
    vmt_total = fixed / (params.years_op * slack)
    return vmt_total / params.n_veh


def solve_energy_per_mile_for_cost_target(
    params: FleetParams, target_usd_per_mile: float, tec_usd_per_mwh: float
) -> float:
    """Fleet energy intensity (MWh/mile) that reproduces a target $/mile
    at a fixed mileage and electricity price."""
    if params.powertrain != POWERTRAIN_ELECTRIC:
        raise ValidationError("energy-intensity fit applies to electric fleets")
    if params.vmt_total <= 0:
        raise ValidationError("params.vmt_total must be positive for this fit")
    if tec_usd_per_mwh <= 0:
        raise ValidationError("electricity price must be positive")
    base = fleet_metric(params, tec_usd_per_mwh=0.0, annual_load_mwh=0.0)
    slack = target_usd_per_mile - base
    if slack <= 0:
        raise ValidationError(
            f"target {target_usd_per_mile} $/mile is below the zero-energy cost {base}"
        )
    return slack / tec_usd_per_mwh


_FLEET_JSON_KEYS = {
    "n_veh": "n_veh",
    "msrp_usd": "msrp_usd",
    "registration_usd": "registration_usd",
    "subsidy_usd": "subsidy_usd",
    "insurance_usd_per_year": "insurance_usd_per_year",
    "maintenance_usd_per_mile": "maintenance_usd_per_mile",
    "residual_frac": "residual_frac",
    "vmt_total": "vmt_total",
    "years_op": "years_op",
    "powertrain": "powertrain",
    "penalty_usd_per_mile": "penalty_usd_per_mile",
    "fuel_cost_usd_per_mile": "fuel_cost_usd_per_mile",
}


def load_fleet_params(source: str | Path) -> FleetParams:
    """Read fleet parameters from a JSON file keyed like FleetParams."""
    payload = json.loads(Path(source).read_text(encoding="utf-8"))
    unknown = set(payload) - set(_FLEET_JSON_KEYS)
    if unknown:
        raise ValidationError(f"unknown fleet parameter keys: {sorted(unknown)}")
    return FleetParams(**payload)
