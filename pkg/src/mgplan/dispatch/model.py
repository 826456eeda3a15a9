"""Data model for the yearly solar/battery/grid dispatch problem.

Energy accounting per hour: available solar splits into load service,
battery charging, and curtailment; the charger draws from solar and
grid; the grid serves load and charger; stored energy follows a
round-trip-efficiency recursion with a state-of-charge window, a
half-full start, and a cyclic year-end condition. Grid power is
forbidden in hours with no excess load.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Union

import numpy as np

from ..errors import ValidationError
from ..profiles import (
    UNIT_KG_PER_HOUR,
    UNIT_MW,
    ZERO_LOAD_TOL,
    HourlyProfile,
)


@dataclass(frozen=True)
class BatterySpec:
    """Battery system rating and operating window.

    ``e_rated_mwh == 0`` means no battery. Maximum (dis)charge power is
    the rated energy divided by the duration.
    """

    e_rated_mwh: float
    duration_h: float = 4.0
    roundtrip_efficiency: float = 0.85
    soc_min_frac: float = 0.1
    soc_max_frac: float = 0.9
    initial_soc_frac: float = 0.5

    def __post_init__(self) -> None:
        if self.e_rated_mwh < 0:
            raise ValidationError(f"negative battery size: {self.e_rated_mwh}")
        if self.duration_h <= 0:
            raise ValidationError(f"battery duration must be positive: {self.duration_h}")
        if not 0 < self.roundtrip_efficiency <= 1:
            raise ValidationError(
                f"roundtrip efficiency must be in (0, 1]: {self.roundtrip_efficiency}"
            )
        if not 0 <= self.soc_min_frac <= self.initial_soc_frac <= self.soc_max_frac <= 1:
            raise ValidationError(
                "SOC fractions must satisfy 0 <= min <= initial <= max <= 1"
            )

    @property
    def power_limit_mw(self) -> float:
        if self.e_rated_mwh == 0:
            return 0.0
        return self.e_rated_mwh / self.duration_h

    @property
    def energy_min_mwh(self) -> float:
        return self.soc_min_frac * self.e_rated_mwh

    @property
    def energy_max_mwh(self) -> float:
        return self.soc_max_frac * self.e_rated_mwh

    @property
    def initial_energy_mwh(self) -> float:
        return self.initial_soc_frac * self.e_rated_mwh

    @property
    def usable_window_mwh(self) -> float:
        return (self.soc_max_frac - self.soc_min_frac) * self.e_rated_mwh


@dataclass(frozen=True)
class DispatchInstance:
    load: HourlyProfile
    solar: HourlyProfile
    carbon: HourlyProfile
    battery: BatterySpec

    @property
    def horizon(self) -> int:
        return self.load.horizon

    def zero_load_hours(self) -> np.ndarray:
        return self.load.values <= ZERO_LOAD_TOL


def build_instance(
    load: HourlyProfile,
    solar: HourlyProfile,
    carbon: HourlyProfile,
    battery: BatterySpec,
) -> DispatchInstance:
    """Validate horizons, units, and the zero-load/zero-carbon coupling.

    Hourly excess emissions track the excess load, so a positive carbon
    sample in an hour with no load is rejected rather than zeroed.
    """
    if not (load.horizon == solar.horizon == carbon.horizon):
        raise ValidationError(
            f"horizon mismatch: load {load.horizon}, solar {solar.horizon}, "
            f"carbon {carbon.horizon}"
        )
    if load.unit != UNIT_MW:
        raise ValidationError(f"load profile must be MW, got {load.unit!r}")
    if solar.unit != UNIT_MW:
        raise ValidationError(f"solar profile must be MW, got {solar.unit!r}")
    if carbon.unit != UNIT_KG_PER_HOUR:
        raise ValidationError(f"carbon profile must be kg/h, got {carbon.unit!r}")
    offending = np.flatnonzero(
        (load.values <= ZERO_LOAD_TOL) & (carbon.values > ZERO_LOAD_TOL)
    )
    if offending.size:
        raise ValidationError(f"carbon at zero-load hour {int(offending[0]) + 1}")
    return DispatchInstance(load=load, solar=solar, carbon=carbon, battery=battery)


def baseline_emissions(carbon: HourlyProfile) -> float:
    """Total excess emissions when the grid alone serves the load (kg)."""
    return float(carbon.values.sum())


STATUS_OPTIMAL = "proven-optimal"
STATUS_GAP = "gap"

_TRAJECTORY_COLUMNS = (
    "grid_to_load_mw",
    "solar_to_load_mw",
    "batt_to_load_mw",
    "solar_to_batt_mw",
    "grid_to_batt_mw",
    "solar_curtailed_mw",
    "grid_total_mw",
    "charge_total_mw",
    "battery_energy_mwh",
    "discharging",
)


@dataclass(frozen=True)
class DispatchResult:
    """Optimal hourly trajectories plus derived emission/usage metrics.

    ``reduction_pct`` is the percent reduction of excess emissions
    relative to the grid-only baseline. Utilization fractions average
    per-hour shares over hours with positive load (and, for charging
    fractions, hours with positive charger power).
    """

    grid_to_load: np.ndarray
    solar_to_load: np.ndarray
    batt_to_load: np.ndarray
    solar_to_batt: np.ndarray
    grid_to_batt: np.ndarray
    solar_curtailed: np.ndarray
    grid_total: np.ndarray
    charge_total: np.ndarray
    battery_energy: np.ndarray
    discharging: np.ndarray
    reduction_pct: float
    baseline_kg: float
    renewable_kg: float
    util_grid: float
    util_solar: float
    util_batt: float
    chg_grid: float
    chg_solar: float
    battery_charged: bool
    hours_with_load: int
    cycles_per_year: float | None
    status: str
    gap: float = 0.0

    @property
    def horizon(self) -> int:
        return self.grid_to_load.size

    def trajectories(self) -> dict[str, np.ndarray]:
        return dict(
            zip(
                _TRAJECTORY_COLUMNS,
                (
                    self.grid_to_load,
                    self.solar_to_load,
                    self.batt_to_load,
                    self.solar_to_batt,
                    self.grid_to_batt,
                    self.solar_curtailed,
                    self.grid_total,
                    self.charge_total,
                    self.battery_energy,
                    self.discharging,
                ),
            )
        )

    def to_csv(self, dest: Union[str, Path, IO[str]]) -> None:
        """One row per hour, one column per trajectory."""
        columns = self.trajectories()
        lines = ["hour," + ",".join(_TRAJECTORY_COLUMNS)]
        for t in range(self.horizon):
            row = ",".join(f"{columns[name][t]:.10g}" for name in _TRAJECTORY_COLUMNS)
            lines.append(f"{t + 1},{row}")
        text = "\n".join(lines) + "\n"
        if isinstance(dest, (str, Path)):
            Path(dest).write_text(text, encoding="utf-8")
        else:
            dest.write(text)

    def summary(self) -> dict:
        return {
            "reduction_pct": self.reduction_pct,
            "baseline_kg": self.baseline_kg,
            "renewable_kg": self.renewable_kg,
            "util_grid": self.util_grid,
            "util_solar": self.util_solar,
            "util_batt": self.util_batt,
            "chg_grid": self.chg_grid,
            "chg_solar": self.chg_solar,
            "battery_charged": self.battery_charged,
            "hours_with_load": self.hours_with_load,
            "cycles_per_year": self.cycles_per_year,
            "status": self.status,
            "gap": self.gap,
        }

    def summary_json(self, dest: Union[str, Path, None] = None) -> str:
        text = json.dumps(self.summary(), indent=2, sort_keys=True)
        if dest is not None:
            Path(dest).write_text(text + "\n", encoding="utf-8")
        return text
