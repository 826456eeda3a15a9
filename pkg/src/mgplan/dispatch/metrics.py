"""Emission and utilization metrics derived from dispatch trajectories."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError
from ..profiles import ZERO_LOAD_TOL
from .model import BatterySpec, DispatchInstance, DispatchResult

# Charger power below this counts as "no charging this hour" when
# averaging the charging-source fractions.
CHARGE_TOL = 1e-9


def renewable_emissions(result: DispatchResult, instance: DispatchInstance) -> float:
    """Excess emissions of the mixed network (kg).

    Sums, over hours with positive load, the hourly emission scaled by
    the fraction of load served from the grid.
    """
    load = instance.load.values
    carbon = instance.carbon.values
    mask = load > ZERO_LOAD_TOL
    total = float(
        np.sum(result.grid_total[mask] / load[mask] * carbon[mask])
    )
    return total


@dataclass(frozen=True)
class UtilizationFractions:
    grid: float
    solar: float
    batt_discharge: float
    chg_grid: float
    chg_solar: float
    battery_charged: bool


def utilization(result: DispatchResult, instance: DispatchInstance) -> UtilizationFractions:
    """Average per-hour resource shares of load service and charging.

    Load-service fractions average over hours with positive load and sum
    to one; charging fractions average over hours with positive charger
    power and sum to one, or report (0, 0) with ``battery_charged`` False
    when the battery never charges.
    """
    load = instance.load.values
    mask = load > ZERO_LOAD_TOL
    n_load = int(mask.sum())
    if n_load == 0:
        raise ValidationError("undefined utilization: no hours with positive load")
    f_grid = float((result.grid_to_load[mask] / load[mask]).mean())
    f_solar = float((result.solar_to_load[mask] / load[mask]).mean())
    f_batt = float((result.batt_to_load[mask] / load[mask]).mean())

    charging = result.charge_total > CHARGE_TOL
    if charging.any():
        chg_grid = float(
            (result.grid_to_batt[charging] / result.charge_total[charging]).mean()
        )
        chg_solar = float(
            (result.solar_to_batt[charging] / result.charge_total[charging]).mean()
        )
        charged = True
    else:
        chg_grid = 0.0
        chg_solar = 0.0
        charged = False
    return UtilizationFractions(
        grid=f_grid,
        solar=f_solar,
        batt_discharge=f_batt,
        chg_grid=chg_grid,
        chg_solar=chg_solar,
        battery_charged=charged,
    )


def count_cycles(result: DispatchResult, battery: BatterySpec) -> float:
    """Equivalent full cycles per year over the usable SOC window.

    Total discharged energy divided by the usable window; a deterministic
    stand-in for microcycle counting.
    """
    if battery.e_rated_mwh == 0:
        raise ValidationError("cycle count undefined for a zero-size battery")
    return float(result.batt_to_load.sum()) / battery.usable_window_mwh
