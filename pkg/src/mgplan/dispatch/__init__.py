"""Optimal dispatch of solar, battery, and grid against excess load."""

from .metrics import (
    UtilizationFractions,
    count_cycles,
    renewable_emissions,
    utilization,
)
from .model import (
    STATUS_GAP,
    STATUS_OPTIMAL,
    BatterySpec,
    DispatchInstance,
    DispatchResult,
    baseline_emissions,
    build_instance,
)
from .solver import BACKEND_AUTO, BACKEND_MILP, SolveOptions, solve_dispatch

__all__ = [
    "BACKEND_AUTO",
    "BACKEND_MILP",
    "BatterySpec",
    "DispatchInstance",
    "DispatchResult",
    "STATUS_GAP",
    "STATUS_OPTIMAL",
    "SolveOptions",
    "UtilizationFractions",
    "baseline_emissions",
    "build_instance",
    "count_cycles",
    "renewable_emissions",
    "solve_dispatch",
    "utilization",
]
