"""Microgrid deployment planning toolkit.

Chains a raster siting pipeline (exclusion layers to a catalog of viable
solar sites), a yearly solar/battery/grid dispatch optimizer that
maximizes excess-emission reduction, battery pack and capital cost
models, levelized and blended electricity costs, and stakeholder metrics
for utilities and truck-fleet operators.
"""

from .costs import (
    CHEMISTRIES,
    GRID_ELECTRICITY_PRICE,
    BatteryCostBreakdown,
    BatteryPackSpec,
    ChemistryParams,
    CostBreakdown,
    CostStackParams,
    battery_capital_cost,
    configure_pack,
    cost_of_charging,
    lcopr,
    lcos,
    solar_capital_cost,
    total_electricity_cost,
)
from .dispatch import (
    BatterySpec,
    DispatchInstance,
    DispatchResult,
    SolveOptions,
    baseline_emissions,
    build_instance,
    count_cycles,
    renewable_emissions,
    solve_dispatch,
    utilization,
)
from .errors import SolverFailure, ValidationError
from .profiles import (
    HOURS_PER_YEAR,
    UNIT_CAPACITY_FACTOR,
    UNIT_KG_PER_HOUR,
    UNIT_MW,
    HourlyProfile,
    available_capacity,
    load_profile,
    save_profile,
    scale_profile,
    shift_profile,
)
from .scenario import (
    ScenarioResult,
    SweepSpec,
    capacity_gap,
    export_results,
    load_sweep_spec,
    run_sweep,
)
from .siting import (
    CompositeMap,
    ExclusionRule,
    GridRaster,
    SiteCatalog,
    aggregate_parcels,
    apply_exclusion_rule,
    buffer_violations,
    composite,
    representative_profile,
)
from .stakeholders import (
    FleetParams,
    UtilityInputs,
    co2_removed,
    fleet_cost_per_mile,
    fleet_tco,
    utility_metric,
    utility_tco,
)

__version__ = "0.1.0"
