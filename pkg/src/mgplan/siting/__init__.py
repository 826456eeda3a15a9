"""Raster siting pipeline: exclusions, buffering, parcels, catalog."""

from .exclusions import (
    METERS_PER_MILE,
    MODE_ABOVE,
    MODE_BELOW,
    MODE_BINARY,
    CompositeMap,
    ExclusionRule,
    apply_exclusion_rule,
    buffer_violations,
    composite,
)
from .parcels import (
    DEFAULT_BLOCK_CELLS,
    DEFAULT_POWER_DENSITY_MW_PER_KM2,
    Parcel,
    SiteCatalog,
    aggregate_parcels,
    attach_representative_profiles,
    catalog_from_json,
    catalog_to_json,
    representative_profile,
)
from .pipeline import SitingConfig, load_siting_config, run_siting
from .rasters import GridRaster, read_ascii_grid, write_ascii_grid

__all__ = [
    "METERS_PER_MILE",
    "MODE_ABOVE",
    "MODE_BELOW",
    "MODE_BINARY",
    "CompositeMap",
    "DEFAULT_BLOCK_CELLS",
    "DEFAULT_POWER_DENSITY_MW_PER_KM2",
    "ExclusionRule",
    "GridRaster",
    "Parcel",
    "SiteCatalog",
    "SitingConfig",
    "aggregate_parcels",
    "apply_exclusion_rule",
    "attach_representative_profiles",
    "buffer_violations",
    "catalog_from_json",
    "catalog_to_json",
    "composite",
    "load_siting_config",
    "read_ascii_grid",
    "representative_profile",
    "run_siting",
    "write_ascii_grid",
]
