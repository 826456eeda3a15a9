"""Shared builders for synthetic test instances."""

from __future__ import annotations

import numpy as np

from mgplan import (
    BatterySpec,
    HourlyProfile,
    UNIT_CAPACITY_FACTOR,
    UNIT_KG_PER_HOUR,
    UNIT_MW,
    build_instance,
)

TOY_LOAD = [0.0, 10.0, 0.0, 10.0]
TOY_SOLAR = [10.0, 0.0, 10.0, 0.0]
TOY_CARBON = [0.0, 5.0, 0.0, 5.0]


def toy_instance(e_rated_mwh: float = 40.0):
    """Four-hour instance with anti-aligned solar and load; with a 40 MWh
    battery the optimum moves 17 MWh through the battery and draws 3 MWh
    from the grid."""
    return build_instance(
        HourlyProfile(TOY_LOAD, UNIT_MW),
        HourlyProfile(TOY_SOLAR, UNIT_MW),
        HourlyProfile(TOY_CARBON, UNIT_KG_PER_HOUR),
        BatterySpec(e_rated_mwh),
    )


def synthetic_year(
    hours: int = 8760,
    load_mw: float = 30.0,
    solar_nameplate_mw: float = 60.0,
    carbon_rate_kg_per_mwh: float = 400.0,
    seed: int | None = None,
):
    """Weekday-block load, sinusoidal solar, emissions proportional to load.

    Load runs 06:00-20:00 on weekdays only, so the year includes long
    zero-demand stretches; solar follows a day/night sine with a mild
    seasonal swing.
    """
    t = np.arange(hours)
    hod = t % 24
    dow = (t // 24) % 7
    load = np.where((dow < 5) & (hod >= 6) & (hod < 20), load_mw, 0.0)
    if seed is not None:
        rng = np.random.default_rng(seed)
        load = load * (1.0 + 0.2 * rng.random(hours))
    cf = np.maximum(0.0, np.sin(np.pi * (hod - 6) / 14.0))
    cf = cf * (0.8 + 0.2 * np.sin(2 * np.pi * t / max(hours, 1)))
    solar = cf * solar_nameplate_mw
    carbon = load * carbon_rate_kg_per_mwh
    return (
        HourlyProfile(load, UNIT_MW, "synthetic load"),
        HourlyProfile(solar, UNIT_MW, "synthetic solar"),
        HourlyProfile(carbon, UNIT_KG_PER_HOUR, "synthetic emissions"),
    )


def synthetic_capacity_factor(hours: int = 8760, peak: float = 0.85):
    t = np.arange(hours)
    hod = t % 24
    cf = np.maximum(0.0, np.sin(np.pi * (hod - 6) / 14.0)) * peak
    return HourlyProfile(cf, UNIT_CAPACITY_FACTOR, "synthetic cf")


def random_small_instance(rng: np.random.Generator):
    """Small-integer instance for oracle comparisons; guarantees a
    positive baseline emission total."""
    while True:
        T = int(rng.choice([4, 6, 8]))
        load = rng.integers(0, 6, T).astype(float)
        solar = rng.integers(0, 6, T).astype(float)
        carbon = np.where(load > 0, rng.integers(0, 5, T), 0).astype(float)
        if carbon.sum() > 0:
            break
    e_rated = float(rng.choice([0.0, 4.0, 8.0, 16.0]))
    instance = build_instance(
        HourlyProfile(load, UNIT_MW),
        HourlyProfile(solar, UNIT_MW),
        HourlyProfile(carbon, UNIT_KG_PER_HOUR),
        BatterySpec(e_rated),
    )
    return instance, load, solar, carbon, e_rated
