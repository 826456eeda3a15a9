"""Hourly time series that drive the dispatch and cost chain.

A profile is a fixed-horizon, non-negative series with an attached unit:
power in MW, a dimensionless capacity factor in [0, 1], or an hourly
emission rate in kg/h. The canonical horizon is one year (8760 hours);
shorter horizons are allowed so small dispatch instances can be checked
against exhaustive oracles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Union

import numpy as np

from .errors import ValidationError

HOURS_PER_YEAR = 8760

UNIT_MW = "MW"
UNIT_CAPACITY_FACTOR = "cf"
UNIT_KG_PER_HOUR = "kg/h"
VALID_UNITS = (UNIT_MW, UNIT_CAPACITY_FACTOR, UNIT_KG_PER_HOUR)

# Samples below this are treated as exactly zero when classifying
# zero-demand hours (weekend hours in the source data are nominally zero
# but may carry float noise after processing).
ZERO_LOAD_TOL = 1e-9

_UNIT_ALIASES = {
    "mw": UNIT_MW,
    "cf": UNIT_CAPACITY_FACTOR,
    "capacity_factor": UNIT_CAPACITY_FACTOR,
    "capacity-factor": UNIT_CAPACITY_FACTOR,
    "kg/h": UNIT_KG_PER_HOUR,
    "kg_per_h": UNIT_KG_PER_HOUR,
    "kgco2/h": UNIT_KG_PER_HOUR,
}

Source = Union[str, Path, IO[str], IO[bytes]]


def normalize_unit(unit: str) -> str:
    try:
        return _UNIT_ALIASES[unit.strip().lower()]
    except KeyError:
        raise ValidationError(
            f"unknown unit {unit!r}; expected one of {', '.join(VALID_UNITS)}"
        ) from None


def _validate_values(values: np.ndarray, unit: str) -> None:
    if values.ndim != 1 or values.size == 0:
        raise ValidationError("profile values must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(values)):
        hour = int(np.flatnonzero(~np.isfinite(values))[0]) + 1
        raise ValidationError(f"non-finite sample at hour {hour}")
    if np.any(values < 0.0):
        hour = int(np.flatnonzero(values < 0.0)[0]) + 1
        raise ValidationError(f"negative sample at hour {hour}")
    if unit == UNIT_CAPACITY_FACTOR and np.any(values > 1.0):
        hour = int(np.flatnonzero(values > 1.0)[0]) + 1
        raise ValidationError(f"capacity factor > 1 at hour {hour}")


@dataclass(frozen=True)
class HourlyProfile:
    """Immutable hourly series with a unit tag.

    ``hours`` optionally pins the expected horizon; construction fails if
    the data length differs. Hour indices are 1-based in files and error
    messages, 0-based in the ``values`` array.
    """

    values: np.ndarray
    unit: str
    label: str = ""
    hours: int | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        unit = normalize_unit(self.unit)
        values = np.asarray(self.values, dtype=np.float64)
        _validate_values(values, unit)
        if self.hours is not None and values.size != self.hours:
            raise ValidationError(
                f"expected {self.hours} rows, got {values.size}"
            )
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "unit", unit)

    def __len__(self) -> int:
        return self.values.size

    @property
    def horizon(self) -> int:
        return self.values.size

    def total(self) -> float:
        """Sum of all samples (annual energy for an MW profile)."""
        return float(self.values.sum())


def load_profile(
    source: Source,
    expected_unit: str | None = None,
    hours: int = HOURS_PER_YEAR,
    label: str | None = None,
) -> HourlyProfile:
    """Read a profile from CSV with header ``hour,value``.

    The file must contain exactly ``hours`` data rows with hour indices
    1..hours in order. An optional leading comment line ``# unit: MW``
    declares the unit; otherwise ``expected_unit`` must be given. When
    both are present they must agree.
    """
    name, lines = _read_lines(source)
    file_unit: str | None = None

    i = 0
    while i < len(lines) and lines[i].lstrip().startswith("#"):
        comment = lines[i].lstrip()[1:].strip()
        if comment.lower().startswith("unit:"):
            file_unit = normalize_unit(comment.split(":", 1)[1])
        i += 1

    if i >= len(lines):
        raise ValidationError(f"{name}: empty profile file")
    header = [part.strip().lower() for part in lines[i].split(",")]
    if header != ["hour", "value"]:
        raise ValidationError(
            f"{name}: expected header 'hour,value', got {lines[i].strip()!r}"
        )
    i += 1

    rows = [line for line in lines[i:] if line.strip()]
    if len(rows) != hours:
        raise ValidationError(f"{name}: expected {hours} rows, got {len(rows)}")

    unit = _resolve_unit(file_unit, expected_unit, name)
    values = np.empty(hours, dtype=np.float64)
    for k, row in enumerate(rows):
        parts = row.split(",")
        if len(parts) != 2:
            raise ValidationError(f"{name}: malformed row {k + 1}: {row.strip()!r}")
        try:
            hour = int(parts[0])
        except ValueError:
            raise ValidationError(
                f"{name}: unparseable hour index at row {k + 1}: {parts[0].strip()!r}"
            ) from None
        if hour != k + 1:
            raise ValidationError(
                f"{name}: non-monotone hour index at row {k + 1}: "
                f"expected {k + 1}, got {hour}"
            )
        try:
            values[k] = float(parts[1])
        except ValueError:
            raise ValidationError(
                f"{name}: unparseable number at hour {hour}: {parts[1].strip()!r}"
            ) from None

    try:
        return HourlyProfile(values, unit, label if label is not None else name)
    except ValidationError as exc:
        raise ValidationError(f"{name}: {exc}") from None


def save_profile(profile: HourlyProfile, dest: Source) -> None:
    """Write a profile as CSV with a ``# unit:`` metadata line."""
    out = [f"# unit: {profile.unit}", "hour,value"]
    out.extend(f"{i + 1},{float(v)!r}" for i, v in enumerate(profile.values))
    text = "\n".join(out) + "\n"
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text, encoding="utf-8")
    else:
        dest.write(text)


def shift_profile(profile: HourlyProfile, hours: int) -> HourlyProfile:
    """Circular shift by a signed number of hours; annual totals preserved.

    A positive shift delays the signal: the sample at hour h moves to
    hour h + shift (wrapping within the horizon).
    """
    if abs(hours) >= profile.horizon:
        raise ValidationError(
            f"shift magnitude {abs(hours)} must be < horizon {profile.horizon}"
        )
    return HourlyProfile(np.roll(profile.values, hours), profile.unit, profile.label)


def scale_profile(profile: HourlyProfile, factor: float) -> HourlyProfile:
    """Multiply every sample by a non-negative factor."""
    if factor < 0:
        raise ValidationError(f"negative factor: {factor}")
    return HourlyProfile(profile.values * factor, profile.unit, profile.label)


def available_capacity(cf: HourlyProfile, nameplate_mw: float) -> HourlyProfile:
    """Hourly available power of a plant: capacity factor times nameplate."""
    if cf.unit != UNIT_CAPACITY_FACTOR:
        raise ValidationError(
            f"unit mismatch: expected capacity-factor profile, got {cf.unit!r}"
        )
    if nameplate_mw < 0:
        raise ValidationError(f"negative nameplate: {nameplate_mw}")
    label = cf.label or "available capacity"
    return HourlyProfile(cf.values * nameplate_mw, UNIT_MW, label)


def _resolve_unit(file_unit: str | None, expected_unit: str | None, name: str) -> str:
    expected = normalize_unit(expected_unit) if expected_unit is not None else None
    if file_unit is not None and expected is not None and file_unit != expected:
        raise ValidationError(
            f"{name}: unit mismatch: file declares {file_unit!r}, expected {expected!r}"
        )
    unit = file_unit or expected
    if unit is None:
        raise ValidationError(
            f"{name}: unit not specified (no '# unit:' line and no expected unit)"
        )
    return unit


def _read_lines(source: Source) -> tuple[str, list[str]]:
    if isinstance(source, (str, Path)):
        path = Path(source)
        return path.name, path.read_text(encoding="utf-8").splitlines()
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    name = getattr(source, "name", "<stream>")
    return str(name), data.splitlines()
