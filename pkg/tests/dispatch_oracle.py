"""Exhaustive dispatch oracle for small horizons.

Independent of the production solver: enumerates every charge/discharge
pattern (the per-hour binary), and solves each pattern's continuous
subproblem exactly with a convex piecewise-linear value-function DP over
the stored-energy trajectory. No linear-programming library is used.

Per hour, once the battery action is fixed, the cheapest grid draw is
closed-form: solar covers load and charging first, the grid covers the
rest (or is forbidden at zero-load hours). The hour cost as a function
of the stored-energy change is convex piecewise-linear, so the DP value
function stays convex piecewise-linear and min-plus convolution is
exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

ZERO_TOL = 1e-9


@dataclass(frozen=True)
class Pwl:
    """Convex piecewise-linear function given by its knots."""

    xs: np.ndarray  # strictly increasing
    vs: np.ndarray

    def __post_init__(self):
        assert self.xs.size == self.vs.size >= 1
        assert np.all(np.diff(self.xs) > 0)

    @property
    def lo(self) -> float:
        return float(self.xs[0])

    @property
    def hi(self) -> float:
        return float(self.xs[-1])

    def at(self, x: float) -> float:
        if x < self.lo - 1e-9 or x > self.hi + 1e-9:
            return np.inf
        x = min(max(x, self.lo), self.hi)
        return float(np.interp(x, self.xs, self.vs))


def pwl_point(x: float, v: float = 0.0) -> Pwl:
    return Pwl(np.array([x]), np.array([v]))


def _knot_tol(x: float) -> float:
    return 1e-12 * max(1.0, abs(x))


def pwl_from_knots(points: list[tuple[float, float]]) -> Pwl:
    points = sorted(points)
    xs, vs = [], []
    for x, v in points:
        if xs and x - xs[-1] <= _knot_tol(x):
            vs[-1] = min(vs[-1], v)
            continue
        xs.append(x)
        vs.append(v)
    return Pwl(np.array(xs, dtype=float), np.array(vs, dtype=float))


def inf_convolve(f: Pwl, g: Pwl) -> Pwl:
    """(f box g)(z) = min over x+y=z of f(x)+g(y), both convex PWL.

    The result starts at the sum of the left endpoints and appends all
    segments of f and g merged in slope order.
    """
    segments = []
    for fn in (f, g):
        dx = np.diff(fn.xs)
        dv = np.diff(fn.vs)
        for width, rise in zip(dx, dv):
            segments.append((rise / width, width))
    segments.sort(key=lambda s: s[0])
    xs = [f.lo + g.lo]
    vs = [f.vs[0] + g.vs[0]]
    for slope, width in segments:
        if width <= 0:
            continue
        new_x = xs[-1] + width
        new_v = vs[-1] + slope * width
        if new_x - xs[-1] <= _knot_tol(new_x):
            vs[-1] = min(vs[-1], new_v)
            continue
        xs.append(new_x)
        vs.append(new_v)
    return Pwl(np.array(xs), np.array(vs))


def restrict(f: Pwl, lo: float, hi: float) -> Pwl | None:
    """Clamp the domain to [lo, hi]; None when the intersection is empty."""
    new_lo = max(f.lo, lo)
    new_hi = min(f.hi, hi)
    if new_lo > new_hi + 1e-12:
        return None
    if new_lo > new_hi:
        new_hi = new_lo
    inside = (f.xs > new_lo) & (f.xs < new_hi)
    points = [(new_lo, f.at(new_lo))]
    points += [(float(x), float(v)) for x, v in zip(f.xs[inside], f.vs[inside])]
    if new_hi > new_lo:
        points.append((new_hi, f.at(new_hi)))
    return pwl_from_knots(points)


def hour_cost(
    load: float,
    solar: float,
    weight: float,
    p_max: float,
    mu: float,
    discharge_allowed: bool,
) -> Pwl:
    """Cheapest weighted grid draw as a function of the stored-energy
    change this hour, with the discharge indicator fixed."""
    if discharge_allowed:
        # Charging forbidden; discharge is limited by power and by the
        # load itself (battery power has no other sink).
        d_max = min(p_max, load)
        lo, hi = -d_max, 0.0

        def cost(delta: float) -> float:
            return weight * max(0.0, load - solar + delta)

        knots = {lo, hi}
        kink = solar - load
        if lo < kink < hi:
            knots.add(kink)
        return pwl_from_knots([(x, cost(x)) for x in sorted(knots)])
    if load > ZERO_TOL:
        hi = mu * p_max

        def cost(delta: float) -> float:
            return weight * max(0.0, load - solar + delta / mu)

        knots = {0.0, hi}
        kink = mu * (solar - load)
        if 0.0 < kink < hi:
            knots.add(kink)
        return pwl_from_knots([(x, cost(x)) for x in sorted(knots)])
    # Zero-load hour: the grid is forbidden, so charging is capped by the
    # available solar as well as by power.
    hi = mu * min(p_max, solar)
    return pwl_from_knots([(0.0, 0.0), (hi, 0.0)] if hi > 0 else [(0.0, 0.0)])


@dataclass(frozen=True)
class OracleSolution:
    renewable_kg: float
    baseline_kg: float
    reduction_pct: float


def solve_oracle(
    load,
    solar,
    carbon,
    e_rated_mwh: float,
    duration_h: float = 4.0,
    mu: float = 0.85,
    soc_min: float = 0.1,
    soc_max: float = 0.9,
    soc_init: float = 0.5,
) -> OracleSolution:
    """Globally optimal emission total for a small dispatch instance."""
    load = np.asarray(load, dtype=float)
    solar = np.asarray(solar, dtype=float)
    carbon = np.asarray(carbon, dtype=float)
    T = load.size
    c_base = float(carbon.sum())
    weights = np.where(load > ZERO_TOL, carbon / np.where(load > ZERO_TOL, load, 1.0), 0.0)

    if e_rated_mwh == 0:
        grid = np.maximum(0.0, load - solar)
        grid[load <= ZERO_TOL] = 0.0
        c_renew = float((weights * grid).sum())
        return _wrap(c_renew, c_base)

    p_max = e_rated_mwh / duration_h
    e_lo, e_hi = soc_min * e_rated_mwh, soc_max * e_rated_mwh
    e0 = soc_init * e_rated_mwh

    # Discharging is pointless at zero-load hours, so only hours with
    # load need both binary branches.
    branch_hours = [t for t in range(T) if load[t] > ZERO_TOL]
    best = np.inf
    for pattern in itertools.product((False, True), repeat=len(branch_hours)):
        flags = dict(zip(branch_hours, pattern))
        value = pwl_point(e0)
        feasible = True
        for t in range(T):
            cost_t = hour_cost(
                load[t], solar[t], weights[t], p_max, mu, flags.get(t, False)
            )
            value = restrict(inf_convolve(value, cost_t), e_lo, e_hi)
            if value is None:
                feasible = False
                break
        if feasible:
            final = value.at(e0)
            best = min(best, final)
    assert np.isfinite(best), "oracle found no feasible pattern"
    return _wrap(best, c_base)


def _wrap(c_renew: float, c_base: float) -> OracleSolution:
    reduction = 0.0 if c_base <= 0 else 100.0 * (1.0 - c_renew / c_base)
    return OracleSolution(
        renewable_kg=c_renew, baseline_kg=c_base, reduction_pct=reduction
    )


def brute_force_grid_value(
    load,
    solar,
    carbon,
    e_rated_mwh: float,
    n_grid: int = 241,
    duration_h: float = 4.0,
    mu: float = 0.85,
    soc_min: float = 0.1,
    soc_max: float = 0.9,
    soc_init: float = 0.5,
) -> float:
    """Coarse cross-check of the PWL DP: discretize the stored-energy
    trajectory on a uniform grid and take the best pattern-free path.

    The true optimum is a lower bound for this value and lies within a
    grid-spacing-driven margin below it.
    """
    load = np.asarray(load, dtype=float)
    solar = np.asarray(solar, dtype=float)
    carbon = np.asarray(carbon, dtype=float)
    T = load.size
    weights = np.where(load > ZERO_TOL, carbon / np.where(load > ZERO_TOL, load, 1.0), 0.0)
    p_max = e_rated_mwh / duration_h
    e_lo, e_hi = soc_min * e_rated_mwh, soc_max * e_rated_mwh
    e0 = soc_init * e_rated_mwh

    grid = np.linspace(e_lo, e_hi, n_grid)
    grid = np.unique(np.append(grid, e0))
    n = grid.size
    delta = grid[None, :] - grid[:, None]  # prev -> next

    start = int(np.argmin(np.abs(grid - e0)))
    value = np.full(n, np.inf)
    value[start] = 0.0

    for t in range(T):
        step = np.full((n, n), np.inf)
        discharge = np.minimum(p_max, load[t])
        ok_d = (delta <= 0) & (-delta <= discharge + 1e-12)
        step = np.where(
            ok_d, weights[t] * np.maximum(0.0, load[t] - solar[t] + delta), step
        )
        if load[t] > ZERO_TOL:
            ok_c = (delta >= 0) & (delta <= mu * p_max + 1e-12)
            charge_cost = weights[t] * np.maximum(0.0, load[t] - solar[t] + delta / mu)
        else:
            ok_c = (delta >= 0) & (delta <= mu * min(p_max, solar[t]) + 1e-12)
            charge_cost = np.zeros_like(delta)
        step = np.where(ok_c, np.minimum(step, charge_cost), step)
        value = np.min(value[:, None] + step, axis=0)

    return float(value[start])
