"""Utility and fleet-operator cost metric tests."""

import json

import pytest

from mgplan import (
    FleetParams,
    UtilityInputs,
    ValidationError,
    co2_removed,
    fleet_cost_per_mile,
    fleet_tco,
    utility_metric,
    utility_tco,
)
from mgplan.stakeholders import (
    diesel_fleet_defaults,
    electric_fleet_defaults,
    fleet_metric,
    load_fleet_params,
    partial_fleet_defaults,
    solve_energy_per_mile_for_cost_target,
    solve_vmt_for_cost_target,
)


class TestCo2Removed:
    def test_no_reduction(self):
        assert co2_removed(100.0, 100.0) == 0.0

    def test_full_reduction(self):
        assert co2_removed(100.0, 0.0) == 100.0

    def test_toy_chain(self):
        assert co2_removed(10.0, 1.5) == pytest.approx(8.5)

    def test_rejects_excess_renewable(self):
        with pytest.raises(ValidationError):
            co2_removed(10.0, 11.0)

    def test_scales_with_inputs(self):
        assert co2_removed(30.0, 4.5) == pytest.approx(3 * co2_removed(10.0, 1.5))


class TestUtilityTco:
    def test_no_battery_case(self):
        inputs = UtilityInputs(
            occ_pv_usd=10e6,
            occ_batt_usd=0.0,
            tec_usd_per_mwh=100.0,
            annual_load_mwh=1000.0,
        )
        out = utility_tco(inputs)
        assert out.years_op == 30.0
        assert out.tco_usd == pytest.approx(10e6 + 100.0 * 1000.0 * 30.0)

    def test_battery_limited_life(self):
        inputs = UtilityInputs(0.0, 0.0, 0.0, 0.0, battery_cycles_eol=6000, cycles_per_year=300)
        assert utility_tco(inputs).years_op == pytest.approx(20.0)

    def test_solar_limited_life(self):
        inputs = UtilityInputs(0.0, 0.0, 0.0, 0.0, battery_cycles_eol=2000, cycles_per_year=50)
        assert utility_tco(inputs).years_op == 30.0

    def test_idle_battery_defaults_to_solar_life(self):
        inputs = UtilityInputs(0.0, 0.0, 0.0, 0.0, battery_cycles_eol=2000, cycles_per_year=0.0)
        assert utility_tco(inputs).years_op == 30.0

    @pytest.mark.parametrize("field,delta", [
        ("occ_pv_usd", 1e6),
        ("occ_batt_usd", 1e6),
        ("tec_usd_per_mwh", 10.0),
        ("annual_load_mwh", 500.0),
    ])
    def test_monotone_in_each_input(self, field, delta):
        base = dict(
            occ_pv_usd=5e6,
            occ_batt_usd=2e6,
            tec_usd_per_mwh=90.0,
            annual_load_mwh=2000.0,
            battery_cycles_eol=6000,
            cycles_per_year=250,
        )
        low = utility_tco(UtilityInputs(**base)).tco_usd
        bumped = dict(base)
        bumped[field] += delta
        high = utility_tco(UtilityInputs(**bumped)).tco_usd
        assert high >= low

    def test_years_capped_at_solar_life(self):
        inputs = UtilityInputs(0, 0, 0, 0, battery_cycles_eol=1e9, cycles_per_year=1.0)
        assert utility_tco(inputs).years_op == 30.0


class TestUtilityMetric:
    def test_division(self):
        assert utility_metric(13e6, 1e6) == pytest.approx(13.0)

    def test_zero_removed_is_undefined(self):
        assert utility_metric(13e6, 0.0) is None

    def test_scaling_invariance(self):
        assert utility_metric(26e6, 2e6) == pytest.approx(utility_metric(13e6, 1e6))


def zero_fleet():
    return FleetParams(
        n_veh=0,
        msrp_usd=0.0,
        registration_usd=0.0,
        subsidy_usd=0.0,
        insurance_usd_per_year=0.0,
        maintenance_usd_per_mile=0.0,
        residual_frac=0.0,
        vmt_total=0.0,
        penalty_usd_per_mile=0.0,
    )


class TestFleetTco:
    def test_zero_everything(self):
        assert fleet_tco(zero_fleet()).tco_usd == 0.0

    def test_full_residual_recovery(self):
        params = FleetParams(
            n_veh=10,
            msrp_usd=100_000.0,
            registration_usd=0.0,
            subsidy_usd=0.0,
            insurance_usd_per_year=0.0,
            maintenance_usd_per_mile=0.0,
            residual_frac=1.0,
            vmt_total=0.0,
        )
        assert fleet_tco(params).tco_usd == 0.0

    def test_single_vehicle_single_year_reference(self):
        """Electrified constants, one vehicle, one year, no miles, no
        electricity: 0.75*334313 + 1500 - 40000 + 11700 = 223934.75."""
        params = FleetParams(
            n_veh=1,
            msrp_usd=334_313.0,
            registration_usd=1_500.0,
            subsidy_usd=40_000.0,
            insurance_usd_per_year=11_700.0,
            maintenance_usd_per_mile=0.055,
            residual_frac=0.25,
            vmt_total=0.0,
            years_op=1.0,
        )
        assert fleet_tco(params).tco_usd == pytest.approx(223_934.75)

    def test_negative_net_initial_flag(self):
        params = FleetParams(
            n_veh=1,
            msrp_usd=10_000.0,
            registration_usd=0.0,
            subsidy_usd=20_000.0,
            insurance_usd_per_year=0.0,
            maintenance_usd_per_mile=0.0,
            residual_frac=0.0,
            vmt_total=0.0,
        )
        assert fleet_tco(params).negative_net_initial

    def test_diesel_energy_term_ignores_electricity(self):
        params = diesel_fleet_defaults(n_veh=1, vmt_total=10_000.0)
        with_tec = fleet_tco(params, tec_usd_per_mwh=1e9, annual_load_mwh=1e9)
        without = fleet_tco(params)
        assert with_tec.tco_usd == without.tco_usd

    def test_electric_energy_term(self):
        params = electric_fleet_defaults(n_veh=1, vmt_total=1.0)
        base = fleet_tco(params).tco_usd
        energized = fleet_tco(params, tec_usd_per_mwh=100.0, annual_load_mwh=10.0).tco_usd
        assert energized - base == pytest.approx(100.0 * 10.0 * 5.0)


class TestFleetCostPerMile:
    def test_penalty_only(self):
        assert fleet_cost_per_mile(0.0, 1000.0, 1.0, 0.5) == pytest.approx(0.5)

    def test_worked_example(self):
        assert fleet_cost_per_mile(3e6, 300_000.0, 5.0, 0.5) == pytest.approx(2.5)

    def test_zero_mileage_rejected(self):
        with pytest.raises(ValidationError, match="lifetime mileage"):
            fleet_cost_per_mile(1.0, 0.0, 5.0)

    def test_strictly_decreasing_in_tec(self):
        params = electric_fleet_defaults(n_veh=10, vmt_total=1e6)
        costly = fleet_metric(params, tec_usd_per_mwh=160.0, annual_load_mwh=2000.0)
        cheap = fleet_metric(params, tec_usd_per_mwh=120.0, annual_load_mwh=2000.0)
        assert cheap < costly


class TestCalibration:
    def test_diesel_benchmark_round_trip(self):
        """Fit the fleet-average mileage to the published diesel
        benchmark (1.63 $/mile), then confirm the formulas reproduce it."""
        params = diesel_fleet_defaults()
        vmt_per_vehicle = solve_vmt_for_cost_target(params, 1.63)
        assert 5_000.0 < vmt_per_vehicle < 200_000.0
        fitted = FleetParams(
            **{
                **params.__dict__,
                "vmt_total": params.n_veh * vmt_per_vehicle,
            }
        )
        assert fleet_metric(fitted) == pytest.approx(1.63, abs=0.02)

    def test_electrified_baseline_round_trip(self):
        """With mileage fixed by the diesel fit, fit the fleet energy
        intensity to the grid-only electrified benchmark (2.63 $/mile)."""
        diesel = diesel_fleet_defaults()
        vmt_per_vehicle = solve_vmt_for_cost_target(diesel, 1.63)
        electric = electric_fleet_defaults()
        electric = FleetParams(
            **{
                **electric.__dict__,
                "vmt_total": electric.n_veh * vmt_per_vehicle,
            }
        )
        energy_per_mile = solve_energy_per_mile_for_cost_target(electric, 2.63, 160.0)
        assert 0.0 < energy_per_mile < 0.01  # MWh per mile; spot-check plausibility
        annual_mwh = energy_per_mile * electric.vmt_total
        assert fleet_metric(electric, 160.0, annual_mwh) == pytest.approx(2.63, abs=0.02)

    def test_partial_fleet_defaults(self):
        params = partial_fleet_defaults()
        assert params.n_veh == 1087
        assert params.vmt_total == pytest.approx(1087 * 84_932.0)


def test_fleet_params_json_round_trip(tmp_path):
    params = electric_fleet_defaults(n_veh=3, vmt_total=100.0)
    path = tmp_path / "fleet.json"
    path.write_text(json.dumps(params.__dict__), encoding="utf-8")
    back = load_fleet_params(path)
    assert back == params


def test_fleet_params_json_rejects_unknown_keys(tmp_path):
    path = tmp_path / "fleet.json"
    path.write_text(json.dumps({"n_veh": 1, "bogus": 2}), encoding="utf-8")
    with pytest.raises(ValidationError, match="unknown fleet parameter"):
        load_fleet_params(path)
