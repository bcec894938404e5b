//! Experiment orchestration: Cartesian sweeps over the configured axes, one
//! table row per sweep point, deterministic for a fixed seed.

use super::table::{Cell, Column, ResultTable, TableMetadata};
use super::{ExpError, ExperimentKind, ExperimentSpec};
use crate::defaults;
use crate::energy;
use crate::linkbudget::{ris_path_loss, wavelength, LinkGeometry};
use crate::optim::{solve_coverage, solve_secrecy, PsoParams, SolveOptions};
use crate::scenario::Scenario;

fn metadata(spec: &ExperimentSpec, config_hash: &str, defaults_applied: &[String]) -> TableMetadata {
    TableMetadata {
        seed: spec.seed,
        config_hash: config_hash.to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        defaults_applied: defaults_applied.to_vec(),
    }
}

/// Scenario with every surface resized to `elements` (square-ish grid) and
/// the requested altitude and reference SNR.
fn scenario_for_point(
    base: &Scenario,
    elements: usize,
    altitude: f64,
    snr_db: f64,
) -> Scenario {
    let mut s = base.clone();
    let (rows, cols) = defaults::grid_for_count(elements);
    for unit in &mut s.ris_units {
        unit.ris.rows = rows;
        unit.ris.cols = cols;
    }
    s.uav_altitude = altitude;
    s.reference_snr_db = Some(snr_db);
    s
}

fn fail_at(point: String, source: ExpError) -> ExpError {
    ExpError::SweepPoint {
        point,
        source: Box::new(source),
    }
}

/// Runs the experiment described by `spec` and returns one row per sweep
/// point, in axis order (outer to inner as listed in the config).
pub fn run_experiment(
    spec: &ExperimentSpec,
    config_hash: &str,
    defaults_applied: &[String],
) -> Result<ResultTable, ExpError> {
    match spec.kind {
        ExperimentKind::PathlossSweep => pathloss_sweep(spec, config_hash, defaults_applied),
        ExperimentKind::FlighttimeSweep => flighttime_sweep(spec, config_hash, defaults_applied),
        ExperimentKind::Coverage => coverage_sweep(spec, config_hash, defaults_applied),
        ExperimentKind::Secrecy => secrecy_sweep(spec, config_hash, defaults_applied),
    }
}

/// Path loss of the nominal user-RIS-BS link (surface above the user-BS
/// midpoint) over element count x frequency x altitude.
fn pathloss_sweep(
    spec: &ExperimentSpec,
    config_hash: &str,
    defaults_applied: &[String],
) -> Result<ResultTable, ExpError> {
    let s = &spec.scenario;
    let template = &s.ris_units.first().ok_or_else(|| {
        ExpError::Parse("pathloss sweep needs at least one configured surface".into())
    })?.ris;
    let mut table = ResultTable::new(
        metadata(spec, config_hash, defaults_applied),
        vec![
            Column::new("elements", "count"),
            Column::new("frequency", "GHz"),
            Column::new("altitude", "m"),
            Column::new("path_loss", "linear"),
            Column::new("path_loss", "dB"),
        ],
    );
    for &elements in &spec.elements {
        for &freq_ghz in &spec.frequencies_ghz {
            for &altitude in &spec.altitudes_m {
                let point = format!("elements={elements}, frequency={freq_ghz} GHz, altitude={altitude} m");
                let lambda = wavelength(freq_ghz * 1e9).map_err(|e| fail_at(point.clone(), e.into()))?;
                let (rows, cols) = defaults::grid_for_count(elements);
                let mut ris = template.clone();
                ris.rows = rows;
                ris.cols = cols;
                ris.pitch = lambda / 2.0;
                let user = s.users[0];
                let mut ris_pos = s.nominal_ris_position(user);
                ris_pos.z = altitude;
                let geom = LinkGeometry::between(user, ris_pos, s.bs_position)
                    .map_err(|e| fail_at(point.clone(), ExpError::Link(e)))?;
                let pl = ris_path_loss(&geom, &ris, lambda, 1.0, 1.0)
                    .map_err(|e| fail_at(point.clone(), ExpError::Link(e)))?;
                table.push_row(vec![
                    Cell::Int(elements as i64),
                    Cell::Num(freq_ghz),
                    Cell::Num(altitude),
                    Cell::Num(pl),
                    Cell::Num(10.0 * pl.log10()),
                ]);
            }
        }
    }
    Ok(table)
}

/// Flight time of the selected airframe over surface aperture area, with the
/// element count implied by half-wavelength pitch at the scenario carrier.
fn flighttime_sweep(
    spec: &ExperimentSpec,
    config_hash: &str,
    defaults_applied: &[String],
) -> Result<ResultTable, ExpError> {
    let s = &spec.scenario;
    let uav = &spec.uav;
    let template = &s.ris_units.first().ok_or_else(|| {
        ExpError::Parse("flight-time sweep needs at least one configured surface".into())
    })?.ris;
    let pitch = defaults::half_wavelength_pitch(s.carrier_frequency);
    let mut table = ResultTable::new(
        metadata(spec, config_hash, defaults_applied),
        vec![
            Column::new("area", "m2"),
            Column::new("elements", "count"),
            Column::new("ris_mass", "kg"),
            Column::new("ris_power", "W"),
            Column::new("hover_power", "W"),
            Column::new("flight_time", "s"),
            Column::new("flight_time", "min"),
        ],
    );
    for &area in &spec.areas_m2 {
        let point = format!("area={area} m2");
        let elements = ((area / (pitch * pitch)).round() as usize).max(1);
        let (rows, cols) = defaults::grid_for_count(elements);
        let mut ris = template.clone();
        ris.rows = rows;
        ris.cols = cols;
        ris.pitch = pitch;
        let breakdown = energy::power_breakdown(uav, &ris, elements)
            .map_err(|e| fail_at(point.clone(), ExpError::Energy(e)))?;
        let seconds = energy::flight_time(uav, &ris, elements)
            .map_err(|e| fail_at(point.clone(), ExpError::Energy(e)))?;
        table.push_row(vec![
            Cell::Num(area),
            Cell::Int(elements as i64),
            Cell::Num(energy::ris_mass(&ris)),
            Cell::Num(breakdown.ris_element_power + breakdown.ris_controller_power),
            Cell::Num(breakdown.hover_power),
            Cell::Num(seconds),
            Cell::Num(seconds / 60.0),
        ]);
    }
    Ok(table)
}

/// Every sweep point runs the swarm from the same master seed, so differences
/// between points reflect the scenario, not optimizer luck.
fn solve_options(spec: &ExperimentSpec) -> SolveOptions {
    SolveOptions {
        pso: PsoParams {
            seed: spec.seed,
            ..spec.pso
        },
        cd: spec.cd,
        quantization_bits: spec.quantization_bits,
    }
}

/// Coverage case study: optimized sum spectral efficiency over element count
/// x reference SNR x altitude.
fn coverage_sweep(
    spec: &ExperimentSpec,
    config_hash: &str,
    defaults_applied: &[String],
) -> Result<ResultTable, ExpError> {
    let mut table = ResultTable::new(
        metadata(spec, config_hash, defaults_applied),
        vec![
            Column::new("elements", "count"),
            Column::new("reference_snr", "dB"),
            Column::new("altitude", "m"),
            Column::new("spectral_efficiency", "bit/s/Hz"),
        ],
    );
    for &elements in &spec.elements {
        for &snr in &spec.reference_snrs_db {
            for &altitude in &spec.altitudes_m {
                let point = format!("elements={elements}, snr={snr} dB, altitude={altitude} m");
                let scenario = scenario_for_point(&spec.scenario, elements, altitude, snr);
                let result = solve_coverage(&scenario, &solve_options(spec))
                    .map_err(|e| fail_at(point.clone(), ExpError::Optim(e)))?;
                table.push_row(vec![
                    Cell::Int(elements as i64),
                    Cell::Num(snr),
                    Cell::Num(altitude),
                    Cell::Num(result.objective_value),
                ]);
            }
        }
    }
    Ok(table)
}

/// Secrecy case study: optimized grid-averaged secrecy rate over the same
/// axes, plus the spectral efficiency realized at the secrecy solution.
fn secrecy_sweep(
    spec: &ExperimentSpec,
    config_hash: &str,
    defaults_applied: &[String],
) -> Result<ResultTable, ExpError> {
    let mut table = ResultTable::new(
        metadata(spec, config_hash, defaults_applied),
        vec![
            Column::new("elements", "count"),
            Column::new("reference_snr", "dB"),
            Column::new("altitude", "m"),
            Column::new("average_secrecy_rate", "bit/s/Hz"),
            Column::new("spectral_efficiency", "bit/s/Hz"),
        ],
    );
    for &elements in &spec.elements {
        for &snr in &spec.reference_snrs_db {
            for &altitude in &spec.altitudes_m {
                let point = format!("elements={elements}, snr={snr} dB, altitude={altitude} m");
                let scenario = scenario_for_point(&spec.scenario, elements, altitude, snr);
                let result = solve_secrecy(&scenario, &spec.eve_grid, &solve_options(spec))
                    .map_err(|e| fail_at(point.clone(), ExpError::Optim(e)))?;
                let phases: Vec<Vec<f64>> =
                    result.phases.iter().map(|p| p.phases().to_vec()).collect();
                let report = crate::metrics::report(
                    &scenario,
                    &result.uav_positions,
                    &phases,
                    &result.powers.powers,
                    None,
                )
                .map_err(|e| fail_at(point.clone(), ExpError::Metrics(e)))?;
                table.push_row(vec![
                    Cell::Int(elements as i64),
                    Cell::Num(snr),
                    Cell::Num(altitude),
                    Cell::Num(result.objective_value),
                    Cell::Num(report.total_se),
                ]);
            }
        }
    }
    Ok(table)
}
