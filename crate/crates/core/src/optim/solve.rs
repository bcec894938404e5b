//! End-to-end solve pipelines: an outer particle swarm over the UAVs'
//! horizontal coordinates (altitude is a scenario constant), and per fitness
//! evaluation an inner coordinate-descent pass over phases and powers.
//!
//! The secrecy fitness exploits an exact factorization of the cascade: the
//! element-dependent phase structure of the eavesdropper channel equals the
//! legitimate one, so `|eve channel|^2 = |phasor sum|^2 / PL_eve` without
//! re-summing elements per grid point. `metrics::average_secrecy_rate`
//! computes the same quantity by the direct route and serves as its oracle in
//! tests.

use num_complex::Complex64;

use super::cd::{alignment_phases, cd_phases, PhasorObjective};
use super::power::{cd_power, PowerObjective};
use super::pso::pso;
use super::{CdParams, ObjectiveKind, OptimError, PhaseConfig, PowerAlloc, PsoParams, SolveResult};
use crate::linkbudget::{
    bs_steering, cascade_coefficients, effective_max_tx_power, ris_path_loss, steering_angle,
    LinkGeometry,
};
use crate::metrics::{gram_inverse_diagonal, CMatrix};
use crate::scenario::{fraunhofer_distance, EveGrid, Scenario, Vec3};

/// Knobs of the solve pipelines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveOptions {
    pub pso: PsoParams,
    pub cd: CdParams,
    /// 0 for continuous phases, B >= 1 for 2^B-level quantization.
    pub quantization_bits: u8,
}

/// Everything the inner loop produces for one candidate placement.
struct InnerSolution {
    phases: Vec<PhaseConfig>,
    powers: PowerAlloc,
    objective: f64,
}

struct Pipeline<'a> {
    scenario: &'a Scenario,
    lambda: f64,
    power_cap: f64,
    /// Eavesdropper grid points (secrecy objective only).
    grid_points: Option<Vec<Vec3>>,
    cd: CdParams,
    quantization_bits: u8,
}

impl<'a> Pipeline<'a> {
    fn new(
        scenario: &'a Scenario,
        grid: Option<&EveGrid>,
        options: &SolveOptions,
    ) -> Result<Self, OptimError> {
        Ok(Self {
            scenario,
            lambda: scenario.wavelength(),
            power_cap: effective_max_tx_power(scenario)?,
            grid_points: grid.map(|g| g.points()),
            cd: options.cd,
            quantization_bits: options.quantization_bits,
        })
    }

    fn positions_from_flat(&self, flat: &[f64]) -> Vec<Vec3> {
        flat.chunks_exact(2)
            .map(|xy| Vec3::new(xy[0], xy[1], self.scenario.uav_altitude))
            .collect()
    }

    /// Inner loop: optimize phases per surface, build the ZF channel, then
    /// optimize powers for the active objective.
    fn solve_inner(&self, flat: &[f64]) -> Result<InnerSolution, OptimError> {
        let s = self.scenario;
        let positions = self.positions_from_flat(flat);
        let k_users = s.users.len();

        let mut phases: Vec<PhaseConfig> = Vec::with_capacity(s.ris_units.len());
        let mut phasor_mags: Vec<f64> = vec![0.0; k_users];
        let mut columns: Vec<Vec<Complex64>> = vec![Vec::new(); k_users];
        for (i, unit) in s.ris_units.iter().enumerate() {
            let user_pos = s.users[unit.user];
            let coeffs =
                cascade_coefficients(user_pos, positions[i], &unit.ris, s.bs_position, self.lambda);
            let objective = PhasorObjective::new(coeffs);
            let warm =
                PhaseConfig::with_bits(alignment_phases(objective.coefficients()), self.quantization_bits);
            let optimized = cd_phases(&objective, &warm, &self.cd);
            let sum = objective.sum(optimized.phases());
            let geom = LinkGeometry::between(user_pos, positions[i], s.bs_position)?;
            // The far-field path loss model is only valid beyond the
            // Fraunhofer distance; closer placements are infeasible.
            let far_field = fraunhofer_distance(&unit.ris, self.lambda);
            if geom.d1 < far_field || geom.d2 < far_field {
                return Err(OptimError::InvalidBounds(format!(
                    "placement {i} violates the far-field condition ({far_field:.1} m)"
                )));
            }
            let path_loss = ris_path_loss(&geom, &unit.ris, self.lambda, 1.0, 1.0)?;
            let gain = (1.0 / path_loss).sqrt() * sum;
            let steering = bs_steering(
                steering_angle(s.bs_position, positions[i]),
                s.bs_antennas,
                s.bs_antenna_spacing,
                self.lambda,
            );
            columns[unit.user] = steering.iter().map(|a| gain * a).collect();
            phasor_mags[unit.user] = sum.norm();
            phases.push(optimized);
        }

        let h = CMatrix::from_columns(&columns)?;
        // Effective post-ZF gains: SINR_k = p_k * gain_k / noise.
        let gains: Vec<f64> = gram_inverse_diagonal(&h)?
            .into_iter()
            .map(|d| 1.0 / d)
            .collect();

        let start = PowerAlloc::full_power(k_users, s.power_budget_mode, self.power_cap);
        let (powers, objective) = match &self.grid_points {
            None => {
                let powers =
                    cd_power(&gains, &start, s.noise_power, &PowerObjective::Coverage, &self.cd)?;
                let se: f64 = powers
                    .powers
                    .iter()
                    .zip(&gains)
                    .map(|(&p, &g)| (1.0 + p * g / s.noise_power).log2())
                    .sum();
                (powers, se)
            }
            Some(points) => {
                let eve_gains = self.eve_gain_matrix(&positions, &phasor_mags, points)?;
                let powers = cd_power(
                    &gains,
                    &start,
                    s.noise_power,
                    &PowerObjective::Secrecy {
                        eve_gains: &eve_gains,
                    },
                    &self.cd,
                )?;
                let asr =
                    secrecy_objective(&powers.powers, &gains, &eve_gains, s.noise_power);
                (powers, asr)
            }
        };

        Ok(InnerSolution {
            phases,
            powers,
            objective,
        })
    }

    /// `|eve channel|^2` for every user at every grid point, via the exact
    /// phasor-sum factorization.
    fn eve_gain_matrix(
        &self,
        positions: &[Vec3],
        phasor_mags: &[f64],
        points: &[Vec3],
    ) -> Result<Vec<Vec<f64>>, OptimError> {
        let s = self.scenario;
        let mut out = vec![Vec::new(); s.users.len()];
        for (i, unit) in s.ris_units.iter().enumerate() {
            let user_pos = s.users[unit.user];
            let mag_sq = phasor_mags[unit.user] * phasor_mags[unit.user];
            let far_field = fraunhofer_distance(&unit.ris, self.lambda);
            let mut row = Vec::with_capacity(points.len());
            for &point in points {
                let geom = LinkGeometry::between(user_pos, positions[i], point)?;
                if geom.d2 < far_field {
                    return Err(OptimError::InvalidBounds(format!(
                        "eavesdropper leg of placement {i} violates the far-field condition"
                    )));
                }
                let pl = ris_path_loss(&geom, &unit.ris, self.lambda, 1.0, 1.0)?;
                row.push(mag_sq / pl);
            }
            out[unit.user] = row;
        }
        Ok(out)
    }

    fn fitness(&self, flat: &[f64]) -> f64 {
        match self.solve_inner(flat) {
            Ok(inner) => inner.objective,
            // Infeasible placements (rank-deficient steering, degenerate
            // geometry) simply lose to feasible ones.
            Err(_) => f64::NEG_INFINITY,
        }
    }

    fn bounds(&self) -> Vec<(f64, f64)> {
        let region = self.scenario.region;
        let mut bounds = Vec::with_capacity(2 * self.scenario.ris_units.len());
        for _ in 0..self.scenario.ris_units.len() {
            bounds.push((region.x_min, region.x_max));
            bounds.push((region.y_min, region.y_max));
        }
        bounds
    }
}

fn secrecy_objective(
    powers: &[f64],
    gains: &[f64],
    eve_gains: &[Vec<f64>],
    noise_power: f64,
) -> f64 {
    let n_points = eve_gains.first().map(|r| r.len()).unwrap_or(0);
    if n_points == 0 {
        return 0.0;
    }
    let rates: Vec<f64> = powers
        .iter()
        .zip(gains)
        .map(|(&p, &g)| (1.0 + p * g / noise_power).log2())
        .collect();
    let mut total = 0.0;
    for (k, rate) in rates.iter().enumerate() {
        let scale = powers[k] / noise_power;
        for &eve_gain in &eve_gains[k] {
            let eve = (1.0 + scale * eve_gain).log2();
            total += (rate - eve).max(0.0);
        }
    }
    total / n_points as f64
}

fn run_pipeline(
    scenario: &Scenario,
    grid: Option<&EveGrid>,
    options: &SolveOptions,
    kind: ObjectiveKind,
) -> Result<SolveResult, OptimError> {
    scenario
        .validate_fields()
        .map_err(|e| OptimError::InvalidParams(e.to_string()))?;
    let pipeline = Pipeline::new(scenario, grid, options)?;
    let bounds = pipeline.bounds();
    let outcome = pso(|flat| pipeline.fitness(flat), &bounds, &options.pso)?;
    let best = pipeline.solve_inner(&outcome.best_position)?;
    Ok(SolveResult {
        uav_positions: pipeline.positions_from_flat(&outcome.best_position),
        phases: best.phases,
        powers: best.powers,
        objective_value: outcome.best_value,
        objective_kind: kind,
        trace: outcome.trace,
    })
}

/// Maximizes the sum spectral efficiency over UAV placement, phases, and
/// powers.
pub fn solve_coverage(scenario: &Scenario, options: &SolveOptions) -> Result<SolveResult, OptimError> {
    run_pipeline(scenario, None, options, ObjectiveKind::Coverage)
}

/// Maximizes the grid-averaged secrecy rate over UAV placement, phases, and
/// powers.
pub fn solve_secrecy(
    scenario: &Scenario,
    grid: &EveGrid,
    options: &SolveOptions,
) -> Result<SolveResult, OptimError> {
    grid.validate()
        .map_err(|e| OptimError::InvalidParams(e.to_string()))?;
    run_pipeline(scenario, Some(grid), options, ObjectiveKind::Secrecy)
}

/// Coverage objective for an explicit flat placement vector `[x0, y0, x1,
/// y1, ...]` - the exact fitness the swarm maximizes. Exposed for oracle
/// comparisons (grid search) and diagnostics.
pub fn evaluate_coverage_placement(
    scenario: &Scenario,
    options: &SolveOptions,
    flat_positions: &[f64],
) -> Result<f64, OptimError> {
    let pipeline = Pipeline::new(scenario, None, options)?;
    pipeline.solve_inner(flat_positions).map(|s| s.objective)
}

/// Secrecy objective for an explicit flat placement vector; the fast-path
/// counterpart of `metrics::average_secrecy_rate`.
pub fn evaluate_secrecy_placement(
    scenario: &Scenario,
    grid: &EveGrid,
    options: &SolveOptions,
    flat_positions: &[f64],
) -> Result<f64, OptimError> {
    let pipeline = Pipeline::new(scenario, Some(grid), options)?;
    pipeline.solve_inner(flat_positions).map(|s| s.objective)
}
