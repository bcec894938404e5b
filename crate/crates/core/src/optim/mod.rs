//! Optimizers: coordinate descent over surface phases and transmit powers,
//! particle-swarm placement of the UAVs, and the end-to-end solve pipelines
//! for the coverage and secrecy objectives.

mod cd;
mod power;
mod pso;
mod solve;

pub use cd::{alignment_phases, cd_phases, PhasorObjective};
pub use power::{cd_power, water_filling, PowerObjective};
pub use pso::{pso, PsoOutcome};
pub use solve::{
    evaluate_coverage_placement, evaluate_secrecy_placement, solve_coverage, solve_secrecy,
    SolveOptions,
};

use thiserror::Error;

use crate::linkbudget::LinkError;
use crate::metrics::MetricsError;
use crate::scenario::{PowerBudgetMode, Vec3};

#[derive(Debug, Error)]
pub enum OptimError {
    #[error("invalid optimizer parameter: {0}")]
    InvalidParams(String),
    #[error("invalid search bounds: {0}")]
    InvalidBounds(String),
    #[error("channel gain vector is empty")]
    EmptyGains,
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Per-surface phase shifts in [0, 2 pi). With `quantization_bits = 0` the
/// phases are continuous; with B >= 1 every phase lies on the 2^B-point
/// uniform grid (enforced on construction).
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseConfig {
    phases: Vec<f64>,
    quantization_bits: u8,
}

impl PhaseConfig {
    pub fn continuous(phases: Vec<f64>) -> Self {
        Self {
            phases: phases.into_iter().map(wrap_phase).collect(),
            quantization_bits: 0,
        }
    }

    /// Snaps every phase to the nearest level of the 2^B-point grid.
    pub fn quantized(phases: Vec<f64>, bits: u8) -> Self {
        assert!(bits >= 1, "use continuous() for unquantized phases");
        let levels = (1u32 << bits) as f64;
        let step = TWO_PI / levels;
        let snapped = phases
            .into_iter()
            .map(|p| {
                let level = (wrap_phase(p) / step).round() % levels;
                level * step
            })
            .collect();
        Self {
            phases: snapped,
            quantization_bits: bits,
        }
    }

    pub fn with_bits(phases: Vec<f64>, bits: u8) -> Self {
        if bits == 0 {
            Self::continuous(phases)
        } else {
            Self::quantized(phases, bits)
        }
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn quantization_bits(&self) -> u8 {
        self.quantization_bits
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }
}

pub(crate) fn wrap_phase(p: f64) -> f64 {
    let w = p.rem_euclid(TWO_PI);
    if w == TWO_PI {
        0.0
    } else {
        w
    }
}

/// Coordinate-descent stopping parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdParams {
    pub max_sweeps: usize,
    /// Relative per-sweep improvement below which the descent stops.
    pub tol: f64,
}

impl Default for CdParams {
    fn default() -> Self {
        Self {
            max_sweeps: 50,
            tol: 1e-6,
        }
    }
}

/// Particle swarm parameters. The defaults are the constriction-equivalent
/// baseline: inertia 0.729, both acceleration weights 1.49445.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsoParams {
    pub n_particles: usize,
    pub n_iterations: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    /// Velocity limit as a fraction of each dimension's box width.
    pub velocity_clamp: f64,
    pub seed: u64,
}

impl Default for PsoParams {
    fn default() -> Self {
        Self {
            n_particles: 30,
            n_iterations: 100,
            inertia: 0.729,
            cognitive: 1.49445,
            social: 1.49445,
            velocity_clamp: 0.5,
            seed: 42,
        }
    }
}

impl PsoParams {
    pub fn validate(&self) -> Result<(), OptimError> {
        if self.n_particles == 0 || self.n_iterations == 0 {
            return Err(OptimError::InvalidParams(
                "particle and iteration counts must be positive".into(),
            ));
        }
        let positive = [
            ("inertia", self.inertia),
            ("cognitive", self.cognitive),
            ("social", self.social),
            ("velocity_clamp", self.velocity_clamp),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(OptimError::InvalidParams(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if self.inertia >= 1.0 {
            return Err(OptimError::InvalidParams(format!(
                "inertia must be < 1, got {}",
                self.inertia
            )));
        }
        Ok(())
    }
}

/// Transmit power allocation under the scenario's budget mode.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerAlloc {
    pub powers: Vec<f64>,
    pub mode: PowerBudgetMode,
    /// Per-user cap or total budget, watts, depending on `mode`.
    pub budget: f64,
}

impl PowerAlloc {
    pub fn full_power(users: usize, mode: PowerBudgetMode, budget: f64) -> Self {
        let per_user = match mode {
            PowerBudgetMode::PerUserCap => budget,
            PowerBudgetMode::SumBudget => budget / users as f64,
        };
        Self {
            powers: vec![per_user; users],
            mode,
            budget,
        }
    }

    pub fn validate(&self) -> Result<(), OptimError> {
        if self.powers.is_empty() {
            return Err(OptimError::EmptyGains);
        }
        let tol = 1e-9 * self.budget.max(1.0);
        match self.mode {
            PowerBudgetMode::PerUserCap => {
                if self
                    .powers
                    .iter()
                    .any(|&p| p < -tol || p > self.budget + tol)
                {
                    return Err(OptimError::InvalidParams(
                        "per-user power outside [0, cap]".into(),
                    ));
                }
            }
            PowerBudgetMode::SumBudget => {
                if self.powers.iter().any(|&p| p < -tol)
                    || self.powers.iter().sum::<f64>() > self.budget + tol
                {
                    return Err(OptimError::InvalidParams(
                        "summed power exceeds the budget".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// What a solve pipeline maximized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveKind {
    Coverage,
    Secrecy,
}

/// Output of a solve pipeline. The trace holds the swarm's best objective
/// after initialization and after every iteration; it never decreases and its
/// last entry equals `objective_value`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub uav_positions: Vec<Vec3>,
    pub phases: Vec<PhaseConfig>,
    pub powers: PowerAlloc,
    pub objective_value: f64,
    pub objective_kind: ObjectiveKind,
    pub trace: Vec<f64>,
}
