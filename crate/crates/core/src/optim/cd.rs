//! Coordinate descent over surface phase shifts.
//!
//! The objective is the magnitude of a weighted phasor sum
//! `|sum_n c_n exp(j phi_n)|`. Both pipeline objectives (spectral efficiency
//! and grid-averaged secrecy) are nondecreasing in this magnitude for each
//! surface, so maximizing it coordinate-wise maximizes the pipeline
//! objective. In continuous mode each update has a closed form: rotate the
//! coordinate's phasor onto the residual sum. In quantized mode each update
//! scans all 2^B levels. Ties are always broken toward the incumbent phase.

use num_complex::Complex64;

use super::{wrap_phase, CdParams, PhaseConfig, TWO_PI};

/// Phase-optimization objective: `value(phases) = |sum_n c_n exp(j phases_n)|`.
#[derive(Debug, Clone)]
pub struct PhasorObjective {
    coefficients: Vec<Complex64>,
}

impl PhasorObjective {
    pub fn new(coefficients: Vec<Complex64>) -> Self {
        Self { coefficients }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn sum(&self, phases: &[f64]) -> Complex64 {
        self.coefficients
            .iter()
            .zip(phases)
            .map(|(c, &p)| c * Complex64::from_polar(1.0, p))
            .sum()
    }

    pub fn value(&self, phases: &[f64]) -> f64 {
        self.sum(phases).norm()
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

/// Phases that align every coefficient onto the positive real axis, the
/// closed-form maximizer of the phasor-sum magnitude (used as warm start).
pub fn alignment_phases(coefficients: &[Complex64]) -> Vec<f64> {
    coefficients.iter().map(|c| wrap_phase(-c.arg())).collect()
}

/// Cyclic coordinate descent on the phasor-sum magnitude.
///
/// Coordinates are visited in ascending element order. Continuous mode sets
/// each phase to the alignment of its coefficient with the residual sum;
/// quantized mode keeps the best of the 2^B levels. A sweep that improves the
/// objective by less than `tol` (relative) stops the descent; in quantized
/// mode the descent additionally runs until a full sweep changes nothing, so
/// the result is coordinate-wise locally optimal.
pub fn cd_phases(objective: &PhasorObjective, init: &PhaseConfig, params: &CdParams) -> PhaseConfig {
    assert_eq!(
        objective.len(),
        init.len(),
        "phase vector length must match the coefficient count"
    );
    let bits = init.quantization_bits();
    let mut phases: Vec<f64> = init.phases().to_vec();
    let mut total = objective.sum(&phases);

    for _sweep in 0..params.max_sweeps {
        let sweep_start = total.norm();
        let mut changed = false;

        for (n, coeff) in objective.coefficients().iter().enumerate() {
            if coeff.norm_sqr() == 0.0 {
                continue; // objective constant in this coordinate
            }
            let current = coeff * Complex64::from_polar(1.0, phases[n]);
            let residual = total - current;
            let incumbent_mag = total.norm();

            let candidate_phase = if bits == 0 {
                if residual.norm_sqr() == 0.0 {
                    continue; // every phase is equivalent; keep the incumbent
                }
                wrap_phase(residual.arg() - coeff.arg())
            } else {
                let levels = 1u32 << bits;
                let step = TWO_PI / levels as f64;
                let mut best_phase = phases[n];
                let mut best_mag = incumbent_mag;
                for level in 0..levels {
                    let phase = level as f64 * step;
                    let mag = (residual + coeff * Complex64::from_polar(1.0, phase)).norm();
                    if mag > best_mag {
                        best_mag = mag;
                        best_phase = phase;
                    }
                }
                best_phase
            };

            if candidate_phase != phases[n] {
                let candidate_total =
                    residual + coeff * Complex64::from_polar(1.0, candidate_phase);
                // Never worsen: accept strictly better moves only.
                if candidate_total.norm() > incumbent_mag {
                    phases[n] = candidate_phase;
                    total = candidate_total;
                    changed = true;
                }
            }
        }

        // Resynchronize the running sum once per sweep to shed accumulated
        // floating-point drift.
        total = objective.sum(&phases);
        let improvement = total.norm() - sweep_start;
        let scale = sweep_start.abs().max(1e-300);
        if bits == 0 {
            if improvement / scale < params.tol {
                break;
            }
        } else if !changed {
            break;
        }
    }

    PhaseConfig::with_bits(phases, bits)
}
