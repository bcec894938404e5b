//! Uplink reception metrics: zero-forcing combining, post-ZF SINR, spectral
//! efficiency, and secrecy metrics including the grid-averaged secrecy rate.
//!
//! Grid-point evaluations are independent; sums always run in fixed order so
//! results are bit-stable across runs.

use num_complex::Complex64;
use thiserror::Error;

use crate::linkbudget::{self, LinkError};
use crate::scenario::{EveGrid, Scenario, Vec3};

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("channel matrix is rank deficient (condition estimate {condition:.3e})")]
    RankDeficient { condition: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("user index {0} out of range")]
    UnknownUser(usize),
    #[error(transparent)]
    Link(#[from] LinkError),
}

/// Minimal dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds an M x K matrix whose k-th column is `columns[k]`.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Result<Self, MetricsError> {
        let cols = columns.len();
        let rows = columns.first().map(|c| c.len()).unwrap_or(0);
        if rows == 0 || cols == 0 {
            return Err(MetricsError::DimensionMismatch(
                "matrix must be non-empty".to_string(),
            ));
        }
        if columns.iter().any(|c| c.len() != rows) {
            return Err(MetricsError::DimensionMismatch(
                "columns have unequal lengths".to_string(),
            ));
        }
        let mut m = Self::zeros(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        Ok(m)
    }

    /// Conjugate transpose.
    pub fn hermitian(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, MetricsError> {
        if self.cols != rhs.rows {
            return Err(MetricsError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Largest entrywise magnitude of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        debug_assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(rhs.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Gauss-Jordan inverse with partial pivoting. The condition estimate is
    /// the ratio of the largest to the smallest pivot magnitude.
    pub fn inverse(&self) -> Result<Self, MetricsError> {
        if self.rows != self.cols {
            return Err(MetricsError::DimensionMismatch(format!(
                "cannot invert {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut aug = vec![Complex64::new(0.0, 0.0); n * 2 * n];
        let stride = 2 * n;
        for i in 0..n {
            for j in 0..n {
                aug[i * stride + j] = self[(i, j)];
            }
            aug[i * stride + n + i] = Complex64::new(1.0, 0.0);
        }

        let mut max_pivot: f64 = 0.0;
        let mut min_pivot = f64::INFINITY;
        for col in 0..n {
            let mut best = col;
            let mut best_mag = aug[col * stride + col].norm_sqr();
            for row in (col + 1)..n {
                let mag = aug[row * stride + col].norm_sqr();
                if mag > best_mag {
                    best_mag = mag;
                    best = row;
                }
            }
            let pivot_mag = best_mag.sqrt();
            max_pivot = max_pivot.max(pivot_mag);
            min_pivot = min_pivot.min(pivot_mag);
            if pivot_mag <= 1e-13 * max_pivot.max(1e-300) {
                return Err(MetricsError::RankDeficient {
                    condition: if pivot_mag == 0.0 {
                        f64::INFINITY
                    } else {
                        max_pivot / pivot_mag
                    },
                });
            }
            if best != col {
                for j in 0..stride {
                    aug.swap(col * stride + j, best * stride + j);
                }
            }
            let inv_pivot = Complex64::new(1.0, 0.0) / aug[col * stride + col];
            for j in 0..stride {
                aug[col * stride + j] *= inv_pivot;
            }
            for row in 0..n {
                if row == col {
                    continue;
                }
                let factor = aug[row * stride + col];
                if factor == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..stride {
                    let v = aug[col * stride + j];
                    aug[row * stride + j] -= factor * v;
                }
            }
        }
        let _ = min_pivot;

        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = aug[i * stride + n + j];
            }
        }
        Ok(out)
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Zero-forcing receive combiner `W = (H^H H)^-1 H^H` for an M x K channel
/// matrix with K <= M. `W H` is the K x K identity up to numerical error.
pub fn zf_combiner(h: &CMatrix) -> Result<CMatrix, MetricsError> {
    if h.cols > h.rows {
        return Err(MetricsError::DimensionMismatch(format!(
            "need at least as many antennas as users, got {}x{}",
            h.rows, h.cols
        )));
    }
    let hh = h.hermitian();
    let gram = hh.mul(h)?;
    gram.inverse()?.mul(&hh)
}

/// Diagonal of `(H^H H)^-1`, the per-user noise amplification of the ZF
/// combiner. Entries are real and positive for a full-rank channel.
pub fn gram_inverse_diagonal(h: &CMatrix) -> Result<Vec<f64>, MetricsError> {
    let gram = h.hermitian().mul(h)?;
    let inv = gram.inverse()?;
    Ok((0..h.cols).map(|k| inv[(k, k)].re).collect())
}

/// Post-ZF SINR per user: interference is nulled exactly, so
/// `SINR_k = p_k / (sigma^2 [(H^H H)^-1]_kk)`.
pub fn post_zf_sinr(
    h: &CMatrix,
    powers: &[f64],
    noise_power: f64,
) -> Result<Vec<f64>, MetricsError> {
    if powers.len() != h.cols {
        return Err(MetricsError::DimensionMismatch(format!(
            "{} powers for {} users",
            powers.len(),
            h.cols
        )));
    }
    let diag = gram_inverse_diagonal(h)?;
    Ok(powers
        .iter()
        .zip(diag)
        .map(|(&p, d)| p / (noise_power * d))
        .collect())
}

/// Sum spectral efficiency `sum_k log2(1 + SINR_k)`, bits/s/Hz.
pub fn spectral_efficiency(sinr: &[f64]) -> f64 {
    sinr.iter().map(|&s| (1.0 + s).log2()).sum()
}

/// Positive-part secrecy rate, bits/s/Hz.
pub fn secrecy_rate(user_rate: f64, eve_rate: f64) -> f64 {
    (user_rate - eve_rate).max(0.0)
}

/// Rate overheard by a single-antenna eavesdropper at `eve_point` listening to
/// user `user`'s cascade under the legitimate phase configuration:
/// `log2(1 + p_k |eve channel|^2 / sigma^2)`. The eavesdropper applies no
/// multi-user processing.
pub fn eve_rate(
    scenario: &Scenario,
    ris_positions: &[Vec3],
    phases: &[Vec<f64>],
    powers: &[f64],
    user: usize,
    eve_point: Vec3,
) -> Result<f64, MetricsError> {
    let unit_index = scenario
        .ris_units
        .iter()
        .position(|u| u.user == user)
        .ok_or(MetricsError::UnknownUser(user))?;
    let unit = &scenario.ris_units[unit_index];
    let channel = linkbudget::eve_channel(
        scenario.users[user],
        ris_positions[unit_index],
        &unit.ris,
        &phases[unit_index],
        eve_point,
        scenario.wavelength(),
    )?;
    let p = powers
        .get(user)
        .copied()
        .ok_or_else(|| MetricsError::DimensionMismatch("powers shorter than users".into()))?;
    Ok((1.0 + p * channel.norm_sqr() / scenario.noise_power).log2())
}

/// Network secrecy at one eavesdropper position: per-user positive-part
/// secrecy, summed over users.
fn point_secrecy(
    scenario: &Scenario,
    ris_positions: &[Vec3],
    phases: &[Vec<f64>],
    powers: &[f64],
    user_rates: &[f64],
    point: Vec3,
) -> Result<f64, MetricsError> {
    let mut sum = 0.0;
    for (user, &rate) in user_rates.iter().enumerate() {
        let er = eve_rate(scenario, ris_positions, phases, powers, user, point)?;
        sum += secrecy_rate(rate, er);
    }
    Ok(sum)
}

/// Per-user rates through the ZF receiver for a fixed placement, phase
/// configuration, and power vector.
pub fn user_rates(
    scenario: &Scenario,
    ris_positions: &[Vec3],
    phases: &[Vec<f64>],
    powers: &[f64],
) -> Result<Vec<f64>, MetricsError> {
    let channels = linkbudget::build_channel_set(scenario, ris_positions, phases)?;
    let columns: Vec<Vec<Complex64>> =
        channels.per_user.iter().map(|c| c.vector.clone()).collect();
    let h = CMatrix::from_columns(&columns)?;
    let sinr = post_zf_sinr(&h, powers, scenario.noise_power)?;
    Ok(sinr.iter().map(|&s| (1.0 + s).log2()).collect())
}

/// Mean over explicit eavesdropper positions of the summed per-user secrecy
/// rates. Points are consumed in the order given; the mean is order-invariant
/// up to floating-point round-off.
pub fn average_secrecy_rate_over_points(
    scenario: &Scenario,
    ris_positions: &[Vec3],
    phases: &[Vec<f64>],
    powers: &[f64],
    points: &[Vec3],
) -> Result<f64, MetricsError> {
    if points.is_empty() {
        return Err(MetricsError::DimensionMismatch(
            "need at least one eavesdropper point".into(),
        ));
    }
    let rates = user_rates(scenario, ris_positions, phases, powers)?;
    let mut total = 0.0;
    for &point in points {
        total += point_secrecy(scenario, ris_positions, phases, powers, &rates, point)?;
    }
    Ok(total / points.len() as f64)
}

/// Secrecy rate averaged over every grid location. Grid points that coincide
/// with the BS ground position are included; the eavesdropper height differs
/// from the array height.
pub fn average_secrecy_rate(
    scenario: &Scenario,
    ris_positions: &[Vec3],
    phases: &[Vec<f64>],
    powers: &[f64],
    grid: &EveGrid,
) -> Result<f64, MetricsError> {
    average_secrecy_rate_over_points(scenario, ris_positions, phases, powers, &grid.points())
}

/// Secrecy portion of a [`MetricReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct SecrecyReport {
    /// Summed per-user secrecy rate at each grid point, row-major.
    pub per_grid_secrecy: Vec<f64>,
    pub average_secrecy_rate: f64,
}

/// Aggregate link metrics for one network state.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub per_user_sinr: Vec<f64>,
    pub per_user_rate: Vec<f64>,
    pub total_se: f64,
    pub secrecy: Option<SecrecyReport>,
}

/// Evaluates all metrics for a fixed placement, phases, and powers; secrecy
/// metrics are produced when a grid is supplied.
pub fn report(
    scenario: &Scenario,
    ris_positions: &[Vec3],
    phases: &[Vec<f64>],
    powers: &[f64],
    grid: Option<&EveGrid>,
) -> Result<MetricReport, MetricsError> {
    let channels = linkbudget::build_channel_set(scenario, ris_positions, phases)?;
    let columns: Vec<Vec<Complex64>> =
        channels.per_user.iter().map(|c| c.vector.clone()).collect();
    let h = CMatrix::from_columns(&columns)?;
    let per_user_sinr = post_zf_sinr(&h, powers, scenario.noise_power)?;
    let per_user_rate: Vec<f64> = per_user_sinr.iter().map(|&s| (1.0 + s).log2()).collect();
    let total_se = per_user_rate.iter().sum();
    let secrecy = match grid {
        None => None,
        Some(g) => {
            let points = g.points();
            let mut per_grid = Vec::with_capacity(points.len());
            for &point in &points {
                per_grid.push(point_secrecy(
                    scenario,
                    ris_positions,
                    phases,
                    powers,
                    &per_user_rate,
                    point,
                )?);
            }
            let average = per_grid.iter().sum::<f64>() / per_grid.len() as f64;
            Some(SecrecyReport {
                per_grid_secrecy: per_grid,
                average_secrecy_rate: average,
            })
        }
    };
    Ok(MetricReport {
        per_user_sinr,
        per_user_rate,
        total_se,
        secrecy,
    })
}
