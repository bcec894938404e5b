//! Far-field link budget of the transmitter-RIS-receiver cascade and
//! synthesis of the complex channel vectors seen by the BS array.
//!
//! The model is deterministic and purely geometric: no fading overlay, no
//! direct transmitter-receiver path (the surface conveys the only usable
//! signal), and the surface lies in a horizontal plane facing straight down.
//! Per-element phases are computed from exact spherical path lengths rather
//! than a plane-wave approximation.

use num_complex::Complex64;
use thiserror::Error;

use crate::scenario::{
    distance, elevation_cosine, RisSpec, Scenario, ScenarioError, Vec3, SPEED_OF_LIGHT,
};

#[derive(Debug, Error)]
pub enum LinkError {
    #[error("carrier frequency must be positive, got {0} Hz")]
    NonPositiveFrequency(f64),
    #[error("expected {expected} phases, got {got}")]
    PhaseCountMismatch { expected: usize, got: usize },
    #[error("degenerate link geometry: {0}")]
    DegenerateGeometry(String),
    #[error(transparent)]
    Geometry(#[from] ScenarioError),
}

/// Carrier wavelength c/f, meters.
pub fn wavelength(frequency: f64) -> Result<f64, LinkError> {
    if frequency > 0.0 {
        Ok(SPEED_OF_LIGHT / frequency)
    } else {
        Err(LinkError::NonPositiveFrequency(frequency))
    }
}

/// Far-field geometry of a source-RIS-destination link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    /// Source to surface center, meters.
    pub d1: f64,
    /// Surface center to destination, meters.
    pub d2: f64,
    /// Elevation cosine of the source leg.
    pub cos_theta1: f64,
    /// Elevation cosine of the destination leg.
    pub cos_theta2: f64,
}

impl LinkGeometry {
    /// Builds the geometry from node positions. Both end nodes must sit below
    /// the surface plane.
    pub fn between(source: Vec3, ris_pos: Vec3, destination: Vec3) -> Result<Self, LinkError> {
        let cos_theta1 = elevation_cosine(ris_pos, source)?;
        let cos_theta2 = elevation_cosine(ris_pos, destination)?;
        Ok(Self {
            d1: distance(source, ris_pos),
            d2: distance(ris_pos, destination),
            cos_theta1,
            cos_theta2,
        })
    }
}

/// Far-field beamforming path loss of the source-RIS-destination cascade
/// (linear, transmit power divided by received power):
///
/// `PL = 64 pi^3 d1^2 d2^2 / (Gt Gr G (M N)^2 pitch^4 lambda^2 A^2 cos1 cos2)`
///
/// with the element grid aperture `dx = dy = pitch`. Callers are responsible
/// for checking the far-field condition of both legs against
/// [`crate::scenario::fraunhofer_distance`].
pub fn ris_path_loss(
    geom: &LinkGeometry,
    ris: &RisSpec,
    lambda: f64,
    tx_gain: f64,
    rx_gain: f64,
) -> Result<f64, LinkError> {
    if !(geom.d1 > 0.0) || !(geom.d2 > 0.0) {
        return Err(LinkError::DegenerateGeometry(format!(
            "leg lengths must be positive (d1={}, d2={})",
            geom.d1, geom.d2
        )));
    }
    if !(geom.cos_theta1 > 0.0) || !(geom.cos_theta2 > 0.0) {
        return Err(LinkError::DegenerateGeometry(format!(
            "elevation cosines must be positive (cos1={}, cos2={})",
            geom.cos_theta1, geom.cos_theta2
        )));
    }
    let n_elements = ris.element_count() as f64;
    let numerator = 64.0 * std::f64::consts::PI.powi(3) * geom.d1 * geom.d1 * geom.d2 * geom.d2;
    let denominator = tx_gain
        * rx_gain
        * ris.element_gain
        * n_elements
        * n_elements
        * ris.pitch.powi(4)
        * lambda
        * lambda
        * ris.amplitude
        * ris.amplitude
        * geom.cos_theta1
        * geom.cos_theta2;
    Ok(numerator / denominator)
}

/// Element center positions on the horizontal grid around `ris_pos`,
/// row-major (`n = row * cols + col`), rows along x and columns along y.
pub fn element_centers(ris: &RisSpec, ris_pos: Vec3) -> Vec<Vec3> {
    let mut centers = Vec::with_capacity(ris.element_count());
    let row_offset = (ris.rows as f64 - 1.0) / 2.0;
    let col_offset = (ris.cols as f64 - 1.0) / 2.0;
    for row in 0..ris.rows {
        for col in 0..ris.cols {
            centers.push(Vec3::new(
                ris_pos.x + (row as f64 - row_offset) * ris.pitch,
                ris_pos.y + (col as f64 - col_offset) * ris.pitch,
                ris_pos.z,
            ));
        }
    }
    centers
}

/// Phase of a propagation path of length `path_len`, as the complex factor
/// `exp(-j 2 pi path_len / lambda)`. The turn count is reduced before the
/// trigonometry to keep precision over long paths.
fn propagation_factor(path_len: f64, lambda: f64) -> Complex64 {
    let turns = (path_len / lambda).fract();
    Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * turns)
}

/// Per-element cascade coefficients `c_n` such that the configurable part of
/// the channel is `sum_n c_n exp(j phi_n)` for element phases `phi_n`:
///
/// `c_n = A exp(-j 2 pi (|src - e_n| + |e_n - ris| + |ris - dst|) / lambda)`
///
/// The same construction serves the BS channel and an eavesdropper probe
/// point; only the destination differs.
pub fn cascade_coefficients(
    source: Vec3,
    ris_pos: Vec3,
    ris: &RisSpec,
    destination: Vec3,
    lambda: f64,
) -> Vec<Complex64> {
    let ris_to_dest = distance(ris_pos, destination);
    element_centers(ris, ris_pos)
        .into_iter()
        .map(|center| {
            let path = distance(source, center) + distance(center, ris_pos) + ris_to_dest;
            ris.amplitude * propagation_factor(path, lambda)
        })
        .collect()
}

/// Weighted phasor sum `sum_n c_n exp(j phi_n)`.
pub fn phasor_sum(coefficients: &[Complex64], phases: &[f64]) -> Complex64 {
    coefficients
        .iter()
        .zip(phases)
        .map(|(c, &phi)| c * Complex64::from_polar(1.0, phi))
        .sum()
}

/// ULA steering vector toward arrival angle `psi` (measured from broadside of
/// an array laid out along the x axis): entries
/// `exp(-j 2 pi m spacing sin(psi) / lambda)`, all unit modulus.
pub fn bs_steering(psi: f64, antennas: usize, spacing: f64, lambda: f64) -> Vec<Complex64> {
    let sin_psi = psi.sin();
    (0..antennas)
        .map(|m| {
            let phase = -2.0 * std::f64::consts::PI * m as f64 * spacing * sin_psi / lambda;
            Complex64::from_polar(1.0, phase)
        })
        .collect()
}

/// Arrival angle at the BS array for a wave coming from `target`: the angle
/// whose sine is the direction cosine along the array (x) axis.
pub fn steering_angle(bs_pos: Vec3, target: Vec3) -> f64 {
    let d = distance(bs_pos, target);
    ((target.x - bs_pos.x) / d).clamp(-1.0, 1.0).asin()
}

/// BS uniform linear array parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UlaParams {
    pub antennas: usize,
    pub spacing: f64,
}

/// Effective channel of one user through its surface.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeChannel {
    /// Channel vector toward the BS array, length = number of BS antennas.
    pub vector: Vec<Complex64>,
    /// Linear path loss of the user-RIS-BS cascade.
    pub path_loss: f64,
    /// Configurable phasor sum; its magnitude is at most amplitude * M * N.
    pub phasor_sum: Complex64,
}

/// Channel vector of `source -> RIS -> BS array` for one phase configuration:
///
/// `h = sqrt(1 / PL) * phasor_sum * a_bs(psi)`
pub fn cascaded_channel(
    user: Vec3,
    ris_pos: Vec3,
    ris: &RisSpec,
    phases: &[f64],
    bs_pos: Vec3,
    ula: &UlaParams,
    lambda: f64,
) -> Result<CascadeChannel, LinkError> {
    if phases.len() != ris.element_count() {
        return Err(LinkError::PhaseCountMismatch {
            expected: ris.element_count(),
            got: phases.len(),
        });
    }
    let geom = LinkGeometry::between(user, ris_pos, bs_pos)?;
    let path_loss = ris_path_loss(&geom, ris, lambda, 1.0, 1.0)?;
    let coefficients = cascade_coefficients(user, ris_pos, ris, bs_pos, lambda);
    let sum = phasor_sum(&coefficients, phases);
    let gain = (1.0 / path_loss).sqrt() * sum;
    let steering = bs_steering(steering_angle(bs_pos, ris_pos), ula.antennas, ula.spacing, lambda);
    let vector = steering.iter().map(|a| gain * a).collect();
    Ok(CascadeChannel {
        vector,
        path_loss,
        phasor_sum: sum,
    })
}

/// Scalar channel of `user -> RIS -> eavesdropper point` for the same phase
/// configuration that serves the legitimate link. The destination is a
/// single-antenna probe, so there is no array factor.
pub fn eve_channel(
    user: Vec3,
    ris_pos: Vec3,
    ris: &RisSpec,
    phases: &[f64],
    eve_pos: Vec3,
    lambda: f64,
) -> Result<Complex64, LinkError> {
    if phases.len() != ris.element_count() {
        return Err(LinkError::PhaseCountMismatch {
            expected: ris.element_count(),
            got: phases.len(),
        });
    }
    let geom = LinkGeometry::between(user, ris_pos, eve_pos)?;
    let path_loss = ris_path_loss(&geom, ris, lambda, 1.0, 1.0)?;
    let coefficients = cascade_coefficients(user, ris_pos, ris, eve_pos, lambda);
    let sum = phasor_sum(&coefficients, phases);
    Ok((1.0 / path_loss).sqrt() * sum)
}

/// Channels of all users for a fixed placement and phase configuration,
/// ordered by user index.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    pub per_user: Vec<CascadeChannel>,
    pub bs_antennas: usize,
}

/// Builds every user's cascade channel. `ris_positions` and `phases` are
/// indexed like `scenario.ris_units`.
pub fn build_channel_set(
    scenario: &Scenario,
    ris_positions: &[Vec3],
    phases: &[Vec<f64>],
) -> Result<ChannelSet, LinkError> {
    let lambda = scenario.wavelength();
    let ula = UlaParams {
        antennas: scenario.bs_antennas,
        spacing: scenario.bs_antenna_spacing,
    };
    let mut per_user: Vec<Option<CascadeChannel>> = vec![None; scenario.users.len()];
    for (i, unit) in scenario.ris_units.iter().enumerate() {
        let user = scenario.users[unit.user];
        let channel = cascaded_channel(
            user,
            ris_positions[i],
            &unit.ris,
            &phases[i],
            scenario.bs_position,
            &ula,
            lambda,
        )?;
        per_user[unit.user] = Some(channel);
    }
    let per_user = per_user
        .into_iter()
        .enumerate()
        .map(|(k, c)| {
            c.ok_or_else(|| {
                LinkError::DegenerateGeometry(format!("user {k} has no serving surface"))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ChannelSet {
        per_user,
        bs_antennas: scenario.bs_antennas,
    })
}

/// Number of elements of the nominal surface used by the reference-SNR anchor.
pub const REFERENCE_ELEMENTS: usize = 256;
/// Altitude of the nominal hover point used by the reference-SNR anchor, m.
pub const REFERENCE_ALTITUDE: f64 = 50.0;

/// Transmit power cap after reference-SNR normalization.
///
/// When `reference_snr_db` is set, the cap is chosen so that the post-ZF SNR
/// of a nominal single-user link equals the reference: first configured user,
/// surface of 256 elements (16x16, half-wavelength pitch, unit amplitude,
/// element gain pi) hovering above the user-BS midpoint at 50 m. Otherwise
/// the configured `max_tx_power` is used unchanged.
pub fn effective_max_tx_power(scenario: &Scenario) -> Result<f64, LinkError> {
    let Some(snr_db) = scenario.reference_snr_db else {
        return Ok(scenario.max_tx_power);
    };
    let lambda = scenario.wavelength();
    let user = scenario.users[0];
    let mut nominal_pos = scenario.nominal_ris_position(user);
    nominal_pos.z = REFERENCE_ALTITUDE;
    let nominal_ris = RisSpec {
        rows: 16,
        cols: 16,
        pitch: lambda / 2.0,
        amplitude: 1.0,
        element_gain: std::f64::consts::PI,
        per_element_power: 0.0,
        controller_power: 0.0,
        areal_density: 1.0,
    };
    let geom = LinkGeometry::between(user, nominal_pos, scenario.bs_position)?;
    let path_loss = ris_path_loss(&geom, &nominal_ris, lambda, 1.0, 1.0)?;
    // Single user: post-ZF SNR = P * |h|^2 / sigma^2 with
    // |h|^2 = (A * M * N)^2 * M_bs / PL and aligned phases.
    let aligned_gain = (REFERENCE_ELEMENTS as f64).powi(2) * scenario.bs_antennas as f64;
    let snr_linear = 10f64.powf(snr_db / 10.0);
    Ok(snr_linear * scenario.noise_power * path_loss / aligned_gain)
}
