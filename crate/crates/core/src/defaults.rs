//! Baseline parameter values used when a configuration omits a field.
//!
//! Everything here is an editable default, not ground truth: UAV profiles are
//! calibrated to published endurance figures, the surface density represents a
//! thin PCB stack with a copper ground layer, and the four-user square layout
//! matches the coverage case study. Loaders echo applied defaults into result
//! metadata so runs stay reproducible.

use crate::scenario::{
    PowerBudgetMode, Region, RegulatoryProfile, RisSpec, RisUnit, Scenario, UavSpec, Vec3,
    SPEED_OF_LIGHT,
};
use crate::scenario::EveGrid;

/// Side of the user square, meters (users sit at the corners, BS at center).
pub const USER_SQUARE_SIDE: f64 = 200.0;
/// User antenna height, meters.
pub const USER_HEIGHT: f64 = 1.5;
/// BS array reference height, meters.
pub const BS_HEIGHT: f64 = 25.0;
/// BS antenna count (uniform linear array along the x axis).
pub const BS_ANTENNAS: usize = 8;
/// Default carrier, Hz.
pub const CARRIER_FREQUENCY: f64 = 10.0e9;
/// Default UAV altitude, meters.
pub const UAV_ALTITUDE: f64 = 50.0;
/// Margin added around the users/BS hull to form the placement region, meters.
pub const REGION_MARGIN: f64 = 50.0;
/// Receiver noise power, watts.
pub const NOISE_POWER: f64 = 1e-12;
/// Per-user transmit power cap, watts (overridden when a reference SNR is set).
pub const MAX_TX_POWER: f64 = 1.0;
/// Surface mass per unit area, kg/m².
pub const RIS_AREAL_DENSITY: f64 = 3.0;
/// Power per active element, watts (5 mW PIN diode).
pub const RIS_PER_ELEMENT_POWER: f64 = 0.005;
/// Surface controller power, watts.
pub const RIS_CONTROLLER_POWER: f64 = 0.5;
/// Reflection amplitude.
pub const RIS_AMPLITUDE: f64 = 1.0;
/// Element gain, unitless linear.
pub const RIS_ELEMENT_GAIN: f64 = std::f64::consts::PI;

/// Half-wavelength pitch at the given carrier, the customary element spacing.
pub fn half_wavelength_pitch(carrier_frequency: f64) -> f64 {
    0.5 * SPEED_OF_LIGHT / carrier_frequency
}

/// Square-ish element grid for a requested element count: rows is the largest
/// divisor not exceeding sqrt(count), so rows*cols == count exactly.
pub fn grid_for_count(count: usize) -> (usize, usize) {
    assert!(count >= 1);
    let mut rows = (count as f64).sqrt().floor() as usize;
    while rows > 1 && !count.is_multiple_of(rows) {
        rows -= 1;
    }
    (rows, count / rows)
}

/// Default reflective surface: 16x16 elements at half-wavelength pitch.
pub fn ris_spec(carrier_frequency: f64) -> RisSpec {
    RisSpec {
        rows: 16,
        cols: 16,
        pitch: half_wavelength_pitch(carrier_frequency),
        amplitude: RIS_AMPLITUDE,
        element_gain: RIS_ELEMENT_GAIN,
        per_element_power: RIS_PER_ELEMENT_POWER,
        controller_power: RIS_CONTROLLER_POWER,
        areal_density: RIS_AREAL_DENSITY,
    }
}

/// Small quadrotor profile calibrated so that, with the default areal
/// density, flight time runs from about 50 min at 0.009 m² of payload area
/// down to about 35 min at 0.09 m².
pub fn uav_zeo_x4() -> UavSpec {
    UavSpec {
        name: "ZEO X4".to_string(),
        empty_mass: 0.8782,
        base_flight_time: 3139.4,
        rotor_disk_area: 0.25,
        figure_of_merit: 0.65,
        max_payload: 0.5,
    }
}

/// Mid-size hexacopter profile (qualitative: longer endurance, larger payload).
pub fn uav_noa_6() -> UavSpec {
    UavSpec {
        name: "Noa 6".to_string(),
        empty_mass: 6.2,
        base_flight_time: 2700.0,
        rotor_disk_area: 1.1,
        figure_of_merit: 0.70,
        max_payload: 4.0,
    }
}

/// Heavy-lift profile (qualitative).
pub fn uav_if1200() -> UavSpec {
    UavSpec {
        name: "IF1200".to_string(),
        empty_mass: 7.0,
        base_flight_time: 2580.0,
        rotor_disk_area: 1.5,
        figure_of_merit: 0.72,
        max_payload: 3.2,
    }
}

/// Generic 120 m altitude cap typical of major jurisdictions.
pub fn regulatory() -> RegulatoryProfile {
    RegulatoryProfile {
        country: "generic".to_string(),
        max_altitude: 120.0,
    }
}

/// Eavesdropper grid centered at the BS ground position: 100 m extent,
/// 21x21 points at 1.5 m height.
pub fn eve_grid(bs_position: Vec3) -> EveGrid {
    EveGrid {
        center: Vec3::new(bs_position.x, bs_position.y, 0.0),
        extent: 100.0,
        points_per_axis: 21,
        z: 1.5,
    }
}

/// The four-user coverage scenario: users at the corners of a square centered
/// at the BS, one RIS-enabled UAV per user.
pub fn scenario() -> Scenario {
    let half = USER_SQUARE_SIDE / 2.0;
    let users = vec![
        Vec3::new(half, half, USER_HEIGHT),
        Vec3::new(-half, half, USER_HEIGHT),
        Vec3::new(-half, -half, USER_HEIGHT),
        Vec3::new(half, -half, USER_HEIGHT),
    ];
    let ris = ris_spec(CARRIER_FREQUENCY);
    let uav = uav_zeo_x4();
    let ris_units = (0..users.len())
        .map(|user| RisUnit {
            ris: ris.clone(),
            uav: uav.clone(),
            user,
        })
        .collect();
    Scenario {
        bs_position: Vec3::new(0.0, 0.0, BS_HEIGHT),
        bs_antennas: BS_ANTENNAS,
        bs_antenna_spacing: half_wavelength_pitch(CARRIER_FREQUENCY),
        carrier_frequency: CARRIER_FREQUENCY,
        users,
        ris_units,
        uav_altitude: UAV_ALTITUDE,
        region: Region {
            x_min: -half - REGION_MARGIN,
            x_max: half + REGION_MARGIN,
            y_min: -half - REGION_MARGIN,
            y_max: half + REGION_MARGIN,
        },
        max_tx_power: MAX_TX_POWER,
        power_budget_mode: PowerBudgetMode::PerUserCap,
        noise_power: NOISE_POWER,
        reference_snr_db: None,
    }
}
