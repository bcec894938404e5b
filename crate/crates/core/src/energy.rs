//! Surface mass and electrical power accounting, rotary-wing hover power, and
//! flight-time prediction under surface payload.
//!
//! The hover model is the induced-power form `(m g)^(3/2) / (FoM sqrt(2 rho S))`.
//! Battery energy is never configured directly: it is calibrated from the
//! airframe's unloaded endurance, so an empty payload reproduces the vendor
//! figure exactly.

use thiserror::Error;

use crate::scenario::{RisSpec, UavSpec};

/// Standard gravity, m/s².
pub const GRAVITY: f64 = 9.81;
/// Sea-level air density, kg/m³.
pub const AIR_DENSITY: f64 = 1.225;

#[derive(Debug, Error)]
pub enum EnergyError {
    #[error("{0} active elements exceed the surface's {1} elements")]
    TooManyActiveElements(usize, usize),
    #[error("payload of {payload:.3} kg exceeds the {max_payload:.3} kg limit of {uav}")]
    PayloadExceeded {
        uav: String,
        payload: f64,
        max_payload: f64,
    },
    #[error("hover power inputs must be positive: {0}")]
    NonPositiveInput(&'static str),
}

/// Aperture area of the element grid, m².
pub fn ris_area(ris: &RisSpec) -> f64 {
    (ris.rows as f64 * ris.pitch) * (ris.cols as f64 * ris.pitch)
}

/// Surface mass from aperture area and areal density, kg.
pub fn ris_mass(ris: &RisSpec) -> f64 {
    ris_area(ris) * ris.areal_density
}

/// Electrical power drawn by the surface: one share per active element plus
/// the controller, watts.
pub fn ris_power(n_active: usize, ris: &RisSpec) -> Result<f64, EnergyError> {
    if n_active > ris.element_count() {
        return Err(EnergyError::TooManyActiveElements(
            n_active,
            ris.element_count(),
        ));
    }
    Ok(n_active as f64 * ris.per_element_power + ris.controller_power)
}

/// Rotor power required to hover at the given all-up mass, watts.
pub fn hover_power(
    total_mass: f64,
    rotor_disk_area: f64,
    figure_of_merit: f64,
    air_density: f64,
) -> Result<f64, EnergyError> {
    if !(total_mass > 0.0) {
        return Err(EnergyError::NonPositiveInput("total_mass"));
    }
    if !(rotor_disk_area > 0.0) {
        return Err(EnergyError::NonPositiveInput("rotor_disk_area"));
    }
    if !(figure_of_merit > 0.0) {
        return Err(EnergyError::NonPositiveInput("figure_of_merit"));
    }
    if !(air_density > 0.0) {
        return Err(EnergyError::NonPositiveInput("air_density"));
    }
    let weight = total_mass * GRAVITY;
    Ok(weight.powf(1.5) / (figure_of_merit * (2.0 * air_density * rotor_disk_area).sqrt()))
}

/// Power draw of a hovering RIS-enabled UAV split into its components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerBreakdown {
    pub hover_power: f64,
    pub ris_element_power: f64,
    pub ris_controller_power: f64,
    pub total: f64,
}

/// Full power accounting for an airframe carrying a surface with `n_active`
/// elements switched on.
pub fn power_breakdown(
    uav: &UavSpec,
    ris: &RisSpec,
    n_active: usize,
) -> Result<PowerBreakdown, EnergyError> {
    if n_active > ris.element_count() {
        return Err(EnergyError::TooManyActiveElements(
            n_active,
            ris.element_count(),
        ));
    }
    let hover = hover_power(
        uav.empty_mass + ris_mass(ris),
        uav.rotor_disk_area,
        uav.figure_of_merit,
        AIR_DENSITY,
    )?;
    let element = n_active as f64 * ris.per_element_power;
    let controller = ris.controller_power;
    Ok(PowerBreakdown {
        hover_power: hover,
        ris_element_power: element,
        ris_controller_power: controller,
        total: hover + element + controller,
    })
}

/// Hover endurance with an arbitrary payload mass and electrical draw,
/// seconds. Battery energy is calibrated as
/// `E = base_flight_time * hover_power(empty_mass)`, so zero payload and zero
/// draw return the vendor endurance exactly.
pub fn flight_time_with_load(
    uav: &UavSpec,
    payload_mass: f64,
    electrical_power: f64,
) -> Result<f64, EnergyError> {
    if payload_mass > uav.max_payload {
        return Err(EnergyError::PayloadExceeded {
            uav: uav.name.clone(),
            payload: payload_mass,
            max_payload: uav.max_payload,
        });
    }
    let unloaded = hover_power(
        uav.empty_mass,
        uav.rotor_disk_area,
        uav.figure_of_merit,
        AIR_DENSITY,
    )?;
    let loaded = hover_power(
        uav.empty_mass + payload_mass,
        uav.rotor_disk_area,
        uav.figure_of_merit,
        AIR_DENSITY,
    )?;
    Ok(uav.base_flight_time * (unloaded / (loaded + electrical_power)))
}

/// Hover endurance of the airframe carrying the surface, seconds.
pub fn flight_time(uav: &UavSpec, ris: &RisSpec, n_active: usize) -> Result<f64, EnergyError> {
    let electrical = ris_power(n_active, ris)?;
    flight_time_with_load(uav, ris_mass(ris), electrical)
}
