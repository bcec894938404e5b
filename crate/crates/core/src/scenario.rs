//! World description for a RIS-enabled UAV network: node geometry, surface and
//! airframe specifications, regulatory limits, and cross-cutting validation.
//!
//! All types are immutable after construction and all operations are pure
//! functions, so values can be shared freely across threads.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Errors raised by scenario construction and geometry helpers.
#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("node at z={node_z} m is not below the RIS plane at z={ris_z} m")]
    NodeNotBelowRis { node_z: f64, ris_z: f64 },
    #[error("invalid {field}: {reason}")]
    InvalidField { field: &'static str, reason: String },
}

fn field_err(field: &'static str, reason: impl Into<String>) -> ScenarioError {
    ScenarioError::InvalidField {
        field,
        reason: reason.into(),
    }
}

/// A point in the simulation world. `z` is altitude above the ground plane
/// (z = 0); network nodes never go underground.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Euclidean distance between two points, meters.
pub fn distance(a: Vec3, b: Vec3) -> f64 {
    let (dx, dy, dz) = (a.x - b.x, a.y - b.y, a.z - b.z);
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Cosine of the angle between the downward surface normal of a horizontal
/// RIS at `ris_pos` and the ray toward `node_pos`.
///
/// Returns a value in (0, 1]; 1 means the node sits directly below the
/// surface. Nodes at or above the RIS plane are not illuminated and yield an
/// error.
pub fn elevation_cosine(ris_pos: Vec3, node_pos: Vec3) -> Result<f64, ScenarioError> {
    if node_pos.z >= ris_pos.z {
        return Err(ScenarioError::NodeNotBelowRis {
            node_z: node_pos.z,
            ris_z: ris_pos.z,
        });
    }
    Ok((ris_pos.z - node_pos.z) / distance(ris_pos, node_pos))
}

/// Reflective surface specification: element grid geometry plus the
/// electrical and mass parameters used by the energy accounting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RisSpec {
    /// Element rows (grid extends along the x axis).
    pub rows: usize,
    /// Element columns (grid extends along the y axis).
    pub cols: usize,
    /// Element center-to-center spacing, meters, identical on both axes.
    pub pitch: f64,
    /// Reflection amplitude, in [0, 1].
    pub amplitude: f64,
    /// Per-element gain, unitless linear.
    pub element_gain: f64,
    /// Power drawn by one active element, watts.
    pub per_element_power: f64,
    /// Power drawn by the surface controller, watts.
    pub controller_power: f64,
    /// Mass per unit aperture area, kg/m².
    pub areal_density: f64,
}

impl RisSpec {
    /// Total number of elements.
    pub fn element_count(&self) -> usize {
        self.rows * self.cols
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.rows < 1 || self.cols < 1 {
            return Err(field_err("rows/cols", "element grid must be at least 1x1"));
        }
        if !(self.pitch > 0.0) {
            return Err(field_err("pitch", format!("must be > 0, got {}", self.pitch)));
        }
        if !(0.0..=1.0).contains(&self.amplitude) {
            return Err(field_err(
                "amplitude",
                format!("must lie in [0, 1], got {}", self.amplitude),
            ));
        }
        if !(self.element_gain > 0.0) {
            return Err(field_err(
                "element_gain",
                format!("must be > 0, got {}", self.element_gain),
            ));
        }
        if self.per_element_power < 0.0 || self.controller_power < 0.0 {
            return Err(field_err("power", "element/controller power must be >= 0"));
        }
        if !(self.areal_density > 0.0) {
            return Err(field_err(
                "areal_density",
                format!("must be > 0, got {}", self.areal_density),
            ));
        }
        Ok(())
    }
}

/// Rotary-wing airframe parameters. The battery is characterized indirectly:
/// `base_flight_time` is the vendor hover endurance with no payload, and the
/// energy module derives the usable energy from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UavSpec {
    pub name: String,
    /// Airframe mass without payload, kg.
    pub empty_mass: f64,
    /// Unloaded hover endurance, seconds.
    pub base_flight_time: f64,
    /// Total rotor disk area, m².
    pub rotor_disk_area: f64,
    /// Rotor efficiency, in (0, 1].
    pub figure_of_merit: f64,
    /// Maximum payload mass, kg.
    pub max_payload: f64,
}

impl UavSpec {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let positive = [
            ("empty_mass", self.empty_mass),
            ("base_flight_time", self.base_flight_time),
            ("rotor_disk_area", self.rotor_disk_area),
            ("figure_of_merit", self.figure_of_merit),
            ("max_payload", self.max_payload),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(field_err("uav", format!("{name} must be > 0, got {v}")));
            }
        }
        if self.figure_of_merit > 1.0 {
            return Err(field_err(
                "figure_of_merit",
                format!("must be <= 1, got {}", self.figure_of_merit),
            ));
        }
        Ok(())
    }
}

/// National altitude cap used as advisory validation, not hard-coded law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegulatoryProfile {
    pub country: String,
    /// Maximum allowed UAV altitude, meters.
    pub max_altitude: f64,
}

impl RegulatoryProfile {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if !(self.max_altitude > 0.0) {
            return Err(field_err(
                "max_altitude",
                format!("must be > 0, got {}", self.max_altitude),
            ));
        }
        Ok(())
    }
}

/// Horizontal axis-aligned search/placement bounds, meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Region {
    pub fn contains_xy(&self, x: f64, y: f64) -> bool {
        x >= self.x_min && x <= self.x_max && y >= self.y_min && y <= self.y_max
    }

    pub fn width_x(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn width_y(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn is_degenerate(&self) -> bool {
        !(self.x_max > self.x_min) || !(self.y_max > self.y_min)
    }
}

/// How the transmit power budget constrains the per-user powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PowerBudgetMode {
    /// Every user may transmit up to the budget independently.
    PerUserCap,
    /// The sum of all user powers must stay within the budget.
    SumBudget,
}

/// One surface/airframe pair serving one user.
#[derive(Debug, Clone, PartialEq)]
pub struct RisUnit {
    pub ris: RisSpec,
    pub uav: UavSpec,
    /// Index into `Scenario::users`.
    pub user: usize,
}

/// Full world description for one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// Base station reference point (bottom of the ULA), meters.
    pub bs_position: Vec3,
    /// Number of BS antennas in the uniform linear array.
    pub bs_antennas: usize,
    /// BS antenna spacing, meters. The array extends along the x axis.
    pub bs_antenna_spacing: f64,
    /// Carrier frequency, Hz.
    pub carrier_frequency: f64,
    /// Single-antenna user positions.
    pub users: Vec<Vec3>,
    /// One RIS-enabled UAV per user.
    pub ris_units: Vec<RisUnit>,
    /// Fixed UAV hover altitude, meters.
    pub uav_altitude: f64,
    /// Horizontal bounds for UAV placement.
    pub region: Region,
    /// Transmit power budget, watts. Interpreted per `power_budget_mode`.
    pub max_tx_power: f64,
    pub power_budget_mode: PowerBudgetMode,
    /// Noise power at every receiver, watts.
    pub noise_power: f64,
    /// Optional post-ZF SNR anchor, dB. When set, the effective transmit
    /// power is renormalized so a nominal corner user with a 256-element
    /// surface at 50 m altitude sees exactly this SNR (see linkbudget).
    pub reference_snr_db: Option<f64>,
}

impl Scenario {
    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_frequency
    }

    /// Nominal hover point for the unit serving `user`: directly above the
    /// horizontal midpoint of the user-BS segment at the scenario altitude.
    /// Used for validation and power normalization; the optimizer is free to
    /// move away from it.
    pub fn nominal_ris_position(&self, user: Vec3) -> Vec3 {
        Vec3::new(
            0.5 * (user.x + self.bs_position.x),
            0.5 * (user.y + self.bs_position.y),
            self.uav_altitude,
        )
    }

    /// Structural field checks that must hold before any physics is run.
    pub fn validate_fields(&self) -> Result<(), ScenarioError> {
        if self.users.is_empty() {
            return Err(field_err("users", "at least one user is required"));
        }
        if self.bs_antennas < 1 {
            return Err(field_err("bs_antennas", "need at least one antenna"));
        }
        if !(self.bs_antenna_spacing > 0.0) {
            return Err(field_err("bs_antenna_spacing", "must be > 0"));
        }
        if !(self.carrier_frequency > 0.0) {
            return Err(field_err("carrier_frequency", "must be > 0"));
        }
        if !(self.uav_altitude > 0.0) {
            return Err(field_err("uav_altitude", "must be > 0"));
        }
        if !(self.max_tx_power > 0.0) {
            return Err(field_err("max_tx_power", "must be > 0"));
        }
        if !(self.noise_power > 0.0) {
            return Err(field_err("noise_power", "must be > 0"));
        }
        if self.region.is_degenerate() {
            return Err(field_err("region", "bounds must have positive extent"));
        }
        for (i, u) in self.users.iter().enumerate() {
            if !u.is_finite() || u.z < 0.0 {
                return Err(field_err("users", format!("user {i} has invalid position")));
            }
        }
        for unit in &self.ris_units {
            unit.ris.validate()?;
            unit.uav.validate()?;
            if unit.user >= self.users.len() {
                return Err(field_err(
                    "ris_units",
                    format!("unit references unknown user {}", unit.user),
                ));
            }
        }
        Ok(())
    }
}

/// Square grid of hypothetical eavesdropper positions centered on a point
/// (normally the BS ground location).
#[derive(Debug, Clone, PartialEq)]
pub struct EveGrid {
    pub center: Vec3,
    /// Square side, meters.
    pub extent: f64,
    /// Samples per axis; total points = points_per_axis².
    pub points_per_axis: usize,
    /// Eavesdropper antenna height, meters.
    pub z: f64,
}

impl EveGrid {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.points_per_axis < 2 {
            return Err(field_err("points_per_axis", "must be >= 2"));
        }
        if !(self.extent > 0.0) {
            return Err(field_err("extent", "must be > 0"));
        }
        Ok(())
    }

    /// Grid points in row-major order (x varies fastest), all at height `z`.
    pub fn points(&self) -> Vec<Vec3> {
        let n = self.points_per_axis;
        let step = self.extent / (n - 1) as f64;
        let x0 = self.center.x - 0.5 * self.extent;
        let y0 = self.center.y - 0.5 * self.extent;
        let mut pts = Vec::with_capacity(n * n);
        for iy in 0..n {
            for ix in 0..n {
                pts.push(Vec3::new(
                    x0 + ix as f64 * step,
                    y0 + iy as f64 * step,
                    self.z,
                ));
            }
        }
        pts
    }
}

/// Fraunhofer (far-field) distance 2D²/λ of the surface aperture, where D is
/// the aperture diagonal of the `rows·pitch` by `cols·pitch` rectangle.
pub fn fraunhofer_distance(ris: &RisSpec, wavelength: f64) -> f64 {
    let ax = ris.rows as f64 * ris.pitch;
    let ay = ris.cols as f64 * ris.pitch;
    let d_sq = ax * ax + ay * ay;
    2.0 * d_sq / wavelength
}

/// A single validation finding. Violations are data, not failures: callers
/// decide whether to proceed.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    AltitudeCap {
        altitude: f64,
        max_altitude: f64,
        country: String,
    },
    PayloadExceeded {
        unit: usize,
        ris_mass: f64,
        max_payload: f64,
    },
    NearField {
        unit: usize,
        leg: &'static str,
        distance: f64,
        fraunhofer: f64,
    },
    OutsideRegion {
        what: String,
    },
    AssignmentNotBijective {
        detail: String,
    },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::AltitudeCap {
                altitude,
                max_altitude,
                country,
            } => write!(
                f,
                "UAV altitude {altitude} m exceeds the {country} cap of {max_altitude} m"
            ),
            Violation::PayloadExceeded {
                unit,
                ris_mass,
                max_payload,
            } => write!(
                f,
                "unit {unit}: RIS mass {ris_mass:.3} kg exceeds max payload {max_payload:.3} kg"
            ),
            Violation::NearField {
                unit,
                leg,
                distance,
                fraunhofer,
            } => write!(
                f,
                "unit {unit}: {leg} leg of {distance:.1} m is inside the Fraunhofer distance {fraunhofer:.1} m"
            ),
            Violation::OutsideRegion { what } => write!(f, "{what} lies outside the region"),
            Violation::AssignmentNotBijective { detail } => {
                write!(f, "user/RIS assignment is not one-to-one: {detail}")
            }
        }
    }
}

/// Checks a scenario against the regulatory profile and the physical
/// assumptions of the link model: altitude cap, payload limits, and the
/// far-field condition of every link at the nominal hover points.
///
/// Returns every violation found; an empty list means the scenario is valid.
pub fn validate_scenario(scenario: &Scenario, regulatory: &RegulatoryProfile) -> Vec<Violation> {
    let mut violations = Vec::new();

    if scenario.uav_altitude > regulatory.max_altitude {
        violations.push(Violation::AltitudeCap {
            altitude: scenario.uav_altitude,
            max_altitude: regulatory.max_altitude,
            country: regulatory.country.clone(),
        });
    }

    // Assignment must cover each user exactly once.
    let mut seen = vec![0usize; scenario.users.len()];
    for unit in &scenario.ris_units {
        match seen.get_mut(unit.user) {
            Some(c) => *c += 1,
            None => violations.push(Violation::AssignmentNotBijective {
                detail: format!("unit references unknown user {}", unit.user),
            }),
        }
    }
    for (user, count) in seen.iter().enumerate() {
        if *count != 1 {
            violations.push(Violation::AssignmentNotBijective {
                detail: format!("user {user} is served by {count} units"),
            });
        }
    }

    if !scenario
        .region
        .contains_xy(scenario.bs_position.x, scenario.bs_position.y)
    {
        violations.push(Violation::OutsideRegion {
            what: "BS position".to_string(),
        });
    }
    for (i, u) in scenario.users.iter().enumerate() {
        if !scenario.region.contains_xy(u.x, u.y) {
            violations.push(Violation::OutsideRegion {
                what: format!("user {i}"),
            });
        }
    }

    let lambda = scenario.wavelength();
    for (i, unit) in scenario.ris_units.iter().enumerate() {
        let area = unit.ris.rows as f64 * unit.ris.pitch * unit.ris.cols as f64 * unit.ris.pitch;
        let mass = area * unit.ris.areal_density;
        if mass > unit.uav.max_payload {
            violations.push(Violation::PayloadExceeded {
                unit: i,
                ris_mass: mass,
                max_payload: unit.uav.max_payload,
            });
        }

        if let Some(&user) = scenario.users.get(unit.user) {
            let ris_pos = scenario.nominal_ris_position(user);
            let ff = fraunhofer_distance(&unit.ris, lambda);
            let d1 = distance(user, ris_pos);
            let d2 = distance(scenario.bs_position, ris_pos);
            if d1 < ff {
                violations.push(Violation::NearField {
                    unit: i,
                    leg: "user",
                    distance: d1,
                    fraunhofer: ff,
                });
            }
            if d2 < ff {
                violations.push(Violation::NearField {
                    unit: i,
                    leg: "BS",
                    distance: d2,
                    fraunhofer: ff,
                });
            }
        }
    }

    violations
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{approx_eq, default_scenario, default_regulatory};

    #[test]
    fn distance_identity_is_zero() {
        let p = Vec3::new(0.0, 0.0, 0.0);
        assert_eq!(distance(p, p), 0.0);
    }

    #[test]
    fn distance_pythagorean_triple() {
        assert_eq!(
            distance(Vec3::new(0.0, 0.0, 0.0), Vec3::new(3.0, 4.0, 0.0)),
            5.0
        );
    }

    #[test]
    fn distance_hand_evaluated() {
        // sqrt(100^2 + 100^2 + 50^2) = sqrt(22500) = 150
        let d = distance(Vec3::new(100.0, 100.0, 0.0), Vec3::new(0.0, 0.0, 50.0));
        assert!(approx_eq(d, 150.0, 1e-12));
    }

    #[test]
    fn elevation_cosine_broadside() {
        let c = elevation_cosine(Vec3::new(0.0, 0.0, 50.0), Vec3::new(0.0, 0.0, 0.0)).unwrap();
        assert!(approx_eq(c, 1.0, 1e-15));
    }

    #[test]
    fn elevation_cosine_hand_evaluated() {
        let c = elevation_cosine(Vec3::new(0.0, 0.0, 50.0), Vec3::new(50.0, 0.0, 0.0)).unwrap();
        assert!(approx_eq(c, 0.7071067811865475, 1e-12));
    }

    #[test]
    fn elevation_cosine_rejects_node_above_plane() {
        let r = elevation_cosine(Vec3::new(0.0, 0.0, 50.0), Vec3::new(10.0, 0.0, 60.0));
        assert!(matches!(r, Err(ScenarioError::NodeNotBelowRis { .. })));
        // Same altitude is also not illuminated.
        let r = elevation_cosine(Vec3::new(0.0, 0.0, 50.0), Vec3::new(10.0, 0.0, 50.0));
        assert!(r.is_err());
    }

    fn ris(rows: usize, cols: usize, pitch: f64) -> RisSpec {
        RisSpec {
            rows,
            cols,
            pitch,
            amplitude: 1.0,
            element_gain: std::f64::consts::PI,
            per_element_power: 0.005,
            controller_power: 0.0,
            areal_density: 3.0,
        }
    }

    #[test]
    fn fraunhofer_single_element_half_wavelength() {
        // Aperture (lam/2)^2, D^2 = 2*(lam/2)^2 = lam^2/2, 2D^2/lam = lam.
        let lam = 0.01;
        let d = fraunhofer_distance(&ris(1, 1, lam / 2.0), lam);
        assert!(approx_eq(d, lam, 1e-15));
    }

    #[test]
    fn fraunhofer_hand_evaluated() {
        // 20x30 at pitch 0.01 m: aperture 0.2 x 0.3 m, D = 0.3606 m, 2D^2/lam = 26 m.
        let d = fraunhofer_distance(&ris(20, 30, 0.01), 0.01);
        assert!(approx_eq(d, 26.0, 1e-12));
    }

    #[test]
    fn fraunhofer_quadruples_with_pitch() {
        let lam = 0.03;
        let base = fraunhofer_distance(&ris(8, 8, 0.01), lam);
        let doubled = fraunhofer_distance(&ris(8, 8, 0.02), lam);
        assert!(approx_eq(doubled, 4.0 * base, 1e-12));
    }

    #[test]
    fn ris_spec_invariants_rejected() {
        assert!(ris(0, 8, 0.01).validate().is_err());
        let mut dense = ris(8, 8, 0.01);
        dense.areal_density = 0.0;
        assert!(dense.validate().is_err());
        let mut loud = ris(8, 8, 0.01);
        loud.amplitude = 1.5;
        assert!(loud.validate().is_err());
        assert!(ris(8, 8, 0.0).validate().is_err());
    }

    #[test]
    fn uav_spec_invariants_rejected() {
        let good = UavSpec {
            name: "x".into(),
            empty_mass: 1.0,
            base_flight_time: 1800.0,
            rotor_disk_area: 0.3,
            figure_of_merit: 0.7,
            max_payload: 0.5,
        };
        good.validate().unwrap();
        let mut bad = good.clone();
        bad.figure_of_merit = 1.2;
        assert!(bad.validate().is_err());
        let mut bad = good.clone();
        bad.empty_mass = 0.0;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn validate_default_scenario_is_clean() {
        let s = default_scenario();
        assert!(s.validate_fields().is_ok());
        let v = validate_scenario(&s, &default_regulatory());
        assert!(v.is_empty(), "unexpected violations: {v:?}");
    }

    #[test]
    fn validate_flags_altitude_cap() {
        let mut s = default_scenario();
        s.uav_altitude = 200.0;
        let v = validate_scenario(&s, &default_regulatory());
        assert!(v.iter().any(|x| matches!(x, Violation::AltitudeCap { .. })));
    }

    #[test]
    fn validate_flags_payload() {
        let mut s = default_scenario();
        // A very dense surface exceeds the airframe payload.
        for unit in &mut s.ris_units {
            unit.ris.areal_density = 5000.0;
        }
        let v = validate_scenario(&s, &default_regulatory());
        assert!(
            v.iter()
                .any(|x| matches!(x, Violation::PayloadExceeded { .. }))
        );
    }

    #[test]
    fn validate_is_pure() {
        let s = default_scenario();
        let reg = default_regulatory();
        assert_eq!(validate_scenario(&s, &reg), validate_scenario(&s, &reg));
    }

    #[test]
    fn validate_flags_broken_assignment() {
        let mut s = default_scenario();
        // Two units now serve user 0 and nobody serves the displaced user.
        s.ris_units[1].user = 0;
        let v = validate_scenario(&s, &default_regulatory());
        assert!(
            v.iter()
                .any(|x| matches!(x, Violation::AssignmentNotBijective { .. })),
            "{v:?}"
        );
    }

    #[test]
    fn validate_flags_nodes_outside_region() {
        let mut s = default_scenario();
        s.users[0].x = 10_000.0;
        let v = validate_scenario(&s, &default_regulatory());
        assert!(v.iter().any(|x| matches!(x, Violation::OutsideRegion { .. })));
    }

    #[test]
    fn validate_flags_near_field_links() {
        let mut s = default_scenario();
        // A huge dense surface pushes the Fraunhofer distance past the link
        // lengths at the nominal hover points.
        for unit in &mut s.ris_units {
            unit.ris.rows = 200;
            unit.ris.cols = 200;
            unit.uav.max_payload = 1e6;
        }
        let v = validate_scenario(&s, &default_regulatory());
        assert!(v.iter().any(|x| matches!(x, Violation::NearField { .. })));
    }

    #[test]
    fn eve_grid_points_cover_square() {
        let g = EveGrid {
            center: Vec3::new(0.0, 0.0, 0.0),
            extent: 100.0,
            points_per_axis: 21,
            z: 1.5,
        };
        let pts = g.points();
        assert_eq!(pts.len(), 441);
        assert!(approx_eq(pts[0].x, -50.0, 1e-12));
        assert!(approx_eq(pts[440].y, 50.0, 1e-12));
        assert!(pts.iter().all(|p| p.z == 1.5));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn coord() -> impl Strategy<Value = f64> {
            -1000.0..1000.0f64
        }

        proptest! {
            #[test]
            fn triangle_inequality(
                ax in coord(), ay in coord(), az in coord(),
                bx in coord(), by in coord(), bz in coord(),
                cx in coord(), cy in coord(), cz in coord(),
            ) {
                let a = Vec3::new(ax, ay, az);
                let b = Vec3::new(bx, by, bz);
                let c = Vec3::new(cx, cy, cz);
                prop_assert!(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-9);
                prop_assert!(approx_eq(distance(a, b), distance(b, a), 1e-12));
            }

            #[test]
            fn elevation_cosine_in_unit_interval(
                x in coord(), y in coord(), h in 1.0..500.0f64, nz in 0.0..0.99f64,
            ) {
                let ris = Vec3::new(0.0, 0.0, h);
                // Node strictly below the surface plane.
                let node = Vec3::new(x, y, h * nz);
                let c = elevation_cosine(ris, node).unwrap();
                prop_assert!(c > 0.0 && c <= 1.0);
                if x != 0.0 || y != 0.0 {
                    prop_assert!(c < 1.0);
                }
            }
        }
    }
}
