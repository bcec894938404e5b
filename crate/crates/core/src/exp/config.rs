//! Structured plain-text configuration (TOML with explicit units in key
//! names) and the loader that applies the documented defaults.
//!
//! Only `scenario.carrier_frequency_ghz` is mandatory; every other field
//! falls back to the defaults module, and each applied default is echoed into
//! the result metadata for provenance.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use super::{ExpError, ExperimentKind, ExperimentSpec};
use crate::defaults;
use crate::exp::table::OutputFormat;
use crate::optim::{CdParams, PsoParams};
use crate::scenario::{
    validate_scenario, EveGrid, PowerBudgetMode, Region, RegulatoryProfile, RisSpec, RisUnit,
    Scenario, UavSpec, Vec3, Violation,
};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    scenario: ScenarioConfig,
    #[serde(default)]
    regulatory: Option<RegulatoryConfig>,
    #[serde(default)]
    ris_catalog: BTreeMap<String, RisConfig>,
    #[serde(default)]
    uav_catalog: BTreeMap<String, UavConfig>,
    #[serde(default)]
    experiment: Option<ExperimentConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioConfig {
    carrier_frequency_ghz: f64,
    bs_position_m: Option<[f64; 3]>,
    bs_antennas: Option<usize>,
    bs_antenna_spacing_m: Option<f64>,
    uav_altitude_m: Option<f64>,
    users_m: Option<Vec<[f64; 3]>>,
    max_tx_power_w: Option<f64>,
    power_budget_mode: Option<PowerBudgetMode>,
    noise_power_w: Option<f64>,
    reference_snr_db: Option<f64>,
    region_m: Option<RegionConfig>,
    #[serde(default)]
    ris_units: Vec<RisUnitConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegionConfig {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RisUnitConfig {
    ris: String,
    uav: String,
    user: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RisConfig {
    rows: usize,
    cols: usize,
    pitch_m: Option<f64>,
    amplitude: Option<f64>,
    element_gain: Option<f64>,
    per_element_power_w: Option<f64>,
    controller_power_w: Option<f64>,
    areal_density_kg_m2: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct UavConfig {
    empty_mass_kg: f64,
    base_flight_time_s: f64,
    rotor_disk_area_m2: f64,
    figure_of_merit: f64,
    max_payload_kg: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegulatoryConfig {
    country: String,
    max_altitude_m: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentConfig {
    kind: String,
    #[serde(default)]
    elements: Vec<usize>,
    #[serde(default)]
    frequencies_ghz: Vec<f64>,
    #[serde(default)]
    areas_m2: Vec<f64>,
    #[serde(default)]
    altitudes_m: Vec<f64>,
    #[serde(default)]
    reference_snrs_db: Vec<f64>,
    uav: Option<String>,
    output: Option<String>,
    format: Option<String>,
    seed: Option<u64>,
    pso: Option<PsoConfig>,
    cd: Option<CdConfig>,
    eve_grid: Option<EveGridConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PsoConfig {
    particles: Option<usize>,
    iterations: Option<usize>,
    inertia: Option<f64>,
    cognitive: Option<f64>,
    social: Option<f64>,
    velocity_clamp: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CdConfig {
    max_sweeps: Option<usize>,
    tol: Option<f64>,
    quantization_bits: Option<u8>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EveGridConfig {
    extent_m: Option<f64>,
    points_per_axis: Option<usize>,
    z_m: Option<f64>,
}

/// Everything a run needs, with applied defaults and validation findings.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub scenario: Scenario,
    pub regulatory: RegulatoryProfile,
    pub ris_catalog: BTreeMap<String, RisSpec>,
    pub uav_catalog: BTreeMap<String, UavSpec>,
    pub experiment: Option<ExperimentSpec>,
    /// Keys that were filled from the defaults module, sorted.
    pub defaults_applied: Vec<String>,
    /// Hex prefix of the SHA-256 of the raw config bytes.
    pub config_hash: String,
    /// Findings from `validate_scenario`; empty means valid.
    pub violations: Vec<Violation>,
}

/// Tracks which defaults get applied while resolving the config.
struct DefaultsLog(Vec<String>);

impl DefaultsLog {
    fn put<T: std::fmt::Debug>(&mut self, key: &str, value: T) -> T {
        self.0.push(format!("{key}={value:?}"));
        value
    }
}

pub fn config_hash(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Loads, resolves, and validates a configuration file.
pub fn load_config(path: &Path) -> Result<LoadedConfig, ExpError> {
    let bytes = std::fs::read(path).map_err(|e| ExpError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|e| ExpError::Parse(format!("{}: not valid UTF-8: {e}", path.display())))?;
    load_config_str(&text, &config_hash(&bytes))
}

/// Loader backend, parameterized on the raw text (used directly by tests).
pub fn load_config_str(text: &str, hash: &str) -> Result<LoadedConfig, ExpError> {
    let parsed: ConfigFile =
        toml::from_str(text).map_err(|e| ExpError::Parse(e.to_string()))?;
    let mut log = DefaultsLog(Vec::new());

    let carrier = parsed.scenario.carrier_frequency_ghz * 1e9;
    if !(carrier > 0.0) {
        return Err(ExpError::Parse(
            "scenario.carrier_frequency_ghz must be positive".into(),
        ));
    }
    let half_pitch = defaults::half_wavelength_pitch(carrier);

    // Resolve catalogs first; a "default" surface and the three stock UAV
    // profiles are always available.
    let mut ris_catalog: BTreeMap<String, RisSpec> = BTreeMap::new();
    ris_catalog.insert("default".to_string(), defaults::ris_spec(carrier));
    for (name, cfg) in &parsed.ris_catalog {
        let spec = RisSpec {
            rows: cfg.rows,
            cols: cfg.cols,
            pitch: cfg.pitch_m.unwrap_or_else(|| {
                log.put(&format!("ris_catalog.{name}.pitch_m"), half_pitch)
            }),
            amplitude: cfg.amplitude.unwrap_or(defaults::RIS_AMPLITUDE),
            element_gain: cfg.element_gain.unwrap_or(defaults::RIS_ELEMENT_GAIN),
            per_element_power: cfg
                .per_element_power_w
                .unwrap_or(defaults::RIS_PER_ELEMENT_POWER),
            controller_power: cfg
                .controller_power_w
                .unwrap_or(defaults::RIS_CONTROLLER_POWER),
            areal_density: cfg
                .areal_density_kg_m2
                .unwrap_or(defaults::RIS_AREAL_DENSITY),
        };
        spec.validate()
            .map_err(|e| ExpError::Parse(format!("ris_catalog.{name}: {e}")))?;
        ris_catalog.insert(name.clone(), spec);
    }

    let mut uav_catalog: BTreeMap<String, UavSpec> = BTreeMap::new();
    for stock in [defaults::uav_zeo_x4(), defaults::uav_noa_6(), defaults::uav_if1200()] {
        uav_catalog.insert(catalog_key(&stock.name), stock);
    }
    for (name, cfg) in &parsed.uav_catalog {
        let spec = UavSpec {
            name: name.clone(),
            empty_mass: cfg.empty_mass_kg,
            base_flight_time: cfg.base_flight_time_s,
            rotor_disk_area: cfg.rotor_disk_area_m2,
            figure_of_merit: cfg.figure_of_merit,
            max_payload: cfg.max_payload_kg,
        };
        spec.validate()
            .map_err(|e| ExpError::Parse(format!("uav_catalog.{name}: {e}")))?;
        uav_catalog.insert(name.clone(), spec);
    }

    // Scenario resolution.
    let sc = &parsed.scenario;
    let base = defaults::scenario();
    let bs_position = match sc.bs_position_m {
        Some([x, y, z]) => Vec3::new(x, y, z),
        None => log.put("scenario.bs_position_m", base.bs_position),
    };
    let users: Vec<Vec3> = match &sc.users_m {
        Some(list) => list.iter().map(|&[x, y, z]| Vec3::new(x, y, z)).collect(),
        None => log.put("scenario.users_m", base.users.clone()),
    };
    let region = match &sc.region_m {
        Some(r) => Region {
            x_min: r.x_min,
            x_max: r.x_max,
            y_min: r.y_min,
            y_max: r.y_max,
        },
        None => {
            let margin = defaults::REGION_MARGIN;
            let xs: Vec<f64> = users.iter().map(|u| u.x).chain([bs_position.x]).collect();
            let ys: Vec<f64> = users.iter().map(|u| u.y).chain([bs_position.y]).collect();
            let hull = Region {
                x_min: xs.iter().cloned().fold(f64::INFINITY, f64::min) - margin,
                x_max: xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + margin,
                y_min: ys.iter().cloned().fold(f64::INFINITY, f64::min) - margin,
                y_max: ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + margin,
            };
            log.put("scenario.region_m", hull)
        }
    };
    let ris_units: Vec<RisUnit> = if sc.ris_units.is_empty() {
        log.0.push(format!(
            "scenario.ris_units=[default ris + {} per user]",
            defaults::uav_zeo_x4().name
        ));
        (0..users.len())
            .map(|user| RisUnit {
                ris: ris_catalog["default"].clone(),
                uav: uav_catalog["zeo_x4"].clone(),
                user,
            })
            .collect()
    } else {
        sc.ris_units
            .iter()
            .map(|u| {
                let ris = ris_catalog
                    .get(&u.ris)
                    .ok_or_else(|| ExpError::UnknownCatalogEntry(format!("ris '{}'", u.ris)))?
                    .clone();
                let uav = uav_catalog
                    .get(&u.uav)
                    .ok_or_else(|| ExpError::UnknownCatalogEntry(format!("uav '{}'", u.uav)))?
                    .clone();
                Ok(RisUnit {
                    ris,
                    uav,
                    user: u.user,
                })
            })
            .collect::<Result<_, ExpError>>()?
    };

    let scenario = Scenario {
        bs_position,
        bs_antennas: sc
            .bs_antennas
            .unwrap_or_else(|| log.put("scenario.bs_antennas", defaults::BS_ANTENNAS)),
        bs_antenna_spacing: sc
            .bs_antenna_spacing_m
            .unwrap_or_else(|| log.put("scenario.bs_antenna_spacing_m", half_pitch)),
        carrier_frequency: carrier,
        users,
        ris_units,
        uav_altitude: sc
            .uav_altitude_m
            .unwrap_or_else(|| log.put("scenario.uav_altitude_m", defaults::UAV_ALTITUDE)),
        region,
        max_tx_power: sc
            .max_tx_power_w
            .unwrap_or_else(|| log.put("scenario.max_tx_power_w", defaults::MAX_TX_POWER)),
        power_budget_mode: sc.power_budget_mode.unwrap_or(PowerBudgetMode::PerUserCap),
        noise_power: sc
            .noise_power_w
            .unwrap_or_else(|| log.put("scenario.noise_power_w", defaults::NOISE_POWER)),
        reference_snr_db: sc.reference_snr_db,
    };
    scenario
        .validate_fields()
        .map_err(|e| ExpError::Parse(format!("scenario: {e}")))?;

    let regulatory = match &parsed.regulatory {
        Some(r) => RegulatoryProfile {
            country: r.country.clone(),
            max_altitude: r.max_altitude_m,
        },
        None => log.put("regulatory", defaults::regulatory()),
    };
    regulatory
        .validate()
        .map_err(|e| ExpError::Parse(format!("regulatory: {e}")))?;

    let experiment = match &parsed.experiment {
        None => None,
        Some(exp) => Some(resolve_experiment(exp, &scenario, &uav_catalog, &mut log)?),
    };

    let violations = validate_scenario(&scenario, &regulatory);
    let mut defaults_applied = log.0;
    defaults_applied.sort();

    Ok(LoadedConfig {
        scenario,
        regulatory,
        ris_catalog,
        uav_catalog,
        experiment,
        defaults_applied,
        config_hash: hash.to_string(),
        violations,
    })
}

fn catalog_key(name: &str) -> String {
    name.to_ascii_lowercase().replace([' ', '-'], "_")
}

fn resolve_experiment(
    exp: &ExperimentConfig,
    scenario: &Scenario,
    uav_catalog: &BTreeMap<String, UavSpec>,
    log: &mut DefaultsLog,
) -> Result<ExperimentSpec, ExpError> {
    let kind = match exp.kind.as_str() {
        "pathloss_sweep" => ExperimentKind::PathlossSweep,
        "flighttime_sweep" => ExperimentKind::FlighttimeSweep,
        "coverage" => ExperimentKind::Coverage,
        "secrecy" => ExperimentKind::Secrecy,
        other => {
            return Err(ExpError::Parse(format!(
                "experiment.kind '{other}' is not one of pathloss_sweep, flighttime_sweep, coverage, secrecy"
            )))
        }
    };

    let altitudes_m = if exp.altitudes_m.is_empty() {
        vec![scenario.uav_altitude]
    } else {
        exp.altitudes_m.clone()
    };

    let require = |axis: &str, ok: bool| -> Result<(), ExpError> {
        if ok {
            Ok(())
        } else {
            Err(ExpError::MissingAxis {
                kind: exp.kind.clone(),
                axis: axis.to_string(),
            })
        }
    };
    match kind {
        ExperimentKind::PathlossSweep => {
            require("elements", !exp.elements.is_empty())?;
            require("frequencies_ghz", !exp.frequencies_ghz.is_empty())?;
        }
        ExperimentKind::FlighttimeSweep => {
            require("areas_m2", !exp.areas_m2.is_empty())?;
        }
        ExperimentKind::Coverage | ExperimentKind::Secrecy => {
            require("elements", !exp.elements.is_empty())?;
            require("reference_snrs_db", !exp.reference_snrs_db.is_empty())?;
        }
    }

    let pso_defaults = PsoParams::default();
    let pso = match &exp.pso {
        None => pso_defaults,
        Some(p) => PsoParams {
            n_particles: p.particles.unwrap_or(pso_defaults.n_particles),
            n_iterations: p.iterations.unwrap_or(pso_defaults.n_iterations),
            inertia: p.inertia.unwrap_or(pso_defaults.inertia),
            cognitive: p.cognitive.unwrap_or(pso_defaults.cognitive),
            social: p.social.unwrap_or(pso_defaults.social),
            velocity_clamp: p.velocity_clamp.unwrap_or(pso_defaults.velocity_clamp),
            seed: pso_defaults.seed,
        },
    };
    let cd_defaults = CdParams::default();
    let (cd, quantization_bits) = match &exp.cd {
        None => (cd_defaults, 0),
        Some(c) => (
            CdParams {
                max_sweeps: c.max_sweeps.unwrap_or(cd_defaults.max_sweeps),
                tol: c.tol.unwrap_or(cd_defaults.tol),
            },
            c.quantization_bits.unwrap_or(0),
        ),
    };

    let grid_defaults = defaults::eve_grid(scenario.bs_position);
    let eve_grid = match &exp.eve_grid {
        None => {
            if kind == ExperimentKind::Secrecy {
                log.put("experiment.eve_grid", grid_defaults.clone());
            }
            grid_defaults
        }
        Some(g) => EveGrid {
            center: grid_defaults.center,
            extent: g.extent_m.unwrap_or(grid_defaults.extent),
            points_per_axis: g.points_per_axis.unwrap_or(grid_defaults.points_per_axis),
            z: g.z_m.unwrap_or(grid_defaults.z),
        },
    };
    eve_grid
        .validate()
        .map_err(|e| ExpError::Parse(format!("experiment.eve_grid: {e}")))?;

    let format = match &exp.format {
        Some(f) => f
            .parse::<OutputFormat>()
            .map_err(ExpError::Parse)?,
        None => OutputFormat::Csv,
    };

    let uav_name = exp.uav.clone().unwrap_or_else(|| "zeo_x4".to_string());
    let uav = uav_catalog
        .get(&uav_name)
        .ok_or_else(|| ExpError::UnknownCatalogEntry(format!("uav '{uav_name}'")))?
        .clone();

    Ok(ExperimentSpec {
        kind,
        scenario: scenario.clone(),
        elements: exp.elements.clone(),
        frequencies_ghz: exp.frequencies_ghz.clone(),
        areas_m2: exp.areas_m2.clone(),
        altitudes_m,
        reference_snrs_db: exp.reference_snrs_db.clone(),
        uav,
        output: exp
            .output
            .clone()
            .unwrap_or_else(|| log.put("experiment.output", "results.csv".to_string())),
        format,
        seed: exp.seed.unwrap_or_else(|| log.put("experiment.seed", 42)),
        pso,
        cd,
        quantization_bits,
        eve_grid,
    })
}
