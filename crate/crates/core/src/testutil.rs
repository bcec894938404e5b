//! Shared helpers for unit tests.

pub fn approx_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

pub fn approx_rel(a: f64, b: f64, rel: f64) -> bool {
    let scale = a.abs().max(b.abs()).max(1e-300);
    (a - b).abs() / scale <= rel
}

pub fn default_scenario() -> crate::scenario::Scenario {
    crate::defaults::scenario()
}

pub fn default_regulatory() -> crate::scenario::RegulatoryProfile {
    crate::defaults::regulatory()
}
