//! Browser bindings for three operations on a disk symbol pair: the pullback
//! point cloud with its extreme-set profile, the H^inf -> H^q bracket, and
//! the Berezin boundary trace. Every entry point takes and returns JSON
//! strings; the `*_json` functions are the native versions used by tests.

use hpball::carleson::berezin_boundary_trace;
use hpball::estimators::{essnorm_bounds_hinf_hq, essnorm_exact_hinf_h2};
use hpball::pullback::{build_pullback, profile_from_measure, DEFAULT_EPS};
use hpball::symbols::families;
use hpball::{QuadratureScheme, SymbolPair};
use serde::Serialize;

/// Circle nodes used by every demo computation; small enough for a browser.
pub const DEMO_NODES: usize = 4096;
const TRACE_NODES: usize = 1 << 14;
const TRACE_RADII: [f64; 4] = [0.9, 0.95, 0.99, 0.995];

/// A built-in pair name or a pair JSON document.
pub fn parse_pair(text: &str) -> Result<SymbolPair, String> {
    let text = text.trim();
    let pair = if text.starts_with('{') {
        SymbolPair::from_json(text).map_err(|e| e.to_string())?
    } else {
        families::named(text).ok_or_else(|| format!("unknown pair {text:?}"))?
    };
    if pair.dim() != 1 {
        return Err("the demo draws disk pairs only (n = 1)".into());
    }
    Ok(pair)
}

#[derive(Serialize)]
struct Cloud {
    /// `[re, im, weight]` per atom.
    atoms: Vec<[f64; 3]>,
    total_mass: f64,
    /// `[eps, sigma(E_eps), mu(E_eps)]`.
    profile: Vec<[f64; 3]>,
    sigma_limit: f64,
    mu_limit: f64,
}

pub fn pullback_json(pair: &str, q: f64) -> Result<String, String> {
    let pair = parse_pair(pair)?;
    let mu = build_pullback(&pair, q, &QuadratureScheme::circle(DEMO_NODES)).map_err(|e| e.to_string())?;
    let profile = profile_from_measure(&mu, &DEFAULT_EPS).map_err(|e| e.to_string())?;
    let atoms = mu.atoms.iter().map(|a| [a.loc.coords()[0].re, a.loc.coords()[0].im, a.w]).collect();
    let cloud = Cloud {
        atoms,
        total_mass: mu.total_mass,
        profile: profile.rows(),
        sigma_limit: profile.sigma_limit.estimate.value,
        mu_limit: profile.mu_limit.estimate.value,
    };
    serde_json::to_string(&cloud).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Bracket {
    q: f64,
    lower: f64,
    upper: f64,
    /// Exact value for `q = 2`.
    exact: Option<f64>,
    compact: bool,
}

pub fn bracket_json(pair: &str, q: f64) -> Result<String, String> {
    let pair = parse_pair(pair)?;
    let scheme = QuadratureScheme::circle(DEMO_NODES);
    let r = essnorm_bounds_hinf_hq(&pair, q, &scheme, &DEFAULT_EPS).map_err(|e| e.to_string())?;
    let exact = if q == 2.0 {
        essnorm_exact_hinf_h2(&pair, &scheme, &DEFAULT_EPS).map_err(|e| e.to_string())?.exact
    } else {
        None
    };
    let lower = r.lower.map_or(0.0, |b| b.value);
    let out = Bracket { q, lower, upper: r.upper.map_or(0.0, |b| b.value), exact, compact: lower <= r.uncertainty + 1e-9 };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct BerezinOut {
    /// `[r, sup_{|z| = r} transform]`.
    points: Vec<[f64; 2]>,
    limit: f64,
    limit_root: f64,
}

pub fn berezin_json(pair: &str, p: f64, q: f64) -> Result<String, String> {
    let pair = parse_pair(pair)?;
    let t = berezin_boundary_trace(&pair, p, q, &TRACE_RADII, 24, &QuadratureScheme::circle(TRACE_NODES))
        .map_err(|e| e.to_string())?;
    let out = BerezinOut {
        points: t.radii.iter().zip(&t.values).map(|(&r, &v)| [r, v]).collect(),
        limit: t.limit.estimate.value,
        limit_root: t.limit_root.value,
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[cfg(target_arch = "wasm32")]
mod bindings {
    use wasm_bindgen::prelude::*;

    #[wasm_bindgen]
    pub fn pullback(pair: &str, q: f64) -> Result<String, JsValue> {
        super::pullback_json(pair, q).map_err(|e| JsValue::from_str(&e))
    }

    #[wasm_bindgen]
    pub fn bracket(pair: &str, q: f64) -> Result<String, JsValue> {
        super::bracket_json(pair, q).map_err(|e| JsValue::from_str(&e))
    }

    #[wasm_bindgen]
    pub fn berezin(pair: &str, p: f64, q: f64) -> Result<String, JsValue> {
        super::berezin_json(pair, p, q).map_err(|e| JsValue::from_str(&e))
    }
}
