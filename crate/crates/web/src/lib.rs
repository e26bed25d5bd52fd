//! Browser bindings: power and SINR coverage curves and a small Monte Carlo
//! run, driven by a handful of knobs in display units. Every function takes
//! and returns JSON strings.

use pbcov_core::analytic::{channel_coverage, power_coverage, power_levels, CoverageSource};
use pbcov_core::netmodel::dbm_to_watts;
use pbcov_core::netmodel::units::{db_to_linear, per_km2_to_per_m2};
use pbcov_core::simcore::simulate_coverage;
use pbcov_core::{InversionParams, NetworkParams, SimConfig, SimMode};
use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

/// The adjustable part of the reference scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Knobs {
    pub lambda_p_per_km2: f64,
    pub lambda_t_per_km2: f64,
    pub p_p_dbm: f64,
    pub gamma_pt_dbm: f64,
    pub gamma_tr_db: f64,
    pub rho: f64,
}

impl Default for Knobs {
    fn default() -> Self {
        Self {
            lambda_p_per_km2: 50.0,
            lambda_t_per_km2: 100.0,
            p_p_dbm: 40.0,
            gamma_pt_dbm: -20.0,
            gamma_tr_db: 30.0,
            rho: 0.5,
        }
    }
}

impl Knobs {
    fn params(&self) -> Result<NetworkParams, String> {
        let mut p = NetworkParams::reference();
        p.lambda_p = per_km2_to_per_m2(self.lambda_p_per_km2);
        p.lambda_t = per_km2_to_per_m2(self.lambda_t_per_km2);
        p.p_p = dbm_to_watts(self.p_p_dbm);
        p.gamma_pt = dbm_to_watts(self.gamma_pt_dbm);
        p.gamma_tr = db_to_linear(self.gamma_tr_db);
        p.rho = self.rho;
        p.validate().map_err(|e| e.to_string())?;
        Ok(p)
    }
}

fn parse(knobs: &str) -> Result<NetworkParams, String> {
    let k: Knobs = if knobs.trim().is_empty() {
        Knobs::default()
    } else {
        serde_json::from_str(knobs).map_err(|e| e.to_string())?
    };
    k.params()
}

fn grid(from: f64, to: f64, points: u32) -> Result<Vec<f64>, String> {
    if !(2..=200).contains(&points) || !(from.is_finite() && to.is_finite()) {
        return Err("need 2 to 200 points over a finite range".into());
    }
    Ok((0..points)
        .map(|i| from + (to - from) * i as f64 / (points - 1) as f64)
        .collect())
}

#[derive(Serialize)]
struct PowerPoint {
    gamma_pt_dbm: f64,
    power_cov: f64,
}

#[derive(Serialize)]
struct SinrPoint {
    gamma_tr_db: f64,
    channel_cov: f64,
    total_cov: f64,
}

#[derive(Serialize)]
struct SimSummary {
    trials: u64,
    power_cov: f64,
    channel_cov: f64,
    total_cov: f64,
    power_ci: f64,
    channel_ci: f64,
    total_ci: f64,
}

pub fn power_curve_json(
    knobs: &str,
    from_dbm: f64,
    to_dbm: f64,
    points: u32,
) -> Result<String, String> {
    let p = parse(knobs)?;
    let inv = InversionParams::default();
    let out = grid(from_dbm, to_dbm, points)?
        .into_iter()
        .map(|g| {
            let power_cov = power_coverage(dbm_to_watts(g), &p, &inv).map_err(|e| e.to_string())?;
            Ok(PowerPoint {
                gamma_pt_dbm: g,
                power_cov,
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

pub fn sinr_curve_json(
    knobs: &str,
    from_db: f64,
    to_db: f64,
    points: u32,
) -> Result<String, String> {
    let p = parse(knobs)?;
    let levels = power_levels(&p, &InversionParams::default()).map_err(|e| e.to_string())?;
    let out = grid(from_db, to_db, points)?
        .into_iter()
        .map(|g| {
            let channel_cov = if levels.power_cov > 0.0 {
                channel_coverage(db_to_linear(g), &p, &levels).map_err(|e| e.to_string())?
            } else {
                0.0
            };
            Ok(SinrPoint {
                gamma_tr_db: g,
                channel_cov,
                total_cov: levels.power_cov * channel_cov,
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

pub fn simulate_json(knobs: &str, trials: u32, seed: u32, matched: bool) -> Result<String, String> {
    let p = parse(knobs)?;
    if !(1..=200_000).contains(&trials) {
        return Err("trials must be between 1 and 200000 in the browser".into());
    }
    let mode = if matched {
        SimMode::AssumptionMatched
    } else {
        SimMode::Faithful
    };
    let r = simulate_coverage(&p, &SimConfig::new(trials.into(), mode, seed.into()))
        .map_err(|e| e.to_string())?;
    let CoverageSource::Simulation {
        trials,
        power_ci,
        channel_ci,
        total_ci,
        ..
    } = r.meta
    else {
        unreachable!("the simulator always reports intervals")
    };
    let out = SimSummary {
        trials,
        power_cov: r.power_cov,
        channel_cov: r.channel_cov,
        total_cov: r.total_cov,
        power_ci: power_ci.half_width(),
        channel_ci: channel_ci.half_width(),
        total_ci: total_ci.half_width(),
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

/// Default knobs as JSON.
#[wasm_bindgen]
pub fn defaults() -> String {
    serde_json::to_string(&Knobs::default()).expect("plain struct")
}

/// Power coverage against the activation threshold (dBm).
#[wasm_bindgen]
pub fn power_curve(
    knobs: &str,
    from_dbm: f64,
    to_dbm: f64,
    points: u32,
) -> Result<String, JsError> {
    power_curve_json(knobs, from_dbm, to_dbm, points).map_err(|e| JsError::new(&e))
}

/// Channel and total coverage against the SINR threshold (dB).
#[wasm_bindgen]
pub fn sinr_curve(knobs: &str, from_db: f64, to_db: f64, points: u32) -> Result<String, JsError> {
    sinr_curve_json(knobs, from_db, to_db, points).map_err(|e| JsError::new(&e))
}

/// Monte Carlo estimate at the knobs' thresholds.
#[wasm_bindgen]
pub fn simulate(knobs: &str, trials: u32, seed: u32, matched: bool) -> Result<String, JsError> {
    simulate_json(knobs, trials, seed, matched).map_err(|e| JsError::new(&e))
}
