//! Closed-form coverage analysis: Laplace transforms of the harvested power
//! and of the interference, numerical inversion, the discretized transmit
//! power ladder, and the resulting coverage probabilities.

mod channel;
mod power;
mod shot_noise;

use serde::{Deserialize, Serialize};

use crate::netmodel::ModelError;
use crate::specfun::SpecFunError;

pub use channel::{
    asymptotic_total_coverage, channel_coverage, conditional_link_coverage,
    laplace_interference_plus_noise, log_laplace_in_derivatives, total_coverage,
};
pub use power::{
    asymptotic_power_coverage, euler_inversion, laplace_ppt, log_laplace_ppt_derivatives,
    power_coverage, power_levels, PowerLevels,
};
pub use shot_noise::{exponent_closed_form, exponent_series, xi1, xi2, xi3, ShotNoise};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalyticError {
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("numerical inversion gave probability {value}, outside [0, 1] beyond tolerance")]
    Inversion { value: f64 },
    #[error(
        "degenerate power ladder: harvest cap {cap} W does not exceed the threshold {gamma_pt} W"
    )]
    DegenerateLadder { cap: f64, gamma_pt: f64 },
    #[error("power coverage is zero, so channel coverage (conditioned on it) is undefined")]
    NoPowerCoverage,
    #[error("{0}")]
    InvalidInput(String),
    #[error("product and direct forms of total coverage disagree: {product} vs {direct}")]
    Inconsistent { product: f64, direct: f64 },
}

/// Controls of the Euler-summation inversion: trapezoid discretization
/// `a_ctrl`, Euler averaging depth `b_ctrl` and base term count `c_ctrl`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InversionParams {
    pub a_ctrl: f64,
    pub b_ctrl: u32,
    pub c_ctrl: u32,
}

impl Default for InversionParams {
    fn default() -> Self {
        Self {
            a_ctrl: 24.0,
            b_ctrl: 20,
            c_ctrl: 30,
        }
    }
}

impl InversionParams {
    pub fn validate(&self) -> Result<(), AnalyticError> {
        if !(self.a_ctrl > 0.0 && self.a_ctrl.is_finite()) || self.b_ctrl == 0 || self.c_ctrl == 0 {
            return Err(AnalyticError::InvalidInput(format!(
                "inversion controls need a > 0 and b, c >= 1, got {self:?}"
            )));
        }
        Ok(())
    }
}

/// A closed interval, used for confidence intervals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn half_width(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum CoverageSource {
    Analytic,
    Simulation {
        trials: u64,
        /// Trials in which the reference TX was active; the channel estimate
        /// is conditioned on these.
        active_trials: u64,
        power_ci: Interval,
        channel_ci: Interval,
        total_ci: Interval,
    },
}

/// The three coverage probabilities for one scenario. `channel_cov` is
/// conditioned on the reference TX being active.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageResult {
    pub power_cov: f64,
    pub channel_cov: f64,
    pub total_cov: f64,
    pub meta: CoverageSource,
}

/// Bring a computed probability into [0, 1]. Overshoot up to `1e-8` is
/// rounding from the inversion and is clamped with a warning; anything
/// larger is reported as an error.
pub(crate) fn clamp_probability(value: f64) -> Result<f64, AnalyticError> {
    const TOL: f64 = 1e-8;
    if !value.is_finite() || value < -TOL || value > 1.0 + TOL {
        return Err(AnalyticError::Inversion { value });
    }
    if !(0.0..=1.0).contains(&value) {
        if value < -1e-12 || value > 1.0 + 1e-12 {
            log::warn!("clamping probability {value:e} into [0, 1]");
        }
        return Ok(value.clamp(0.0, 1.0));
    }
    Ok(value)
}
