use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::shot_noise::ShotNoise;
use super::{clamp_probability, AnalyticError, InversionParams};
use crate::netmodel::{dbm_to_watts, watts_to_dbm, NetworkParams};
use crate::specfun::{ComplexValue, DerivativeStack, Jet};

/// Laplace transform of the aggregate harvested RF power at a typical TX.
pub fn laplace_ppt(s: ComplexValue, params: &NetworkParams) -> Result<ComplexValue, AnalyticError> {
    if s.norm() == 0.0 || params.lambda_p == 0.0 {
        return Ok(ComplexValue::new(1.0, 0.0));
    }
    let sn = ShotNoise::new(params);
    let mut exponent = ComplexValue::new(0.0, 0.0);
    for (gain, prob) in params.harvest_gains().iter() {
        if prob == 0.0 {
            continue;
        }
        exponent += sn.value(s * (params.p_p * gain))? * prob;
    }
    Ok((exponent * params.lambda_p).exp())
}

/// Tail probability Pr(X > γ) of a nonnegative random variable from its
/// Laplace transform, by the trapezoid rule on the Bromwich integral with
/// Euler summation of the alternating tail.
pub fn euler_inversion<F>(
    laplace: F,
    gamma: f64,
    inv: &InversionParams,
) -> Result<f64, AnalyticError>
where
    F: Fn(ComplexValue) -> Result<ComplexValue, AnalyticError>,
{
    inv.validate()?;
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(AnalyticError::InvalidInput(format!(
            "inversion point must be positive and finite, got {gamma}"
        )));
    }
    let a = inv.a_ctrl;
    let b = inv.b_ctrl as usize;
    let cc = inv.c_ctrl as usize;
    let mut partial = Vec::with_capacity(cc + b + 1);
    let mut acc = 0.0;
    for k in 0..=cc + b {
        let s = ComplexValue::new(a, 2.0 * PI * k as f64) / (2.0 * gamma);
        let term = (laplace(s)? / s).re;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let weight = if k == 0 { 0.5 } else { 1.0 };
        acc += sign * weight * term;
        partial.push(acc);
    }
    // Binomial average of the partial sums S_C .. S_{C+B}.
    let mut binom = 1.0;
    let mut averaged = 0.0;
    for j in 0..=b {
        if j > 0 {
            binom *= (b - j + 1) as f64 / j as f64;
        }
        averaged += binom * partial[cc + j];
    }
    let cdf = (a / 2.0).exp() / gamma * 2f64.powi(-(b as i32)) * averaged;
    Ok(1.0 - cdf)
}

/// Probability that the harvested power exceeds `gamma_pt` (W).
pub fn power_coverage(
    gamma_pt: f64,
    params: &NetworkParams,
    inv: &InversionParams,
) -> Result<f64, AnalyticError> {
    params.validate()?;
    if params.lambda_p == 0.0 {
        return Ok(0.0);
    }
    let tail = euler_inversion(|s| laplace_ppt(s, params), gamma_pt, inv)?;
    clamp_probability(tail)
}

/// Limit of the power coverage as the PB power grows without bound: at least
/// one PB lies within `r_max`.
pub fn asymptotic_power_coverage(params: &NetworkParams) -> f64 {
    -(-params.mean_pbs_in_range()).exp_m1()
}

/// Log-spaced transmit power ladder and the fraction of TXs on each rung.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLevels {
    pub n_levels: u32,
    /// Rung spacing in dB.
    pub step_db: f64,
    /// Fraction of all TXs whose harvested power falls on rung n; entries
    /// 0..=N.
    pub k: Vec<f64>,
    /// Transmit power on rung n (W).
    pub p_t: Vec<f64>,
    /// Density of TXs on rung n (m⁻²).
    pub lambda_t_n: Vec<f64>,
    /// Lower harvested-power edge of each rung (W).
    pub thresholds: Vec<f64>,
    /// Power coverage at the activation threshold, Σ k.
    pub power_cov: f64,
}

impl PowerLevels {
    /// Ladder with every active TX on the top rung, covering with
    /// probability `k_top`.
    pub fn saturated(params: &NetworkParams, k_top: f64) -> Result<Self, AnalyticError> {
        let mut levels = Self::ladder(params)?;
        let n = params.n_levels as usize;
        levels.k = vec![0.0; n + 1];
        levels.k[n] = k_top;
        levels.p_t[n] = params.max_transmit_power();
        levels.lambda_t_n = levels.k.iter().map(|k| k * params.lambda_t).collect();
        levels.power_cov = k_top;
        Ok(levels)
    }

    /// Rung edges and transmit powers only, with every k_n zero.
    pub fn ladder(params: &NetworkParams) -> Result<Self, AnalyticError> {
        params.validate()?;
        let cap = params.harvest_cap();
        if cap <= params.gamma_pt {
            return Err(AnalyticError::DegenerateLadder {
                cap,
                gamma_pt: params.gamma_pt,
            });
        }
        let n = params.n_levels as usize;
        let gamma_dbm = watts_to_dbm(params.gamma_pt)?;
        let step_db = (watts_to_dbm(cap)? - gamma_dbm) / n as f64;
        let thresholds: Vec<f64> = (0..=n)
            .map(|i| {
                if i == n {
                    cap
                } else {
                    dbm_to_watts(gamma_dbm + i as f64 * step_db)
                }
            })
            .collect();
        let conv = params.conversion();
        let p_t = thresholds.iter().map(|t| conv * t).collect();
        Ok(PowerLevels {
            n_levels: params.n_levels,
            step_db,
            k: vec![0.0; n + 1],
            p_t,
            lambda_t_n: vec![0.0; n + 1],
            thresholds,
            power_cov: 0.0,
        })
    }

    /// Rung a TX with harvested power `p_pt` lands on, or `None` if inactive.
    pub fn rung(&self, p_pt: f64) -> Option<usize> {
        if p_pt < self.thresholds[0] {
            return None;
        }
        Some(self.thresholds.partition_point(|&t| t <= p_pt) - 1)
    }
}

/// Discretize the transmit power into N+1 log-spaced rungs between the
/// activation threshold and the harvest cap.
pub fn power_levels(
    params: &NetworkParams,
    inv: &InversionParams,
) -> Result<PowerLevels, AnalyticError> {
    let mut levels = PowerLevels::ladder(params)?;
    let n = params.n_levels as usize;
    let cov = levels
        .thresholds
        .iter()
        .map(|&t| power_coverage(t, params, inv))
        .collect::<Result<Vec<_>, _>>()?;
    for i in 0..n {
        let diff = cov[i] - cov[i + 1];
        levels.k[i] = clamp_probability(diff)?;
    }
    levels.k[n] = cov[n];
    levels.lambda_t_n = levels.k.iter().map(|k| k * params.lambda_t).collect();
    levels.power_cov = levels.k.iter().sum();
    Ok(levels)
}

/// Derivatives in s of log ℒ_{P_PT}(s) at real `s >= 0`. At `s = 0` the
/// first one is minus the mean harvested power.
pub fn log_laplace_ppt_derivatives(
    s: f64,
    order: usize,
    params: &NetworkParams,
) -> Result<DerivativeStack, AnalyticError> {
    let sn = ShotNoise::new(params);
    let sj = Jet::variable(ComplexValue::new(s, 0.0), order);
    let mut acc = Jet::constant(ComplexValue::new(0.0, 0.0), order);
    for (gain, prob) in params.harvest_gains().iter() {
        let x = sj.scale_real(params.p_p * gain);
        acc = &acc + &sn.exponent(&x)?.scale_real(prob * params.lambda_p);
    }
    Ok(acc.to_derivatives())
}
