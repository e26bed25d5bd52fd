use super::power::{asymptotic_power_coverage, power_levels, PowerLevels};
use super::shot_noise::ShotNoise;
use super::{clamp_probability, AnalyticError, CoverageResult, CoverageSource, InversionParams};
use crate::netmodel::{path_loss, LinkState, NetworkParams};
use crate::specfun::{assemble_exp_derivatives, ComplexValue, DerivativeStack, Jet};

/// g(s) = log E[exp(−s(I + σ²))] as a jet about `s`, with interferers on
/// every rung of `levels` treated as independent thinned PPPs.
fn log_laplace_jet(
    s: ComplexValue,
    order: usize,
    params: &NetworkParams,
    levels: &PowerLevels,
) -> Result<Jet, AnalyticError> {
    let sn = ShotNoise::new(params);
    let sj = Jet::variable(s, order);
    let mut acc = sj.scale_real(-params.sigma2);
    let gains = params.link_gains();
    for (&density, &p_t) in levels.lambda_t_n.iter().zip(&levels.p_t) {
        if density == 0.0 {
            continue;
        }
        for (gain, prob) in gains.iter() {
            if prob == 0.0 {
                continue;
            }
            let x = sj.scale_real(p_t * gain);
            acc = &acc + &sn.exponent(&x)?.scale_real(density * prob);
        }
    }
    Ok(acc)
}

/// g(s), g′(s), …, g^{(order)}(s) for the interference-plus-noise
/// log-Laplace transform at real `s > 0`.
pub fn log_laplace_in_derivatives(
    s: f64,
    order: usize,
    params: &NetworkParams,
    levels: &PowerLevels,
) -> Result<DerivativeStack, AnalyticError> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(AnalyticError::InvalidInput(format!(
            "derivatives need a finite real s >= 0, got {s}"
        )));
    }
    Ok(log_laplace_jet(ComplexValue::new(s, 0.0), order, params, levels)?.to_derivatives())
}

/// Laplace transform of interference plus noise at the reference RX.
pub fn laplace_interference_plus_noise(
    s: ComplexValue,
    params: &NetworkParams,
    levels: &PowerLevels,
) -> Result<ComplexValue, AnalyticError> {
    Ok(log_laplace_jet(s, 0, params, levels)?.value().exp())
}

fn desired_link_loss(params: &NetworkParams) -> Result<f64, AnalyticError> {
    if params.d0 >= params.r_min {
        return Err(AnalyticError::InvalidInput(format!(
            "the desired link must be LOS: d0 = {} m is not below r_min = {} m",
            params.d0, params.r_min
        )));
    }
    Ok(path_loss(params.d0, LinkState::Los, params).expect("LOS links always carry power"))
}

/// Coverage of the reference link given its TX transmits with `p_tx`:
/// Σ_{l<m} (−s)^l/l! · dˡ/dsˡ ℒ_{I+σ²}(s) at s = mγ_TR/(p_tx D₀ l(d0)).
pub fn conditional_link_coverage(
    p_tx: f64,
    params: &NetworkParams,
    levels: &PowerLevels,
) -> Result<f64, AnalyticError> {
    let m = params.m as usize;
    let s = params.m as f64 * params.gamma_tr
        / (p_tx * params.desired_gain() * desired_link_loss(params)?);
    let g = log_laplace_in_derivatives(s, m - 1, params, levels)?;
    let laplace = assemble_exp_derivatives(&g)?;
    let mut total = 0.0;
    let mut coeff = 1.0; // (−s)^l / l!
    for l in 0..m {
        if l > 0 {
            coeff *= -s / l as f64;
        }
        total += coeff * laplace.values()[l].re;
    }
    Ok(total)
}

/// Σ_n k_n · T_n over the ladder (the unconditional total coverage) with
/// the per-rung link coverages T_n.
fn weighted_link_coverage(
    params: &NetworkParams,
    levels: &PowerLevels,
) -> Result<f64, AnalyticError> {
    let mut total = 0.0;
    for (&k, &p_t) in levels.k.iter().zip(&levels.p_t) {
        if k == 0.0 {
            continue;
        }
        total += k * clamp_probability(conditional_link_coverage(p_t, params, levels)?)?;
    }
    Ok(total)
}

/// Channel coverage at SINR threshold `gamma_tr` (linear), conditioned on
/// the reference TX being active.
pub fn channel_coverage(
    gamma_tr: f64,
    params: &NetworkParams,
    levels: &PowerLevels,
) -> Result<f64, AnalyticError> {
    if !(gamma_tr > 0.0) {
        return Err(AnalyticError::InvalidInput(format!(
            "SINR threshold must be positive, got {gamma_tr}"
        )));
    }
    if levels.power_cov <= 0.0 {
        return Err(AnalyticError::NoPowerCoverage);
    }
    let mut p = params.clone();
    p.gamma_tr = gamma_tr;
    clamp_probability(weighted_link_coverage(&p, levels)? / levels.power_cov)
}

/// Power, channel and total coverage at the given thresholds. The total is
/// computed both as a product and as the direct ladder sum, and the two
/// must agree.
pub fn total_coverage(
    gamma_pt: f64,
    gamma_tr: f64,
    params: &NetworkParams,
    inv: &InversionParams,
) -> Result<CoverageResult, AnalyticError> {
    let mut p = params.clone();
    p.gamma_pt = gamma_pt;
    p.gamma_tr = gamma_tr;
    let levels = power_levels(&p, inv)?;
    if levels.power_cov <= 0.0 {
        // No TX is ever active: nothing to condition on, nothing delivered.
        return Ok(CoverageResult {
            power_cov: 0.0,
            channel_cov: 0.0,
            total_cov: 0.0,
            meta: CoverageSource::Analytic,
        });
    }
    let channel = channel_coverage(gamma_tr, &p, &levels)?;
    let direct = clamp_probability(weighted_link_coverage(&p, &levels)?)?;
    let product = levels.power_cov * channel;
    if (product - direct).abs() > 1e-9 {
        return Err(AnalyticError::Inconsistent { product, direct });
    }
    Ok(CoverageResult {
        power_cov: levels.power_cov,
        channel_cov: channel,
        total_cov: product,
        meta: CoverageSource::Analytic,
    })
}

/// Total coverage in the limit of unbounded PB power: every active TX
/// saturates, and a TX is active iff some PB lies within `r_max`.
pub fn asymptotic_total_coverage(params: &NetworkParams) -> Result<f64, AnalyticError> {
    let k_top = asymptotic_power_coverage(params);
    if k_top == 0.0 {
        return Ok(0.0);
    }
    let levels = PowerLevels::saturated(params, k_top)?;
    let top = params.max_transmit_power();
    clamp_probability(k_top * clamp_probability(conditional_link_coverage(top, params, &levels)?)?)
}
