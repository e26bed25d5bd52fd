//! Monte Carlo estimation of the coverage probabilities.
//!
//! Every trial draws from its own ChaCha8 stream keyed by `(seed, trial)`,
//! so results do not depend on how trials are split across threads or
//! partitions.
//!
//! Two modes are offered. [`SimMode::Faithful`] simulates the physical
//! network: one PB field shared by every TX, continuous transmit power.
//! [`SimMode::AssumptionMatched`] reproduces the simplifications the
//! analysis makes: each TX harvests from its own independent PB field, and
//! its transmit power is rounded down to the discrete ladder.

mod geometry;
mod trial;

use std::ops::{Add, AddAssign, Range};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analytic::{AnalyticError, CoverageResult, CoverageSource, Interval};
use crate::netmodel::{ModelError, NetworkParams};

pub use geometry::{sample_ppp, Disk, Point};
use trial::Scene;
pub use trial::{harvested_power, simulate_pt, transmit_power, SampleOutcome};

/// Normal quantile for two-sided 95% intervals.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Trials handed to a worker at a time.
const CHUNK: u64 = 1024;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("a simulation needs at least one trial")]
    ZeroTrials,
    #[error("window padding {padding} m is smaller than r_max = {r_max} m")]
    Padding { padding: f64, r_max: f64 },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimMode {
    Faithful,
    #[serde(alias = "matched")]
    AssumptionMatched,
}

impl std::str::FromStr for SimMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "faithful" => Ok(SimMode::Faithful),
            "matched" | "assumption_matched" => Ok(SimMode::AssumptionMatched),
            _ => Err(format!(
                "unknown simulation mode '{s}', expected faithful or matched"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub trials: u64,
    pub mode: SimMode,
    pub seed: u64,
    /// Margin (m) added around `r_max` when sampling the shared PB field.
    /// `None` means `r_max`, the smallest exact choice.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_padding: Option<f64>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            trials: 100_000,
            mode: SimMode::Faithful,
            seed: 1,
            window_padding: None,
        }
    }
}

impl SimConfig {
    pub fn new(trials: u64, mode: SimMode, seed: u64) -> Self {
        Self {
            trials,
            mode,
            seed,
            window_padding: None,
        }
    }

    pub fn padding(&self, params: &NetworkParams) -> f64 {
        self.window_padding.unwrap_or(params.r_max)
    }

    pub fn validate(&self, params: &NetworkParams) -> Result<(), SimError> {
        if self.trials == 0 {
            return Err(SimError::ZeroTrials);
        }
        let padding = self.padding(params);
        if !(padding >= params.r_max) || !padding.is_finite() {
            return Err(SimError::Padding {
                padding,
                r_max: params.r_max,
            });
        }
        Ok(())
    }
}

/// Generator for one trial, independent of every other trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Seed for partition `index` of a run seeded with `seed` (SplitMix64
/// finalizer), for pooling independently seeded runs.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Event counts from a batch of trials. Tallies add, so batches can be
/// run anywhere and pooled.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub trials: u64,
    /// Trials with the reference TX active.
    pub active: u64,
    /// Active trials whose SINR cleared the threshold.
    pub covered: u64,
}

impl Add for Tally {
    type Output = Tally;

    fn add(self, o: Tally) -> Tally {
        Tally {
            trials: self.trials + o.trials,
            active: self.active + o.active,
            covered: self.covered + o.covered,
        }
    }
}

impl AddAssign for Tally {
    fn add_assign(&mut self, o: Tally) {
        *self = *self + o;
    }
}

impl Tally {
    fn record(&mut self, outcome: &SampleOutcome, gamma_tr: f64) {
        self.trials += 1;
        if outcome.active {
            self.active += 1;
            if outcome.sinr.is_some_and(|s| s > gamma_tr) {
                self.covered += 1;
            }
        }
    }

    /// Point estimates with Wilson 95% intervals. With no active trial the
    /// channel estimate is 0 and its interval is all of [0, 1].
    pub fn to_result(&self) -> CoverageResult {
        let ratio = |k: u64, n: u64| if n == 0 { 0.0 } else { k as f64 / n as f64 };
        CoverageResult {
            power_cov: ratio(self.active, self.trials),
            channel_cov: ratio(self.covered, self.active),
            total_cov: ratio(self.covered, self.trials),
            meta: CoverageSource::Simulation {
                trials: self.trials,
                active_trials: self.active,
                power_ci: wilson_interval(self.active, self.trials, Z_95),
                channel_ci: wilson_interval(self.covered, self.active, Z_95),
                total_ci: wilson_interval(self.covered, self.trials, Z_95),
            },
        }
    }
}

/// Wilson score interval for `successes` out of `n` at normal quantile `z`.
pub fn wilson_interval(successes: u64, n: u64, z: f64) -> Interval {
    if n == 0 {
        return Interval { lo: 0.0, hi: 1.0 };
    }
    let n_f = n as f64;
    let p = successes as f64 / n_f;
    let z2 = z * z;
    let denom = 1.0 + z2 / n_f;
    let centre = (p + z2 / (2.0 * n_f)) / denom;
    let half = z * (p * (1.0 - p) / n_f + z2 / (4.0 * n_f * n_f)).sqrt() / denom;
    Interval {
        lo: if successes == 0 {
            0.0
        } else {
            (centre - half).max(0.0)
        },
        hi: if successes == n {
            1.0
        } else {
            (centre + half).min(1.0)
        },
    }
}

/// Map `f` over `range`, in parallel when the `parallel` feature is on,
/// folding per-chunk results in a fixed order.
fn map_chunks<T, F>(range: Range<u64>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<u64>) -> T + Sync + Send,
{
    let chunks: Vec<Range<u64>> = (range.start..range.end)
        .step_by(CHUNK as usize)
        .map(|lo| lo..(lo + CHUNK).min(range.end))
        .collect();
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        chunks.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        chunks.into_iter().map(f).collect()
    }
}

/// Run the trials with indices in `range` and count events. Pooling the
/// tallies of disjoint ranges gives exactly the tally of their union.
pub fn simulate_tally(
    params: &NetworkParams,
    sim: &SimConfig,
    range: Range<u64>,
) -> Result<Tally, SimError> {
    let scene = Scene::new(params, sim)?;
    let tallies = map_chunks(range, |chunk| {
        let mut t = Tally::default();
        for i in chunk {
            t.record(&scene.trial(&mut trial_rng(sim.seed, i)), params.gamma_tr);
        }
        t
    });
    Ok(tallies.into_iter().fold(Tally::default(), Add::add))
}

/// Estimate power, channel and total coverage over `sim.trials` trials.
pub fn simulate_coverage(
    params: &NetworkParams,
    sim: &SimConfig,
) -> Result<CoverageResult, SimError> {
    Ok(simulate_tally(params, sim, 0..sim.trials)?.to_result())
}

/// Outcome of trial `index` alone.
pub fn simulate_trial(
    params: &NetworkParams,
    sim: &SimConfig,
    index: u64,
) -> Result<SampleOutcome, SimError> {
    let scene = Scene::new(params, sim)?;
    Ok(scene.trial(&mut trial_rng(sim.seed, index)))
}

/// Harvested power at a typical TX in each of `trials` independent draws.
pub fn sample_harvested_powers(
    params: &NetworkParams,
    trials: u64,
    seed: u64,
) -> Result<Vec<f64>, SimError> {
    params.validate()?;
    if trials == 0 {
        return Err(SimError::ZeroTrials);
    }
    let batches = map_chunks(0..trials, |chunk| {
        chunk
            .map(|i| simulate_pt(Point::ORIGIN, params, &mut trial_rng(seed, i)))
            .collect::<Vec<_>>()
    });
    Ok(batches.concat())
}

/// Interference plus noise at a typical RX under the matched assumptions,
/// one value per trial.
pub fn sample_interference_plus_noise(
    params: &NetworkParams,
    trials: u64,
    seed: u64,
) -> Result<Vec<f64>, SimError> {
    let sim = SimConfig::new(trials, SimMode::AssumptionMatched, seed);
    let scene = Scene::new(params, &sim)?;
    let batches = map_chunks(0..trials, |chunk| {
        chunk
            .map(|i| scene.matched_interference_plus_noise(&mut trial_rng(seed, i)))
            .collect::<Vec<_>>()
    });
    Ok(batches.concat())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transmit_power_branches() {
        let mut p = NetworkParams::reference();
        assert_eq!(transmit_power(1e-6, &p), None);
        p.rho = 0.5;
        p.eta = 0.5;
        p.p_max1 = 10.0;
        p.p_max2 = 10.0;
        assert!((transmit_power(1e-3, &p).unwrap() - 0.5e-3).abs() < 1e-15);
        let q = NetworkParams::reference();
        assert!((transmit_power(1.0, &q).unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn wilson_brackets_estimate() {
        let iv = wilson_interval(30, 100, Z_95);
        assert!(iv.lo < 0.3 && 0.3 < iv.hi);
        let edge = wilson_interval(0, 50, Z_95);
        assert_eq!(edge.lo, 0.0);
        assert!(edge.hi > 0.0);
    }

    #[test]
    fn config_checks() {
        let p = NetworkParams::reference();
        let mut s = SimConfig::new(0, SimMode::Faithful, 1);
        assert_eq!(s.validate(&p), Err(SimError::ZeroTrials));
        s.trials = 5;
        s.window_padding = Some(50.0);
        assert!(matches!(s.validate(&p), Err(SimError::Padding { .. })));
    }

    #[test]
    fn split_runs_pool_exactly() {
        let p = NetworkParams::reference();
        let s = SimConfig::new(3000, SimMode::Faithful, 9);
        let whole = simulate_tally(&p, &s, 0..3000).unwrap();
        let parts =
            simulate_tally(&p, &s, 0..1234).unwrap() + simulate_tally(&p, &s, 1234..3000).unwrap();
        assert_eq!(whole, parts);
    }
}
