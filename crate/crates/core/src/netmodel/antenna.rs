//! Sectorized beam patterns and the effective-gain distribution of a link
//! between two randomly oriented sectorized antennas.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ModelError;

/// Two-level antenna pattern: `g_max` inside a main lobe of width `theta`
/// (radians), `g_min` elsewhere. Gains are linear.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AntennaPattern {
    pub g_max: f64,
    pub g_min: f64,
    pub theta: f64,
}

impl AntennaPattern {
    pub fn new(g_max: f64, g_min: f64, theta: f64) -> Result<Self, ModelError> {
        let p = Self {
            g_max,
            g_min,
            theta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.g_min > 0.0 && self.g_max >= self.g_min && self.g_max.is_finite()) {
            return Err(ModelError::InvalidParameter {
                field: "antenna gains",
                reason: format!(
                    "need g_max >= g_min > 0, got g_max={}, g_min={}",
                    self.g_max, self.g_min
                ),
            });
        }
        if !(self.theta > 0.0 && self.theta <= 2.0 * PI) {
            return Err(ModelError::InvalidParameter {
                field: "antenna beam-width",
                reason: format!("need 0 < theta <= 2π, got {}", self.theta),
            });
        }
        Ok(())
    }

    /// Probability that a uniformly random orientation falls in the main lobe.
    pub fn main_lobe_fraction(&self) -> f64 {
        self.theta / (2.0 * PI)
    }

    /// Orientation-averaged gain.
    pub fn mean_gain(&self) -> f64 {
        let f = self.main_lobe_fraction();
        f * self.g_max + (1.0 - f) * self.g_min
    }
}

/// Sectorized approximation of a uniform planar square array with
/// half-wavelength spacing and `n_elements` elements.
pub fn array_to_pattern(n_elements: u32) -> Result<AntennaPattern, ModelError> {
    if n_elements == 0 {
        return Err(ModelError::InvalidParameter {
            field: "n_elements",
            reason: "an array needs at least one element".into(),
        });
    }
    let n = n_elements as f64;
    let root = n.sqrt();
    let k = 3f64.sqrt() / (2.0 * PI);
    let sine = (3f64.sqrt() / (2.0 * root)).sin();
    let g_min = (root - k * n * sine) / (root - k * sine);
    let theta = 3f64.sqrt() / root;
    AntennaPattern::new(n, g_min, theta)
}

/// Four-point distribution of the product gain on a link, rows ordered
/// (max·max, max·min, min·max, min·min).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainDistribution {
    entries: [(f64, f64); 4],
}

impl GainDistribution {
    pub fn new(entries: [(f64, f64); 4]) -> Result<Self, ModelError> {
        let total: f64 = entries.iter().map(|e| e.1).sum();
        if (total - 1.0).abs() > 1e-12
            || entries
                .iter()
                .any(|&(g, p)| !(g > 0.0) || !(0.0..=1.0).contains(&p))
        {
            return Err(ModelError::InvalidParameter {
                field: "gain distribution",
                reason: format!("invalid rows {entries:?}"),
            });
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(f64, f64); 4] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn mean(&self) -> f64 {
        self.entries.iter().map(|&(g, p)| g * p).sum()
    }

    pub fn max_gain(&self) -> f64 {
        self.entries.iter().map(|e| e.0).fold(0.0, f64::max)
    }

    /// Draw a gain by inverting the CDF at a uniform variate.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for &(g, p) in &self.entries {
            acc += p;
            if u < acc {
                return g;
            }
        }
        // u landed in the rounding slack above the last cumulative sum
        self.entries
            .iter()
            .rev()
            .find(|e| e.1 > 0.0)
            .map(|e| e.0)
            .unwrap_or(self.entries[3].0)
    }
}

/// Effective-gain distribution on a link from an antenna with pattern `a`
/// to one with pattern `b`, both pointing in independent uniform directions.
pub fn gain_pmf(a: &AntennaPattern, b: &AntennaPattern) -> GainDistribution {
    let two_pi = 2.0 * PI;
    let norm = two_pi * two_pi;
    let entries = [
        (a.g_max * b.g_max, a.theta * b.theta / norm),
        (a.g_max * b.g_min, a.theta * (two_pi - b.theta) / norm),
        (a.g_min * b.g_max, (two_pi - a.theta) * b.theta / norm),
        (
            a.g_min * b.g_min,
            (two_pi - a.theta) * (two_pi - b.theta) / norm,
        ),
    ];
    GainDistribution { entries }
}
