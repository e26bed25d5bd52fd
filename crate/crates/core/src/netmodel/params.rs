use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::antenna::{gain_pmf, AntennaPattern, GainDistribution};
use super::units::{db_to_linear, dbm_to_watts, deg_to_rad, per_km2_to_per_m2};
use super::ModelError;

/// Full parameter set of the network model. All fields are SI: meters,
/// watts, nodes per m², radians, linear gains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkParams {
    pub lambda_p: f64,
    pub lambda_t: f64,
    pub d0: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub alpha_l: f64,
    pub alpha_n: f64,
    /// Nakagami shape of LOS links.
    pub m: u32,
    pub pb_pattern: AntennaPattern,
    pub tx_pattern: AntennaPattern,
    pub rx_pattern: AntennaPattern,
    pub p_p: f64,
    pub sigma2: f64,
    /// Fraction of the slot spent harvesting.
    pub rho: f64,
    pub eta: f64,
    pub gamma_pt: f64,
    pub p_max1: f64,
    pub p_max2: f64,
    pub gamma_tr: f64,
    pub n_levels: u32,
}

impl Default for NetworkParams {
    fn default() -> Self {
        Self::reference()
    }
}

fn invalid(field: &'static str, reason: String) -> ModelError {
    ModelError::InvalidParameter { field, reason }
}

impl NetworkParams {
    /// The reference scenario used throughout the evaluation.
    pub fn reference() -> Self {
        let pattern = |gmax_db: f64, gmin_db: f64, deg: f64| AntennaPattern {
            g_max: db_to_linear(gmax_db),
            g_min: db_to_linear(gmin_db),
            theta: deg_to_rad(deg),
        };
        Self {
            lambda_p: per_km2_to_per_m2(50.0),
            lambda_t: per_km2_to_per_m2(100.0),
            d0: 20.0,
            r_min: 100.0,
            r_max: 200.0,
            alpha_l: 2.0,
            alpha_n: 4.0,
            m: 5,
            pb_pattern: pattern(20.0, -10.0, 30.0),
            tx_pattern: pattern(10.0, -10.0, 45.0),
            rx_pattern: pattern(10.0, -10.0, 45.0),
            p_p: dbm_to_watts(40.0),
            sigma2: dbm_to_watts(-30.0),
            rho: 0.5,
            eta: 0.5,
            gamma_pt: dbm_to_watts(-20.0),
            p_max1: dbm_to_watts(20.0),
            p_max2: dbm_to_watts(30.0),
            gamma_tr: db_to_linear(30.0),
            n_levels: 10,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let finite_nonneg = |v: f64| v.is_finite() && v >= 0.0;
        let finite_pos = |v: f64| v.is_finite() && v > 0.0;
        if !finite_nonneg(self.lambda_p) {
            return Err(invalid(
                "lambda_p",
                format!("density must be >= 0, got {}", self.lambda_p),
            ));
        }
        if !finite_nonneg(self.lambda_t) {
            return Err(invalid(
                "lambda_t",
                format!("density must be >= 0, got {}", self.lambda_t),
            ));
        }
        if !(2.0 <= self.alpha_l && self.alpha_l <= self.alpha_n && self.alpha_n.is_finite()) {
            return Err(invalid(
                "alpha",
                format!(
                    "need 2 <= alpha_l <= alpha_n, got {} and {}",
                    self.alpha_l, self.alpha_n
                ),
            ));
        }
        if !(1.0 < self.r_min && self.r_min < self.r_max && self.r_max.is_finite()) {
            return Err(invalid(
                "r_min/r_max",
                format!(
                    "need 1 < r_min < r_max, got {} and {}",
                    self.r_min, self.r_max
                ),
            ));
        }
        if !finite_pos(self.d0) {
            return Err(invalid("d0", format!("must be positive, got {}", self.d0)));
        }
        if self.m == 0 {
            return Err(invalid("m", "Nakagami shape must be at least 1".into()));
        }
        if self.n_levels == 0 {
            return Err(invalid("n_levels", "need at least one level".into()));
        }
        self.pb_pattern.validate()?;
        self.tx_pattern.validate()?;
        self.rx_pattern.validate()?;
        for (field, v) in [
            ("p_p", self.p_p),
            ("gamma_pt", self.gamma_pt),
            ("p_max1", self.p_max1),
            ("p_max2", self.p_max2),
            ("gamma_tr", self.gamma_tr),
        ] {
            if !finite_pos(v) {
                return Err(invalid(field, format!("must be positive, got {v}")));
            }
        }
        if !finite_nonneg(self.sigma2) {
            return Err(invalid(
                "sigma2",
                format!("must be >= 0, got {}", self.sigma2),
            ));
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(invalid(
                "rho",
                format!("need 0 < rho < 1, got {}", self.rho),
            ));
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(invalid(
                "eta",
                format!("need 0 < eta <= 1, got {}", self.eta),
            ));
        }
        Ok(())
    }

    /// NLOS offset making the path loss continuous at `r_min`.
    pub fn beta(&self) -> f64 {
        self.r_min.powf(self.alpha_n - self.alpha_l)
    }

    pub fn delta_l(&self) -> f64 {
        2.0 / self.alpha_l
    }

    pub fn delta_n(&self) -> f64 {
        2.0 / self.alpha_n
    }

    /// Gain distribution on PB to TX links.
    pub fn harvest_gains(&self) -> GainDistribution {
        gain_pmf(&self.pb_pattern, &self.tx_pattern)
    }

    /// Gain distribution on TX to RX links.
    pub fn link_gains(&self) -> GainDistribution {
        gain_pmf(&self.tx_pattern, &self.rx_pattern)
    }

    /// Boresight gain of the desired link.
    pub fn desired_gain(&self) -> f64 {
        self.tx_pattern.g_max * self.rx_pattern.g_max
    }

    /// Harvest-to-transmit conversion factor ηρ/(1−ρ).
    pub fn conversion(&self) -> f64 {
        self.eta * self.rho / (1.0 - self.rho)
    }

    /// Harvested power above which the transmit power saturates.
    pub fn harvest_cap(&self) -> f64 {
        (self.p_max1 / self.eta).min((1.0 - self.rho) / (self.eta * self.rho) * self.p_max2)
    }

    /// Saturated transmit power.
    pub fn max_transmit_power(&self) -> f64 {
        (self.rho / (1.0 - self.rho) * self.p_max1).min(self.p_max2)
    }

    /// Mean number of PBs within `r_max` of a point.
    pub fn mean_pbs_in_range(&self) -> f64 {
        self.lambda_p * PI * self.r_max * self.r_max
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reference_values() {
        let p = NetworkParams::reference();
        p.validate().unwrap();
        assert_relative_eq!(p.beta(), 1e4, max_relative = 1e-15);
        assert_eq!(p.delta_l(), 1.0);
        assert_eq!(p.delta_n(), 0.5);
        assert_relative_eq!(p.harvest_cap(), 0.2, max_relative = 1e-12);
        assert_relative_eq!(p.max_transmit_power(), 0.1, max_relative = 1e-12);
        assert_relative_eq!(
            p.conversion() * p.harvest_cap(),
            p.max_transmit_power(),
            max_relative = 1e-12
        );
        assert_relative_eq!(p.mean_pbs_in_range(), 2.0 * PI, max_relative = 1e-12);
    }

    #[test]
    fn rejects_bad_values() {
        let base = NetworkParams::reference();
        let cases: Vec<Box<dyn Fn(&mut NetworkParams)>> = vec![
            Box::new(|p| p.alpha_l = 1.5),
            Box::new(|p| p.alpha_n = 1.9),
            Box::new(|p| p.r_min = 0.5),
            Box::new(|p| p.r_max = 50.0),
            Box::new(|p| p.lambda_p = -1.0),
            Box::new(|p| p.p_p = 0.0),
            Box::new(|p| p.rho = 1.0),
            Box::new(|p| p.eta = 0.0),
            Box::new(|p| p.m = 0),
            Box::new(|p| p.n_levels = 0),
            Box::new(|p| p.tx_pattern.g_min = 0.0),
        ];
        for f in cases {
            let mut p = base.clone();
            f(&mut p);
            assert!(p.validate().is_err(), "{p:?}");
        }
    }
}
