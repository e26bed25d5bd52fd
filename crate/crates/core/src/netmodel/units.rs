//! Unit conversions. Everything inside the crate is SI; these are only used
//! at input/output boundaries.

use std::f64::consts::PI;

use super::ModelError;

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> Result<f64, ModelError> {
    if !(watts > 0.0) || !watts.is_finite() {
        return Err(ModelError::Domain(format!(
            "cannot express {watts} W in dBm"
        )));
    }
    Ok(10.0 * watts.log10() + 30.0)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> Result<f64, ModelError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(ModelError::Domain(format!("cannot express {x} in dB")));
    }
    Ok(10.0 * x.log10())
}

pub fn per_km2_to_per_m2(d: f64) -> f64 {
    d * 1e-6
}

pub fn per_m2_to_per_km2(d: f64) -> f64 {
    d * 1e6
}

pub fn deg_to_rad(deg: f64) -> f64 {
    deg * PI / 180.0
}

pub fn rad_to_deg(rad: f64) -> f64 {
    rad * 180.0 / PI
}

/// Far-field power density of an isotropic radiator, in W/m². `distance`
/// must be positive.
pub fn power_density_at(distance: f64, p_p: f64) -> f64 {
    p_p / (4.0 * PI * distance * distance)
}
