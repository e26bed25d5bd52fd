//! Dimensioned values at the config boundary. Every dimensioned field must
//! carry an explicit unit suffix; values are converted to SI on the way in
//! and written back in SI units on the way out.

use pbcov_core::netmodel::units::{
    db_to_linear, deg_to_rad, linear_to_db, per_m2_to_per_km2, rad_to_deg,
};
use pbcov_core::netmodel::{dbm_to_watts, watts_to_dbm};
use toml::Value;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitClass {
    /// W, mW or dBm.
    Power,
    /// m or km.
    Length,
    /// per_m2 or per_km2.
    Density,
    /// deg or rad.
    Angle,
    /// dB, or a bare linear number.
    Ratio,
    /// Dimensionless real.
    Plain,
    /// Positive integer.
    Count,
}

/// Unit suffixes, longest first so that "dBm" is tried before "m".
const SUFFIXES: [&str; 10] = [
    "per_km2", "per_m2", "dBm", "deg", "rad", "km", "mW", "dB", "m", "W",
];

fn split_suffix(text: &str) -> Option<(f64, &'static str)> {
    let t = text.trim();
    SUFFIXES.iter().find_map(|&unit| {
        let number = t.strip_suffix(unit)?.trim();
        number.parse::<f64>().ok().map(|v| (v, unit))
    })
}

/// Parse `value` for the field `name` into SI units.
pub fn parse(name: &str, value: &Value, class: UnitClass) -> Result<f64, CliError> {
    let bad = |why: String| CliError::Config(format!("{name}: {why}"));
    let number = match value {
        Value::Integer(i) => Some(*i as f64),
        Value::Float(f) => Some(*f),
        _ => None,
    };
    let out = match (class, number) {
        (UnitClass::Plain | UnitClass::Ratio, Some(v)) => v,
        (UnitClass::Count, Some(v)) => {
            if v.fract() != 0.0 || v < 1.0 {
                return Err(bad(format!("expected a positive integer, got {v}")));
            }
            v
        }
        (_, Some(v)) => {
            return Err(bad(format!(
                "{v} has no unit; write it with one of {}",
                suffix_hint(class)
            )))
        }
        (_, None) => {
            let Value::String(text) = value else {
                return Err(bad(format!(
                    "expected a number or a quantity string, got {value}"
                )));
            };
            let (v, unit) =
                split_suffix(text).ok_or_else(|| bad(format!("cannot read quantity '{text}'")))?;
            match (class, unit) {
                (UnitClass::Power, "W") => v,
                (UnitClass::Power, "mW") => v * 1e-3,
                (UnitClass::Power, "dBm") => dbm_to_watts(v),
                (UnitClass::Length, "m") => v,
                (UnitClass::Length, "km") => v * 1e3,
                (UnitClass::Density, "per_m2") => v,
                (UnitClass::Density, "per_km2") => v * 1e-6,
                (UnitClass::Angle, "deg") => deg_to_rad(v),
                (UnitClass::Angle, "rad") => v,
                (UnitClass::Ratio, "dB") => db_to_linear(v),
                _ => {
                    return Err(bad(format!(
                        "unit '{unit}' does not fit; use {}",
                        suffix_hint(class)
                    )))
                }
            }
        }
    };
    if !out.is_finite() {
        return Err(bad(format!("value {out} is not finite")));
    }
    Ok(out)
}

fn suffix_hint(class: UnitClass) -> &'static str {
    match class {
        UnitClass::Power => "W, mW or dBm",
        UnitClass::Length => "m or km",
        UnitClass::Density => "per_m2 or per_km2",
        UnitClass::Angle => "deg or rad",
        UnitClass::Ratio => "dB or a bare linear number",
        UnitClass::Plain | UnitClass::Count => "a bare number",
    }
}

/// SI value as written back to a config file; parses to the same bits.
pub fn to_config(si: f64, class: UnitClass) -> Value {
    match class {
        UnitClass::Power => Value::String(format!("{si:e} W")),
        UnitClass::Length => Value::String(format!("{si:e} m")),
        UnitClass::Density => Value::String(format!("{si:e} per_m2")),
        UnitClass::Angle => Value::String(format!("{si:e} rad")),
        UnitClass::Ratio | UnitClass::Plain => Value::Float(si),
        UnitClass::Count => Value::Integer(si as i64),
    }
}

/// Value and unit label used in result tables, in the units the figures
/// are usually drawn in.
pub fn display(si: f64, class: UnitClass) -> (f64, &'static str) {
    match class {
        UnitClass::Power => (watts_to_dbm(si).unwrap_or(f64::NEG_INFINITY), "dBm"),
        UnitClass::Length => (si, "m"),
        UnitClass::Density => (per_m2_to_per_km2(si), "per_km2"),
        UnitClass::Angle => (rad_to_deg(si), "deg"),
        UnitClass::Ratio => (linear_to_db(si).unwrap_or(f64::NEG_INFINITY), "dB"),
        UnitClass::Plain | UnitClass::Count => (si, ""),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_suffixed_values() {
        let s = |t: &str| Value::String(t.into());
        assert_eq!(parse("x", &s("40 dBm"), UnitClass::Power).unwrap(), 10.0);
        assert_eq!(parse("x", &s("3mW"), UnitClass::Power).unwrap(), 3e-3);
        assert_eq!(parse("x", &s("0.2 km"), UnitClass::Length).unwrap(), 200.0);
        assert_eq!(parse("x", &s("200 m"), UnitClass::Length).unwrap(), 200.0);
        assert!((parse("x", &s("50 per_km2"), UnitClass::Density).unwrap() - 5e-5).abs() < 1e-20);
        assert_eq!(parse("x", &s("30 dB"), UnitClass::Ratio).unwrap(), 1000.0);
        assert_eq!(
            parse("x", &Value::Float(2.5), UnitClass::Ratio).unwrap(),
            2.5
        );
    }

    #[test]
    fn rejects_missing_or_wrong_units() {
        assert!(parse("p_p", &Value::Float(40.0), UnitClass::Power).is_err());
        assert!(parse("d0", &Value::String("20 dBm".into()), UnitClass::Length).is_err());
        assert!(parse("m", &Value::Float(2.5), UnitClass::Count).is_err());
        assert!(parse("d0", &Value::String("twenty m".into()), UnitClass::Length).is_err());
    }

    #[test]
    fn config_values_round_trip() {
        for (v, class) in [
            (1e-5, UnitClass::Power),
            (0.1 + 0.2, UnitClass::Length),
            (5e-5, UnitClass::Density),
        ] {
            assert_eq!(parse("x", &to_config(v, class), class).unwrap(), v);
        }
    }
}
