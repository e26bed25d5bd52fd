//! Built-in scenarios that regenerate the standard figures.

use pbcov_core::netmodel::dbm_to_watts;
use pbcov_core::netmodel::units::{db_to_linear, deg_to_rad, per_km2_to_per_m2};

use crate::config::{Antenna, ParamField, PatternPart, Scenario, Sweep, Variant};
use crate::error::CliError;

pub const FIGURES: [&str; 7] = ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"];

fn steps(from: f64, to: f64, step: f64) -> Vec<f64> {
    let n = ((to - from) / step).round() as usize;
    (0..=n).map(|i| from + i as f64 * step).collect()
}

fn dbm_steps(from: f64, to: f64, step: f64) -> Vec<f64> {
    steps(from, to, step)
        .into_iter()
        .map(dbm_to_watts)
        .collect()
}

fn sweep(fields: Vec<ParamField>, values: Vec<f64>) -> Option<Sweep> {
    Some(Sweep {
        fields,
        values,
        asymptote: false,
    })
}

fn variant(label: impl Into<String>, set: Vec<(ParamField, f64)>) -> Variant {
    Variant {
        label: label.into(),
        set,
    }
}

fn beams(g_max_db: f64, theta_deg: f64) -> Vec<(ParamField, f64)> {
    let mut set = Vec::new();
    for a in [Antenna::Tx, Antenna::Rx] {
        set.push((
            ParamField::Pattern(a, PatternPart::GMax),
            db_to_linear(g_max_db),
        ));
        set.push((
            ParamField::Pattern(a, PatternPart::GMin),
            db_to_linear(-10.0),
        ));
        set.push((
            ParamField::Pattern(a, PatternPart::Theta),
            deg_to_rad(theta_deg),
        ));
    }
    set
}

/// The scenario behind a named figure, on top of the reference parameters.
pub fn figure_recipe(name: &str) -> Result<Scenario, CliError> {
    use ParamField::*;
    let mut sc = Scenario::default();
    let density = |km2: f64| per_km2_to_per_m2(km2);
    match name {
        // Power coverage against the activation threshold.
        "fig2" => {
            sc.sweep = sweep(vec![GammaPt], dbm_steps(-30.0, 0.0, 2.5));
            sc.variants = [10.0, 50.0]
                .map(|l| variant(format!("lambda_p={l}/km2"), vec![(LambdaP, density(l))]))
                .into();
        }
        // Channel and total coverage against the SINR threshold.
        "fig3" => {
            sc.sweep = sweep(
                vec![GammaTr],
                steps(-10.0, 40.0, 5.0)
                    .into_iter()
                    .map(db_to_linear)
                    .collect(),
            );
            sc.variants = [(50.0, 500.0), (10.0, 100.0), (50.0, 250.0), (10.0, 50.0)]
                .map(|(lp, lt)| {
                    variant(
                        format!("lambda_p={lp}/km2,lambda_t={lt}/km2"),
                        vec![(LambdaP, density(lp)), (LambdaT, density(lt))],
                    )
                })
                .into();
        }
        // Coverage against PB power, with the saturation limit.
        "fig4" => {
            sc.sweep = Some(Sweep {
                fields: vec![PP],
                values: dbm_steps(20.0, 80.0, 5.0),
                asymptote: true,
            });
            sc.variants = [50.0, 100.0]
                .map(|r| variant(format!("r_min={r}m"), vec![(RMin, r)]))
                .into();
        }
        // Activation threshold under two TX/RX beam widths.
        "fig5" => {
            sc.sweep = sweep(vec![GammaPt], dbm_steps(-30.0, 0.0, 2.5));
            sc.variants = vec![
                variant("tx/rx 20dB,30deg", beams(20.0, 30.0)),
                variant("tx/rx 10dB,45deg", beams(10.0, 45.0)),
            ];
        }
        // Total coverage against TX/RX array size for several PB array sizes.
        "fig6" => {
            let elements = |a| Pattern(a, PatternPart::Elements);
            sc.sweep = sweep(
                vec![elements(Antenna::Tx), elements(Antenna::Rx)],
                [1.0, 4.0, 9.0, 16.0, 25.0, 36.0, 49.0, 64.0].into(),
            );
            sc.variants = [4.0, 16.0, 64.0]
                .map(|n| variant(format!("pb_elements={n}"), vec![(elements(Antenna::Pb), n)]))
                .into();
        }
        // Harvest-side power limit for several storage ratios.
        "fig7" => {
            sc.sweep = sweep(vec![PMax1], dbm_steps(0.0, 40.0, 2.5));
            sc.variants = [0.2, 0.5, 0.8]
                .map(|r| variant(format!("rho={r}"), vec![(Rho, r)]))
                .into();
        }
        // Storage-side power limit at two PB powers.
        "fig8" => {
            sc.params.p_max1 = dbm_to_watts(50.0);
            sc.sweep = sweep(vec![PMax2], dbm_steps(10.0, 40.0, 2.5));
            sc.variants = [50.0, 30.0]
                .map(|p| variant(format!("p_p={p}dBm"), vec![(PP, dbm_to_watts(p))]))
                .into();
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown figure '{other}'; expected one of {}",
                FIGURES.join(", ")
            )))
        }
    }
    sc.validate()?;
    Ok(sc)
}
