mod common;

use std::f64::consts::PI;

use approx::assert_relative_eq;
use common::{integrate, rel_err, richardson_log_derivatives, shot_noise_quadrature};
use pbcov_core::analytic::{
    asymptotic_power_coverage, asymptotic_total_coverage, channel_coverage,
    conditional_link_coverage, exponent_closed_form, exponent_series,
    laplace_interference_plus_noise, laplace_ppt, log_laplace_in_derivatives,
    log_laplace_ppt_derivatives, power_coverage, power_levels, total_coverage, xi1, xi2, xi3,
    ShotNoise,
};
use pbcov_core::netmodel::dbm_to_watts;
use pbcov_core::specfun::upper_incomplete_gamma;
use pbcov_core::{AnalyticError, ComplexValue, InversionParams, NetworkParams, PowerLevels};
use proptest::prelude::*;

fn c(re: f64) -> ComplexValue {
    ComplexValue::new(re, 0.0)
}

fn table() -> NetworkParams {
    NetworkParams::reference()
}

fn inv() -> InversionParams {
    InversionParams::default()
}

#[test]
fn laplace_ppt_trivial_points() {
    let p = table();
    assert_eq!(laplace_ppt(c(0.0), &p).unwrap(), c(1.0));
    let mut empty = p.clone();
    empty.lambda_p = 0.0;
    for s in [1.0, 1e3, 1e7] {
        assert_eq!(laplace_ppt(c(s), &empty).unwrap(), c(1.0));
    }
}

#[test]
fn laplace_ppt_completely_monotone_on_reals() {
    let p = table();
    let vals: Vec<f64> = (0..=40)
        .map(|i| {
            let s = 10f64.powf(-1.0 + 0.25 * i as f64);
            let v = laplace_ppt(c(s), &p).unwrap();
            assert!(v.im.abs() < 1e-15 && v.re > 0.0 && v.re <= 1.0);
            v.re
        })
        .collect();
    for w in vals.windows(2) {
        assert!(w[1] <= w[0]);
    }
    // second differences on a uniform grid
    let h = 50.0;
    let f = |s: f64| laplace_ppt(c(s), &p).unwrap().re;
    for i in 0..30 {
        let s = 10.0 + i as f64 * h;
        assert!(f(s) - 2.0 * f(s + h) + f(s + 2.0 * h) >= -1e-15);
    }
}

/// The shot-noise exponent against direct radial quadrature, for both link
/// regions, several model shapes and a wide range of arguments.
#[test]
fn shot_noise_exponent_against_quadrature() {
    let mut worst: f64 = 0.0;
    for (al, an, m) in [
        (2.0, 4.0, 5),
        (2.0, 4.0, 1),
        (2.5, 3.5, 3),
        (3.0, 3.0, 2),
        (2.0, 2.0, 4),
    ] {
        let mut p = table();
        p.alpha_l = al;
        p.alpha_n = an;
        p.m = m;
        let sn = ShotNoise::new(&p);
        for x in [1e-6, 0.3, 4.0, 1e2, 1e4, 3e6, 1e9] {
            let (los, nlos) = shot_noise_quadrature(x, &p);
            let v = sn.value(c(x)).unwrap().re;
            worst = worst.max(rel_err(v, los + nlos));
        }
    }
    assert!(worst < 1e-9, "worst relative error {worst:e}");
}

/// The closed forms and the small-argument series describe the same
/// function where both are accurate.
#[test]
fn closed_form_and_series_overlap() {
    let p = table();
    for x in [0.05, 0.2, 0.45] {
        let (lc, nc) = exponent_closed_form(c(x), &p).unwrap();
        let (ls, ns) = exponent_series(c(x), &p);
        let (lq, nq) = shot_noise_quadrature(x, &p);
        assert!(rel_err(ls.re, lq) < 1e-10, "LOS series at {x}");
        assert!(rel_err(lc.re, lq) < 1e-6, "LOS closed form at {x}");
        assert!(rel_err(ns.re, nq) < 1e-10, "NLOS series at {x}");
        let _ = nc;
    }
    // NLOS series radius is in w = xβ r_min^{−α_N} = x/1e4 at the reference parameters
    for x in [500.0, 2000.0, 4500.0] {
        let (_, nc) = exponent_closed_form(c(x), &p).unwrap();
        let (_, ns) = exponent_series(c(x), &p);
        assert!(
            rel_err(nc.re, ns.re) < 1e-8,
            "NLOS at {x}: {} vs {}",
            nc.re,
            ns.re
        );
    }
}

/// The helper functions, combined as in the closed forms, reproduce the
/// annulus integrals they stand for.
#[test]
fn helper_functions_against_annulus_integrals() {
    let p = table();
    let s = 1e3;
    let (m, al, an, beta) = (p.m as f64, p.alpha_l, p.alpha_n, p.beta());
    for (gain, _) in p.harvest_gains().iter() {
        let x = s * p.p_p * gain;
        // LOS annulus [1, r_min]
        let q_los = 2.0
            * PI
            * integrate(
                |r| r * ((1.0 + x * r.powf(-al) / m).powf(-m) - 1.0),
                1.0,
                p.r_min,
                1e-13,
            );
        let head = PI * p.r_min.powi(2) * ((1.0 + x * p.r_min.powf(-al) / m).powf(-m) - 1.0)
            - PI * ((1.0 + x / m).powf(-m) - 1.0);
        let xi = PI
            * x.powf(2.0 / al)
            * (xi1(1.0, c(s), gain, &p).unwrap() - xi1(p.r_min, c(s), gain, &p).unwrap()).re;
        assert!(
            rel_err(head + xi, q_los) < 1e-6,
            "LOS gain {gain}: {} vs {q_los}",
            head + xi
        );
        // NLOS annulus [r_min, r_max]
        let q_nlos = 2.0
            * PI
            * integrate(
                |r| r * (1.0 / (1.0 + x * beta * r.powf(-an)) - 1.0),
                p.r_min,
                p.r_max,
                1e-13,
            );
        let y = x * beta;
        let d2 = (xi2(p.r_min, c(s), gain, &p) - xi2(p.r_max, c(s), gain, &p)).re;
        let d3 = (xi3(p.r_min, c(s), gain, &p).unwrap() - xi3(p.r_max, c(s), gain, &p).unwrap()).re;
        let closed = PI * y * d2 + PI / (2.0 + an) * y.powf(2.0 / an) * d3;
        assert!(
            rel_err(closed, q_nlos) < 1e-6,
            "NLOS gain {gain}: {closed} vs {q_nlos}"
        );
    }
    // Ξ₂ is a plain rational function
    let g = p.harvest_gains().entries()[0].0;
    let direct = 100f64.powi(2) / (100f64.powi(4) + s * p.p_p * g * beta);
    assert_relative_eq!(xi2(100.0, c(s), g, &p).re, direct, max_relative = 1e-14);
}

#[test]
fn helper_exponent_vanishes_as_s_goes_to_zero() {
    let p = table();
    let g = p.harvest_gains().entries()[3].0;
    let mut last = f64::INFINITY;
    for s in [1e-4, 1e-6, 1e-8, 1e-10] {
        let x = s * p.p_p * g;
        let v =
            (PI * x * (xi1(1.0, c(s), g, &p).unwrap() - xi1(p.r_min, c(s), g, &p).unwrap())).norm();
        assert!(v < last);
        last = v;
    }
    assert!(last < 1e-6);
}

#[test]
fn power_coverage_limits() {
    let p = table();
    let near_zero = power_coverage(1e-15, &p, &inv()).unwrap();
    assert!(
        (near_zero - asymptotic_power_coverage(&p)).abs() < 1e-6,
        "{near_zero}"
    );
    assert_relative_eq!(
        asymptotic_power_coverage(&p),
        1.0 - (-2.0 * PI).exp(),
        max_relative = 1e-12
    );
    let mut empty = p.clone();
    empty.lambda_p = 0.0;
    assert_eq!(power_coverage(1e-5, &empty, &inv()).unwrap(), 0.0);
    assert_eq!(asymptotic_power_coverage(&empty), 0.0);
    let mut wide = p.clone();
    wide.r_max = 1e5;
    assert_eq!(asymptotic_power_coverage(&wide), 1.0);
}

#[test]
fn power_coverage_monotone_on_grids() {
    let p = table();
    let mut last = 1.0;
    for i in 0..=12 {
        let v = power_coverage(dbm_to_watts(-30.0 + 2.5 * i as f64), &p, &inv()).unwrap();
        assert!(v <= last + 1e-12);
        last = v;
    }
    for field in 0..2 {
        let mut last = 0.0;
        for i in 0..=8 {
            let mut q = p.clone();
            if field == 0 {
                q.lambda_p = 1e-6 * (5.0 + 15.0 * i as f64);
            } else {
                q.p_p = dbm_to_watts(20.0 + 5.0 * i as f64);
            }
            let v = power_coverage(q.gamma_pt, &q, &inv()).unwrap();
            assert!(v >= last - 1e-12, "field {field}, step {i}");
            last = v;
        }
    }
}

#[test]
fn ladder_at_reference_parameters() {
    let p = table();
    let levels = power_levels(&p, &inv()).unwrap();
    assert_relative_eq!(levels.thresholds[10], 0.2, max_relative = 1e-12);
    assert!((levels.step_db - 4.3).abs() < 0.01);
    assert_relative_eq!(levels.p_t[10], 0.1, max_relative = 1e-12);
    assert_relative_eq!(levels.p_t[10], p.max_transmit_power(), max_relative = 1e-12);
    let pc = power_coverage(p.gamma_pt, &p, &inv()).unwrap();
    assert!((levels.k.iter().sum::<f64>() - pc).abs() < 1e-9);
    assert!(levels.k.iter().all(|&k| k >= 0.0));
    assert!(levels.p_t.windows(2).all(|w| w[1] > w[0]));
    for (l, k) in levels.lambda_t_n.iter().zip(&levels.k) {
        assert_relative_eq!(*l, k * p.lambda_t, max_relative = 1e-15);
    }
    let mut bad = p.clone();
    bad.gamma_pt = 0.5;
    assert!(matches!(
        power_levels(&bad, &inv()),
        Err(AnalyticError::DegenerateLadder { .. })
    ));
}

#[test]
fn interference_transform_trivial_points() {
    let p = table();
    let levels = power_levels(&p, &inv()).unwrap();
    let mut quiet = p.clone();
    quiet.sigma2 = 0.0;
    assert_eq!(
        laplace_interference_plus_noise(c(0.0), &quiet, &levels).unwrap(),
        c(1.0)
    );
    let mut alone = p.clone();
    alone.lambda_t = 0.0;
    let empty = power_levels(&alone, &inv()).unwrap();
    for s in [1.0, 1e6, 3e9] {
        let g = log_laplace_in_derivatives(s, 0, &alone, &empty).unwrap();
        assert_eq!(g.value().re, -s * p.sigma2);
        let l = laplace_interference_plus_noise(c(s), &alone, &empty).unwrap();
        assert_relative_eq!(l.re, (-s * p.sigma2).exp(), max_relative = 1e-14);
    }
}

/// Derivatives of the interference exponent against Richardson differences.
/// The noise term −sσ² is exactly linear and dominates g at large s, so the
/// differences are taken of g + sσ², with −σ² restored in the slope.
#[test]
fn interference_derivatives_against_richardson() {
    let p = table();
    let levels = power_levels(&p, &inv()).unwrap();
    let g = |s: f64| {
        log_laplace_in_derivatives(s, 0, &p, &levels)
            .unwrap()
            .value()
            .re
            + s * p.sigma2
    };
    let mut worst: f64 = 0.0;
    // s = mγ/(P D₀ l(d0)) spans about 2e5 to 2e9 over the reference ladder
    for i in 0..=16 {
        let s = 10f64.powf(2.0 + 0.5 * i as f64);
        let stack = log_laplace_in_derivatives(s, 4, &p, &levels).unwrap();
        let mut fd = richardson_log_derivatives(g, s, 4, 0.5);
        fd[0] -= p.sigma2;
        for l in 1..=4 {
            worst = worst.max(rel_err(stack.values()[l].re, fd[l - 1]));
        }
    }
    assert!(worst < 1e-6, "worst relative error {worst:e}");
}

#[test]
fn harvested_power_log_transform_slope_is_mean() {
    // −d/ds log ℒ at 0 is the mean harvested power; compute that mean by
    // quadrature over the plane with averaged gains and unit-mean fading.
    let p = table();
    let d = log_laplace_ppt_derivatives(0.0, 1, &p).unwrap();
    let beta = p.beta();
    let mean_loss = 2.0
        * PI
        * (integrate(|r| r, 0.0, 1.0, 1e-15)
            + integrate(|r| r * r.powf(-p.alpha_l), 1.0, p.r_min, 1e-15)
            + integrate(|r| r * beta * r.powf(-p.alpha_n), p.r_min, p.r_max, 1e-15));
    let mean = p.lambda_p * p.p_p * p.harvest_gains().mean() * mean_loss;
    assert!(rel_err(-d.values()[1].re, mean) < 1e-10);
}

#[test]
fn channel_coverage_without_interference_is_gamma_tail() {
    let mut p = table();
    p.lambda_t = 0.0;
    p.sigma2 = dbm_to_watts(-60.0);
    let levels = power_levels(&p, &inv()).unwrap();
    let m = p.m as f64;
    let loss = p.d0.powf(-p.alpha_l);
    // Pr(Gamma(m, 1/m) > t) = Γ(m, m t)/Γ(m)
    let mut want = 0.0;
    for (&k, &pt) in levels.k.iter().zip(&levels.p_t) {
        let t = p.gamma_tr * p.sigma2 / (pt * p.desired_gain() * loss);
        want +=
            k * upper_incomplete_gamma(m, m * t).unwrap() / upper_incomplete_gamma(m, 0.0).unwrap();
    }
    want /= levels.power_cov;
    let got = channel_coverage(p.gamma_tr, &p, &levels).unwrap();
    assert!(rel_err(got, want) < 1e-9, "{got} vs {want}");
}

#[test]
fn channel_coverage_edges() {
    let p = table();
    let levels = power_levels(&p, &inv()).unwrap();
    assert!(channel_coverage(1e-12, &p, &levels).unwrap() > 1.0 - 1e-6);
    assert!(channel_coverage(0.0, &p, &levels).is_err());
    let dead = PowerLevels {
        power_cov: 0.0,
        ..levels.clone()
    };
    assert_eq!(
        channel_coverage(1.0, &p, &dead),
        Err(AnalyticError::NoPowerCoverage)
    );
    let mut far = p.clone();
    far.d0 = 150.0;
    assert!(conditional_link_coverage(0.1, &far, &levels).is_err());
}

#[test]
fn total_coverage_structure() {
    let p = table();
    let r = total_coverage(p.gamma_pt, p.gamma_tr, &p, &inv()).unwrap();
    assert!((r.total_cov - r.power_cov * r.channel_cov).abs() < 1e-9);
    let tiny = total_coverage(p.gamma_pt, 1e-12, &p, &inv()).unwrap();
    assert!((tiny.total_cov - tiny.power_cov).abs() < 1e-6);
    let mut empty = p.clone();
    empty.lambda_p = 0.0;
    let z = total_coverage(p.gamma_pt, p.gamma_tr, &empty, &inv()).unwrap();
    assert_eq!((z.power_cov, z.channel_cov, z.total_cov), (0.0, 0.0, 0.0));
}

#[test]
fn asymptotic_total_limits() {
    let mut p = table();
    p.lambda_t = 0.0;
    p.sigma2 = 1e-30;
    assert!((asymptotic_total_coverage(&p).unwrap() - asymptotic_power_coverage(&p)).abs() < 1e-9);
    // Once every TX is surely within reach of a PB, more PBs change nothing.
    let mut a = table();
    a.lambda_p = 1e-2;
    let mut b = a.clone();
    b.lambda_p = 1e-1;
    assert_relative_eq!(
        asymptotic_total_coverage(&a).unwrap(),
        asymptotic_total_coverage(&b).unwrap(),
        max_relative = 1e-12
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn total_is_product(gpt in -35.0f64..-5.0, gtr in -10.0f64..35.0) {
        let p = table();
        let r = total_coverage(dbm_to_watts(gpt), 10f64.powf(gtr / 10.0), &p, &inv()).unwrap();
        prop_assert!((r.total_cov - r.power_cov * r.channel_cov).abs() < 1e-9);
        prop_assert!((0.0..=1.0).contains(&r.power_cov));
        prop_assert!((0.0..=1.0).contains(&r.channel_cov));
    }

    #[test]
    fn channel_coverage_decreasing_in_threshold(g1 in -10.0f64..35.0, g2 in -10.0f64..35.0) {
        let p = table();
        let levels = power_levels(&p, &inv()).unwrap();
        let (lo, hi) = if g1 < g2 { (g1, g2) } else { (g2, g1) };
        let a = channel_coverage(10f64.powf(lo / 10.0), &p, &levels).unwrap();
        let b = channel_coverage(10f64.powf(hi / 10.0), &p, &levels).unwrap();
        prop_assert!(b <= a + 1e-12);
    }

    #[test]
    fn channel_coverage_decreasing_in_tx_density(l1 in 1.0f64..400.0, l2 in 1.0f64..400.0) {
        let (lo, hi) = if l1 < l2 { (l1, l2) } else { (l2, l1) };
        let eval = |l: f64| {
            let mut p = table();
            p.lambda_t = l * 1e-6;
            let levels = power_levels(&p, &inv()).unwrap();
            channel_coverage(p.gamma_tr, &p, &levels).unwrap()
        };
        prop_assert!(eval(hi) <= eval(lo) + 1e-12);
    }

    #[test]
    fn laplace_bounded_by_one(s in 0.0f64..1e8) {
        let v = laplace_ppt(c(s), &table()).unwrap();
        prop_assert!(v.re <= 1.0 && v.re > 0.0);
    }
}
