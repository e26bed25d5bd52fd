//! Independent numerical oracles shared by the integration tests.
#![allow(dead_code)]

use pbcov_core::specfun::ln_gamma;
use pbcov_core::{ComplexValue, NetworkParams};

/// 15-point Kronrod nodes on [0, 1] (symmetric half) and weights; the
/// embedded 7-point Gauss weights sit on the odd nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Globally adaptive Gauss-Kronrod integral of `f` over [a, b]: keep
/// splitting the interval with the largest error estimate until the total
/// estimate is below `max(abs_tol, rel_tol·|I|)`.
pub fn integrate_tol<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> f64 {
    let (v, e) = gk15(&f, a, b);
    let mut parts = vec![(a, b, v, e)];
    for _ in 0..5000 {
        let total: f64 = parts.iter().map(|p| p.2).sum();
        let err: f64 = parts.iter().map(|p| p.3).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) {
            break;
        }
        let (i, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("nonempty");
        let (lo, hi, _, _) = parts.swap_remove(i);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
    parts.iter().map(|p| p.2).sum()
}

pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    integrate_tol(f, a, b, tol, 1e-13)
}

/// ∫ₐ^∞ f by the substitution t = a + u/(1−u).
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, tol: f64) -> f64 {
    integrate(
        |u: f64| {
            if u >= 1.0 {
                return 0.0;
            }
            let w = 1.0 - u;
            f(a + u / w) / (w * w)
        },
        0.0,
        1.0,
        tol,
    )
}

/// n-th derivative of `f` at `x` by central differences with Richardson
/// extrapolation in the step, starting from step `h`.
pub fn richardson_derivative<F: Fn(f64) -> f64>(f: F, x: f64, n: usize, h: f64) -> f64 {
    let binom = |n: usize, k: usize| -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    };
    let central = |step: f64| -> f64 {
        let mut acc = 0.0;
        for k in 0..=n {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * binom(n, k) * f(x + (n as f64 / 2.0 - k as f64) * step);
        }
        acc / step.powi(n as i32)
    };
    const LEVELS: usize = 6;
    let mut table = [[0.0; LEVELS]; LEVELS];
    for i in 0..LEVELS {
        table[i][0] = central(h / 2f64.powi(i as i32));
        for j in 1..=i {
            let p = 4f64.powi(j as i32);
            table[i][j] = (p * table[i][j - 1] - table[i - 1][j - 1]) / (p - 1.0);
        }
    }
    // Stop at the level where successive diagonal entries agree best, since
    // roundoff eventually overtakes truncation.
    let mut best = table[1][1];
    let mut best_gap = f64::INFINITY;
    for i in 2..LEVELS {
        let gap = (table[i][i] - table[i - 1][i - 1]).abs();
        if gap < best_gap {
            best_gap = gap;
            best = table[i][i];
        }
    }
    best
}

/// E[exp(−y·h)] − 1 for the fading on a link in LOS (`los = true`,
/// Gamma(m, 1/m)) or NLOS (unit exponential), without cancellation at
/// small `y`.
pub fn fading_mgf_m1(y: f64, los: bool, m: u32) -> f64 {
    if los {
        let m = m as f64;
        (-m * (y / m).ln_1p()).exp_m1()
    } else {
        -y / (1.0 + y)
    }
}

/// LOS and NLOS parts of 2π ∫ r (E[exp(−x h l(r))] − 1) dr by quadrature,
/// path loss written out directly from its definition.
pub fn shot_noise_quadrature(x: f64, p: &NetworkParams) -> (f64, f64) {
    let two_pi = 2.0 * std::f64::consts::PI;
    let beta = p.r_min.powf(p.alpha_n - p.alpha_l);
    let los_loss = |r: f64| if r < 1.0 { 1.0 } else { r.powf(-p.alpha_l) };
    let integrand_los = |r: f64| r * fading_mgf_m1(x * los_loss(r), true, p.m);
    let integrand_nlos = |r: f64| r * fading_mgf_m1(x * beta * r.powf(-p.alpha_n), false, p.m);
    let los =
        integrate(integrand_los, 0.0, 1.0, 1e-14) + integrate(integrand_los, 1.0, p.r_min, 1e-12);
    let nlos = integrate(integrand_nlos, p.r_min, p.r_max, 1e-12);
    (two_pi * los, two_pi * nlos)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Sample mean and its standard error.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Derivatives g′(s) .. g^{(n)}(s) by Richardson differences in t = ln s,
/// mapped back through s^k g^{(k)}(s) = Σ_j S(k, j) f^{(j)}(t) with S the
/// signed Stirling numbers of the first kind. Functions that vary on the
/// scale of s itself are far better conditioned in t.
pub fn richardson_log_derivatives<F: Fn(f64) -> f64>(g: F, s: f64, n: usize, h: f64) -> Vec<f64> {
    let f = |t: f64| g(t.exp());
    let t0 = s.ln();
    let ft: Vec<f64> = (1..=n)
        .map(|k| richardson_derivative(f, t0, k, h))
        .collect();
    // stirling[k][j], signed, built by S(k+1, j) = S(k, j−1) − k S(k, j)
    let mut stirling = vec![vec![0.0; n + 1]; n + 1];
    stirling[0][0] = 1.0;
    for k in 0..n {
        for j in 1..=k + 1 {
            stirling[k + 1][j] = stirling[k][j - 1] - k as f64 * stirling[k][j];
        }
    }
    (1..=n)
        .map(|k| (1..=k).map(|j| stirling[k][j] * ft[j - 1]).sum::<f64>() / s.powi(k as i32))
        .collect()
}

/// Euler integral Γ(c)/(Γ(b)Γ(c−b)) ∫₀¹ t^{b−1}(1−t)^{c−b−1}(1−zt)^{−a} dt,
/// valid for c > b > 0 and z off the cut.
pub fn euler_integral(a: f64, b: f64, cc: f64, z: ComplexValue) -> ComplexValue {
    let pre = (ln_gamma(cc).unwrap() - ln_gamma(b).unwrap() - ln_gamma(cc - b).unwrap()).exp();
    let kernel = |t: f64| t.powf(b - 1.0) * (1.0 - t).powf(cc - b - 1.0);
    let part = |t: f64| (ComplexValue::new(1.0, 0.0) - z * t).powf(-a) * kernel(t);
    // The integrand varies on the scale 1/|z| near t = 0.
    let knee = (10.0 / z.norm()).min(0.5);
    let re = integrate_tol(|t| part(t).re, 0.0, knee, 0.0, 1e-14)
        + integrate_tol(|t| part(t).re, knee, 1.0, 0.0, 1e-14);
    let im = integrate_tol(|t| part(t).im, 0.0, knee, 0.0, 1e-14)
        + integrate_tol(|t| part(t).im, knee, 1.0, 0.0, 1e-14);
    ComplexValue::new(re, im) * pre
}
