//! Log-Laplace exponent of a Poisson field of unit-density transmitters
//! under the bounded three-state path loss.
//!
//! For one gain state, with `x = s·P·G` the scaled Laplace variable,
//!
//! ψ(x) = 2π ∫₀^∞ r (E[exp(−x·h·l(r))] − 1) dr
//!
//! and the field's log-Laplace transform is `λ Σ_k p_k ψ(s P G_k)`. The
//! LOS disk and the NLOS annulus are evaluated separately. Each uses the
//! hypergeometric closed form for large |x| and a power series in x when
//! |x| is small, where the closed form cancels catastrophically.

use std::f64::consts::PI;

use crate::netmodel::NetworkParams;
use crate::specfun::{gauss_2f1_derivative, ComplexValue, Jet, SpecFunError};

/// Largest series argument (|x|/m on the LOS side, |x|β r_min^{−α_N} on
/// the NLOS side) for which the power series is used.
const SERIES_SWITCH: f64 = 0.5;
const SERIES_MAX_TERMS: usize = 2_000;

fn c(re: f64) -> ComplexValue {
    ComplexValue::new(re, 0.0)
}

/// Geometry and fading constants that ψ depends on.
#[derive(Debug, Clone, Copy)]
pub struct ShotNoise {
    r_min: f64,
    r_max: f64,
    alpha_l: f64,
    alpha_n: f64,
    m: f64,
    beta: f64,
}

impl ShotNoise {
    pub fn new(params: &NetworkParams) -> Self {
        Self {
            r_min: params.r_min,
            r_max: params.r_max,
            alpha_l: params.alpha_l,
            alpha_n: params.alpha_n,
            m: params.m as f64,
            beta: params.beta(),
        }
    }

    fn delta_l(&self) -> f64 {
        2.0 / self.alpha_l
    }

    fn delta_n(&self) -> f64 {
        2.0 / self.alpha_n
    }

    /// ψ(x) and its Taylor coefficients, propagated from the jet `x`.
    pub fn exponent(&self, x: &Jet) -> Result<Jet, SpecFunError> {
        let x0 = x.value();
        if x0.norm() == 0.0 && x.order() == 0 {
            return Ok(Jet::constant(c(0.0), 0));
        }
        let los = if x0.norm() / self.m <= SERIES_SWITCH {
            self.los_series(x)
        } else {
            self.los_closed(x)?
        };
        let w_scale = self.beta * self.r_min.powf(-self.alpha_n);
        let nlos = if x0.norm() * w_scale <= SERIES_SWITCH {
            self.nlos_series(x)
        } else {
            self.nlos_closed(x)?
        };
        let out = &los + &nlos;
        if out
            .coeffs()
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(SpecFunError::Overflow {
                function: "shot-noise exponent",
            });
        }
        Ok(out)
    }

    /// ψ at a plain complex argument.
    pub fn value(&self, x: ComplexValue) -> Result<ComplexValue, SpecFunError> {
        Ok(self.exponent(&Jet::constant(x, 0))?.value())
    }

    /// LOS part, closed form: π r_min²((1 + x r_min^{−α_L}/m)^{−m} − 1)
    /// + π x^{δ_L} (Ξ₁(1) − Ξ₁(r_min)).
    fn los_closed(&self, x: &Jet) -> Result<Jet, SpecFunError> {
        let u = x
            .scale_real(self.r_min.powf(-self.alpha_l) / self.m)
            .add_scalar(c(1.0));
        let head = u
            .powf(-self.m)
            .add_scalar(c(-1.0))
            .scale_real(PI * self.r_min.powi(2));
        let diff = &xi1_jet(self, 1.0, x)? - &xi1_jet(self, self.r_min, x)?;
        let tail = (&x.powf(self.delta_l()) * &diff).scale_real(PI);
        Ok(&head + &tail)
    }

    /// NLOS part, closed form: π xβ (Ξ₂(r_min) − Ξ₂(r_max))
    /// + π/(2+α_N) (xβ)^{δ_N} (Ξ₃(r_min) − Ξ₃(r_max)).
    fn nlos_closed(&self, x: &Jet) -> Result<Jet, SpecFunError> {
        let y = x.scale_real(self.beta);
        let d2 = &xi2_jet(self, self.r_min, x) - &xi2_jet(self, self.r_max, x);
        let first = (&y * &d2).scale_real(PI);
        let d3 = &xi3_jet(self, self.r_min, x)? - &xi3_jet(self, self.r_max, x)?;
        let second = (&y.powf(self.delta_n()) * &d3).scale_real(PI / (2.0 + self.alpha_n));
        Ok(&first + &second)
    }

    /// LOS part as a power series in x:
    /// π Σ_j C(−m, j) (x/m)^j (1 + 2∫₁^{r_min} r^{1−α_L j} dr).
    fn los_series(&self, x: &Jet) -> Jet {
        let ln_r = self.r_min.ln();
        let mut binom = 1.0;
        let coeff = |j: usize| {
            binom *= (-self.m - (j as f64 - 1.0)) / j as f64;
            let e = 2.0 - self.alpha_l * j as f64;
            let integral = if e.abs() < 1e-12 {
                ln_r
            } else {
                (self.r_min.powf(e) - 1.0) / e
            };
            PI * binom * (1.0 + 2.0 * integral)
        };
        power_series(coeff, &x.scale_real(1.0 / self.m))
    }

    /// NLOS part as a power series in w = xβ r_min^{−α_N}:
    /// 2π r_min² Σ_j (−w)^j (q^{2−α_N j} − 1)/(2 − α_N j), q = r_max/r_min.
    fn nlos_series(&self, x: &Jet) -> Jet {
        let q = self.r_max / self.r_min;
        let ln_q = q.ln();
        let scale = 2.0 * PI * self.r_min.powi(2);
        let coeff = |j: usize| {
            let e = 2.0 - self.alpha_n * j as f64;
            let k = if e.abs() < 1e-12 {
                ln_q
            } else {
                (q.powf(e) - 1.0) / e
            };
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            scale * sign * k
        };
        let w = x.scale_real(self.beta * self.r_min.powf(-self.alpha_n));
        power_series(coeff, &w)
    }
}

/// Σ_{j≥1} a_j t^j with `a_j = coeff(j)` requested in order, truncated once
/// the terms (weighted for the derivative order) are negligible.
fn power_series(mut coeff: impl FnMut(usize) -> f64, t: &Jet) -> Jet {
    let rho = t.value().norm();
    let order = t.order() as i32;
    let mut coeffs = Vec::new();
    let mut peak: f64 = 0.0;
    let mut quiet = 0;
    for j in 1..=SERIES_MAX_TERMS {
        let a = coeff(j);
        coeffs.push(a);
        let jf = j as f64;
        let size = a.abs() * rho.powf(jf) * jf.powi(order);
        peak = peak.max(size);
        if j > t.order() && (size <= 1e-18 * peak || rho == 0.0) {
            quiet += 1;
            if quiet >= 4 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    let mut acc = Jet::constant(c(*coeffs.last().expect("at least one term")), t.order());
    for &a in coeffs[..coeffs.len() - 1].iter().rev() {
        acc = (&acc * t).add_scalar(c(a));
    }
    &acc * t
}

/// ₂F₁(a, b; cc; z) composed with the jet `z`.
fn hyp2f1_jet(a: f64, b: f64, cc: f64, z: &Jet) -> Result<Jet, SpecFunError> {
    let z0 = z.value();
    let derivs = (0..=z.order())
        .map(|n| gauss_2f1_derivative(a, b, cc, n, z0))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(z.compose(&derivs))
}

fn xi1_jet(sn: &ShotNoise, r: f64, x: &Jet) -> Result<Jet, SpecFunError> {
    let (m, al, dl) = (sn.m, sn.alpha_l, sn.delta_l());
    let k = m.powf(m) * al * m / (2.0 + m * al);
    let lead = x.scale_real(r.powf(-al)).powf(-dl - m).scale_real(k);
    let z = x.recip().scale_real(-m * r.powf(al));
    let f = hyp2f1_jet(1.0 + m, m + dl, 1.0 + m + dl, &z)?;
    Ok(&lead * &f)
}

fn xi2_jet(sn: &ShotNoise, r: f64, x: &Jet) -> Jet {
    x.scale_real(sn.beta)
        .add_scalar(c(r.powf(sn.alpha_n)))
        .recip()
        .scale_real(r * r)
}

fn xi3_jet(sn: &ShotNoise, r: f64, x: &Jet) -> Result<Jet, SpecFunError> {
    let (an, dn) = (sn.alpha_n, sn.delta_n());
    let ra = r.powf(an);
    let y = x.scale_real(sn.beta);
    let lead = y.scale_real(1.0 / ra).powf(-dn - 1.0);
    let denom = y.add_scalar(c(ra));
    let z = y.recip().scale_real(-ra);
    let f = hyp2f1_jet(1.0, dn + 1.0, 2.0 + dn, &z)?;
    let inner = &y.scale_real(2.0 + an) - &(&denom * &f).scale_real(2.0);
    Ok(&(&lead * &denom.recip()) * &inner)
}

/// Ξ₁(r) for PB gain state `gain`, i.e. at x = s·P_p·gain.
pub fn xi1(
    r: f64,
    s: ComplexValue,
    gain: f64,
    params: &NetworkParams,
) -> Result<ComplexValue, SpecFunError> {
    let x = Jet::constant(s * (params.p_p * gain), 0);
    Ok(xi1_jet(&ShotNoise::new(params), r, &x)?.value())
}

/// Ξ₂(r) for PB gain state `gain`.
pub fn xi2(r: f64, s: ComplexValue, gain: f64, params: &NetworkParams) -> ComplexValue {
    let x = Jet::constant(s * (params.p_p * gain), 0);
    xi2_jet(&ShotNoise::new(params), r, &x).value()
}

/// Ξ₃(r) for PB gain state `gain`.
pub fn xi3(
    r: f64,
    s: ComplexValue,
    gain: f64,
    params: &NetworkParams,
) -> Result<ComplexValue, SpecFunError> {
    let x = Jet::constant(s * (params.p_p * gain), 0);
    Ok(xi3_jet(&ShotNoise::new(params), r, &x)?.value())
}

/// LOS and NLOS parts of ψ(x) through the closed forms only, whatever the
/// size of x. Exposed for cross-checking the series branches.
pub fn exponent_closed_form(
    x: ComplexValue,
    params: &NetworkParams,
) -> Result<(ComplexValue, ComplexValue), SpecFunError> {
    let sn = ShotNoise::new(params);
    let xj = Jet::constant(x, 0);
    Ok((sn.los_closed(&xj)?.value(), sn.nlos_closed(&xj)?.value()))
}

/// Same split through the power series; only meaningful for small |x|.
pub fn exponent_series(x: ComplexValue, params: &NetworkParams) -> (ComplexValue, ComplexValue) {
    let sn = ShotNoise::new(params);
    let xj = Jet::constant(x, 0);
    (sn.los_series(&xj).value(), sn.nlos_series(&xj).value())
}
