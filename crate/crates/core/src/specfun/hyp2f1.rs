//! Gauss hypergeometric function ₂F₁(a, b; c; z) for real parameters and
//! complex argument.
//!
//! Evaluation picks, per call, whichever of these maps lands the series
//! variable closest to the origin:
//!
//! * the Maclaurin series in `z`;
//! * the Pfaff map `z -> z/(z-1)`, which turns the negative real axis into
//!   `(0, 1)` and so gives a positive-term series there;
//! * the `z -> 1/z` connection formula, including its logarithmic form when
//!   `b - a` is an integer.
//!
//! If none of them gets within [`SERIES_RADIUS`] of the origin (the lens
//! around `z = 1`, or connection formulas that degenerate), the value is
//! continued along a ray from the origin by Taylor-stepping the
//! hypergeometric differential equation.

use num_complex::Complex64;

use super::gamma::{digamma, gamma_ratio, is_nonpositive_integer, ln_gamma_signed};
use super::SpecFunError;

/// Largest series-variable modulus accepted without analytic continuation.
const SERIES_RADIUS: f64 = 0.8;
const MAX_TERMS: usize = 5_000;
const EPS: f64 = 1e-17;

/// Distance from an integer under which `b - a` is treated as integral.
const INTEGER_SNAP: f64 = 1e-12;
/// Distance from an integer under which the generic 1/z formula loses too
/// many digits to cancellation.
const NEAR_INTEGER: f64 = 0.02;

/// ₂F₁(a, b; c; z).
///
/// `c` must not be a non-positive integer and `z` must not lie on the cut
/// `[1, ∞)` of the real axis.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: Complex64) -> Result<Complex64, SpecFunError> {
    if !(a.is_finite() && b.is_finite() && c.is_finite() && z.re.is_finite() && z.im.is_finite()) {
        return Err(SpecFunError::Domain {
            function: "gauss_2f1",
            detail: format!("non-finite input a={a}, b={b}, c={c}, z={z}"),
        });
    }
    if is_nonpositive_integer(c) {
        return Err(SpecFunError::Domain {
            function: "gauss_2f1",
            detail: format!("c = {c} is a non-positive integer"),
        });
    }
    if z.im == 0.0 && z.re >= 1.0 {
        return Err(SpecFunError::Domain {
            function: "gauss_2f1",
            detail: format!("z = {} lies on the branch cut [1, inf)", z.re),
        });
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        // Terminating series: a polynomial, valid everywhere.
        return maclaurin(a, b, c, z);
    }

    let r_direct = z.norm();
    let w = z / (z - 1.0);
    let r_pfaff = w.norm();
    let r_inverse = 1.0 / r_direct;

    let best = r_direct.min(r_pfaff).min(r_inverse);
    if best > SERIES_RADIUS {
        return continue_along_ray(a, b, c, z);
    }
    if r_pfaff <= r_direct && r_pfaff <= r_inverse {
        // Pfaff: (1 - z)^{-a} F(a, c - b; c; z/(z-1))
        let scale = (Complex64::new(1.0, 0.0) - z).powf(-a);
        return Ok(scale * maclaurin(a, c - b, c, w)?);
    }
    if r_direct <= r_inverse {
        return maclaurin(a, b, c, z);
    }
    match inverse_argument(a, b, c, z)? {
        Some(v) => Ok(v),
        None => continue_along_ray(a, b, c, z),
    }
}

/// Plain power series; callers guarantee |z| is small enough.
fn maclaurin(a: f64, b: f64, c: f64, z: Complex64) -> Result<Complex64, SpecFunError> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut small_run = 0;
    for n in 0..MAX_TERMS {
        let n = n as f64;
        term *= z * ((a + n) * (b + n) / ((c + n) * (n + 1.0)));
        if term.norm() == 0.0 {
            return Ok(sum);
        }
        sum += term;
        if term.norm() <= EPS * sum.norm() {
            small_run += 1;
            if small_run == 2 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(SpecFunError::NoConvergence {
        function: "gauss_2f1 series",
    })
}

/// The 1/z connection formula. Returns `Ok(None)` when the parameters sit in
/// a configuration the formula cannot evaluate accurately.
fn inverse_argument(
    a: f64,
    b: f64,
    c: f64,
    z: Complex64,
) -> Result<Option<Complex64>, SpecFunError> {
    let diff = b - a;
    let nearest = diff.round();
    let offset = diff - nearest;
    if offset.abs() <= INTEGER_SNAP * diff.abs().max(1.0) {
        return inverse_argument_integer(a, nearest, c, z);
    }
    if offset.abs() < NEAR_INTEGER {
        return inverse_argument_interpolated(a, nearest, offset, c, z);
    }
    inverse_argument_generic(a, b, c, z).map(Some)
}

fn inverse_argument_generic(
    a: f64,
    b: f64,
    c: f64,
    z: Complex64,
) -> Result<Complex64, SpecFunError> {
    let inv = z.inv();
    let minus_z = -z;
    let first = gamma_ratio(&[c, b - a], &[b, c - a])?;
    let second = gamma_ratio(&[c, a - b], &[a, c - b])?;
    let mut value = Complex64::new(0.0, 0.0);
    if first != 0.0 {
        value += first * minus_z.powf(-a) * maclaurin(a, a - c + 1.0, a - b + 1.0, inv)?;
    }
    if second != 0.0 {
        value += second * minus_z.powf(-b) * maclaurin(b, b - c + 1.0, b - a + 1.0, inv)?;
    }
    Ok(value)
}

fn inverse_argument_integer(
    a: f64,
    diff: f64,
    c: f64,
    z: Complex64,
) -> Result<Option<Complex64>, SpecFunError> {
    let steps = diff.abs().round() as usize;
    if diff >= 0.0 {
        inverse_argument_log(a, steps, c, z)
    } else {
        inverse_argument_log(a + diff, steps, c, z)
    }
}

/// F(a, b; c; z) with `b = a + diff + offset`, `diff` an integer and
/// `offset` too small for the generic formula. F is entire in `b`, so
/// interpolate through Chebyshev nodes around `a + diff`: the centre node
/// uses the logarithmic form and the rest sit far enough away for the
/// generic formula.
fn inverse_argument_interpolated(
    a: f64,
    diff: f64,
    offset: f64,
    c: f64,
    z: Complex64,
) -> Result<Option<Complex64>, SpecFunError> {
    const NODES: usize = 19;
    const HALF_WIDTH: f64 = 0.05;
    let t = offset / HALF_WIDTH;
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for j in 0..NODES {
        let angle = (2 * j + 1) as f64 * std::f64::consts::PI / (2 * NODES) as f64;
        let node = angle.cos();
        let weight = if j % 2 == 0 {
            angle.sin()
        } else {
            -angle.sin()
        };
        let value = if j == NODES / 2 {
            match inverse_argument_integer(a, diff, c, z)? {
                Some(v) => v,
                None => return Ok(None),
            }
        } else {
            inverse_argument_generic(a, a + diff + HALF_WIDTH * node, c, z)?
        };
        let k = weight / (t - node);
        num += value * k;
        den += k;
    }
    Ok(Some(num / den))
}

/// Logarithmic 1/z expansion for F(a, a + m; c; z), m a non-negative integer.
///
/// With x = c - a the reciprocal gammas 1/Γ(x - j) and the products
/// ψ(x - j)/Γ(x - j) are rewritten through the falling products
/// P_j = Π_{i=1..j} (x - i) and their x-derivatives S_j, which stay finite
/// when x - j crosses a pole.
fn inverse_argument_log(
    a: f64,
    m: usize,
    c: f64,
    z: Complex64,
) -> Result<Option<Complex64>, SpecFunError> {
    let x = c - a;
    if is_nonpositive_integer(x) {
        return Ok(None);
    }
    let mf = m as f64;
    let (ln_gc, sign_gc) = ln_gamma_signed(c).expect("c checked by caller");
    let (ln_gx, sign_gx) = ln_gamma_signed(x).expect("x is not a pole");
    let lead_scale = sign_gc * sign_gx * (ln_gc - ln_gx).exp();
    let psi_x = digamma(x)?;

    let minus_z = -z;
    let log_minus_z = minus_z.ln();
    let inv = z.inv();

    // Falling products P_j and S_j = dP_j/dx up to j = m.
    let mut p = 1.0;
    let mut s = 0.0;

    // Finite part: Σ_{k<m} (a)_k (m-k-1)! / k! · P_k · z^{-k}, divided by Γ(a+m).
    let mut finite = Complex64::new(0.0, 0.0);
    if m > 0 {
        let mut poch = 1.0;
        let mut fact_k = 1.0;
        let mut zpow = Complex64::new(1.0, 0.0);
        for k in 0..m {
            let kf = k as f64;
            if k > 0 {
                poch *= a + kf - 1.0;
                fact_k *= kf;
                zpow *= inv;
                s = s * (x - kf) + p;
                p *= x - kf;
            }
            let fact_rest: f64 = (1..(m - k)).map(|i| i as f64).product();
            finite += zpow * (poch * fact_rest / fact_k * p);
        }
        let (ln_gb, sign_gb) = ln_gamma_signed(a + mf).expect("a + m positive here");
        finite *= sign_gb * (-ln_gb).exp();
        s = s * (x - mf) + p;
        p *= x - mf;
    }

    // Logarithmic part: Σ_k (a+m)_k (-1)^k / (k! (k+m)!) z^{-k-m} (P_{k+m}·L_k + S_{k+m}).
    // The coefficient and P, S are carried as products so neither overflows.
    let recip_ga = match ln_gamma_signed(a) {
        Some((l, sg)) => sg * (-l).exp(),
        None => 0.0,
    };
    let mut series = Complex64::new(0.0, 0.0);
    if recip_ga != 0.0 {
        let fact_m: f64 = (1..=m).map(|i| i as f64).product();
        let mut cp = p / fact_m;
        let mut cs = s / fact_m;
        let mut zpow = inv.powu(m as u32);
        let mut psi_k1 = digamma(1.0)?;
        let mut psi_km1 = digamma(mf + 1.0)?;
        let mut psi_akm = digamma(a + mf)?;
        let mut small_run = 0;
        let mut converged = false;
        for k in 0..MAX_TERMS {
            let kf = k as f64;
            if k > 0 {
                let ratio = -(a + mf + kf - 1.0) / (kf * (kf + mf));
                let j = mf + kf;
                cs = ratio * (cs * (x - j) + cp);
                cp = ratio * cp * (x - j);
                zpow *= inv;
                psi_k1 += 1.0 / kf;
                psi_km1 += 1.0 / (kf + mf);
                psi_akm += 1.0 / (a + mf + kf - 1.0);
            }
            let bracket = cp * (log_minus_z + (psi_k1 + psi_km1 - psi_akm - psi_x)) + cs;
            let term = zpow * bracket;
            series += term;
            if term.norm() <= EPS * series.norm() && k > 1 {
                small_run += 1;
                if small_run == 2 {
                    converged = true;
                    break;
                }
            } else {
                small_run = 0;
            }
        }
        if !converged {
            return Err(SpecFunError::NoConvergence {
                function: "gauss_2f1 log expansion",
            });
        }
        series *= recip_ga;
    }

    Ok(Some(minus_z.powf(-a) * lead_scale * (finite + series)))
}

/// Analytic continuation of F along the ray from the origin to `z` by
/// Taylor-stepping z(1-z)F'' + [c - (a+b+1)z]F' - abF = 0.
fn continue_along_ray(a: f64, b: f64, c: f64, z: Complex64) -> Result<Complex64, SpecFunError> {
    let dir = z / z.norm();
    let mut z0 = dir * 0.5;
    let mut f = maclaurin(a, b, c, z0)?;
    let mut df = maclaurin(a + 1.0, b + 1.0, c + 1.0, z0)? * (a * b / c);

    let q1 = -(a + b + 1.0);
    let ab = a * b;
    for _ in 0..20_000 {
        let remaining = z - z0;
        if remaining.norm() <= 1e-15 * z.norm() {
            return Ok(f);
        }
        let radius = z0.norm().min((Complex64::new(1.0, 0.0) - z0).norm());
        let h = if remaining.norm() <= 0.5 * radius {
            remaining
        } else {
            dir * (0.5 * radius)
        };

        let p0 = z0 * (Complex64::new(1.0, 0.0) - z0);
        let p1 = Complex64::new(1.0, 0.0) - z0 * 2.0;
        let q0 = c + q1 * z0;

        // y_n are Taylor coefficients at z0; track Σ y_n h^n and Σ n y_n h^{n-1}.
        let mut y_prev = f;
        let mut y_curr = df;
        let mut hp = h; // h^n for n = 1
        let mut val = f + y_curr * h;
        let mut der = y_curr;
        let mut small_run = 0;
        let mut converged = false;
        for n in 0..MAX_TERMS {
            let nf = n as f64;
            let y_next = -((p1 * nf + q0) * (nf + 1.0) * y_curr
                + (-nf * (nf - 1.0) + q1 * nf - ab) * y_prev)
                / (p0 * ((nf + 2.0) * (nf + 1.0)));
            let term_der = y_next * hp * (nf + 2.0);
            hp *= h;
            let term_val = y_next * hp;
            val += term_val;
            der += term_der;
            y_prev = y_curr;
            y_curr = y_next;
            if term_val.norm() <= EPS * val.norm() && term_der.norm() <= EPS * der.norm() {
                small_run += 1;
                if small_run == 3 {
                    converged = true;
                    break;
                }
            } else {
                small_run = 0;
            }
        }
        if !converged {
            return Err(SpecFunError::NoConvergence {
                function: "gauss_2f1 continuation",
            });
        }
        f = val;
        df = der;
        z0 += h;
    }
    Err(SpecFunError::NoConvergence {
        function: "gauss_2f1 continuation",
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn zero_argument_is_one() {
        assert_eq!(gauss_2f1(2.3, -0.4, 1.7, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn log_identity_at_minus_one() {
        let v = gauss_2f1(1.0, 1.0, 2.0, c(-1.0, 0.0)).unwrap();
        assert!(rel(v, c(2f64.ln(), 0.0)) < 1e-14, "{v}");
    }

    #[test]
    fn log_identity_across_ladder() {
        // ₂F₁(1,1;2;z) = -ln(1-z)/z, exercised on every rung.
        for &z in &[
            c(-0.3, 0.0),
            c(0.6, 0.1),
            c(-3.0, 0.0),
            c(-250.0, 40.0),
            c(-1e7, 0.0),
            c(1.2, 0.3),
            c(0.9, -0.5),
            c(3.0, 1e-3),
        ] {
            let exact = -(c(1.0, 0.0) - z).ln() / z;
            let v = gauss_2f1(1.0, 1.0, 2.0, z).unwrap();
            assert!(rel(v, exact) < 1e-12, "z={z}: {v} vs {exact}");
        }
    }

    #[test]
    fn polynomial_case() {
        // F(-2, b; c; z) = 1 - 2bz/c + b(b+1)z²/(c(c+1))
        let (b, cc) = (1.5, 2.5);
        let z = c(-7.0, 2.0);
        let exact = c(1.0, 0.0) - z * (2.0 * b / cc) + z * z * (b * (b + 1.0) / (cc * (cc + 1.0)));
        assert!(rel(gauss_2f1(-2.0, b, cc, z).unwrap(), exact) < 1e-14);
    }

    #[test]
    fn power_identity() {
        // F(a, b; b; z) = (1 - z)^{-a}
        for &z in &[c(-0.4, 0.0), c(-20.0, 3.0), c(0.95, 0.2), c(-1e5, 0.0)] {
            let exact = (c(1.0, 0.0) - z).powf(-2.5);
            let v = gauss_2f1(2.5, 0.7, 0.7, z).unwrap();
            assert!(rel(v, exact) < 1e-11, "z={z}: {v} vs {exact}");
        }
    }

    #[test]
    fn rejects_cut_and_bad_c() {
        assert!(gauss_2f1(1.0, 1.0, 2.0, c(1.5, 0.0)).is_err());
        assert!(gauss_2f1(1.0, 1.0, -2.0, c(0.1, 0.0)).is_err());
        assert!(gauss_2f1(f64::NAN, 1.0, 2.0, c(0.1, 0.0)).is_err());
    }
}
