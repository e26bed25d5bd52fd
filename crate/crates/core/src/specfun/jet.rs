//! Truncated Taylor series ("jets") for propagating derivatives through
//! closed-form expressions by the chain rule.

use std::ops::{Add, Mul, Neg, Sub};

use super::{ComplexValue, DerivativeStack};

/// Taylor coefficients `f^{(j)}(s0) / j!` for `j = 0..=order`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    coeffs: Vec<ComplexValue>,
}

fn zero() -> ComplexValue {
    ComplexValue::new(0.0, 0.0)
}

impl Jet {
    pub fn constant(value: ComplexValue, order: usize) -> Self {
        let mut coeffs = vec![zero(); order + 1];
        coeffs[0] = value;
        Self { coeffs }
    }

    /// The independent variable itself, expanded about `at`.
    pub fn variable(at: ComplexValue, order: usize) -> Self {
        let mut jet = Self::constant(at, order);
        if order > 0 {
            jet.coeffs[1] = ComplexValue::new(1.0, 0.0);
        }
        jet
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn value(&self) -> ComplexValue {
        self.coeffs[0]
    }

    pub fn coeffs(&self) -> &[ComplexValue] {
        &self.coeffs
    }

    pub fn scale(&self, k: ComplexValue) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn scale_real(&self, k: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn add_scalar(&self, k: ComplexValue) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += k;
        out
    }

    pub fn recip(&self) -> Self {
        let n = self.order();
        let u0 = self.coeffs[0];
        let mut w = vec![zero(); n + 1];
        w[0] = u0.inv();
        for k in 1..=n {
            let mut acc = zero();
            for j in 1..=k {
                acc += self.coeffs[j] * w[k - j];
            }
            w[k] = -acc * w[0];
        }
        Self { coeffs: w }
    }

    /// Principal-branch power `u^p`; requires a nonzero constant term.
    pub fn powf(&self, p: f64) -> Self {
        let n = self.order();
        let u0 = self.coeffs[0];
        let mut w = vec![zero(); n + 1];
        w[0] = u0.powf(p);
        let inv_u0 = u0.inv();
        for k in 1..=n {
            let mut acc = zero();
            for j in 1..=k {
                acc += self.coeffs[j] * w[k - j] * (p * j as f64 - (k - j) as f64);
            }
            w[k] = acc * inv_u0 / k as f64;
        }
        Self { coeffs: w }
    }

    pub fn powi(&self, p: u32) -> Self {
        let mut out = Self::constant(ComplexValue::new(1.0, 0.0), self.order());
        for _ in 0..p {
            out = &out * self;
        }
        out
    }

    pub fn exp(&self) -> Self {
        let n = self.order();
        let mut w = vec![zero(); n + 1];
        w[0] = self.coeffs[0].exp();
        for k in 1..=n {
            let mut acc = zero();
            for j in 1..=k {
                acc += self.coeffs[j] * w[k - j] * j as f64;
            }
            w[k] = acc / k as f64;
        }
        Self { coeffs: w }
    }

    /// `f(u(s))` given `f`'s derivatives `f^{(j)}(u0)` at the jet's
    /// constant term.
    pub fn compose(&self, outer_derivs: &[ComplexValue]) -> Self {
        let n = self.order();
        assert!(
            outer_derivs.len() > n,
            "need outer derivatives up to the jet order"
        );
        let mut shift = self.clone();
        shift.coeffs[0] = zero();
        let mut out = Self::constant(outer_derivs[0], n);
        let mut power = Self::constant(ComplexValue::new(1.0, 0.0), n);
        let mut factorial = 1.0;
        for (j, &d) in outer_derivs.iter().enumerate().take(n + 1).skip(1) {
            power = &power * &shift;
            factorial *= j as f64;
            let w = d / factorial;
            for (o, p) in out.coeffs.iter_mut().zip(&power.coeffs) {
                *o += p * w;
            }
        }
        out
    }

    /// Convert to plain derivative values `f^{(j)}(s0)`.
    pub fn to_derivatives(&self) -> DerivativeStack {
        let mut factorial = 1.0;
        let values = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| {
                if j > 0 {
                    factorial *= j as f64;
                }
                c * factorial
            })
            .collect();
        DerivativeStack::new(values).expect("jets are never empty")
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        Jet {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        Jet {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let n = self.order().min(rhs.order());
        let mut coeffs = vec![zero(); n + 1];
        for (k, slot) in coeffs.iter_mut().enumerate() {
            for j in 0..=k {
                *slot += self.coeffs[j] * rhs.coeffs[k - j];
            }
        }
        Jet { coeffs }
    }
}
