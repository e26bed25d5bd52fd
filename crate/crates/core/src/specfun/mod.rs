//! Special functions and derivative bookkeeping used by the analytic engine.

mod derivs;
mod gamma;
mod hyp2f1;
mod jet;

pub use derivs::{assemble_exp_derivatives, DerivativeStack};
pub use gamma::{digamma, gamma, ln_gamma, reciprocal_gamma, upper_incomplete_gamma};
pub use hyp2f1::gauss_2f1;
pub use jet::Jet;

/// Complex scalar used for Laplace-domain arguments.
pub type ComplexValue = num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecFunError {
    #[error("{function}: domain error: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },
    #[error("{function}: failed to converge")]
    NoConvergence { function: &'static str },
    #[error("{function}: result overflowed")]
    Overflow { function: &'static str },
}

/// n-th derivative of ₂F₁ in z, from the contiguous relation
/// d^n/dz^n F(a,b;c;z) = (a)_n (b)_n / (c)_n · F(a+n, b+n; c+n; z).
pub fn gauss_2f1_derivative(
    a: f64,
    b: f64,
    c: f64,
    n: usize,
    z: ComplexValue,
) -> Result<ComplexValue, SpecFunError> {
    let mut scale = 1.0;
    for i in 0..n {
        let i = i as f64;
        scale *= (a + i) * (b + i) / (c + i);
    }
    if scale == 0.0 {
        return Ok(ComplexValue::new(0.0, 0.0));
    }
    let nf = n as f64;
    Ok(gauss_2f1(a + nf, b + nf, c + nf, z)? * scale)
}
