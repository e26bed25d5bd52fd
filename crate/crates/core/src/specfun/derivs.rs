use serde::{Deserialize, Serialize};

use super::{ComplexValue, SpecFunError};

/// Values of a scalar function and its derivatives at one point:
/// entry `j` holds the `j`-th derivative, entry 0 the value itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeStack {
    values: Vec<ComplexValue>,
}

impl DerivativeStack {
    pub fn new(values: Vec<ComplexValue>) -> Result<Self, SpecFunError> {
        if values.is_empty() {
            return Err(SpecFunError::Domain {
                function: "DerivativeStack::new",
                detail: "a derivative stack needs at least the function value".into(),
            });
        }
        Ok(Self { values })
    }

    pub fn from_real(values: &[f64]) -> Result<Self, SpecFunError> {
        Self::new(values.iter().map(|&v| ComplexValue::new(v, 0.0)).collect())
    }

    /// Highest derivative order held.
    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn value(&self) -> ComplexValue {
        self.values[0]
    }

    pub fn get(&self, order: usize) -> Option<ComplexValue> {
        self.values.get(order).copied()
    }

    pub fn values(&self) -> &[ComplexValue] {
        &self.values
    }
}

/// Derivatives of `exp(g)` from the derivatives of `g`.
///
/// Uses the complete Bell polynomial recursion
/// `Y_{n+1} = Σ_{k=0}^{n} C(n, k) Y_{n-k} g^{(k+1)}` with `Y_0 = exp(g)`.
pub fn assemble_exp_derivatives(g: &DerivativeStack) -> Result<DerivativeStack, SpecFunError> {
    let order = g.order();
    let gv = g.values();
    let mut out = Vec::with_capacity(order + 1);
    out.push(gv[0].exp());
    for n in 0..order {
        let mut binom = 1.0;
        let mut acc = ComplexValue::new(0.0, 0.0);
        for k in 0..=n {
            acc += out[n - k] * gv[k + 1] * binom;
            binom = binom * (n - k) as f64 / (k + 1) as f64;
        }
        out.push(acc);
    }
    if out.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(SpecFunError::Overflow {
            function: "assemble_exp_derivatives",
        });
    }
    Ok(DerivativeStack { values: out })
}
