//! Small-scale fading samplers. Both are unit-mean power gains.

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};

use super::{LinkState, ModelError};

#[derive(Debug, Clone, Copy)]
pub struct Fading {
    /// `None` switches fading off: every link that is not in outage gets
    /// power gain 1.
    los: Option<Gamma<f64>>,
}

impl Fading {
    /// Gamma(m, 1/m) on LOS links, unit exponential on NLOS links.
    pub fn new(m: u32) -> Result<Self, ModelError> {
        let shape = m as f64;
        let los = Gamma::new(shape, 1.0 / shape)
            .map_err(|e| ModelError::Domain(format!("Nakagami shape {m}: {e}")))?;
        Ok(Self { los: Some(los) })
    }

    /// No fading at all.
    pub fn none() -> Self {
        Self { los: None }
    }

    /// Power gain for a link in `state`; OUT links carry nothing.
    pub fn sample<R: Rng + ?Sized>(&self, state: LinkState, rng: &mut R) -> f64 {
        match (state, &self.los) {
            (LinkState::Out, _) => 0.0,
            (_, None) => 1.0,
            (LinkState::Los, Some(gamma)) => gamma.sample(rng),
            (LinkState::Nlos, Some(_)) => Exp1.sample(rng),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn unit_mean() {
        let f = Fading::new(5).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let n = 1_000_000;
        for state in [LinkState::Los, LinkState::Nlos] {
            let mean = (0..n).map(|_| f.sample(state, &mut rng)).sum::<f64>() / n as f64;
            assert!((mean - 1.0).abs() < 0.005, "{state:?}: {mean}");
        }
        assert_eq!(f.sample(LinkState::Out, &mut rng), 0.0);
    }
}
