//! Physical-layer model: blockage, path loss, fading, beam gains, units.

mod antenna;
mod fading;
mod params;
mod propagation;
pub mod units;

pub use antenna::{array_to_pattern, gain_pmf, AntennaPattern, GainDistribution};
pub use fading::Fading;
pub use params::NetworkParams;
pub use propagation::{link_state_probs, path_loss, path_loss_at, LinkState};
pub use units::{dbm_to_watts, power_density_at, watts_to_dbm};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("invalid {field}: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
    #[error("domain error: {0}")]
    Domain(String),
}
