//! Coverage analysis for power-beacon-assisted millimeter-wave ad hoc
//! networks.
//!
//! Transmitters harvest energy from a Poisson field of power beacons and
//! spend it on a directional mmWave link to their receiver. The crate
//! computes three probabilities for a reference link:
//!
//! * power coverage: the harvested RF power clears the activation threshold;
//! * channel coverage: given an active transmitter, the receiver's SINR
//!   clears its threshold;
//! * total coverage: both at once.
//!
//! [`analytic`] evaluates them from closed-form Laplace transforms with
//! numerical inversion; [`simcore`] estimates them by Monte Carlo over the
//! same physical model in [`netmodel`].

pub mod analytic;
pub mod netmodel;
pub mod simcore;
pub mod specfun;

pub use analytic::{AnalyticError, CoverageResult, InversionParams, PowerLevels};
pub use netmodel::{AntennaPattern, GainDistribution, LinkState, ModelError, NetworkParams};
pub use simcore::{SampleOutcome, SimConfig, SimError, SimMode};
pub use specfun::{ComplexValue, DerivativeStack, SpecFunError};
