use serde::{Deserialize, Serialize};

use super::NetworkParams;

/// Blockage state of a link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LinkState {
    Los,
    Nlos,
    Out,
}

impl LinkState {
    /// Deterministic state of a link of length `r`; `r_min` itself is NLOS
    /// and `r_max` itself is OUT.
    pub fn at(r: f64, params: &NetworkParams) -> Self {
        if r < params.r_min {
            LinkState::Los
        } else if r < params.r_max {
            LinkState::Nlos
        } else {
            LinkState::Out
        }
    }
}

/// `(p_los, p_nlos, p_out)` for a link of length `r`.
pub fn link_state_probs(r: f64, params: &NetworkParams) -> (f64, f64, f64) {
    match LinkState::at(r, params) {
        LinkState::Los => (1.0, 0.0, 0.0),
        LinkState::Nlos => (0.0, 1.0, 0.0),
        LinkState::Out => (0.0, 0.0, 1.0),
    }
}

/// Bounded multi-slope path loss for a link of length `r` in `state`.
/// `None` means the link is in outage and carries no power at all.
pub fn path_loss(r: f64, state: LinkState, params: &NetworkParams) -> Option<f64> {
    match state {
        LinkState::Los if r < 1.0 => Some(1.0),
        LinkState::Los => Some(r.powf(-params.alpha_l)),
        LinkState::Nlos => Some(params.beta() * r.powf(-params.alpha_n)),
        LinkState::Out => None,
    }
}

/// Path loss with the state implied by `r`.
pub fn path_loss_at(r: f64, params: &NetworkParams) -> Option<f64> {
    path_loss(r, LinkState::at(r, params), params)
}
