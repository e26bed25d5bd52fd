use rand::Rng;
use serde::{Deserialize, Serialize};

use super::geometry::{sample_ppp, Disk, Point};
use super::{SimConfig, SimError, SimMode};
use crate::analytic::PowerLevels;
use crate::netmodel::{path_loss, Fading, GainDistribution, LinkState, NetworkParams};

/// What happened to the reference link in one trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleOutcome {
    /// Aggregate RF power harvested by the reference TX (W).
    pub p_pt: f64,
    pub active: bool,
    /// Transmit power, zero when inactive (W).
    pub p_tx: f64,
    /// SINR at the reference RX, absent when the TX is inactive.
    pub sinr: Option<f64>,
}

/// Transmit power of a TX that harvested `p_pt`, or `None` below the
/// activation threshold. Linear in `p_pt` up to the cap, flat beyond.
pub fn transmit_power(p_pt: f64, params: &NetworkParams) -> Option<f64> {
    if p_pt < params.gamma_pt {
        None
    } else if p_pt < params.harvest_cap() {
        Some(params.conversion() * p_pt)
    } else {
        Some(params.max_transmit_power())
    }
}

/// Power a TX at `tx` harvests from the beacons `pbs`. Gains and fading are
/// drawn only for links that are not in outage.
pub fn harvested_power<R: Rng + ?Sized>(
    tx: Point,
    pbs: &[Point],
    params: &NetworkParams,
    gains: &GainDistribution,
    fading: &Fading,
    rng: &mut R,
) -> f64 {
    let mut total = 0.0;
    for pb in pbs {
        let r = tx.distance(pb);
        let state = LinkState::at(r, params);
        if let Some(loss) = path_loss(r, state, params) {
            let g = gains.sample(rng);
            total += params.p_p * g * fading.sample(state, rng) * loss;
        }
    }
    total
}

/// Harvested power at `tx` from a fresh PB realization covering its whole
/// `r_max` neighborhood.
pub fn simulate_pt<R: Rng + ?Sized>(tx: Point, params: &NetworkParams, rng: &mut R) -> f64 {
    let fading = Fading::new(params.m).expect("validated params have m >= 1");
    let pbs = sample_ppp(params.lambda_p, Disk::new(tx, params.r_max), rng);
    harvested_power(tx, &pbs, params, &params.harvest_gains(), &fading, rng)
}

/// Per-run constants shared by every trial.
pub(crate) struct Scene<'a> {
    pub params: &'a NetworkParams,
    pub mode: SimMode,
    pub harvest: GainDistribution,
    pub link: GainDistribution,
    pub fading: Fading,
    pub pb_window: Disk,
    /// Rungs used to discretize transmit powers in matched mode.
    pub ladder: Option<PowerLevels>,
}

impl<'a> Scene<'a> {
    pub fn new(params: &'a NetworkParams, sim: &SimConfig) -> Result<Self, SimError> {
        params.validate()?;
        sim.validate(params)?;
        let ladder = match sim.mode {
            SimMode::Faithful => None,
            SimMode::AssumptionMatched => Some(PowerLevels::ladder(params)?),
        };
        Ok(Self {
            params,
            mode: sim.mode,
            harvest: params.harvest_gains(),
            link: params.link_gains(),
            fading: Fading::new(params.m)?,
            pb_window: Disk::new(Point::ORIGIN, params.r_max + sim.padding(params)),
            ladder,
        })
    }

    fn own_neighborhood<R: Rng + ?Sized>(&self, tx: Point, rng: &mut R) -> f64 {
        let pbs = sample_ppp(self.params.lambda_p, Disk::new(tx, self.params.r_max), rng);
        harvested_power(tx, &pbs, self.params, &self.harvest, &self.fading, rng)
    }

    /// Transmit power on the rung `p_pt` falls on.
    fn rung_power(&self, p_pt: f64) -> Option<f64> {
        let ladder = self.ladder.as_ref().expect("matched mode carries a ladder");
        ladder.rung(p_pt).map(|n| ladder.p_t[n])
    }

    /// Interference at the RX (origin) from a TX field, with each TX's
    /// transmit power supplied by `power_of`.
    fn interference<R, F>(&self, rng: &mut R, mut power_of: F) -> f64
    where
        R: Rng + ?Sized,
        F: FnMut(Point, &mut R) -> Option<f64>,
    {
        let p = self.params;
        // TXs beyond r_max are in outage at the RX and cannot interfere.
        let txs = sample_ppp(p.lambda_t, Disk::new(Point::ORIGIN, p.r_max), rng);
        let mut total = 0.0;
        for x in txs {
            let r = x.distance(&Point::ORIGIN);
            let state = LinkState::at(r, p);
            let Some(loss) = path_loss(r, state, p) else {
                continue;
            };
            let Some(p_tx) = power_of(x, rng) else {
                continue;
            };
            let d = self.link.sample(rng);
            total += p_tx * d * self.fading.sample(state, rng) * loss;
        }
        total
    }

    /// Interference plus noise at the RX with matched-mode interferers.
    pub fn matched_interference_plus_noise<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let i = self.interference(rng, |x, rng| self.rung_power(self.own_neighborhood(x, rng)));
        i + self.params.sigma2
    }

    pub fn trial<R: Rng + ?Sized>(&self, rng: &mut R) -> SampleOutcome {
        let p = self.params;
        let ref_tx = Point::new(p.d0, 0.0);
        let (p_pt, p_tx, interference) = match self.mode {
            SimMode::Faithful => {
                let pbs = sample_ppp(p.lambda_p, self.pb_window, rng);
                let p_pt = harvested_power(ref_tx, &pbs, p, &self.harvest, &self.fading, rng);
                let Some(p_tx) = transmit_power(p_pt, p) else {
                    return SampleOutcome::inactive(p_pt);
                };
                let i = self.interference(rng, |x, rng| {
                    transmit_power(
                        harvested_power(x, &pbs, p, &self.harvest, &self.fading, rng),
                        p,
                    )
                });
                (p_pt, p_tx, i)
            }
            SimMode::AssumptionMatched => {
                let p_pt = self.own_neighborhood(ref_tx, rng);
                let Some(p_tx) = self.rung_power(p_pt) else {
                    return SampleOutcome::inactive(p_pt);
                };
                let i =
                    self.interference(rng, |x, rng| self.rung_power(self.own_neighborhood(x, rng)));
                (p_pt, p_tx, i)
            }
        };
        let loss = path_loss(p.d0, LinkState::Los, p).expect("LOS links always carry power");
        let h = self.fading.sample(LinkState::Los, rng);
        let signal = p_tx * p.desired_gain() * h * loss;
        SampleOutcome {
            p_pt,
            active: true,
            p_tx,
            sinr: Some(signal / (interference + p.sigma2)),
        }
    }
}

impl SampleOutcome {
    fn inactive(p_pt: f64) -> Self {
        Self {
            p_pt,
            active: false,
            p_tx: 0.0,
            sinr: None,
        }
    }
}
