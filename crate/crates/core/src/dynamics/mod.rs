//! Recurrent Hebbian network with consolidated weights and winner-take-all
//! activity.
//!
//! One iteration of the network reads the activity `V(t)` and weights `W(t)`:
//!
//! ```text
//! V(t+1) = H_c(W(t) . V(t) + I(t))
//! W(t+1) = S(eps * V(t) V(t)^T + W(t))
//! ```
//!
//! `H_c` is one of the winner-take-all rules in [`wta`] and `S` the
//! consolidation [`sigmoid`] applied to every weight.

pub mod config;
pub mod decode;
pub mod sigmoid;
pub mod weights;
pub mod wta;

use rand::Rng;

pub use config::{EnergyRule, NetworkConfig, TiePolicy};
pub use decode::{activity_to_message, ScoreSource, Selection};
pub use sigmoid::{sigmoid, weight_trajectory, weight_trajectory_from};
pub use weights::WeightMatrix;
pub use wta::{wta_clustered, wta_global};

use crate::activity::ActivityVector;
use crate::error::{Error, ParamError, Result};
use crate::message::Message;
use crate::noise::{sample_noisy_activity, NoiseChannel};

impl ScoreSource for WeightMatrix {
    fn dim(&self) -> usize {
        WeightMatrix::dim(self)
    }

    fn accumulate_scores(&self, active: &[usize], is_active: &[bool], scores: &mut [f64]) {
        WeightMatrix::accumulate_scores(self, active, is_active, scores)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HebbianNetwork {
    config: NetworkConfig,
    weights: WeightMatrix,
}

impl HebbianNetwork {
    /// Empty network (all weights zero).
    pub fn new(config: NetworkConfig) -> Result<Self> {
        config.validate()?;
        let weights = WeightMatrix::new(config.n, config.self_loops);
        Ok(Self { config, weights })
    }

    pub fn from_parts(config: NetworkConfig, weights: WeightMatrix) -> Result<Self> {
        config.validate()?;
        if weights.dim() != config.n {
            return Err(Error::DimensionMismatch {
                expected: config.n,
                found: weights.dim(),
            });
        }
        if weights.self_loops() != config.self_loops {
            return Err(Error::Format(
                "self_loops differs between config and weights".into(),
            ));
        }
        Ok(Self { config, weights })
    }

    pub fn config(&self) -> &NetworkConfig {
        &self.config
    }

    pub fn weights(&self) -> &WeightMatrix {
        &self.weights
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len == self.config.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.config.n,
                found: len,
            })
        }
    }

    fn select(&self, scores: &[f64]) -> ActivityVector {
        match self.config.energy_rule {
            EnergyRule::GlobalTopC => wta_global(scores, self.config.c, &self.config.tie_policy),
            EnergyRule::Clustered => {
                wta_clustered(scores, self.config.ell, &self.config.tie_policy)
            }
        }
    }

    /// One synchronous iteration: returns `V(t+1)` and moves the weights to
    /// `W(t+1)`. Both updates read the activity `v` given here.
    pub fn step(&mut self, v: &ActivityVector, input: &[f64]) -> Result<ActivityVector> {
        self.check_len(v.len())?;
        self.check_len(input.len())?;
        let active = v.active_units();
        let mut scores = input.to_vec();
        self.weights
            .accumulate_scores(&active, v.as_slice(), &mut scores);
        let next = self.select(&scores);
        self.weights.hebbian_update(&active, self.config.epsilon);
        Ok(next)
    }

    /// Presents `intended` for `n_it` iterations through a noisy channel,
    /// applying the Hebbian update to each noisy realization.
    ///
    /// The channel acts on the external input directly, not through
    /// winner-take-all: insertions can activate many units per cluster.
    pub fn learn_activity<R: Rng + ?Sized>(
        &mut self,
        intended: &ActivityVector,
        n_it: usize,
        channel: &NoiseChannel,
        rng: &mut R,
    ) -> Result<()> {
        self.check_len(intended.len())?;
        for _ in 0..n_it {
            let noisy = sample_noisy_activity(channel, intended, rng);
            self.weights
                .hebbian_update(&noisy.active_units(), self.config.epsilon);
        }
        Ok(())
    }

    /// Learns one message (one unit per cluster) for `n_it` iterations.
    pub fn learn_pattern<R: Rng + ?Sized>(
        &mut self,
        msg: &Message,
        n_it: usize,
        channel: &NoiseChannel,
        rng: &mut R,
    ) -> Result<()> {
        msg.check_length(self.config.c)?;
        if !msg.is_complete() {
            return Err(Error::Format(format!("cannot learn partial message {msg}")));
        }
        for (position, u) in msg.units().iter().flatten().enumerate() {
            if *u >= self.config.ell {
                return Err(ParamError::UnitOutOfRange {
                    position,
                    unit: *u,
                    ell: self.config.ell,
                }
                .into());
            }
        }
        let intended = ActivityVector::from_units(self.config.n, msg.global_units(self.config.ell));
        self.learn_activity(&intended, n_it, channel, rng)
    }

    /// Completes a partially erased message.
    ///
    /// Known units start active; every iteration scores all units against
    /// the active ones (transient weights count at face value), adds `gamma`
    /// to the currently active units and keeps one winner per cluster.
    /// Silent clusters come back erased.
    pub fn recall(&self, partial: &Message) -> Result<Message> {
        if self.config.energy_rule != EnergyRule::Clustered {
            return Err(Error::Format(
                "recall requires the clustered energy rule".into(),
            ));
        }
        partial.check_length(self.config.c)?;
        if partial.known_count() == 0 {
            return Err(Error::Format(
                "recall needs at least one known position".into(),
            ));
        }
        let start =
            ActivityVector::from_units(self.config.n, partial.global_units(self.config.ell));
        let end = decode::iterate(
            &self.weights,
            &start,
            self.config.gamma,
            self.config.decode_iterations,
            Selection::Clustered {
                ell: self.config.ell,
            },
            &self.config.tie_policy,
        );
        Ok(activity_to_message(&end, self.config.c, self.config.ell))
    }
}
