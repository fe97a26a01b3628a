use serde::{Deserialize, Serialize};

use crate::error::ParamError;

/// How the number of simultaneously active units is limited.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EnergyRule {
    /// At most `c` units active anywhere in the network.
    GlobalTopC,
    /// `c` clusters of `ell` units, at most one active unit per cluster.
    #[default]
    Clustered,
}

/// Resolution of equal scores at the winner-take-all cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TiePolicy {
    #[default]
    LowestIndex,
    /// Every unit tied at the cutoff stays active, possibly exceeding the budget.
    KeepAll,
    /// Tied units are drawn with a generator keyed by `seed` and the group.
    SeededRandom { seed: u64 },
}

fn default_gamma() -> f64 {
    1.0
}

fn default_decode_iterations() -> usize {
    6
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawNetworkConfig")]
pub struct NetworkConfig {
    /// Total number of units.
    pub n: usize,
    /// Active-unit budget, which is also the cluster count.
    pub c: usize,
    /// Units per cluster.
    pub ell: usize,
    /// Hebbian increment.
    pub epsilon: f64,
    /// Score bonus for units active in the previous decoding iteration.
    pub gamma: f64,
    pub energy_rule: EnergyRule,
    pub tie_policy: TiePolicy,
    pub decode_iterations: usize,
    pub self_loops: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNetworkConfig {
    n: usize,
    c: usize,
    ell: usize,
    epsilon: f64,
    #[serde(default = "default_gamma")]
    gamma: f64,
    #[serde(default)]
    energy_rule: EnergyRule,
    #[serde(default)]
    tie_policy: TiePolicy,
    #[serde(default = "default_decode_iterations")]
    decode_iterations: usize,
    #[serde(default)]
    self_loops: bool,
}

impl TryFrom<RawNetworkConfig> for NetworkConfig {
    type Error = ParamError;

    fn try_from(r: RawNetworkConfig) -> Result<Self, ParamError> {
        let config = NetworkConfig {
            n: r.n,
            c: r.c,
            ell: r.ell,
            epsilon: r.epsilon,
            gamma: r.gamma,
            energy_rule: r.energy_rule,
            tie_policy: r.tie_policy,
            decode_iterations: r.decode_iterations,
            self_loops: r.self_loops,
        };
        config.validate()?;
        Ok(config)
    }
}

impl NetworkConfig {
    /// `c` clusters of `ell` units with default decoding settings.
    pub fn clustered(c: usize, ell: usize, epsilon: f64) -> Result<Self, ParamError> {
        let config = Self {
            n: c * ell,
            c,
            ell,
            epsilon,
            gamma: default_gamma(),
            energy_rule: EnergyRule::Clustered,
            tie_policy: TiePolicy::LowestIndex,
            decode_iterations: default_decode_iterations(),
            self_loops: false,
        };
        config.validate()?;
        Ok(config)
    }

    /// Unstructured network of `n` units with a budget of `c` active units.
    pub fn global(n: usize, c: usize, epsilon: f64) -> Result<Self, ParamError> {
        let config = Self {
            n,
            c,
            ell: n,
            epsilon,
            gamma: default_gamma(),
            energy_rule: EnergyRule::GlobalTopC,
            tie_policy: TiePolicy::LowestIndex,
            decode_iterations: default_decode_iterations(),
            self_loops: false,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        let out_of_range = |name, value: f64, range| ParamError::OutOfRange { name, value, range };
        if self.n == 0 {
            return Err(out_of_range("n", 0.0, "[1, inf)"));
        }
        if self.c == 0 || self.c > self.n {
            return Err(out_of_range("c", self.c as f64, "[1, n]"));
        }
        if self.energy_rule == EnergyRule::Clustered && self.c * self.ell != self.n {
            return Err(ParamError::Dimension {
                n: self.n,
                c: self.c,
                ell: self.ell,
            });
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(out_of_range("epsilon", self.epsilon, "(0, 1]"));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(out_of_range("gamma", self.gamma, "[0, inf)"));
        }
        if self.decode_iterations == 0 {
            return Err(out_of_range("decode_iterations", 0.0, "[1, inf)"));
        }
        Ok(())
    }
}
