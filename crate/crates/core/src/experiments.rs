//! Learning random datasets under noise and comparing the result with the
//! binary clique memory that stores the same messages.
//!
//! All randomness is drawn from streams keyed by the master seed, a purpose
//! label and the work-item indices (see [`crate::seed`]), so results do not
//! depend on how many threads execute the work items.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clique::CliqueNetwork;
use crate::dynamics::{EnergyRule, HebbianNetwork, NetworkConfig, WeightMatrix};
use crate::error::{Error, ParamError, Result};
use crate::message::Message;
use crate::noise::NoiseChannel;
use crate::seed;

/// Weights at or above this value count as present connections.
pub const BINARIZE_THRESHOLD: f64 = 0.5;

/// One learning experiment: `messages` random patterns, each presented for
/// `n_it` noisy iterations, repeated `trials` times.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawExperimentSpec")]
pub struct ExperimentSpec {
    pub config: NetworkConfig,
    pub channel: NoiseChannel,
    #[serde(rename = "M")]
    pub messages: usize,
    pub n_it: usize,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExperimentSpec {
    config: NetworkConfig,
    channel: NoiseChannel,
    #[serde(rename = "M")]
    messages: usize,
    n_it: usize,
    #[serde(default = "one")]
    trials: usize,
    #[serde(default)]
    seed: u64,
}

fn one() -> usize {
    1
}

impl TryFrom<RawExperimentSpec> for ExperimentSpec {
    type Error = ParamError;

    fn try_from(r: RawExperimentSpec) -> Result<Self, ParamError> {
        let spec = ExperimentSpec {
            config: r.config,
            channel: r.channel,
            messages: r.messages,
            n_it: r.n_it,
            trials: r.trials,
            seed: r.seed,
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), ParamError> {
        self.config.validate()?;
        if self.config.energy_rule != EnergyRule::Clustered {
            return Err(ParamError::OutOfRange {
                name: "energy_rule",
                value: 0.0,
                range: "{clustered} (messages need clusters)",
            });
        }
        for (name, value) in [
            ("M", self.messages),
            ("n_it", self.n_it),
            ("trials", self.trials),
        ] {
            if value == 0 {
                return Err(ParamError::OutOfRange {
                    name,
                    value: 0.0,
                    range: "[1, inf)",
                });
            }
        }
        Ok(())
    }
}

/// Connection differences between a learned network and its reference, in
/// ordered pairs (each undirected edge counts twice).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonResult {
    pub connections: u64,
    pub added: u64,
    pub erased: u64,
}

/// Binarizes `hebb` at 1/2 and counts the edges it adds to or misses from
/// `reference`. The diagonal is ignored.
pub fn compare_networks(
    hebb: &WeightMatrix,
    reference: &CliqueNetwork,
) -> Result<ComparisonResult> {
    let n = reference.n();
    if hebb.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: hebb.dim(),
        });
    }
    let learned = hebb.binarize(BINARIZE_THRESHOLD);
    let stored = reference.adjacency();
    let mut added = 0u64;
    let mut erased = 0u64;
    for i in 0..n {
        for (w, (&a, &b)) in learned.row(i).iter().zip(stored.row(i)).enumerate() {
            let mut extra = a & !b;
            let mut missing = b & !a;
            // mask out the diagonal
            if w == i / 64 {
                let bit = 1u64 << (i % 64);
                extra &= !bit;
                missing &= !bit;
            }
            added += u64::from(extra.count_ones());
            erased += u64::from(missing.count_ones());
        }
    }
    Ok(ComparisonResult {
        connections: reference.ordered_pair_count() as u64,
        added,
        erased,
    })
}

/// Expected ordered-pair edge count after storing `m` uniform random
/// messages: `2 C(c,2) ell^2 (1 - (1 - 1/ell^2)^m)`.
pub fn expected_edges(m: usize, c: usize, ell: usize) -> f64 {
    let slots = (ell * ell) as f64;
    let pairs = (c * (c - 1) / 2) as f64;
    2.0 * pairs * slots * expected_density(m, ell)
}

/// Expected density after `m` uniform random messages: `1 - (1 - 1/ell^2)^m`.
pub fn expected_density(m: usize, ell: usize) -> f64 {
    let slots = (ell * ell) as f64;
    // ln_1p keeps precision for large ell
    -(m as f64 * (-1.0 / slots).ln_1p()).exp_m1()
}

/// The dataset of trial `trial`: `count` uniform messages.
pub fn random_messages(
    c: usize,
    ell: usize,
    count: usize,
    master: u64,
    trial: u64,
) -> Vec<Message> {
    let mut rng = seed::stream(master, "messages", &[trial]);
    (0..count)
        .map(|_| Message::random(c, ell, &mut rng))
        .collect()
}

/// One measured row of the learning comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table1Row {
    pub n_it: usize,
    #[serde(rename = "M")]
    pub messages: usize,
    pub trial: usize,
    pub connections: u64,
    pub added: u64,
    pub erased: u64,
}

/// Learns and stores the dataset of one trial, returning both networks.
pub fn learn_trial(spec: &ExperimentSpec, trial: usize) -> Result<(HebbianNetwork, CliqueNetwork)> {
    let cfg = &spec.config;
    let messages = random_messages(cfg.c, cfg.ell, spec.messages, spec.seed, trial as u64);
    let mut hebb = HebbianNetwork::new(cfg.clone())?;
    let mut reference = CliqueNetwork::new(cfg.c, cfg.ell)?;
    let mut rng = seed::stream(spec.seed, "learning-noise", &[trial as u64]);
    for msg in &messages {
        hebb.learn_pattern(msg, spec.n_it, &spec.channel, &mut rng)?;
        reference.store(msg)?;
    }
    Ok((hebb, reference))
}

pub fn run_trial(spec: &ExperimentSpec, trial: usize) -> Result<Table1Row> {
    let (hebb, reference) = learn_trial(spec, trial)?;
    let cmp = compare_networks(hebb.weights(), &reference)?;
    Ok(Table1Row {
        n_it: spec.n_it,
        messages: spec.messages,
        trial,
        connections: cmp.connections,
        added: cmp.added,
        erased: cmp.erased,
    })
}

/// Runs every trial of every spec; rows come back in `(spec, trial)` order.
pub fn run_table1(specs: &[ExperimentSpec]) -> Result<Vec<Table1Row>> {
    for spec in specs {
        spec.validate()?;
    }
    let items: Vec<(usize, usize)> = specs
        .iter()
        .enumerate()
        .flat_map(|(s, spec)| (0..spec.trials).map(move |t| (s, t)))
        .collect();
    items
        .par_iter()
        .map(|&(s, t)| run_trial(&specs[s], t))
        .collect()
}

/// Mean of the per-trial rows of one spec.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table1Summary {
    pub n_it: usize,
    #[serde(rename = "M")]
    pub messages: usize,
    pub trials: usize,
    pub connections: f64,
    pub added: f64,
    pub erased: f64,
}

pub fn summarize(specs: &[ExperimentSpec], rows: &[Table1Row]) -> Vec<Table1Summary> {
    let mut offset = 0;
    specs
        .iter()
        .map(|spec| {
            let own = &rows[offset..offset + spec.trials];
            offset += spec.trials;
            let mean = |f: fn(&Table1Row) -> u64| {
                own.iter().map(|r| f(r) as f64).sum::<f64>() / own.len() as f64
            };
            Table1Summary {
                n_it: spec.n_it,
                messages: spec.messages,
                trials: spec.trials,
                connections: mean(|r| r.connections),
                added: mean(|r| r.added),
                erased: mean(|r| r.erased),
            }
        })
        .collect()
}

/// Retrieval error rate of the binary memory as it fills up.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCurveSpec")]
pub struct CurveSpec {
    pub config: NetworkConfig,
    /// Message counts at which the error rate is measured.
    pub message_grid: Vec<usize>,
    /// Positions left intact in each probe; the rest are erased.
    pub known_positions: usize,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCurveSpec {
    config: NetworkConfig,
    message_grid: Vec<usize>,
    known_positions: usize,
    #[serde(default = "one")]
    trials: usize,
    #[serde(default)]
    seed: u64,
}

impl TryFrom<RawCurveSpec> for CurveSpec {
    type Error = ParamError;

    fn try_from(r: RawCurveSpec) -> Result<Self, ParamError> {
        let spec = CurveSpec {
            config: r.config,
            message_grid: r.message_grid,
            known_positions: r.known_positions,
            trials: r.trials,
            seed: r.seed,
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl CurveSpec {
    pub fn validate(&self) -> Result<(), ParamError> {
        self.config.validate()?;
        if self.config.energy_rule != EnergyRule::Clustered {
            return Err(ParamError::OutOfRange {
                name: "energy_rule",
                value: 0.0,
                range: "{clustered} (messages need clusters)",
            });
        }
        if self.known_positions == 0 || self.known_positions >= self.config.c {
            return Err(ParamError::OutOfRange {
                name: "known_positions",
                value: self.known_positions as f64,
                range: "[1, c)",
            });
        }
        if self.message_grid.is_empty() || self.message_grid.contains(&0) {
            return Err(ParamError::OutOfRange {
                name: "message_grid",
                value: 0.0,
                range: "nonempty, entries >= 1",
            });
        }
        if self.trials == 0 {
            return Err(ParamError::OutOfRange {
                name: "trials",
                value: 0.0,
                range: "[1, inf)",
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    #[serde(rename = "M")]
    pub messages: usize,
    pub trial: usize,
    pub density: f64,
    pub probes: usize,
    pub errors: usize,
    pub error_rate: f64,
}

/// Stores growing prefixes of a random dataset and probes every stored
/// message with all but `known_positions` positions erased.
///
/// A probe fails if any cluster comes back wrong or silent. Points are
/// ordered by trial, then by increasing `M`.
pub fn error_curve(spec: &CurveSpec) -> Result<Vec<CurvePoint>> {
    spec.validate()?;
    let mut grid = spec.message_grid.clone();
    grid.sort_unstable();
    grid.dedup();
    let max_m = *grid.last().expect("validated nonempty");
    let cfg = &spec.config;
    let mut points = Vec::new();
    for trial in 0..spec.trials {
        let messages = random_messages(cfg.c, cfg.ell, max_m, spec.seed, trial as u64);
        let mut net = CliqueNetwork::new(cfg.c, cfg.ell)?;
        let mut stored = 0;
        for &m in &grid {
            for msg in &messages[stored..m] {
                net.store(msg)?;
            }
            stored = m;
            let outcomes: Vec<bool> = (0..m)
                .into_par_iter()
                .map(|i| probe_fails(&net, &messages[i], spec, trial, m, i))
                .collect::<Result<_>>()?;
            let errors = outcomes.iter().filter(|&&bad| bad).count();
            points.push(CurvePoint {
                messages: m,
                trial,
                density: net.density(),
                probes: m,
                errors,
                error_rate: errors as f64 / m as f64,
            });
        }
    }
    Ok(points)
}

fn probe_fails(
    net: &CliqueNetwork,
    msg: &Message,
    spec: &CurveSpec,
    trial: usize,
    m: usize,
    i: usize,
) -> Result<bool> {
    let c = spec.config.c;
    let mut rng = seed::stream(spec.seed, "erasures", &[trial as u64, m as u64, i as u64]);
    let erased = rand::seq::index::sample(&mut rng, c, c - spec.known_positions).into_vec();
    let got = net.retrieve(
        &msg.erase(&erased),
        spec.config.gamma,
        spec.config.decode_iterations,
        &spec.config.tie_policy,
    )?;
    Ok(&got != msg)
}
