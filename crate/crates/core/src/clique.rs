//! Binary clustered associative memory (neural clique network) and its
//! unclustered Willshaw-style retrieval.
//!
//! `c` clusters of `ell` units. A message picks one unit per cluster and is
//! stored by connecting all of its units pairwise. Retrieval scores each unit
//! by the number of active units it is connected to.

use crate::activity::ActivityVector;
use crate::bits::BitMatrix;
use crate::dynamics::decode::{self, activity_to_message, ScoreSource, Selection};
use crate::dynamics::TiePolicy;
use crate::error::{Error, ParamError, Result};
use crate::message::Message;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueNetwork {
    c: usize,
    ell: usize,
    adjacency: BitMatrix,
}

impl CliqueNetwork {
    pub fn new(c: usize, ell: usize) -> Result<Self> {
        if c < 2 || ell == 0 {
            return Err(ParamError::Dimension { n: c * ell, c, ell }.into());
        }
        Ok(Self {
            c,
            ell,
            adjacency: BitMatrix::new(c * ell),
        })
    }

    /// Rebuilds a network from undirected edges, rejecting self-edges and
    /// edges inside a cluster.
    pub fn from_edges(c: usize, ell: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut net = Self::new(c, ell)?;
        let n = net.n();
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::Format(format!("edge ({i}, {j}) outside {n} units")));
            }
            if i / ell == j / ell {
                return Err(Error::Format(format!(
                    "edge ({i}, {j}) lies inside cluster {}",
                    i / ell
                )));
            }
            net.adjacency.insert(i, j);
        }
        Ok(net)
    }

    pub fn clusters(&self) -> usize {
        self.c
    }

    pub fn cluster_size(&self) -> usize {
        self.ell
    }

    pub fn n(&self) -> usize {
        self.c * self.ell
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adjacency
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency.get(i, j)
    }

    fn check_message(&self, msg: &Message) -> Result<()> {
        msg.check_length(self.c)?;
        for (position, unit) in msg.units().iter().enumerate() {
            if let Some(u) = *unit {
                if u >= self.ell {
                    return Err(ParamError::UnitOutOfRange {
                        position,
                        unit: u,
                        ell: self.ell,
                    }
                    .into());
                }
            }
        }
        Ok(())
    }

    /// Connects every pair of the message's units.
    pub fn store(&mut self, msg: &Message) -> Result<()> {
        self.check_message(msg)?;
        if !msg.is_complete() {
            return Err(Error::Format(format!("cannot store partial message {msg}")));
        }
        let units: Vec<usize> = msg.global_units(self.ell).collect();
        for (a, &i) in units.iter().enumerate() {
            for &j in &units[a + 1..] {
                self.adjacency.insert(i, j);
            }
        }
        Ok(())
    }

    /// Completes a partially erased message with per-cluster winner-take-all.
    pub fn retrieve(
        &self,
        partial: &Message,
        gamma: f64,
        iterations: usize,
        tie: &TiePolicy,
    ) -> Result<Message> {
        self.check_message(partial)?;
        if partial.known_count() == 0 {
            return Err(Error::Format(
                "retrieval needs at least one known position".into(),
            ));
        }
        let start = ActivityVector::from_units(self.n(), partial.global_units(self.ell));
        let end = decode::iterate(
            self,
            &start,
            gamma,
            iterations,
            Selection::Clustered { ell: self.ell },
            tie,
        );
        Ok(activity_to_message(&end, self.c, self.ell))
    }

    /// Retrieval that ignores clusters and keeps the `c` best units overall.
    ///
    /// `probe` holds global unit indices; the result is sorted.
    pub fn retrieve_willshaw(
        &self,
        probe: &[usize],
        c: usize,
        gamma: f64,
        iterations: usize,
        tie: &TiePolicy,
    ) -> Result<Vec<usize>> {
        if let Some(&bad) = probe.iter().find(|&&u| u >= self.n()) {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: bad + 1,
            });
        }
        let start = ActivityVector::from_units(self.n(), probe.iter().copied());
        let end = decode::iterate(
            self,
            &start,
            gamma,
            iterations,
            Selection::Global { c },
            tie,
        );
        Ok(end.active_units())
    }

    /// Stored undirected edges.
    pub fn edge_count(&self) -> usize {
        self.adjacency.edge_count()
    }

    /// Stored edges counted once in each direction.
    pub fn ordered_pair_count(&self) -> usize {
        2 * self.edge_count()
    }

    /// Fraction of the `C(c, 2) * ell^2` possible inter-cluster edges in use.
    pub fn density(&self) -> f64 {
        let possible = (self.c * (self.c - 1) / 2) as f64 * (self.ell * self.ell) as f64;
        self.edge_count() as f64 / possible
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency.edges().collect()
    }
}

impl ScoreSource for CliqueNetwork {
    fn dim(&self) -> usize {
        self.n()
    }

    fn accumulate_scores(&self, active: &[usize], _is_active: &[bool], scores: &mut [f64]) {
        for &v in active {
            self.adjacency.accumulate_row(v, 1.0, scores);
        }
    }
}
