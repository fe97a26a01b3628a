//! Iterative retrieval loop shared by the Hebbian network and the binary
//! clique reference.
//!
//! Each iteration scores every unit by the summed weight of its connections
//! to the currently active units, adds `gamma` to units that are active, and
//! applies winner-take-all.

use super::config::TiePolicy;
use super::wta::{wta_clustered, wta_global};
use crate::activity::ActivityVector;
use crate::message::Message;

/// Anything that can compute `scores += W . V`.
pub trait ScoreSource {
    fn dim(&self) -> usize;
    fn accumulate_scores(&self, active: &[usize], is_active: &[bool], scores: &mut [f64]);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    /// One winner in each cluster of `ell` units.
    Clustered { ell: usize },
    /// The `c` best units overall.
    Global { c: usize },
}

pub fn iterate<S: ScoreSource + ?Sized>(
    source: &S,
    initial: &ActivityVector,
    gamma: f64,
    iterations: usize,
    selection: Selection,
    tie: &TiePolicy,
) -> ActivityVector {
    let n = source.dim();
    let mut current = initial.clone();
    let mut scores = vec![0.0; n];
    for _ in 0..iterations {
        let active = current.active_units();
        scores.fill(0.0);
        source.accumulate_scores(&active, current.as_slice(), &mut scores);
        for &u in &active {
            scores[u] += gamma;
        }
        current = match selection {
            Selection::Clustered { ell } => wta_clustered(&scores, ell, tie),
            Selection::Global { c } => wta_global(&scores, c, tie),
        };
    }
    current
}

/// Reads one unit per cluster; silent or ambiguous clusters come back erased.
pub fn activity_to_message(activity: &ActivityVector, c: usize, ell: usize) -> Message {
    let units = (0..c)
        .map(|cluster| {
            let mut winners = (0..ell).filter(|&u| activity.is_active(cluster * ell + u));
            match (winners.next(), winners.next()) {
                (Some(u), None) => Some(u),
                _ => None,
            }
        })
        .collect();
    Message::new(units, ell).expect("indices are below ell by construction")
}
