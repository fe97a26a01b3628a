//! Winner-take-all selection implementing the energy limits.
//!
//! Units with a score of zero or less never activate, so a cluster (or the
//! whole network) with no stimulation stays silent.

use rand::seq::IndexedRandom;

use super::config::TiePolicy;
use crate::activity::ActivityVector;
use crate::seed;

/// Keeps at most `c` of the highest positive scores over the whole network.
pub fn wta_global(scores: &[f64], c: usize, tie: &TiePolicy) -> ActivityVector {
    let winners = select(scores, 0, c, tie, 0);
    ActivityVector::from_units(scores.len(), winners)
}

/// Keeps the highest positive score in each of the clusters of `ell` units.
pub fn wta_clustered(scores: &[f64], ell: usize, tie: &TiePolicy) -> ActivityVector {
    assert!(
        ell > 0 && scores.len().is_multiple_of(ell),
        "scores must split into whole clusters"
    );
    let mut out = ActivityVector::zeros(scores.len());
    for (cluster, chunk) in scores.chunks(ell).enumerate() {
        let base = cluster * ell;
        if *tie == TiePolicy::LowestIndex {
            // single pass: first strict maximum
            let mut best: Option<(usize, f64)> = None;
            for (i, &s) in chunk.iter().enumerate() {
                if s > 0.0 && best.is_none_or(|(_, b)| s > b) {
                    best = Some((i, s));
                }
            }
            if let Some((i, _)) = best {
                out.set(base + i, true);
            }
        } else {
            for u in select(chunk, base, 1, tie, cluster as u64) {
                out.set(u, true);
            }
        }
    }
    out
}

/// Picks up to `k` winners among the positive entries of `scores`, returning
/// global indices (`offset + i`).
fn select(scores: &[f64], offset: usize, k: usize, tie: &TiePolicy, group: u64) -> Vec<usize> {
    let mut ranked: Vec<(usize, f64)> = scores
        .iter()
        .enumerate()
        .filter(|&(_, &s)| s > 0.0)
        .map(|(i, &s)| (i, s))
        .collect();
    // stable: equal scores keep increasing index order
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
    if ranked.len() <= k {
        let mut all: Vec<usize> = ranked.into_iter().map(|(i, _)| offset + i).collect();
        all.sort_unstable();
        return all;
    }
    if k == 0 {
        return Vec::new();
    }
    let cutoff = ranked[k - 1].1;
    let above = ranked.iter().take_while(|r| r.1 > cutoff).count();
    let tied: Vec<usize> = ranked[above..]
        .iter()
        .take_while(|r| r.1 == cutoff)
        .map(|r| r.0)
        .collect();
    let mut winners: Vec<usize> = ranked[..above].iter().map(|r| r.0).collect();
    let slots = k - above;
    match tie {
        TiePolicy::LowestIndex => winners.extend(&tied[..slots]),
        TiePolicy::KeepAll => winners.extend(&tied),
        TiePolicy::SeededRandom { seed } => {
            let mut rng = seed::stream(*seed, "tie-break", &[group]);
            winners.extend(tied.choose_multiple(&mut rng, slots));
        }
    }
    let mut out: Vec<usize> = winners.into_iter().map(|i| offset + i).collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const LOW: TiePolicy = TiePolicy::LowestIndex;

    #[test]
    fn global_selection() {
        assert_eq!(wta_global(&[2.0; 6], 3, &LOW).active_units(), vec![0, 1, 2]);
        assert_eq!(
            wta_global(&[5.0, 1.0, 4.0, 2.0], 2, &LOW).active_units(),
            vec![0, 2]
        );
        assert_eq!(wta_global(&[0.0; 5], 2, &LOW).count_active(), 0);
        // fewer positive scores than the budget
        assert_eq!(
            wta_global(&[0.0, 3.0, -1.0, 0.0], 3, &LOW).active_units(),
            vec![1]
        );
    }

    #[test]
    fn global_tie_policies() {
        let scores = [1.0, 3.0, 2.0, 2.0, 2.0, 0.5];
        assert_eq!(wta_global(&scores, 2, &LOW).active_units(), vec![1, 2]);
        assert_eq!(
            wta_global(&scores, 2, &TiePolicy::KeepAll).active_units(),
            vec![1, 2, 3, 4]
        );
        let seeded = TiePolicy::SeededRandom { seed: 11 };
        let pick = wta_global(&scores, 2, &seeded).active_units();
        assert_eq!(pick.len(), 2);
        assert!(pick.contains(&1));
        assert_eq!(pick, wta_global(&scores, 2, &seeded).active_units());
    }

    #[test]
    fn clustered_selection() {
        let scores = [
            0.0, 2.0, 1.0, /**/ 0.0, 0.0, 0.0, /**/ 4.0, 1.0, 4.0,
        ];
        assert_eq!(wta_clustered(&scores, 3, &LOW).active_units(), vec![1, 6]);
        assert_eq!(
            wta_clustered(&scores, 3, &TiePolicy::KeepAll).active_units(),
            vec![1, 6, 8]
        );
        let r = wta_clustered(&scores, 3, &TiePolicy::SeededRandom { seed: 3 });
        assert_eq!(r.count_active(), 2);
        assert!(r.is_active(1) && (r.is_active(6) ^ r.is_active(8)));
    }

    #[test]
    fn negative_scores_never_win() {
        assert_eq!(
            wta_clustered(&[-1.0, -0.5, -2.0], 3, &LOW).count_active(),
            0
        );
    }
}
