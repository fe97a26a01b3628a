//! Sparse symmetric weight matrix with consolidation bookkeeping.
//!
//! Every weight is in one of three states: exactly 0 (implicit), strictly
//! between 0 and 1 (the transient map), or exactly 1 (the consolidated bit
//! matrix). The sigmoid fixes 0 and 1, so an elementwise `S(eps V.V^T + W)`
//! only has to visit the incremented pairs and the transient map.

use rustc_hash::FxHashMap;

use super::sigmoid::sigmoid;
use crate::bits::BitMatrix;
use crate::error::{Error, Result};

/// Transient weights that fall below this value are reset to 0.
pub const PRUNE_BELOW: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct WeightMatrix {
    n: usize,
    self_loops: bool,
    consolidated: BitMatrix,
    // key: i * n + j with i <= j
    transient: FxHashMap<u64, f64>,
}

impl PartialEq for WeightMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.self_loops == other.self_loops
            && self.consolidated == other.consolidated
            && self.transient == other.transient
    }
}

impl WeightMatrix {
    pub fn new(n: usize, self_loops: bool) -> Self {
        Self {
            n,
            self_loops,
            consolidated: BitMatrix::new(n),
            transient: FxHashMap::default(),
        }
    }

    /// Rebuilds a matrix from its consolidated edges and transient entries,
    /// checking every structural invariant.
    pub fn from_parts(
        n: usize,
        self_loops: bool,
        consolidated: &[(usize, usize)],
        transient: &[(usize, usize, f64)],
    ) -> Result<Self> {
        let mut w = Self::new(n, self_loops);
        let check = |i: usize, j: usize| -> Result<(usize, usize)> {
            if i >= n || j >= n {
                return Err(Error::Format(format!("edge ({i}, {j}) outside {n} units")));
            }
            if i == j && !self_loops {
                return Err(Error::Format(format!(
                    "self-loop on unit {i} while disabled"
                )));
            }
            Ok((i.min(j), i.max(j)))
        };
        for &(i, j) in consolidated {
            let (i, j) = check(i, j)?;
            w.consolidated.insert(i, j);
        }
        for &(i, j, weight) in transient {
            let (i, j) = check(i, j)?;
            if !(weight > 0.0 && weight < 1.0) {
                return Err(Error::Format(format!(
                    "transient weight {weight} on ({i}, {j}) outside (0, 1)"
                )));
            }
            if w.consolidated.get(i, j) {
                return Err(Error::Format(format!(
                    "edge ({i}, {j}) is both consolidated and transient"
                )));
            }
            if w.transient.insert(w.key(i, j), weight).is_some() {
                return Err(Error::Format(format!(
                    "duplicate transient edge ({i}, {j})"
                )));
            }
        }
        Ok(w)
    }

    #[inline]
    fn key(&self, i: usize, j: usize) -> u64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        (lo * self.n + hi) as u64
    }

    #[inline]
    fn unkey(&self, key: u64) -> (usize, usize) {
        let k = key as usize;
        (k / self.n, k % self.n)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn self_loops(&self) -> bool {
        self.self_loops
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.consolidated.get(i, j) {
            1.0
        } else {
            self.transient.get(&self.key(i, j)).copied().unwrap_or(0.0)
        }
    }

    pub fn consolidated(&self) -> &BitMatrix {
        &self.consolidated
    }

    /// Sorted consolidated edges `(i, j)`, `i <= j`.
    pub fn consolidated_edges(&self) -> Vec<(usize, usize)> {
        self.consolidated.edges().collect()
    }

    pub fn consolidated_count(&self) -> usize {
        self.consolidated.edge_count()
    }

    pub fn transient_count(&self) -> usize {
        self.transient.len()
    }

    /// Sorted transient entries `(i, j, weight)`, `i <= j`.
    pub fn transient_entries(&self) -> Vec<(usize, usize, f64)> {
        let mut out: Vec<_> = self
            .transient
            .iter()
            .map(|(&k, &w)| {
                let (i, j) = self.unkey(k);
                (i, j, w)
            })
            .collect();
        out.sort_by_key(|e| (e.0, e.1));
        out
    }

    /// Edges whose weight is at least `threshold`, as a bit matrix.
    pub fn binarize(&self, threshold: f64) -> BitMatrix {
        let mut out = self.consolidated.clone();
        for (&k, &w) in &self.transient {
            if w >= threshold {
                let (i, j) = self.unkey(k);
                out.insert(i, j);
            }
        }
        out
    }

    /// `W <- S(epsilon * V.V^T + W)` where `active` lists the units with
    /// `V = 1`, sorted and without duplicates.
    pub fn hebbian_update(&mut self, active: &[usize], epsilon: f64) {
        for (a, &i) in active.iter().enumerate() {
            let partners = if self.self_loops {
                &active[a..]
            } else {
                &active[a + 1..]
            };
            for &j in partners {
                if self.consolidated.get(i, j) {
                    continue;
                }
                let key = (i * self.n + j) as u64;
                *self.transient.entry(key).or_insert(0.0) += epsilon;
            }
        }
        let mut promoted = Vec::new();
        self.transient.retain(|&key, w| {
            let next = sigmoid(*w);
            if next >= 1.0 {
                promoted.push(key);
                false
            } else if next < PRUNE_BELOW {
                false
            } else {
                *w = next;
                true
            }
        });
        for key in promoted {
            let (i, j) = self.unkey(key);
            self.consolidated.insert(i, j);
        }
    }

    /// `scores += W . V` for the activity given by `active` (sorted unit
    /// list) and `is_active` (the same set as a mask).
    ///
    /// Transient contributions are added in `(target, source)` order so the
    /// result does not depend on hash-map history.
    pub fn accumulate_scores(&self, active: &[usize], is_active: &[bool], scores: &mut [f64]) {
        for &v in active {
            self.consolidated.accumulate_row(v, 1.0, scores);
        }
        let mut extra: Vec<(usize, usize, f64)> = Vec::new();
        for (&k, &w) in &self.transient {
            let (i, j) = self.unkey(k);
            if is_active[j] {
                extra.push((i, j, w));
            }
            if i != j && is_active[i] {
                extra.push((j, i, w));
            }
        }
        extra.sort_by_key(|e| (e.0, e.1));
        for (target, _, w) in extra {
            scores[target] += w;
        }
    }

    /// Checks symmetry-independent invariants; used by tests and loaders.
    pub fn check_invariants(&self) -> Result<()> {
        for (&k, &w) in &self.transient {
            let (i, j) = self.unkey(k);
            if !(w > 0.0 && w < 1.0) {
                return Err(Error::Format(format!("transient ({i}, {j}) = {w}")));
            }
            if self.consolidated.get(i, j) {
                return Err(Error::Format(format!("({i}, {j}) stored twice")));
            }
            if i == j && !self.self_loops {
                return Err(Error::Format(format!("diagonal entry at {i}")));
            }
        }
        if !self.self_loops && (0..self.n).any(|i| self.consolidated.get(i, i)) {
            return Err(Error::Format("consolidated diagonal entry".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::sigmoid::sigmoid;

    #[test]
    fn single_update_applies_sigmoid_to_increment() {
        let mut w = WeightMatrix::new(10, false);
        w.hebbian_update(&[1, 4, 7], 0.18);
        let expected = sigmoid(0.18);
        for (i, j) in [(1, 4), (1, 7), (4, 7)] {
            assert_eq!(w.get(i, j), expected);
            assert_eq!(w.get(j, i), expected);
        }
        assert_eq!(w.get(1, 1), 0.0);
        assert_eq!(w.get(2, 3), 0.0);
        assert_eq!(w.transient_count(), 3);
    }

    #[test]
    fn repeated_coactivation_consolidates() {
        let mut w = WeightMatrix::new(4, false);
        for _ in 0..8 {
            w.hebbian_update(&[0, 2], 0.18);
        }
        assert_eq!(w.get(0, 2), 1.0);
        assert_eq!(w.transient_count(), 0);
        assert_eq!(w.consolidated_edges(), vec![(0, 2)]);
        // decay never touches a consolidated edge
        for _ in 0..20 {
            w.hebbian_update(&[], 0.18);
        }
        assert_eq!(w.get(0, 2), 1.0);
    }

    #[test]
    fn isolated_increment_decays_to_zero() {
        let mut w = WeightMatrix::new(4, false);
        w.hebbian_update(&[0, 1], 0.18);
        for _ in 0..3 {
            w.hebbian_update(&[], 0.18);
        }
        assert_eq!(w.get(0, 1), 0.0);
        assert_eq!(w.transient_count(), 0);
    }

    #[test]
    fn self_loops_only_when_enabled() {
        let mut w = WeightMatrix::new(4, true);
        w.hebbian_update(&[2, 3], 0.5);
        assert!(w.get(2, 2) > 0.0 && w.get(3, 3) > 0.0);
        let mut w = WeightMatrix::new(4, false);
        w.hebbian_update(&[2, 3], 0.5);
        assert_eq!(w.get(2, 2), 0.0);
    }

    #[test]
    fn scores_include_transient_weights() {
        let mut w = WeightMatrix::new(6, false);
        for _ in 0..8 {
            w.hebbian_update(&[0, 1], 0.18);
        }
        w.hebbian_update(&[0, 5], 0.18);
        let mut scores = vec![0.0; 6];
        let mask = [true, false, false, false, false, false];
        w.accumulate_scores(&[0], &mask, &mut scores);
        assert_eq!(scores[1], 1.0);
        assert_eq!(scores[5], sigmoid(0.18));
        assert_eq!(scores[0], 0.0);
    }

    #[test]
    fn from_parts_rejects_broken_structure() {
        assert!(WeightMatrix::from_parts(4, false, &[(1, 1)], &[]).is_err());
        assert!(WeightMatrix::from_parts(4, false, &[(0, 1)], &[(1, 0, 0.3)]).is_err());
        assert!(WeightMatrix::from_parts(4, false, &[], &[(0, 1, 1.0)]).is_err());
        assert!(WeightMatrix::from_parts(4, false, &[], &[(0, 9, 0.2)]).is_err());
        let ok = WeightMatrix::from_parts(4, false, &[(2, 0)], &[(1, 3, 0.4)]).unwrap();
        assert_eq!(ok.get(0, 2), 1.0);
        assert_eq!(ok.get(3, 1), 0.4);
        ok.check_invariants().unwrap();
    }
}
