//! Bit-packed symmetric adjacency.

/// Symmetric binary relation over `n` vertices, one packed row per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    row_words: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let row_words = n.div_ceil(64);
        Self {
            n,
            row_words,
            words: vec![0; n * row_words],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.words[i * self.row_words + j / 64] >> (j % 64) & 1 == 1
    }

    /// Sets `(i, j)` and `(j, i)`. Returns whether the edge was new.
    pub fn insert(&mut self, i: usize, j: usize) -> bool {
        let fresh = !self.get(i, j);
        self.words[i * self.row_words + j / 64] |= 1 << (j % 64);
        self.words[j * self.row_words + i / 64] |= 1 << (i % 64);
        fresh
    }

    pub fn remove(&mut self, i: usize, j: usize) {
        self.words[i * self.row_words + j / 64] &= !(1 << (j % 64));
        self.words[j * self.row_words + i / 64] &= !(1 << (i % 64));
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.words[i * self.row_words..(i + 1) * self.row_words]
    }

    /// Indices of the set bits in row `i`.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + t)
            })
        })
    }

    /// Adds `weight` to `scores[u]` for every neighbour `u` of `i`.
    #[inline]
    pub fn accumulate_row(&self, i: usize, weight: f64, scores: &mut [f64]) {
        for u in self.neighbors(i) {
            scores[u] += weight;
        }
    }

    /// Number of undirected edges, self-loops counted once.
    pub fn edge_count(&self) -> usize {
        let ones: usize = self.words.iter().map(|w| w.count_ones() as usize).sum();
        let loops = (0..self.n).filter(|&i| self.get(i, i)).count();
        (ones - loops) / 2 + loops
    }

    /// Undirected edges as `(i, j)` with `i <= j`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            self.neighbors(i)
                .filter(move |&j| j >= i)
                .map(move |j| (i, j))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_insert_and_remove() {
        let mut m = BitMatrix::new(130);
        assert!(m.insert(3, 129));
        assert!(!m.insert(129, 3));
        assert!(m.get(129, 3) && m.get(3, 129));
        m.insert(64, 64);
        assert_eq!(m.edge_count(), 2);
        assert_eq!(m.edges().collect::<Vec<_>>(), vec![(3, 129), (64, 64)]);
        m.remove(3, 129);
        assert!(!m.get(3, 129) && !m.get(129, 3));
        assert_eq!(m.edge_count(), 1);
    }

    #[test]
    fn neighbours_cross_word_boundaries() {
        let mut m = BitMatrix::new(200);
        for j in [0, 63, 64, 127, 128, 199] {
            m.insert(5, j);
        }
        assert_eq!(
            m.neighbors(5).collect::<Vec<_>>(),
            vec![0, 63, 64, 127, 128, 199]
        );
        let mut scores = vec![0.0; 200];
        m.accumulate_row(5, 1.0, &mut scores);
        assert_eq!(scores.iter().sum::<f64>(), 6.0);
    }
}
