/// Binary activity of every unit in a network at one instant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ActivityVector {
    bits: Vec<bool>,
}

impl ActivityVector {
    pub fn zeros(n: usize) -> Self {
        Self {
            bits: vec![false; n],
        }
    }

    /// Builds a vector of length `n` with the given units switched on.
    ///
    /// Panics if a unit index is out of range.
    pub fn from_units<I: IntoIterator<Item = usize>>(n: usize, units: I) -> Self {
        let mut v = Self::zeros(n);
        for u in units {
            v.bits[u] = true;
        }
        v
    }

    pub fn from_bools(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_active(&self, unit: usize) -> bool {
        self.bits[unit]
    }

    pub fn set(&mut self, unit: usize, active: bool) {
        self.bits[unit] = active;
    }

    /// Number of active units (Hamming weight).
    pub fn count_active(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Active unit indices in increasing order.
    pub fn active_units(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }
}
