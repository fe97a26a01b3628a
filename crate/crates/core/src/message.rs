use std::fmt;

use rand::Rng;

use crate::error::ParamError;

/// One unit per cluster; `None` marks an erased (unknown) position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Message {
    units: Vec<Option<usize>>,
}

impl Message {
    /// Builds a message and checks every known index against `ell`.
    pub fn new(units: Vec<Option<usize>>, ell: usize) -> Result<Self, ParamError> {
        for (position, unit) in units.iter().enumerate() {
            if let Some(u) = *unit {
                if u >= ell {
                    return Err(ParamError::UnitOutOfRange {
                        position,
                        unit: u,
                        ell,
                    });
                }
            }
        }
        Ok(Self { units })
    }

    pub fn complete(units: Vec<usize>, ell: usize) -> Result<Self, ParamError> {
        Self::new(units.into_iter().map(Some).collect(), ell)
    }

    /// Uniform random message, one independent unit per cluster.
    pub fn random<R: Rng + ?Sized>(c: usize, ell: usize, rng: &mut R) -> Self {
        Self {
            units: (0..c).map(|_| Some(rng.random_range(0..ell))).collect(),
        }
    }

    /// Number of positions (clusters).
    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn get(&self, position: usize) -> Option<usize> {
        self.units[position]
    }

    pub fn units(&self) -> &[Option<usize>] {
        &self.units
    }

    pub fn is_complete(&self) -> bool {
        self.units.iter().all(Option::is_some)
    }

    pub fn known_count(&self) -> usize {
        self.units.iter().filter(|u| u.is_some()).count()
    }

    /// Copy with the given positions erased.
    pub fn erase(&self, positions: &[usize]) -> Self {
        let mut units = self.units.clone();
        for &p in positions {
            units[p] = None;
        }
        Self { units }
    }

    /// Global indices (`position * ell + unit`) of the known units.
    pub fn global_units(&self, ell: usize) -> impl Iterator<Item = usize> + '_ {
        self.units
            .iter()
            .enumerate()
            .filter_map(move |(p, u)| u.map(|u| p * ell + u))
    }

    pub fn check_length(&self, c: usize) -> Result<(), ParamError> {
        if self.len() == c {
            Ok(())
        } else {
            Err(ParamError::MessageLength {
                expected: c,
                found: self.len(),
            })
        }
    }
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .units
            .iter()
            .map(|u| u.map_or_else(|| "_".to_string(), |v| v.to_string()))
            .collect();
        write!(f, "[{}]", parts.join(" "))
    }
}
