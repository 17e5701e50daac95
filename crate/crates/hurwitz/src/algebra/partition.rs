//! Partitions: the multiplicity profile of a fiber.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::AlgebraError;

/// Weakly decreasing positive integers; the shape of a polynomial or the
/// cycle type of a permutation.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self, AlgebraError> {
        if parts.is_empty() {
            return Err(AlgebraError::InvalidPartition("no parts".into()));
        }
        if parts.iter().any(|&x| x == 0) {
            return Err(AlgebraError::InvalidPartition("zero part".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(AlgebraError::InvalidPartition(
                "parts not weakly decreasing".into(),
            ));
        }
        Ok(Partition { parts })
    }

    /// Sorts the parts before validating.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Result<Self, AlgebraError> {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn max_part(&self) -> u32 {
        self.parts[0]
    }

    /// Run-length encoding `(β_1^{μ_1}, …, β_n^{μ_n})` with `β_1 > … > β_n`.
    pub fn rle(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &x in &self.parts {
            match out.last_mut() {
                Some((beta, mu)) if *beta == x => *mu += 1,
                _ => out.push((x, 1)),
            }
        }
        out
    }

    /// The dual partition `α*_j = #{i : α_i ≥ j}`.
    pub fn dual(&self) -> Partition {
        let max = self.max_part();
        let parts = (1..=max)
            .map(|j| self.parts.iter().filter(|&&a| a >= j).count() as u32)
            .collect();
        Partition { parts }
    }

    /// Total branching defect `Σ (α_i - 1)`.
    pub fn defect(&self) -> u32 {
        self.total() - self.len() as u32
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let parts = Vec::<u32>::deserialize(d)?;
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}
