//! The sumset `B = A + A` with ordered-pair multiplicities, and the
//! goodness decision `C_A + C_A = [0, 2]`.
//!
//! `C_A + C_A` is the attractor of `x -> (x + b) / n` for `b in B`, so
//! everything downstream is a function of this profile.

use crate::digits::DigitSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumsetProfile {
    n: u64,
    counts: Vec<u64>,
    support: Vec<u64>,
}

impl SumsetProfile {
    pub fn new(set: &DigitSet) -> Self {
        let digits = set.digits();
        let len = 2 * set.max_digit() as usize + 1;
        let mut counts = vec![0u64; len];
        for &a in digits {
            for &b in digits {
                counts[(a + b) as usize] += 1;
            }
        }
        let support = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, _)| i as u64)
            .collect();
        SumsetProfile {
            n: set.n(),
            counts,
            support,
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Ordered-pair counts indexed by the sum.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Count at `l`, zero outside the stored range (including negative `l`).
    pub fn count(&self, l: i64) -> u64 {
        if l < 0 {
            return 0;
        }
        self.counts.get(l as usize).copied().unwrap_or(0)
    }

    pub fn contains(&self, l: i64) -> bool {
        self.count(l) > 0
    }

    /// `B = A + A`, sorted ascending.
    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn max_gap(&self) -> u64 {
        self.support
            .windows(2)
            .map(|w| w[1] - w[0])
            .max()
            .unwrap_or(0)
    }

    pub fn min_gap(&self) -> u64 {
        self.support
            .windows(2)
            .map(|w| w[1] - w[0])
            .min()
            .unwrap_or(0)
    }
}

pub fn sumset_profile(set: &DigitSet) -> SumsetProfile {
    SumsetProfile::new(set)
}

/// Every map `x -> (x + b) / n` sends `[0, 2]` onto an interval of length
/// `2/n`, so the images cover `[0, 2]` exactly when consecutive elements of
/// `B` are at most 2 apart.
pub fn is_n_good(set: &DigitSet) -> Result<bool> {
    if !set.is_canonical() {
        return Err(Error::NotCanonical);
    }
    Ok(SumsetProfile::new(set).max_gap() <= 2)
}
