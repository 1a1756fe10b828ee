//! Digit sets `(n, A)` defining the linear Cantor set generated by
//! `x -> (x + a) / n`, `a in A`.
//!
//! A canonical set satisfies `0, n-1 in A ⊆ {0..n-1}`. General sets (any
//! non-negative integers, translated so the minimum is 0) are accepted only
//! by the finite-depth oracle.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Canonical,
    General,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDigitSet", into = "RawDigitSet")]
pub struct DigitSet {
    n: u64,
    digits: Vec<u64>,
    mode: Mode,
}

#[derive(Serialize, Deserialize)]
struct RawDigitSet {
    n: u64,
    digits: Vec<i64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    general: bool,
}

impl TryFrom<RawDigitSet> for DigitSet {
    type Error = Error;

    fn try_from(raw: RawDigitSet) -> Result<Self> {
        if raw.general {
            DigitSet::general(raw.n, &raw.digits)
        } else {
            let digits = raw
                .digits
                .iter()
                .map(|&d| u64::try_from(d).map_err(|_| Error::Parse(d.to_string())))
                .collect::<Result<Vec<_>>>()?;
            DigitSet::new(raw.n, digits)
        }
    }
}

impl From<DigitSet> for RawDigitSet {
    fn from(set: DigitSet) -> Self {
        RawDigitSet {
            n: set.n,
            digits: set.digits.iter().map(|&d| d as i64).collect(),
            general: set.mode == Mode::General,
        }
    }
}

fn sorted_unique(mut digits: Vec<u64>) -> Result<Vec<u64>> {
    digits.sort_unstable();
    if let Some(w) = digits.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateDigit(w[0]));
    }
    if digits.len() < 2 {
        return Err(Error::TooFewDigits);
    }
    Ok(digits)
}

impl DigitSet {
    /// Canonical digit set in base `n`. Input order does not matter.
    pub fn new(n: u64, digits: impl Into<Vec<u64>>) -> Result<Self> {
        if n < 3 {
            return Err(Error::BaseTooSmall(n));
        }
        let digits = sorted_unique(digits.into())?;
        if let Some(&d) = digits.iter().find(|&&d| d >= n) {
            return Err(Error::DigitOutOfRange { digit: d, n });
        }
        if digits[0] != 0 || *digits.last().unwrap() != n - 1 {
            return Err(Error::MissingEndpoint(n - 1));
        }
        Ok(DigitSet {
            n,
            digits,
            mode: Mode::Canonical,
        })
    }

    /// Arbitrary integer digits, translated so that the minimum is 0.
    pub fn general(n: u64, digits: &[i64]) -> Result<Self> {
        if n < 3 {
            return Err(Error::BaseTooSmall(n));
        }
        let min = *digits.iter().min().ok_or(Error::TooFewDigits)?;
        let shifted = digits.iter().map(|&d| (d - min) as u64).collect();
        let digits = sorted_unique(shifted)?;
        Ok(DigitSet {
            n,
            digits,
            mode: Mode::General,
        })
    }

    /// Canonical set from a bit mask (bit `i` set means digit `i`), `n <= 64`.
    pub fn from_mask(n: u64, mask: u64) -> Result<Self> {
        if n > 64 {
            return Err(Error::DigitOutOfRange { digit: n - 1, n: 64 });
        }
        let digits = (0..n).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>();
        DigitSet::new(n, digits)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_canonical(&self) -> bool {
        self.mode == Mode::Canonical
    }

    pub fn max_digit(&self) -> u64 {
        *self.digits.last().unwrap()
    }

    pub fn contains(&self, digit: u64) -> bool {
        self.digits.binary_search(&digit).is_ok()
    }

    pub fn to_mask(&self) -> Option<u64> {
        if self.max_digit() >= 64 {
            return None;
        }
        Some(self.digits.iter().fold(0, |m, &d| m | 1 << d))
    }

    /// `{n-1-a : a in A}`.
    pub fn reflect(&self) -> Result<Self> {
        if !self.is_canonical() {
            return Err(Error::NotCanonical);
        }
        let top = self.n - 1;
        let digits = self.digits.iter().rev().map(|&d| top - d).collect();
        Ok(DigitSet {
            n: self.n,
            digits,
            mode: Mode::Canonical,
        })
    }

    /// Hausdorff dimension of `C_A`, `log|A| / log n`.
    pub fn cantor_dim(&self) -> f64 {
        (self.len() as f64).ln() / (self.n as f64).ln()
    }

    /// Digits joined with `;`, the CSV cell format.
    pub fn cell(&self) -> String {
        join_digits(&self.digits, ";")
    }
}

pub(crate) fn join_digits(digits: &[u64], sep: &str) -> String {
    let mut out = String::with_capacity(digits.len() * 4);
    for (i, d) in digits.iter().enumerate() {
        if i > 0 {
            out.push_str(sep);
        }
        out.push_str(&d.to_string());
    }
    out
}

impl fmt::Display for DigitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}} (n = {})", join_digits(&self.digits, ","), self.n)
    }
}

/// Parses a digit list separated by `,` or `;` (e.g. `0,2,5,7` or `0;2;5;7`).
pub fn parse_digit_list(text: &str) -> Result<Vec<i64>> {
    let text = text.trim().trim_start_matches(['[', '{']).trim_end_matches([']', '}']);
    text.split([',', ';'])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| i64::from_str(s).map_err(|_| Error::Parse(text.to_string())))
        .collect()
}

/// Parses a canonical digit set from a `;`-joined CSV cell.
pub fn parse_cell(n: u64, cell: &str) -> Result<DigitSet> {
    let digits = parse_digit_list(cell)?
        .into_iter()
        .map(|d| u64::try_from(d).map_err(|_| Error::Parse(cell.to_string())))
        .collect::<Result<Vec<_>>>()?;
    DigitSet::new(n, digits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_validation() {
        assert_eq!(DigitSet::new(2, vec![0, 1]), Err(Error::BaseTooSmall(2)));
        assert_eq!(DigitSet::new(5, vec![0, 1]), Err(Error::MissingEndpoint(4)));
        assert_eq!(
            DigitSet::new(5, vec![0, 5]),
            Err(Error::DigitOutOfRange { digit: 5, n: 5 })
        );
        assert_eq!(DigitSet::new(5, vec![0, 4, 4]), Err(Error::DuplicateDigit(4)));
        assert_eq!(DigitSet::new(3, vec![2, 0]).unwrap().digits(), &[0, 2]);
    }

    #[test]
    fn reflection() {
        let a = DigitSet::new(8, vec![0, 2, 5, 7]).unwrap();
        assert_eq!(a.reflect().unwrap(), a);
        let b = DigitSet::new(5, vec![0, 1, 4]).unwrap();
        assert_eq!(b.reflect().unwrap().digits(), &[0, 3, 4]);
        let c = DigitSet::new(3, vec![0, 2]).unwrap();
        assert_eq!(c.reflect().unwrap(), c);
    }

    #[test]
    fn general_mode_translates() {
        let a = DigitSet::general(5, &[3, 4, 10, 11]).unwrap();
        assert_eq!(a.digits(), &[0, 1, 7, 8]);
        assert!(!a.is_canonical());
        assert_eq!(a.reflect(), Err(Error::NotCanonical));
    }

    #[test]
    fn json_and_cell_formats() {
        let a = DigitSet::new(8, vec![0, 2, 5, 7]).unwrap();
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"n":8,"digits":[0,2,5,7]}"#);
        let back: DigitSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<DigitSet>(r#"{"n":8,"digits":[0,2,5]}"#).is_err());
        assert_eq!(a.cell(), "0;2;5;7");
        assert_eq!(parse_cell(8, "0;2;5;7").unwrap(), a);
        assert!(parse_cell(8, "0;x;7").is_err());
    }

    #[test]
    fn mask_roundtrip() {
        let a = DigitSet::new(8, vec![0, 2, 5, 7]).unwrap();
        let m = a.to_mask().unwrap();
        assert_eq!(m, 0b1010_0101);
        assert_eq!(DigitSet::from_mask(8, m).unwrap(), a);
    }
}
