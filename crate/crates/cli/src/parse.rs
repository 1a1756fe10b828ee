//! Value parsers for clap.

use std::ops::RangeInclusive;

use serde::Serialize;

/// `n` or an inclusive range `a..b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NSpec {
    pub lo: u64,
    pub hi: u64,
}

impl NSpec {
    pub fn range(self) -> RangeInclusive<u64> {
        self.lo..=self.hi
    }

    pub fn single(self) -> Option<u64> {
        (self.lo == self.hi).then_some(self.lo)
    }
}

pub fn n_spec(text: &str) -> Result<NSpec, String> {
    let num = |s: &str| {
        s.trim()
            .parse::<u64>()
            .map_err(|_| format!("expected an integer, got {s:?}"))
    };
    match text.split_once("..") {
        Some((a, b)) => {
            let (lo, hi) = (num(a)?, num(b.trim_start_matches('='))?);
            if lo > hi {
                return Err(format!("empty range {text}"));
            }
            Ok(NSpec { lo, hi })
        }
        None => {
            let n = num(text)?;
            Ok(NSpec { lo: n, hi: n })
        }
    }
}

/// Non-negative integer count, also accepting `1e6` style notation.
pub fn count(text: &str) -> Result<u64, String> {
    if let Ok(v) = text.trim().parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| format!("expected a count such as 100000 or 1e5, got {text:?}"))?;
    if !(v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64) {
        return Err(format!("{text:?} is not a non-negative integer"));
    }
    Ok(v as u64)
}

pub fn digits(text: &str) -> Result<Vec<i64>, String> {
    let d = cantorsum::digits::parse_digit_list(text).map_err(|e| e.to_string())?;
    if d.is_empty() {
        return Err("empty digit list".into());
    }
    Ok(d)
}
