//! Reference implementations written directly from the definitions, kept
//! deliberately naive so they share no code paths with the library.

#![allow(dead_code)]

use std::collections::BTreeMap;

use cantorsum::{DigitSet, Matrix2};

/// Pair counts of `A + A` indexed `0..=2n-2`.
pub fn ref_counts(n: u64, digits: &[u64]) -> Vec<u64> {
    let mut counts = vec![0u64; (2 * n - 1) as usize];
    for &x in digits {
        for &y in digits {
            counts[(x + y) as usize] += 1;
        }
    }
    counts
}

/// Goodness: no two consecutive integers of `[0, 2n-2]` are missing from `A + A`.
pub fn ref_good(n: u64, digits: &[u64]) -> bool {
    let c = ref_counts(n, digits);
    !(0..c.len() - 1).any(|l| c[l] == 0 && c[l + 1] == 0)
}

/// `(a, b, c, d)`: L and R counts over `I_0..I_{n-1}` and `I_n..I_{2n-1}`.
pub fn ref_matrix(n: u64, digits: &[u64]) -> [u64; 4] {
    let c = ref_counts(n, digits);
    let at = |l: i64| -> u64 {
        if l < 0 || l as usize >= c.len() {
            0
        } else {
            c[l as usize]
        }
    };
    let mut m = [0u64; 4];
    for l in 0..2 * n as i64 {
        let upper = if l < n as i64 { 0 } else { 2 };
        if at(l) == 1 && at(l - 1) == 0 {
            m[upper] += 1;
        }
        if at(l - 1) == 1 && at(l) == 0 {
            m[upper + 1] += 1;
        }
    }
    m
}

/// Spectral radius from the characteristic polynomial `x^2 - t x + det`.
pub fn ref_lambda(m: [u64; 4]) -> f64 {
    let t = (m[0] + m[3]) as f64;
    let det = m[0] as f64 * m[3] as f64 - m[1] as f64 * m[2] as f64;
    t / 2.0 + (t * t / 4.0 - det).max(0.0).sqrt()
}

/// Exact triviality: the characteristic polynomial has 1 as its largest root.
pub fn ref_trivial(m: [u64; 4]) -> bool {
    let (a, b, c, d) = (m[0] as i64, m[1] as i64, m[2] as i64, m[3] as i64);
    let p1 = 1 - (a + d) + (a * d - b * c);
    // 1 is a root and the other root a + d - 1 is at most 1.
    p1 == 0 && a + d <= 2
}

pub fn matrix_array(m: Matrix2) -> [u64; 4] {
    [m.a, m.b, m.c, m.d]
}

/// Level-`m` cylinder starts with full (unsaturated) multiplicities, built
/// by expanding every word over `B`.
pub fn ref_level_starts(n: u64, digits: &[u64], depth: u32) -> BTreeMap<u64, u64> {
    let counts = ref_counts(n, digits);
    let mut level: BTreeMap<u64, u64> = BTreeMap::from([(0, 1)]);
    for _ in 0..depth {
        let mut next = BTreeMap::new();
        for (&s, &mult) in &level {
            for (b, &cb) in counts.iter().enumerate() {
                if cb > 0 {
                    *next.entry(n * s + b as u64).or_insert(0) += mult * cb;
                }
            }
        }
        level = next;
    }
    level
}

/// Maximal closed intervals of `∪ [S, S+2]`.
pub fn ref_components(starts: &BTreeMap<u64, u64>) -> Vec<(u64, u64)> {
    let mut out: Vec<(u64, u64)> = Vec::new();
    for &s in starts.keys() {
        match out.last_mut() {
            Some(last) if s <= last.1 => last.1 = s + 2,
            _ => out.push((s, s + 2)),
        }
    }
    out
}

/// `(L_m, R_m)` straight from the unit-interval definition.
pub fn ref_level_typing(starts: &BTreeMap<u64, u64>) -> (u64, u64) {
    let mult = |j: i64| -> u64 {
        if j < 0 {
            0
        } else {
            starts.get(&(j as u64)).copied().unwrap_or(0)
        }
    };
    let top = *starts.keys().last().unwrap() as i64 + 2;
    let (mut l, mut r) = (0, 0);
    for j in 0..top {
        if mult(j) == 1 && mult(j - 1) == 0 {
            l += 1;
        }
        if mult(j - 1) == 1 && mult(j) == 0 {
            r += 1;
        }
    }
    (l, r)
}

/// All canonical digit sets of base `n` (every subset containing `0` and `n-1`).
pub fn all_sets(n: u64) -> impl Iterator<Item = DigitSet> {
    (0..1u64 << (n - 2)).map(move |middle| {
        let mask = 1 | middle << 1 | 1 << (n - 1);
        DigitSet::from_mask(n, mask).unwrap()
    })
}

pub fn set(n: u64, digits: &[u64]) -> DigitSet {
    DigitSet::new(n, digits.to_vec()).unwrap()
}
