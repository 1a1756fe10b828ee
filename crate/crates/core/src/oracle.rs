//! Depth-bounded brute force over the level-`m` approximation
//! `E_m = ∪ [S, S + 2]` (integer units of `n^-m`) of `C_{B,n}`, `B = A + A`.
//!
//! A level-`m` start is `S = Σ b_i n^(m-i)`; its multiplicity sums
//! `Π counts[b_i]` over producing words and saturates at 2. The attractor
//! lies in `[0, h]` with `h = max B / (n - 1)` (`h = 2` for canonical sets),
//! so each cylinder is `[S, S + h]`. No floating point is used until growth
//! rates are reported.

use serde::Serialize;

use crate::digits::DigitSet;
use crate::error::{Error, Result};
use crate::sumset::SumsetProfile;
use crate::typing::{classify_intervals, Matrix2};

/// Default cap on `distinct starts x |B|` per level expansion.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits {
    words: Vec<u64>,
}

impl Bits {
    fn new(len: u64) -> Self {
        Bits {
            words: vec![0; (len / 64 + 1) as usize],
        }
    }

    #[inline]
    fn get(&self, i: u64) -> bool {
        self.words
            .get((i / 64) as usize)
            .is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    #[inline]
    fn set(&mut self, i: u64) {
        self.words[(i / 64) as usize] |= 1 << (i % 64);
    }

    fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as u64;
                w &= w - 1;
                Some(wi as u64 * 64 + bit)
            })
        })
    }
}

/// Cylinder starts of one level with multiplicities in {0, 1, >=2}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSet {
    n: u64,
    depth: u32,
    max_start: u64,
    /// Units of `1 / (scale n^depth)`; cylinders have length `hull`.
    scale: u64,
    hull: u64,
    present: Bits,
    multiple: Bits,
    components: Vec<(u64, u64)>,
}

impl LevelSet {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Components are measured in units of `1 / denominator`; this is
    /// `n^depth` for canonical sets.
    pub fn denominator(&self) -> u64 {
        self.scale * self.n.pow(self.depth)
    }

    pub fn max_start(&self) -> u64 {
        self.max_start
    }

    pub fn start_count(&self) -> u64 {
        self.present.count()
    }

    pub fn starts(&self) -> impl Iterator<Item = u64> + '_ {
        self.present.iter()
    }

    /// 0, 1 or 2 (meaning at least two).
    pub fn multiplicity(&self, start: i64) -> u8 {
        if start < 0 {
            return 0;
        }
        let s = start as u64;
        match (self.present.get(s), self.multiple.get(s)) {
            (false, _) => 0,
            (true, false) => 1,
            (true, true) => 2,
        }
    }

    /// Maximal closed intervals of `E_m`, sorted, in units of `1 / denominator`.
    pub fn components(&self) -> &[(u64, u64)] {
        &self.components
    }

    /// Whether unit interval `[j, j+1]` meets a cylinder.
    pub fn unit_survives(&self, j: u64) -> bool {
        self.present.get(j) || (j > 0 && self.present.get(j - 1))
    }

    /// Whether `[lo, hi]` lies inside `E_m`.
    pub fn covers(&self, lo: u64, hi: u64) -> bool {
        self.components.iter().any(|&(s, e)| s <= lo && hi <= e)
    }

    /// Whether the open interval `(lo, hi)` avoids `E_m`.
    pub fn misses_open(&self, lo: u64, hi: u64) -> bool {
        self.components.iter().all(|&(s, e)| e <= lo || hi <= s)
    }

    /// Number of unit intervals of this level inside `E_m`.
    pub fn covered_units(&self) -> u64 {
        self.components.iter().map(|&(s, e)| e - s).sum()
    }

    /// `E_self ⊆ E_coarser` after rescaling the coarser level to this unit.
    pub fn refines(&self, coarser: &LevelSet) -> bool {
        assert!(coarser.n == self.n && coarser.depth <= self.depth);
        let scale = self.n.pow(self.depth - coarser.depth);
        let coarse = &coarser.components;
        self.components.iter().all(|&(s, e)| {
            let i = coarse.partition_point(|&(cs, _)| cs * scale <= s);
            i > 0 && e <= coarse[i - 1].1 * scale
        })
    }

    /// Units `j` at `coarse_depth` whose whole extent lies in this `E_m`.
    pub fn full_units_at(&self, coarse_depth: u32) -> Vec<u64> {
        assert!(coarse_depth <= self.depth);
        let scale = self.n.pow(self.depth - coarse_depth);
        let mut out = Vec::new();
        for &(s, e) in &self.components {
            let first = s.div_ceil(scale);
            let mut j = first;
            while (j + 1) * scale <= e {
                out.push(j);
                j += 1;
            }
        }
        out
    }

    /// Rows `depth,start_numerator,end_numerator,denominator`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("depth,start_numerator,end_numerator,denominator\n");
        let den = self.denominator();
        for &(s, e) in &self.components {
            out.push_str(&format!("{},{},{},{}\n", self.depth, s, e, den));
        }
        out
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn saturated_digits(set: &DigitSet) -> Vec<(u64, u8)> {
    let profile = SumsetProfile::new(set);
    profile
        .support()
        .iter()
        .map(|&b| (b, profile.counts()[b as usize].min(2) as u8))
        .collect()
}

/// Exact level-`depth` starts and `E_m` components of `C_A + C_A`.
pub fn oracle_em_intervals(set: &DigitSet, depth: u32, budget: u64) -> Result<LevelSet> {
    let n = set.n();
    let digits = saturated_digits(set);
    let max_b = digits.last().map(|&(b, _)| b).unwrap_or(0);

    let mut present = Bits::new(0);
    let mut multiple = Bits::new(0);
    present.set(0);
    let mut max_start = 0u64;

    for level in 1..=depth {
        let starts = present.count();
        let work = starts.saturating_mul(digits.len() as u64);
        let next_max = max_start
            .checked_mul(n)
            .and_then(|v| v.checked_add(max_b));
        let next_max = match next_max {
            Some(v) if work <= budget && v / 64 <= budget => v,
            _ => {
                return Err(Error::BudgetExceeded {
                    depth: level,
                    work,
                    budget,
                })
            }
        };
        let mut next_present = Bits::new(next_max + 1);
        let mut next_multiple = Bits::new(next_max + 1);
        for s in present.iter() {
            let ms: u8 = if multiple.get(s) { 2 } else { 1 };
            let base = s * n;
            for &(b, cb) in &digits {
                let t = base + b;
                if ms * cb >= 2 || next_present.get(t) {
                    next_multiple.set(t);
                }
                next_present.set(t);
            }
        }
        present = next_present;
        multiple = next_multiple;
        max_start = next_max;
    }

    let g = gcd(max_b, n - 1).max(1);
    let (scale, hull) = ((n - 1) / g, max_b / g);
    let mut components: Vec<(u64, u64)> = Vec::new();
    for s in present.iter() {
        let (lo, hi) = (s * scale, s * scale + hull);
        match components.last_mut() {
            Some((_, end)) if lo <= *end => *end = hi,
            _ => components.push((lo, hi)),
        }
    }

    Ok(LevelSet {
        n,
        depth,
        max_start,
        scale,
        hull,
        present,
        multiple,
        components,
    })
}

/// `(L_m, R_m)` counts of a level set: `L` where start `j` is unique and
/// `j-1` absent, `R` where `j-1` is unique and `j` absent.
pub fn level_typing_counts(level: &LevelSet) -> (u64, u64) {
    let mut l = 0;
    let mut r = 0;
    for j in level.starts() {
        let j = j as i64;
        if level.multiplicity(j) == 1 && level.multiplicity(j - 1) == 0 {
            l += 1;
        }
        if level.multiplicity(j) == 1 && level.multiplicity(j + 1) == 0 {
            r += 1;
        }
    }
    (l, r)
}

pub fn oracle_level_typing(set: &DigitSet, depth: u32, budget: u64) -> Result<(u64, u64)> {
    if !set.is_canonical() {
        return Err(Error::NotCanonical);
    }
    Ok(level_typing_counts(&oracle_em_intervals(set, depth, budget)?))
}

/// How the adjacency matrix acts on the `(L, R)` count vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orientation {
    /// `v' = M v`.
    Matrix,
    /// `v' = M^T v`.
    Transpose,
}

impl Orientation {
    pub fn step(self, m: Matrix2, v: [u64; 2]) -> [u64; 2] {
        match self {
            Orientation::Matrix => m.apply(v),
            Orientation::Transpose => m.transpose().apply(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub matrix: Matrix2,
    pub dim: f64,
    /// Oracle `(L_m, R_m)` for `m = 1..=m_max`.
    pub observed: Vec<[u64; 2]>,
    pub matches_matrix: bool,
    pub matches_transpose: bool,
    /// Both orientations reproduce every observed depth.
    pub orientation_ambiguous: bool,
    /// `log(L_m + R_m) / (m log n)` for each depth.
    pub rates: Vec<f64>,
}

impl GrowthReport {
    pub fn matches(&self, orientation: Orientation) -> bool {
        match orientation {
            Orientation::Matrix => self.matches_matrix,
            Orientation::Transpose => self.matches_transpose,
        }
    }

    pub fn final_rate(&self) -> f64 {
        *self.rates.last().unwrap_or(&0.0)
    }
}

/// Compares oracle `(L_m, R_m)` with the matrix-power evolution of
/// `(L_1, R_1)` under both `M` and `M^T`.
pub fn oracle_growth_check(set: &DigitSet, m_max: u32, budget: u64) -> Result<GrowthReport> {
    if !set.is_canonical() {
        return Err(Error::NotCanonical);
    }
    let profile = SumsetProfile::new(set);
    let matrix = classify_intervals(&profile).matrix();
    let n = set.n();
    let lambda = matrix.perron();
    let dim = if matrix.perron_is_one() {
        0.0
    } else {
        lambda.ln() / (n as f64).ln()
    };

    let mut observed = Vec::with_capacity(m_max as usize);
    let mut rates = Vec::with_capacity(m_max as usize);
    let mut level = oracle_em_intervals(set, 1, budget)?;
    for m in 1..=m_max {
        if m > 1 {
            level = oracle_em_intervals(set, m, budget)?;
        }
        let (l, r) = level_typing_counts(&level);
        observed.push([l, r]);
        rates.push(((l + r) as f64).ln() / (m as f64 * (n as f64).ln()));
    }

    let follows = |o: Orientation| {
        let mut v = observed[0];
        observed.iter().skip(1).all(|&next| {
            v = o.step(matrix, v);
            v == next
        })
    };
    let matches_matrix = follows(Orientation::Matrix);
    let matches_transpose = follows(Orientation::Transpose);

    Ok(GrowthReport {
        matrix,
        dim,
        observed,
        matches_matrix,
        matches_transpose,
        orientation_ambiguous: matches_matrix && matches_transpose,
        rates,
    })
}

/// Fixes the orientation from depth-2 counts of the first good set with
/// `b != c` (scanning `n = 4..=12` in mask order) whose two predictions
/// differ.
pub fn determine_orientation(budget: u64) -> Result<(Orientation, DigitSet)> {
    for n in 4..=12u64 {
        for middle in 0..1u64 << (n - 2) {
            let set = DigitSet::from_mask(n, 1 | middle << 1 | 1 << (n - 1))?;
            let profile = SumsetProfile::new(&set);
            if profile.max_gap() > 2 {
                continue;
            }
            let m = classify_intervals(&profile).matrix();
            let v1 = m.col_sums();
            if m.b == m.c || m.apply(v1) == m.transpose().apply(v1) {
                continue;
            }
            let report = oracle_growth_check(&set, 2, budget)?;
            return match (report.matches_matrix, report.matches_transpose) {
                (true, false) => Ok((Orientation::Matrix, set)),
                (false, true) => Ok((Orientation::Transpose, set)),
                _ => Err(Error::NotApplicable("no orientation reproduces the depth-2 counts")),
            };
        }
    }
    Err(Error::NotApplicable("no asymmetric good set found"))
}
