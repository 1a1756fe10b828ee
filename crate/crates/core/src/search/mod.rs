//! Searches over digit sets `0, n-1 in A ⊆ {0..n-1}` for the largest
//! `dim_H(U_A)`.

mod figure;
mod heuristic;
pub mod kernel;

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::digits::DigitSet;
use crate::error::{Error, Result};
use crate::steinhaus_dim;
use crate::typing::{Matrix2, DIM_TOL};

pub use figure::{figure_csv, figure_data, FigureConfig, FigureRow, FigureSource};
pub use heuristic::{search_heuristic, search_heuristic_with_table, HeuristicConfig};
use kernel::{evaluate_mask, lex_le, reflect_mask, KernelEval};

/// Largest `n` accepted by [`search_exhaustive`].
pub const MAX_EXHAUSTIVE_N: u64 = 30;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Constraints {
    pub require_good: bool,
    pub require_very_good: bool,
}

impl Constraints {
    pub const ANY: Constraints = Constraints {
        require_good: false,
        require_very_good: false,
    };
    pub const GOOD: Constraints = Constraints {
        require_good: true,
        require_very_good: false,
    };
    pub const VERY_GOOD: Constraints = Constraints {
        require_good: true,
        require_very_good: true,
    };

    pub fn admits(&self, good: bool, very_good: bool) -> bool {
        (!self.require_good || good) && (!self.require_very_good || very_good)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchRecord {
    pub n: u64,
    pub digits: DigitSet,
    pub good: bool,
    pub very_good: bool,
    pub matrix: Matrix2,
    pub lambda: f64,
    pub dim: f64,
}

pub const CSV_HEADER: &str = "n,digits,good,very_good,a,b,c,d,lambda,dim";

impl SearchRecord {
    pub(crate) fn from_eval(digits: DigitSet, eval: KernelEval) -> Self {
        let n = digits.n();
        let m = eval.matrix;
        let trivial = m.perron_is_one();
        let lambda = if trivial { 1.0 } else { m.perron() };
        let dim = if trivial { 0.0 } else { lambda.ln() / (n as f64).ln() };
        let very_good = eval.good
            && !digits.contains(1)
            && !digits.contains(n - 2)
            && (m.a + m.b == m.c + m.d || m.a + m.c == m.b + m.d);
        SearchRecord {
            n,
            digits,
            good: eval.good,
            very_good,
            matrix: m,
            lambda,
            dim,
        }
    }

    pub fn csv_row(&self) -> String {
        let m = self.matrix;
        format!(
            "{},{},{},{},{},{},{},{},{:.10},{:.10}",
            self.n,
            self.digits.cell(),
            self.good,
            self.very_good,
            m.a,
            m.b,
            m.c,
            m.d,
            self.lambda,
            self.dim
        )
    }

    /// Names of the violated structural invariants (empty when sound).
    pub fn violations(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        let trivial = self.matrix.perron_is_one();
        if !trivial && self.lambda < 2.0 - DIM_TOL {
            v.push("lambda in {1} or [2, inf)");
        }
        if self.good && self.lambda > self.digits.len() as f64 + DIM_TOL {
            v.push("lambda <= |A|");
        }
        if self.good && ((self.digits.len() * self.digits.len()) as u64) < self.n {
            v.push("good implies |A| >= sqrt(n)");
        }
        let excluded = !self.digits.contains(1) && !self.digits.contains(self.n - 2);
        if self.good && excluded && self.lambda < 2.0 - DIM_TOL {
            v.push("1, n-2 not in A implies lambda >= 2");
        }
        v
    }

    pub fn exceeds_conjecture(&self) -> bool {
        self.dim > steinhaus_dim() + DIM_TOL
    }
}

/// Larger eigenvalue first, then the lexicographically smaller digit list.
pub fn compare_records(x: &SearchRecord, y: &SearchRecord) -> Ordering {
    if (x.lambda - y.lambda).abs() > DIM_TOL {
        return x.lambda.partial_cmp(&y.lambda).unwrap();
    }
    y.digits.digits().cmp(x.digits.digits())
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SearchStats {
    pub evaluated: u64,
    pub feasible: u64,
    pub violations: u64,
    /// Records with `dim > log 2 / log 3`.
    pub conjecture_exceedances: Vec<String>,
}

impl SearchStats {
    fn merge(mut self, other: SearchStats) -> Self {
        self.evaluated += other.evaluated;
        self.feasible += other.feasible;
        self.violations += other.violations;
        self.conjecture_exceedances.extend(other.conjecture_exceedances);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub n: u64,
    pub constraints: Constraints,
    pub best: Option<SearchRecord>,
    pub stats: SearchStats,
}

#[derive(Clone, Copy)]
struct Best {
    lambda: f64,
    mask: u64,
    eval: KernelEval,
}

fn better(x: Option<Best>, y: Option<Best>) -> Option<Best> {
    match (x, y) {
        (None, b) | (b, None) => b,
        (Some(p), Some(q)) => {
            if (p.lambda - q.lambda).abs() > DIM_TOL {
                if p.lambda > q.lambda { Some(p) } else { Some(q) }
            } else if lex_le(p.mask, q.mask) {
                Some(p)
            } else {
                Some(q)
            }
        }
    }
}

/// Interior bit positions that are free to vary.
fn free_positions(n: u64, constraints: Constraints) -> Vec<u32> {
    let fixed_out = |i: u64| constraints.require_very_good && (i == 1 || i == n - 2);
    (1..n - 1).filter(|&i| !fixed_out(i)).map(|i| i as u32).collect()
}

#[inline]
fn scatter(index: u64, positions: &[u32]) -> u64 {
    positions
        .iter()
        .enumerate()
        .fold(0, |m, (k, &p)| m | (index >> k & 1) << p)
}

fn lambda_of(m: Matrix2) -> f64 {
    if m.perron_is_one() {
        1.0
    } else {
        m.perron()
    }
}

fn scan<F>(
    n: u64,
    constraints: Constraints,
    positions: &[u32],
    range: std::ops::Range<u64>,
    mut visit: F,
) -> (Option<Best>, SearchStats)
where
    F: FnMut(u64, KernelEval),
{
    let ends = 1 | 1 << (n - 1);
    let mut best = None;
    let mut stats = SearchStats::default();
    for idx in range {
        let mask = ends | scatter(idx, positions);
        if !lex_le(mask, reflect_mask(mask, n as u32)) {
            continue;
        }
        stats.evaluated += 1;
        let eval = evaluate_mask(mask, n as u32);
        let record_needed = eval.good || !constraints.require_good;
        if !record_needed {
            continue;
        }
        let m = eval.matrix;
        let very_good = eval.good
            && mask >> 1 & 1 == 0
            && mask >> (n - 2) & 1 == 0
            && (m.a + m.b == m.c + m.d || m.a + m.c == m.b + m.d);
        if !constraints.admits(eval.good, very_good) {
            continue;
        }
        stats.feasible += 1;
        let lambda = lambda_of(m);
        // Cheap inline invariant checks.
        let size = mask.count_ones() as f64;
        let trivial = lambda == 1.0;
        let excluded = mask >> 1 & 1 == 0 && mask >> (n - 2) & 1 == 0;
        if (!trivial && lambda < 2.0 - DIM_TOL)
            || (eval.good && (lambda > size + DIM_TOL || size * size < n as f64))
            || (eval.good && excluded && lambda < 2.0 - DIM_TOL)
        {
            stats.violations += 1;
        }
        if !trivial && lambda.ln() / (n as f64).ln() > steinhaus_dim() + DIM_TOL {
            let set = DigitSet::from_mask(n, mask).expect("canonical mask");
            stats
                .conjecture_exceedances
                .push(SearchRecord::from_eval(set, eval).csv_row());
        }
        visit(mask, eval);
        best = better(best, Some(Best { lambda, mask, eval }));
    }
    (best, stats)
}

const CHUNK: u64 = 1 << 14;

fn check_exhaustive_range(n: u64) -> Result<()> {
    if !(3..=MAX_EXHAUSTIVE_N).contains(&n) {
        return Err(Error::ExhaustiveInfeasible {
            n,
            max: MAX_EXHAUSTIVE_N,
        });
    }
    Ok(())
}

/// Best record over all reflection classes of admissible sets; ties go to
/// the lexicographically smallest digit list. Runs on the current rayon
/// pool; the result does not depend on its size.
pub fn search_exhaustive(n: u64, constraints: Constraints) -> Result<SearchOutcome> {
    check_exhaustive_range(n)?;
    let positions = free_positions(n, constraints);
    let total = 1u64 << positions.len();
    let chunks = total.div_ceil(CHUNK);
    let (best, stats) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let range = c * CHUNK..((c + 1) * CHUNK).min(total);
            scan(n, constraints, &positions, range, |_, _| {})
        })
        .reduce(
            || (None, SearchStats::default()),
            |(b1, s1), (b2, s2)| (better(b1, b2), s1.merge(s2)),
        );
    let mut stats = stats;
    stats.conjecture_exceedances.sort();
    let best = best.map(|b| {
        let set = DigitSet::from_mask(n, b.mask).expect("canonical mask");
        SearchRecord::from_eval(set, b.eval)
    });
    Ok(SearchOutcome {
        n,
        constraints,
        best,
        stats,
    })
}

/// Every admissible reflection-class representative, in mask order.
pub fn exhaustive_records(n: u64, constraints: Constraints) -> Result<Vec<SearchRecord>> {
    check_exhaustive_range(n)?;
    let positions = free_positions(n, constraints);
    let total = 1u64 << positions.len();
    let chunks = total.div_ceil(CHUNK);
    let per_chunk: Vec<Vec<SearchRecord>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let range = c * CHUNK..((c + 1) * CHUNK).min(total);
            let mut out = Vec::new();
            scan(n, constraints, &positions, range, |mask, eval| {
                let set = DigitSet::from_mask(n, mask).expect("canonical mask");
                out.push(SearchRecord::from_eval(set, eval));
            });
            out
        })
        .collect();
    Ok(per_chunk.into_iter().flatten().collect())
}
