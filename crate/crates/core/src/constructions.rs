//! Explicit families of digit sets: `O(sqrt n)` good sets with trivial
//! uniqueness set, the tower operators `A^k = A ∪ (A + 2n - k)` in base
//! `3n - k`, and tower chains reaching large `n` from a table of bases.

use std::collections::BTreeMap;
use std::io::Read;

use serde::Serialize;

use crate::digits::{parse_cell, DigitSet};
use crate::error::{Error, Result};
use crate::sumset::SumsetProfile;
use crate::typing::{analyze_uniqueness, Matrix2, UniquenessReport};

const BUNDLED_TABLE: &str = include_str!("../data/table1.csv");

/// Smallest base accepted by [`sqrt_construction`] and [`chain_to_target`].
pub const MIN_CONSTRUCTION_N: u64 = 9;

fn nearest_sqrt(n: u64) -> u64 {
    let mut k = (n as f64).sqrt() as u64;
    while k * k > n {
        k -= 1;
    }
    while (k + 1) * (k + 1) <= n {
        k += 1;
    }
    if n - k * k > k {
        k + 1
    } else {
        k
    }
}

/// `{0..k} ∪ {n-1-k..n-1} ∪ {0, k, 2k, .., tk}` with `k` the integer
/// nearest `sqrt n` and `tk` the largest multiple of `k` below `n`.
pub fn sqrt_construction(n: u64) -> Result<DigitSet> {
    if n < MIN_CONSTRUCTION_N {
        return Err(Error::ConstructionRange {
            n,
            min: MIN_CONSTRUCTION_N,
        });
    }
    let k = nearest_sqrt(n);
    let mut digits: Vec<u64> = (0..=k).collect();
    digits.extend(n - 1 - k..n);
    digits.extend((0..n).step_by(k as usize));
    digits.sort_unstable();
    digits.dedup();
    DigitSet::new(n, digits)
}

/// `(2λ - k, 3n - k)`: Perron eigenvalue and base after one tower step.
pub fn tower_dim(lambda: f64, n: u64, k: u64) -> (f64, u64) {
    assert!(k <= 2, "tower step must be 0, 1 or 2");
    (2.0 * lambda - k as f64, 3 * n - k)
}

pub fn tower_step_dim(lambda: f64, n: u64, k: u64) -> f64 {
    let (l, m) = tower_dim(lambda, n, k);
    l.ln() / (m as f64).ln()
}

/// Adjacency matrix of `A^k` predicted from that of `A`, following the
/// interval typing: the copies of the sumset at offsets `0`, `2n-k` and
/// `4n-2k` keep their L/R intervals except where they touch.
pub fn predicted_tower_matrix(m: Matrix2, k: u64) -> Matrix2 {
    let l = m.a + m.c;
    let r = m.b + m.d;
    match k {
        0 => Matrix2::new(l, r, l, r),
        1 => Matrix2::new(l, r - 1, l - 1, r),
        2 => Matrix2::new(l - 1, r - 1, l - 1, r - 1),
        _ => panic!("tower step must be 0, 1 or 2"),
    }
}

/// `A ∪ (A + 2n - k)` in base `3n - k`, with very-goodness checked on the
/// input and re-derived on the output.
pub fn tower(set: &DigitSet, k: u64) -> Result<DigitSet> {
    tower_with_report(set, k).map(|(s, _)| s)
}

pub fn tower_with_report(set: &DigitSet, k: u64) -> Result<(DigitSet, UniquenessReport)> {
    if k > 2 {
        return Err(Error::InvalidTowerStep(k));
    }
    if !set.is_canonical() {
        return Err(Error::NotCanonical);
    }
    let (_, before) = analyze_uniqueness(set);
    if !before.very_good {
        return Err(Error::NotVeryGood { n: set.n() });
    }
    let n = set.n();
    let shift = 2 * n - k;
    let mut digits = set.digits().to_vec();
    digits.extend(set.digits().iter().map(|&a| a + shift));
    let out = DigitSet::new(3 * n - k, digits)?;
    let (_, after) = analyze_uniqueness(&out);
    if !after.very_good {
        return Err(Error::TowerVerification(format!(
            "{}-step output is not {}-very-good",
            k,
            out.n()
        )));
    }
    Ok((out, after))
}

/// Very-good base sets keyed by `n`, with their recorded dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseTable {
    rows: BTreeMap<u64, (DigitSet, f64)>,
}

impl BaseTable {
    /// Bases for `n = 9..=27`.
    pub fn bundled() -> Self {
        Self::from_reader(BUNDLED_TABLE.as_bytes()).expect("bundled table parses")
    }

    /// CSV with header `n,digits,dim` and `;`-joined digits.
    pub fn from_reader(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let mut rows = BTreeMap::new();
        for record in rdr.records() {
            let record = record.map_err(|e| Error::Table(e.to_string()))?;
            let field = |i: usize| {
                record
                    .get(i)
                    .map(str::trim)
                    .ok_or_else(|| Error::Table(format!("missing column {i}")))
            };
            let n: u64 = field(0)?
                .parse()
                .map_err(|_| Error::Table(format!("bad n {:?}", &record[0])))?;
            let set = parse_cell(n, field(1)?)?;
            let dim: f64 = field(2)?
                .parse()
                .map_err(|_| Error::Table(format!("bad dim {:?}", &record[2])))?;
            rows.insert(n, (set, dim));
        }
        Ok(BaseTable { rows })
    }

    pub fn get(&self, n: u64) -> Option<&DigitSet> {
        self.rows.get(&n).map(|(s, _)| s)
    }

    pub fn listed_dim(&self, n: u64) -> Option<f64> {
        self.rows.get(&n).map(|&(_, d)| d)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &DigitSet, f64)> {
        self.rows.iter().map(|(&n, (s, d))| (n, s, *d))
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainStep {
    /// Tower step applied to reach this row; `None` for the base.
    pub k: Option<u64>,
    pub n: u64,
    #[serde(skip)]
    pub set: DigitSet,
    /// From the recurrence `λ -> 2λ - k`.
    pub lambda: f64,
    pub dim: f64,
    pub size: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TowerChain {
    pub base_matrix: Matrix2,
    pub steps: Vec<ChainStep>,
}

/// One row of [`TowerChain::verify_direct`].
#[derive(Debug, Clone, Serialize)]
pub struct DirectCheck {
    pub n: u64,
    pub predicted: Matrix2,
    pub direct: Matrix2,
    pub lambda_recurrence: f64,
    pub lambda_direct: f64,
    pub very_good: bool,
    pub ok: bool,
}

impl TowerChain {
    pub fn base(&self) -> &ChainStep {
        &self.steps[0]
    }

    pub fn last(&self) -> &ChainStep {
        self.steps.last().unwrap()
    }

    pub fn ks(&self) -> Vec<u64> {
        self.steps.iter().filter_map(|s| s.k).collect()
    }

    /// Rows `step,n,digits,lambda,dim`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,n,digits,lambda,dim\n");
        for (i, s) in self.steps.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{:.10}\n",
                i,
                s.n,
                s.set.cell(),
                s.lambda,
                s.dim
            ));
        }
        out
    }

    /// Recomputes the typing of each step from scratch (or only the last
    /// when `all` is false) and compares it with the predicted matrix and
    /// the recurrence eigenvalue.
    pub fn verify_direct(&self, all: bool) -> Vec<DirectCheck> {
        let mut predicted = self.base_matrix;
        let mut checks = Vec::new();
        let last = self.steps.len() - 1;
        for (i, step) in self.steps.iter().enumerate() {
            if let Some(k) = step.k {
                predicted = predicted_tower_matrix(predicted, k);
            }
            if !all && i != last {
                continue;
            }
            let (typing, report) = analyze_uniqueness(&step.set);
            let direct = typing.matrix();
            let ok = direct == predicted
                && report.very_good
                && (report.lambda - step.lambda).abs() <= 1e-9 * step.lambda;
            checks.push(DirectCheck {
                n: step.n,
                predicted,
                direct,
                lambda_recurrence: step.lambda,
                lambda_direct: report.lambda,
                very_good: report.very_good,
                ok,
            });
        }
        checks
    }

    /// Accumulated corrections `(x, y)` in
    /// `dim_t = (t log 2 + log λ0 + log(1-x)) / (t log 3 + log n0 + log(1-y))`.
    pub fn error_terms(&self) -> (f64, f64) {
        let base = self.base();
        let (mut x, mut y) = (0.0, 0.0);
        for (i, k) in self.ks().into_iter().enumerate() {
            let p = (i + 1) as i32;
            x += k as f64 / (base.lambda * 2f64.powi(p));
            y += k as f64 / (base.n as f64 * 3f64.powi(p));
        }
        (x, y)
    }
}

/// Steps `k_1..k_t` (first to last) taking some table base to `n_target`;
/// each `k` is the unique value in {0,1,2} with `3 | n + k`.
pub fn chain_steps(n_target: u64, table: &BaseTable) -> Result<(u64, Vec<u64>)> {
    if n_target < MIN_CONSTRUCTION_N {
        return Err(Error::ConstructionRange {
            n: n_target,
            min: MIN_CONSTRUCTION_N,
        });
    }
    let top = table.rows.keys().next_back().copied().unwrap_or(0);
    let mut n = n_target;
    let mut ks = Vec::new();
    while table.get(n).is_none() {
        if n <= top || n < MIN_CONSTRUCTION_N {
            return Err(Error::MissingBase(n));
        }
        let k = (3 - n % 3) % 3;
        ks.push(k);
        n = (n + k) / 3;
    }
    ks.reverse();
    Ok((n, ks))
}

pub fn chain_to_target(n_target: u64, table: &BaseTable) -> Result<TowerChain> {
    let (n0, ks) = chain_steps(n_target, table)?;
    let base = table.get(n0).ok_or(Error::MissingBase(n0))?.clone();
    let (typing, report) = analyze_uniqueness(&base);
    if !report.very_good {
        return Err(Error::NotVeryGood { n: n0 });
    }
    let mut steps = vec![ChainStep {
        k: None,
        n: n0,
        size: base.len(),
        set: base,
        lambda: report.lambda,
        dim: report.dim,
    }];
    for k in ks {
        let prev = steps.last().unwrap();
        let set = tower(&prev.set, k)?;
        let (lambda, n) = tower_dim(prev.lambda, prev.n, k);
        debug_assert_eq!(n, set.n());
        steps.push(ChainStep {
            k: Some(k),
            n,
            size: set.len(),
            set,
            lambda,
            dim: lambda.ln() / (n as f64).ln(),
        });
    }
    Ok(TowerChain {
        base_matrix: typing.matrix(),
        steps,
    })
}

/// Whether `set` is good with a trivial uniqueness set.
pub fn is_good_and_trivial(set: &DigitSet) -> bool {
    let profile = SumsetProfile::new(set);
    profile.max_gap() <= 2 && analyze_uniqueness(set).1.trivial
}
