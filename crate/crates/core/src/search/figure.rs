//! Largest known `dim_H(U_A)` per `n` over good sets, with the reference
//! line `log 2 / log 3`.

use serde::Serialize;

use super::heuristic::search_heuristic_with_table;
use super::{compare_records, search_exhaustive, Constraints, HeuristicConfig, SearchRecord};
use crate::constructions::{chain_to_target, BaseTable};
use crate::error::Result;
use crate::steinhaus_dim;
use crate::typing::analyze_uniqueness;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FigureConfig {
    /// Exhaustive search up to this `n`, heuristic above it.
    pub exhaustive_max_n: u64,
    pub budget: u64,
    pub seed: u64,
}

impl Default for FigureConfig {
    fn default() -> Self {
        FigureConfig {
            exhaustive_max_n: 20,
            budget: 20_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FigureSource {
    Exhaustive,
    Heuristic,
    Tower,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureRow {
    pub n: u64,
    pub best_dim: f64,
    pub reference: f64,
    pub source: FigureSource,
    pub record: SearchRecord,
}

pub fn figure_data(ns: impl IntoIterator<Item = u64>, config: &FigureConfig) -> Result<Vec<FigureRow>> {
    let table = BaseTable::bundled();
    let mut rows = Vec::new();
    for n in ns {
        let mut candidates: Vec<(FigureSource, SearchRecord)> = Vec::new();
        if n <= config.exhaustive_max_n {
            let out = search_exhaustive(n, Constraints::GOOD)?;
            candidates.extend(out.best.map(|r| (FigureSource::Exhaustive, r)));
        } else {
            let cfg = HeuristicConfig::new(config.budget, config.seed ^ n, Constraints::GOOD);
            let out = search_heuristic_with_table(n, &cfg, &table)?;
            candidates.extend(out.best.map(|r| (FigureSource::Heuristic, r)));
        }
        if let Ok(chain) = chain_to_target(n, &table) {
            let set = chain.last().set.clone();
            let (typing, report) = analyze_uniqueness(&set);
            candidates.push((
                FigureSource::Tower,
                SearchRecord {
                    n,
                    digits: set,
                    good: report.good,
                    very_good: report.very_good,
                    matrix: typing.matrix(),
                    lambda: report.lambda,
                    dim: report.dim,
                },
            ));
        }
        let (source, record) = candidates
            .into_iter()
            .reduce(|x, y| if compare_records(&y.1, &x.1).is_gt() { y } else { x })
            .expect("search over n >= 3 finds a good set");
        rows.push(FigureRow {
            n,
            best_dim: record.dim,
            reference: steinhaus_dim(),
            source,
            record,
        });
    }
    Ok(rows)
}

/// Rows `n,best_dim,reference`.
pub fn figure_csv(rows: &[FigureRow]) -> String {
    let mut out = String::from("n,best_dim,reference\n");
    for r in rows {
        out.push_str(&format!("{},{:.10},{:.10}\n", r.n, r.best_dim, r.reference));
    }
    out
}
