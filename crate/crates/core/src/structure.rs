//! Which of the three shapes `C_A + C_A` takes: the full interval `[0, 2]`,
//! a Cantor set, or a countable mix of intervals and gaps.
//!
//! A unit interval `j` of some level is described by `(x, y)`: whether `j`
//! and `j-1` are cylinder starts. A level-`(m+1)` start `n S + b` with
//! `b <= 2n-2` inside unit `j` has `S` in `{j, j-1}`, so the children of a
//! unit depend only on its state. `FULL` states (every descendant survives)
//! are the greatest fixed point over the three surviving states.

use serde::Serialize;

use crate::digits::DigitSet;
use crate::error::{Error, Result};
use crate::oracle::{oracle_em_intervals, DEFAULT_BUDGET};
use crate::sumset::SumsetProfile;

/// Deepest level at which an interval witness is looked for.
pub const WITNESS_DEPTH_CAP: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CoverState {
    pub x: bool,
    pub y: bool,
}

impl CoverState {
    pub const SURVIVING: [CoverState; 3] = [
        CoverState { x: true, y: false },
        CoverState { x: false, y: true },
        CoverState { x: true, y: true },
    ];

    pub fn survives(self) -> bool {
        self.x || self.y
    }

    fn index(self) -> Option<usize> {
        match (self.x, self.y) {
            (true, false) => Some(0),
            (false, true) => Some(1),
            (true, true) => Some(2),
            (false, false) => None,
        }
    }
}

/// Transition structure of the covering automaton for one sumset.
#[derive(Debug, Clone)]
pub struct CoverAutomaton {
    n: u64,
    member: Vec<bool>,
}

impl CoverAutomaton {
    pub fn new(profile: &SumsetProfile) -> Self {
        let member = profile.counts().iter().map(|&c| c > 0).collect();
        CoverAutomaton {
            n: profile.n(),
            member,
        }
    }

    fn has(&self, b: i64) -> bool {
        b >= 0 && self.member.get(b as usize).copied().unwrap_or(false)
    }

    /// State of unit `j` of level 1.
    pub fn seed(&self, j: u64) -> CoverState {
        let j = j as i64;
        CoverState {
            x: self.has(j),
            y: self.has(j - 1),
        }
    }

    pub fn child(&self, s: CoverState, r: u64) -> CoverState {
        let (n, r) = (self.n as i64, r as i64);
        CoverState {
            x: (s.x && self.has(r)) || (s.y && self.has(n + r)),
            y: (s.x && self.has(r - 1)) || (s.y && self.has(n + r - 1)),
        }
    }

    pub fn children(&self, s: CoverState) -> impl Iterator<Item = CoverState> + '_ {
        (0..self.n).map(move |r| self.child(s, r))
    }

    /// Greatest fixed point: surviving states whose children all survive
    /// and are themselves full.
    pub fn full_states(&self) -> [bool; 3] {
        let mut full = [true; 3];
        loop {
            let mut changed = false;
            for s in CoverState::SURVIVING {
                let i = s.index().unwrap();
                if full[i]
                    && !self
                        .children(s)
                        .all(|c| c.index().is_some_and(|ci| full[ci]))
                {
                    full[i] = false;
                    changed = true;
                }
            }
            if !changed {
                return full;
            }
        }
    }

    /// Levels needed from each surviving state to reach a full one.
    fn distance_to_full(&self, full: [bool; 3]) -> [Option<u32>; 3] {
        let mut dist = full.map(|f| f.then_some(0));
        for _ in 0..3 {
            for s in CoverState::SURVIVING {
                let i = s.index().unwrap();
                let best = self
                    .children(s)
                    .filter_map(|c| c.index().and_then(|ci| dist[ci]))
                    .min()
                    .map(|d| d + 1);
                if let Some(d) = best {
                    if dist[i].is_none_or(|cur| d < cur) {
                        dist[i] = Some(d);
                    }
                }
            }
        }
        dist
    }

    /// Surviving states reachable from the level-1 seeding.
    pub fn reachable(&self) -> [bool; 3] {
        let mut seen = [false; 3];
        let mut stack: Vec<CoverState> = (0..2 * self.n)
            .map(|j| self.seed(j))
            .filter(|s| s.survives())
            .collect();
        while let Some(s) = stack.pop() {
            let i = s.index().unwrap();
            if seen[i] {
                continue;
            }
            seen[i] = true;
            stack.extend(self.children(s).filter(|c| c.survives()));
        }
        seen
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        let g = gcd(num, den).max(1);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `self <= other` exactly.
    pub fn le(self, other: Ratio) -> bool {
        (self.num as u128) * (other.den as u128) <= (other.num as u128) * (self.den as u128)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RationalInterval {
    pub lo: Ratio,
    pub hi: Ratio,
}

impl RationalInterval {
    pub fn new(lo_num: u64, hi_num: u64, den: u64) -> Self {
        RationalInterval {
            lo: Ratio::new(lo_num, den),
            hi: Ratio::new(hi_num, den),
        }
    }

    pub fn contains(&self, other: &RationalInterval) -> bool {
        self.lo.le(other.lo) && other.hi.le(self.hi)
    }

    /// Image under `x -> (x + shift) / n`.
    pub fn contract(&self, shift: u64, n: u64) -> Self {
        let img = |r: Ratio| Ratio::new(r.num + shift * r.den, r.den * n);
        RationalInterval {
            lo: img(self.lo),
            hi: img(self.hi),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StructureCase {
    FullInterval,
    CantorSet,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureReport {
    pub case: StructureCase,
    /// Open interval disjoint from `C_A + C_A`.
    pub gap_witness: Option<RationalInterval>,
    /// Closed interval inside `C_A + C_A`.
    pub interval_witness: Option<RationalInterval>,
    pub witness_depth: Option<u32>,
    /// `(l', l'')`: level-1 intervals of support type R below and L above
    /// the gap; with `I_0` and `I_{2n-1}` they carry a two-node system of
    /// Perron eigenvalue at least 2 on the non-interval points.
    pub typed_intervals: Option<(u64, u64)>,
    pub points_dim_lower_bound: Option<f64>,
    pub depth_cap: u32,
}

pub fn classify_structure(set: &DigitSet) -> Result<StructureReport> {
    if !set.is_canonical() {
        return Err(Error::NotCanonical);
    }
    let n = set.n();
    let profile = SumsetProfile::new(set);
    if profile.max_gap() <= 2 {
        return Ok(StructureReport {
            case: StructureCase::FullInterval,
            gap_witness: None,
            interval_witness: Some(RationalInterval::new(0, 2, 1)),
            witness_depth: Some(0),
            typed_intervals: None,
            points_dim_lower_bound: None,
            depth_cap: WITNESS_DEPTH_CAP,
        });
    }

    let auto = CoverAutomaton::new(&profile);
    // A gap > 2 in B leaves two consecutive missing sums, hence a dead
    // level-1 unit.
    let dead: Vec<u64> = (0..2 * n).filter(|&j| !auto.seed(j).survives()).collect();
    let g0 = dead[0];
    let mut g1 = g0;
    while dead.binary_search(&(g1 + 1)).is_ok() {
        g1 += 1;
    }
    let gap = RationalInterval::new(g0, g1 + 1, n);

    let full = auto.full_states();
    let reach = auto.reachable();
    let mixed = (0..3).any(|i| full[i] && reach[i]);
    if !mixed {
        return Ok(StructureReport {
            case: StructureCase::CantorSet,
            gap_witness: Some(gap),
            interval_witness: None,
            witness_depth: None,
            typed_intervals: None,
            points_dim_lower_bound: None,
            depth_cap: WITNESS_DEPTH_CAP,
        });
    }

    let (interval, depth) = interval_witness(&auto, full, g0, g1)?;
    let typed = support_typed_intervals(&auto, n, g0);
    Ok(StructureReport {
        case: StructureCase::Mixed,
        gap_witness: Some(gap),
        interval_witness: Some(interval),
        witness_depth: Some(depth),
        typed_intervals: typed,
        points_dim_lower_bound: Some(2f64.ln() / (n as f64).ln()),
        depth_cap: WITNESS_DEPTH_CAP,
    })
}

/// Shallowest full unit, nearest to the gap run `[g0, g1]` at level 1.
fn interval_witness(
    auto: &CoverAutomaton,
    full: [bool; 3],
    g0: u64,
    g1: u64,
) -> Result<(RationalInterval, u32)> {
    let n = auto.n;
    let dist = auto.distance_to_full(full);
    let dist_of = |s: CoverState| s.index().and_then(|i| dist[i]);
    let distance_to_gap = |j: u64| if j < g0 { g0 - j } else { j.saturating_sub(g1) };

    let (mut j, mut state, mut remaining) = (0..2 * n)
        .filter_map(|j| {
            let s = auto.seed(j);
            dist_of(s).map(|d| (j, s, d))
        })
        .min_by_key(|&(j, _, d)| (d, distance_to_gap(j), j))
        .ok_or(Error::NotApplicable("no reachable full state"))?;

    let depth = 1 + remaining;
    if depth > WITNESS_DEPTH_CAP {
        return Err(Error::NotApplicable("interval witness deeper than the depth cap"));
    }
    while remaining > 0 {
        let r = (0..n)
            .find(|&r| dist_of(auto.child(state, r)) == Some(remaining - 1))
            .expect("distance decreases along some child");
        state = auto.child(state, r);
        j = j * n + r;
        remaining -= 1;
    }
    let den = n.pow(depth);
    Ok((RationalInterval::new(j, j + 1, den), depth))
}

/// Level-1 support typing around the first gap unit `l`: the nearest
/// R-type interval below and L-type interval above.
fn support_typed_intervals(auto: &CoverAutomaton, n: u64, l: u64) -> Option<(u64, u64)> {
    let is_l = |k: u64| auto.has(k as i64) && !auto.has(k as i64 - 1);
    let is_r = |k: u64| !auto.has(k as i64) && auto.has(k as i64 - 1);
    let below = (1..l).rev().find(|&k| is_r(k))?;
    let above = (l + 1..2 * n - 1).find(|&k| is_l(k))?;
    Some((below, above))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CantorDimension {
    pub value: f64,
    /// Zero when the value is exact (images meet at most at endpoints).
    pub bracket_width: f64,
    pub depth: Option<u32>,
}

pub fn cantor_sum_dimension(set: &DigitSet) -> Result<CantorDimension> {
    cantor_sum_dimension_with_budget(set, DEFAULT_BUDGET)
}

/// `log|B| / log n` when consecutive sums are at least 2 apart; otherwise a
/// box-counting estimate from the oracle.
pub fn cantor_sum_dimension_with_budget(set: &DigitSet, budget: u64) -> Result<CantorDimension> {
    let report = classify_structure(set)?;
    if report.case != StructureCase::CantorSet {
        return Err(Error::NotApplicable("C_A + C_A is not a Cantor set"));
    }
    let profile = SumsetProfile::new(set);
    let ln_n = (set.n() as f64).ln();
    if profile.min_gap() >= 2 {
        return Ok(CantorDimension {
            value: (profile.support().len() as f64).ln() / ln_n,
            bracket_width: 0.0,
            depth: None,
        });
    }
    let mut counts = Vec::new();
    for m in 1..=16u32 {
        match oracle_em_intervals(set, m, budget) {
            Ok(level) => counts.push(level.covered_units() as f64),
            Err(Error::BudgetExceeded { .. }) if counts.len() >= 3 => break,
            Err(e) => return Err(e),
        }
    }
    let slopes: Vec<f64> = counts.windows(2).map(|w| (w[1] / w[0]).ln() / ln_n).collect();
    let k = slopes.len();
    Ok(CantorDimension {
        value: slopes[k - 1],
        bracket_width: (slopes[k - 1] - slopes[k - 2]).abs(),
        depth: Some(counts.len() as u32),
    })
}
