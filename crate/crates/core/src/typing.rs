//! L/R/O typing of the level-1 intervals `I_l = [l/n, (l+1)/n]`, the 2x2
//! adjacency matrix of the two-node graph-directed system, and the Hausdorff
//! dimension of the uniqueness set `U_A`.

use std::fmt;

use serde::Serialize;

use crate::digits::DigitSet;
use crate::sumset::SumsetProfile;

/// Tolerance used for every dimension comparison.
pub const DIM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum IntervalType {
    /// Covered by the left half of exactly one image and no right half.
    L,
    /// Covered by the right half of exactly one image and no left half.
    R,
    O,
}

impl IntervalType {
    pub fn symbol(self) -> char {
        match self {
            IntervalType::L => 'L',
            IntervalType::R => 'R',
            IntervalType::O => 'O',
        }
    }

    pub fn mirrored(self) -> Self {
        match self {
            IntervalType::L => IntervalType::R,
            IntervalType::R => IntervalType::L,
            IntervalType::O => IntervalType::O,
        }
    }
}

/// `[[a, b], [c, d]]`: `a`/`b` count L/R intervals in the lower half
/// `l < n`, `c`/`d` in the upper half.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Matrix2 {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl Matrix2 {
    pub const fn new(a: u64, b: u64, c: u64, d: u64) -> Self {
        Matrix2 { a, b, c, d }
    }

    pub fn rows(&self) -> [[u64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn transpose(&self) -> Self {
        Matrix2::new(self.a, self.c, self.b, self.d)
    }

    /// Perron eigenvalue `((a+d) + sqrt((a-d)^2 + 4bc)) / 2`.
    pub fn perron(&self) -> f64 {
        let (a, b, c, d) = (self.a as f64, self.b as f64, self.c as f64, self.d as f64);
        ((a + d) + ((a - d) * (a - d) + 4.0 * b * c).sqrt()) / 2.0
    }

    /// Exact test for a Perron eigenvalue of 1.
    pub fn perron_is_one(&self) -> bool {
        let trace = self.a + self.d;
        if trace > 2 {
            return false;
        }
        let diff = self.a.abs_diff(self.d);
        let disc = diff * diff + 4 * self.b * self.c;
        (2 - trace) * (2 - trace) == disc
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: [u64; 2]) -> [u64; 2] {
        [
            self.a * v[0] + self.b * v[1],
            self.c * v[0] + self.d * v[1],
        ]
    }

    pub fn row_sums(&self) -> [u64; 2] {
        [self.a + self.b, self.c + self.d]
    }

    pub fn col_sums(&self) -> [u64; 2] {
        [self.a + self.c, self.b + self.d]
    }

    pub fn total(&self) -> u64 {
        self.a + self.b + self.c + self.d
    }
}

impl fmt::Display for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypingProfile {
    n: u64,
    types: Vec<IntervalType>,
    matrix: Matrix2,
}

impl TypingProfile {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Labels of `I_0 .. I_{2n-1}`.
    pub fn types(&self) -> &[IntervalType] {
        &self.types
    }

    pub fn matrix(&self) -> Matrix2 {
        self.matrix
    }

    pub fn count(&self, kind: IntervalType) -> usize {
        self.types.iter().filter(|&&t| t == kind).count()
    }

    /// `2n` symbols with a space between the halves, e.g. `LROOLOOO OOOROOLR`.
    pub fn render(&self) -> String {
        let n = self.n as usize;
        let mut s = String::with_capacity(2 * n + 1);
        for (i, t) in self.types.iter().enumerate() {
            if i == n {
                s.push(' ');
            }
            s.push(t.symbol());
        }
        s
    }

    /// Same labels as `I_0, ..., I_{n-1}` / `I_n, ..., I_{2n-1}` comma lists.
    pub fn halves(&self) -> (String, String) {
        let n = self.n as usize;
        let join = |ts: &[IntervalType]| {
            ts.iter()
                .map(|t| t.symbol().to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        (join(&self.types[..n]), join(&self.types[n..]))
    }
}

/// `I_l` is `L` when sum `l` has exactly one ordered representation and
/// `l-1` has none; `R` when `l-1` has exactly one and `l` none.
pub fn classify_intervals(profile: &SumsetProfile) -> TypingProfile {
    let n = profile.n();
    let len = 2 * n as usize;
    let mut types = Vec::with_capacity(len);
    let mut m = Matrix2::new(0, 0, 0, 0);
    for l in 0..len as i64 {
        let here = profile.count(l);
        let before = profile.count(l - 1);
        let t = if here == 1 && before == 0 {
            IntervalType::L
        } else if before == 1 && here == 0 {
            IntervalType::R
        } else {
            IntervalType::O
        };
        let lower = (l as u64) < n;
        match (t, lower) {
            (IntervalType::L, true) => m.a += 1,
            (IntervalType::R, true) => m.b += 1,
            (IntervalType::L, false) => m.c += 1,
            (IntervalType::R, false) => m.d += 1,
            _ => {}
        }
        types.push(t);
    }
    TypingProfile {
        n,
        types,
        matrix: m,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniquenessReport {
    pub matrix: Matrix2,
    pub lambda: f64,
    pub dim: f64,
    /// `U_A = {0, 2}`.
    pub trivial: bool,
    /// `C_A + C_A = [0, 2]`. When false, `dim` is only the dimension of the
    /// graph-directed attractor built from the typing.
    pub good: bool,
    pub very_good: bool,
}

/// Goodness, very-goodness, Perron eigenvalue and `dim_H(U_A)`.
pub fn uniqueness_report(typing: &TypingProfile, set: &DigitSet) -> UniquenessReport {
    let good = set.is_canonical() && SumsetProfile::new(set).max_gap() <= 2;
    report_from_parts(typing.matrix(), set, good)
}

pub(crate) fn report_from_parts(m: Matrix2, set: &DigitSet, good: bool) -> UniquenessReport {
    let n = set.n();
    let trivial = m.perron_is_one();
    let lambda = if trivial { 1.0 } else { m.perron() };
    let dim = if trivial || lambda <= 0.0 {
        0.0
    } else {
        lambda.ln() / (n as f64).ln()
    };
    let very_good = good
        && !set.contains(1)
        && !set.contains(n - 2)
        && (m.a + m.b == m.c + m.d || m.a + m.c == m.b + m.d);
    UniquenessReport {
        matrix: m,
        lambda,
        dim,
        trivial,
        good,
        very_good,
    }
}

/// Profile, typing and report in one go.
pub fn analyze_uniqueness(set: &DigitSet) -> (TypingProfile, UniquenessReport) {
    let profile = SumsetProfile::new(set);
    let typing = classify_intervals(&profile);
    let good = set.is_canonical() && profile.max_gap() <= 2;
    let report = report_from_parts(typing.matrix(), set, good);
    (typing, report)
}

/// If neither 1 nor n-2 is a digit, the Perron eigenvalue is at least 2.
pub fn check_corollary_bound(set: &DigitSet, report: &UniquenessReport) -> bool {
    let n = set.n();
    let excluded = !set.contains(1) && !set.contains(n - 2);
    !excluded || report.lambda >= 2.0 - DIM_TOL
}
