//! Minkowski self-sums `C_A + C_A` of linear Cantor sets `C_{A,n}`, the
//! attractor of `{x -> (x + a) / n : a in A}`.
//!
//! - [`sumset`]: `B = A + A` with multiplicities and the goodness test
//!   `C_A + C_A = [0, 2]`.
//! - [`typing`]: L/R/O interval typing, the 2x2 graph-directed adjacency
//!   matrix and `dim_H(U_A) = log λ / log n` for the uniqueness set.
//! - [`structure`]: full interval / Cantor set / mixed classification via a
//!   three-state covering automaton.
//! - [`constructions`]: `O(sqrt n)` good sets, tower operators and chains.
//! - [`search`]: exhaustive bit-parallel and heuristic searches.
//! - [`oracle`]: finite-depth brute force used to cross-check all of the above.

pub mod constructions;
pub mod digits;
pub mod error;
pub mod oracle;
pub mod search;
pub mod structure;
pub mod sumset;
pub mod typing;

pub use digits::{DigitSet, Mode};
pub use error::{Error, Result};
pub use sumset::{is_n_good, sumset_profile, SumsetProfile};
pub use typing::{
    analyze_uniqueness, check_corollary_bound, classify_intervals, uniqueness_report,
    IntervalType, Matrix2, TypingProfile, UniquenessReport, DIM_TOL,
};

/// `log 2 / log 3`, the conjectured upper bound for `dim_H(U_A)`.
pub fn steinhaus_dim() -> f64 {
    2f64.ln() / 3f64.ln()
}
