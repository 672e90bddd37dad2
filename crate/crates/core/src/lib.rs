//! Approximate edit distance in near-linear time.
//!
//! The pipeline decomposes both input strings into overlapping windows of
//! width `d ≈ √n`, estimates pairwise window distances with a recursive
//! clique-sampling query algorithm, and folds the estimates into a final
//! distance with a monotone-matching dynamic program. The estimate never
//! undershoots the true edit distance; the multiplicative quality is a
//! constant plus an additive term controlled by the threshold `Δ`.
//!
//! Modules mirror the stages of the pipeline:
//!
//! * [`exact`] — exact Wagner-Fischer distance, alignment trace-back, and a
//!   banded variant; the base case of the recursion and the test oracle.
//! * [`windows`] — window decomposition of the two strings.
//! * [`snap`] — cardinality snapping to powers of `t^ε`.
//! * [`intervals`] — the multi-scale interval family over window indices.
//! * [`mapping`] — monotone window mappings, their cost, skew, skew
//!   reduction, and construction from a character-level alignment.
//! * [`window_dp`] — the estimate-matrix DP and its brute-force reference.
//! * [`query`] — live sets, cliques, densities, and the recursive query.
//! * [`estimator`] — the geometric distance ladder that fills the matrix.
//! * [`params`] — parameter derivation (paper-exact or practical presets).
//! * [`driver`] — the level recursion and the `approx_ed` entry point.
//! * [`oracle`] — exact pairwise window graphs and envelope verification,
//!   used by tests and the `--oracle` CLI flag.
//! * [`instances`] — seeded instance generators (random, planted, skewed).
//!
//! ```
//! use edapx::driver::{approx_ed, RunOptions};
//! use edapx::params::ParamSet;
//!
//! let a = b"the quick brown fox jumps over the lazy dog".to_vec();
//! let (estimate, report) = approx_ed(&a, &a, &ParamSet::desk(), &RunOptions::default()).unwrap();
//! // Identical inputs of this size take the exact fallback path.
//! assert_eq!(estimate, 0);
//! assert_eq!(report.estimate, 0);
//! ```

pub mod driver;
pub mod error;
pub mod estimator;
pub mod exact;
pub mod instances;
pub mod intervals;
pub mod mapping;
pub mod oracle;
pub mod params;
pub mod query;
pub mod report;
pub mod rng;
pub mod snap;
pub mod window_dp;
pub mod windows;

pub use crate::driver::approx_ed;
pub use crate::error::Error;
pub use crate::exact::{banded_ed, exact_alignment, exact_ed, EditScript};
pub use crate::params::ParamSet;
pub use crate::windows::WindowSet;
