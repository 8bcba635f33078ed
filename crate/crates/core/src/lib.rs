//! Approximate p-mean welfare allocation of indivisible goods.
//!
//! Agents hold monotone subadditive valuations that are only reachable
//! through value queries. The crate provides:
//!
//! - [`valuation`]: goods sets, the value-oracle trait, the shipped oracle
//!   kinds, a query-counting wrapper and an axiom checker.
//! - [`matching`]: left-perfect max-weight, min-weight and bottleneck
//!   matchings on the complete agent × good graph.
//! - [`welfare`]: the generalized (Hölder) mean family, Nash social welfare
//!   and the exponent clamping rule for very negative `p`.
//! - [`allocator`]: the matching + singleton + moving-knife solver with its
//!   γ-estimate outer loop, the `(m - n + 1)` matching baseline and the
//!   combined `O(√m)` strategy.
//! - [`exact`]: brute-force optima and proportional floors for small
//!   instances.
//! - [`generators`]: seeded random instances, the XOS hard family and the
//!   Partition reduction family.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod allocator;
pub mod error;
pub mod exact;
pub mod generators;
pub mod matching;
pub mod valuation;
pub mod welfare;

pub use allocator::{
    alg_iteration_bound, alg_solve, combined_solve, gamma_init, matching_baseline, moving_knife,
    moving_knife_with_order, singleton_phase, AlgOptions, Allocation, CombinedBranch, CombinedOutcome, GammaState,
    IterationRecord, RunTrace,
};
pub use error::{Error, Result};
pub use exact::{exact_ell, exact_optimum, measure_ratio, ExactResult, DEFAULT_ENUMERATION_BUDGET};
pub use matching::{
    bottleneck_matching, max_weight_matching, min_weight_matching, MatchingResult, WeightMatrix,
    BIG,
};
pub use valuation::{
    check_axioms, AxiomReport, CountingOracle, GoodSet, Instance, Valuation, ValuationOracle,
    Violation, ViolationKind, XosHardValuation,
};
pub use welfare::{effective_p, nsw, p_mean, WelfareParam};
