use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use pmeanfair_core::{
    alg_solve, combined_solve, exact_optimum, matching_baseline, AlgOptions, Allocation, CombinedBranch, Instance,
    Valuation, WelfareParam,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::param::format_p;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Alg,
    Matching,
    Combined,
    Exact,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Alg, Algorithm::Matching, Algorithm::Combined, Algorithm::Exact];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Alg => "alg",
            Algorithm::Matching => "matching",
            Algorithm::Combined => "combined",
            Algorithm::Exact => "exact",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| CliError::Malformed(format!("unknown algorithm {s:?} (alg, matching, combined, exact)")))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub budget: u128,
    pub alg: AlgOptions,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            budget: pmeanfair_core::DEFAULT_ENUMERATION_BUDGET,
            alg: AlgOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveReport {
    pub algorithm: Algorithm,
    /// Requested exponent, `-inf` or a decimal.
    pub p: String,
    /// Branch taken by the combined strategy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<Algorithm>,
    /// Goods of each agent, ascending.
    pub allocation: Vec<Vec<usize>>,
    pub values: Vec<f64>,
    pub welfare: f64,
    /// Outer-loop rounds; absent for non-iterative algorithms.
    pub iterations: Option<usize>,
    pub queries: u64,
    pub wall_ms: f64,
}

/// Runs `algorithm` and reports the allocation with its welfare at `param`.
pub fn solve<V: Valuation>(
    instance: &Instance<V>,
    param: &WelfareParam,
    algorithm: Algorithm,
    options: SolveOptions,
) -> Result<SolveReport> {
    let counted = instance.counting();
    let start = Instant::now();
    let mut iterations = None;
    let mut branch = None;
    let allocation: Allocation = match algorithm {
        Algorithm::Alg => {
            let (allocation, trace) = alg_solve(&counted, param, options.alg)?;
            iterations = Some(trace.iterations());
            allocation
        }
        Algorithm::Matching => matching_baseline(&counted, param)?,
        Algorithm::Combined => {
            let out = combined_solve(&counted, param, options.alg)?;
            iterations = out.trace.as_ref().map(|t| t.iterations());
            branch = Some(match out.branch {
                CombinedBranch::Alg => Algorithm::Alg,
                CombinedBranch::Matching => Algorithm::Matching,
            });
            out.allocation
        }
        Algorithm::Exact => exact_optimum(&counted, param, options.budget)?.allocation,
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let queries = counted.total_queries();
    let values = allocation.values(instance);
    let welfare = pmeanfair_core::p_mean(&values, param)?;
    Ok(SolveReport {
        algorithm,
        p: format_p(param.p()),
        branch,
        allocation: allocation.bundles().iter().map(|b| b.to_vec()).collect(),
        values,
        welfare,
        iterations,
        queries,
        wall_ms,
    })
}
