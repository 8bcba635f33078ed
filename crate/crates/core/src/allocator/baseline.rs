use alloc::vec::Vec;

use super::alg::{alg_solve, match_agents, AlgOptions, RunTrace};
use super::Allocation;
use crate::error::{Error, Result};
use crate::valuation::{GoodSet, Instance, Valuation};
use crate::welfare::{effective_p, WelfareParam};

/// `(m - n + 1)`-approximation for `p <= 0`: an optimal matching on the
/// singleton values, with every unmatched good given to agent 0.
///
/// At `p = 0` the matching maximizes `Σ ln v_i(g)`; for finite `p < 0` it
/// minimizes `Σ v_i(g)^p`; at `p = -∞` (including clamped exponents) it
/// maximizes the smallest matched value. Zero-value edges are avoided
/// whenever possible.
pub fn matching_baseline<V: Valuation>(instance: &Instance<V>, param: &WelfareParam) -> Result<Allocation> {
    let (n, m) = (instance.n(), instance.m());
    if param.p() > 0.0 {
        return Err(Error::InvalidInput(alloc::format!(
            "matching baseline needs p <= 0, got {}",
            param.p()
        )));
    }
    if m < n {
        return Err(Error::Infeasible { agents: n, goods: m });
    }
    param.check_agents(n)?;
    let singles: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..m).map(|g| instance.oracle(i).singleton_value(g)).collect())
        .collect();
    let p = effective_p(param.p(), n);
    let (matching, _) = match_agents(n, m, p, param, |i, g| singles[i][g])?;

    let mut bundles: Vec<GoodSet> = matching.iter().map(|&g| GoodSet::singleton(m, g)).collect();
    for g in 0..m {
        if !matching.contains(&g) {
            bundles[0].insert(g);
        }
    }
    Allocation::new(bundles)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombinedBranch {
    Alg,
    Matching,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CombinedOutcome {
    pub branch: CombinedBranch,
    pub allocation: Allocation,
    /// Present when the main solver ran.
    pub trace: Option<RunTrace>,
}

/// Nash welfare in `O(√m)` ratio: the main solver when `m >= n²`, the
/// matching baseline otherwise.
pub fn combined_solve<V: Valuation>(
    instance: &Instance<V>,
    param: &WelfareParam,
    options: AlgOptions,
) -> Result<CombinedOutcome> {
    if param.p() != 0.0 {
        return Err(Error::InvalidInput(alloc::format!(
            "combined strategy is defined for p = 0, got {}",
            param.p()
        )));
    }
    let n = instance.n();
    if instance.m() >= n * n {
        let (allocation, trace) = alg_solve(instance, param, options)?;
        Ok(CombinedOutcome {
            branch: CombinedBranch::Alg,
            allocation,
            trace: Some(trace),
        })
    } else {
        Ok(CombinedOutcome {
            branch: CombinedBranch::Matching,
            allocation: matching_baseline(instance, param)?,
            trace: None,
        })
    }
}
