//! Allocation algorithms.
//!
//! [`alg_solve`] is the main solver: each round it matches one good to every
//! agent, hands out high-value singletons, splits the rest with
//! [`moving_knife`], and lowers the γ estimate of every agent whose bundle fell
//! short, until no agent falls short. [`matching_baseline`] is the pure
//! matching `(m - n + 1)`-approximation for `p <= 0` and [`combined_solve`]
//! picks between the two by instance shape.

mod alg;
mod baseline;
mod knife;

use alloc::vec::Vec;

pub use alg::{alg_iteration_bound, alg_solve, gamma_init, AlgOptions, GammaState, IterationRecord, RunTrace};
pub use baseline::{combined_solve, matching_baseline, CombinedBranch, CombinedOutcome};
pub use knife::{moving_knife, moving_knife_with_order, singleton_phase, SingletonOutcome};

use crate::error::{Error, Result};
use crate::valuation::{GoodSet, Instance, Valuation};
use crate::welfare::{p_mean, WelfareParam};

/// One bundle per agent. Bundles are pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    bundles: Vec<GoodSet>,
}

impl Allocation {
    pub fn new(bundles: Vec<GoodSet>) -> Result<Self> {
        for i in 0..bundles.len() {
            for j in i + 1..bundles.len() {
                if !bundles[i].is_disjoint(&bundles[j]) {
                    return Err(Error::InvalidInput(alloc::format!(
                        "bundles {i} and {j} share goods"
                    )));
                }
            }
        }
        Ok(Allocation { bundles })
    }

    /// `assignment[g]` is the agent receiving good `g`.
    pub fn from_assignment(n: usize, assignment: &[usize]) -> Result<Self> {
        let m = assignment.len();
        let mut bundles: Vec<GoodSet> = (0..n).map(|_| GoodSet::empty(m)).collect();
        for (g, &agent) in assignment.iter().enumerate() {
            let bundle = bundles.get_mut(agent).ok_or_else(|| {
                Error::InvalidInput(alloc::format!("good {g} assigned to missing agent {agent}"))
            })?;
            bundle.insert(g);
        }
        Ok(Allocation { bundles })
    }

    pub fn n(&self) -> usize {
        self.bundles.len()
    }

    pub fn bundles(&self) -> &[GoodSet] {
        &self.bundles
    }

    pub fn bundle(&self, agent: usize) -> &GoodSet {
        &self.bundles[agent]
    }

    pub fn into_bundles(self) -> Vec<GoodSet> {
        self.bundles
    }

    /// Whether the bundles cover exactly the goods `0..m`.
    pub fn is_partition_of(&self, m: usize) -> bool {
        let mut seen = GoodSet::empty(m);
        for b in &self.bundles {
            for g in b.iter() {
                if g >= m || !seen.insert(g) {
                    return false;
                }
            }
        }
        seen.len() == m
    }

    /// `v_i(A_i)` for every agent.
    pub fn values<V: Valuation>(&self, instance: &Instance<V>) -> Vec<f64> {
        self.bundles
            .iter()
            .enumerate()
            .map(|(i, b)| instance.oracle(i).value(b))
            .collect()
    }

    pub fn welfare<V: Valuation>(&self, instance: &Instance<V>, param: &WelfareParam) -> Result<f64> {
        if self.n() != instance.n() {
            return Err(Error::InvalidInput(alloc::format!(
                "allocation has {} bundles for {} agents",
                self.n(),
                instance.n()
            )));
        }
        p_mean(&self.values(instance), param)
    }
}
