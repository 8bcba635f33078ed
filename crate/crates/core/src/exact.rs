//! Brute force over all `n^m` allocations, for small instances only.

use alloc::vec;
use alloc::vec::Vec;

use crate::allocator::Allocation;
use crate::error::{Error, Result};
use crate::valuation::{GoodSet, Instance, Valuation};
use crate::welfare::{p_mean, WelfareParam};

pub const DEFAULT_ENUMERATION_BUDGET: u128 = 20_000_000;

/// Value tables are precomputed per agent up to this many goods.
const TABLE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct ExactResult {
    pub allocation: Allocation,
    pub welfare: f64,
    /// Assignments examined, `n^m`.
    pub enumerated: u128,
}

fn checked_pow(base: u128, exp: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

fn binomial(m: usize, k: usize) -> u128 {
    let k = k.min(m - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        // exact at every step: acc = C(m, j) before the update
        acc = acc * (m - j) as u128 / (j + 1) as u128;
    }
    acc
}

fn over_budget(required: Option<u128>, budget: u128) -> Result<u128> {
    match required {
        Some(r) if r <= budget => Ok(r),
        Some(r) => Err(Error::BudgetExceeded { required: r, budget }),
        None => Err(Error::BudgetExceeded {
            required: u128::MAX,
            budget,
        }),
    }
}

/// Maximizes the `p`-mean over every assignment of goods to agents.
///
/// Assignments are visited in lexicographic order of the vector
/// `(agent of good 0, …, agent of good m-1)`; the first maximizer wins.
pub fn exact_optimum<V: Valuation>(instance: &Instance<V>, param: &WelfareParam, budget: u128) -> Result<ExactResult> {
    let (n, m) = (instance.n(), instance.m());
    param.check_agents(n)?;
    let total = over_budget(checked_pow(n as u128, m), budget)?;

    if n == 1 {
        let allocation = Allocation::new(vec![instance.all_goods()])?;
        let welfare = allocation.welfare(instance, param)?;
        return Ok(ExactResult {
            allocation,
            welfare,
            enumerated: 1,
        });
    }
    // n >= 2 and n^m within budget keeps m well below 64
    let tables: Option<Vec<Vec<f64>>> = (m <= TABLE_LIMIT).then(|| {
        (0..n)
            .map(|i| (0..1u64 << m).map(|mask| instance.oracle(i).value(&GoodSet::from_mask(m, mask))).collect())
            .collect()
    });
    let value = |i: usize, mask: u64| match &tables {
        Some(t) => t[i][mask as usize],
        None => instance.oracle(i).value(&GoodSet::from_mask(m, mask)),
    };

    let mut digits = vec![0usize; m];
    let mut masks = vec![0u64; n];
    masks[0] = if m == 0 { 0 } else { (1u64 << m) - 1 };
    let mut values = vec![0.0; n];
    let mut best: Option<(f64, Vec<usize>)> = None;
    loop {
        for i in 0..n {
            values[i] = value(i, masks[i]);
        }
        let w = p_mean(&values, param)?;
        if best.as_ref().map_or(true, |(b, _)| w > *b) {
            best = Some((w, digits.clone()));
        }
        // increment, last good fastest
        let mut pos = m;
        loop {
            if pos == 0 {
                let (welfare, digits) = best.expect("at least one assignment");
                return Ok(ExactResult {
                    allocation: Allocation::from_assignment(n, &digits)?,
                    welfare,
                    enumerated: total,
                });
            }
            pos -= 1;
            let bit = 1u64 << pos;
            masks[digits[pos]] &= !bit;
            digits[pos] += 1;
            if digits[pos] < n {
                masks[digits[pos]] |= bit;
                break;
            }
            digits[pos] = 0;
            masks[0] |= bit;
        }
    }
}

/// `ℓ_i = min_{|S| <= 2n} v_i([m] \ S) / (2n)`.
///
/// By monotonicity only removals of exactly `min(2n, m)` goods are scanned.
pub fn exact_ell<V: Valuation>(instance: &Instance<V>, agent: usize, budget: u128) -> Result<f64> {
    let (n, m) = (instance.n(), instance.m());
    if agent >= n {
        return Err(Error::InvalidInput(alloc::format!(
            "agent {agent} out of range for {n} agents"
        )));
    }
    let k = 2 * n;
    if m <= k {
        return Ok(0.0);
    }
    over_budget(Some(binomial(m, k)), budget)?;

    let oracle = instance.oracle(agent);
    let everything = instance.all_goods();
    let mut combo: Vec<usize> = (0..k).collect();
    let mut best = f64::INFINITY;
    loop {
        let mut rest = everything.clone();
        for &g in &combo {
            rest.remove(g);
        }
        best = best.min(oracle.value(&rest));
        // next k-combination of 0..m
        let mut j = k;
        loop {
            if j == 0 {
                return Ok(best / k as f64);
            }
            j -= 1;
            if combo[j] < m - k + j {
                combo[j] += 1;
                for t in j + 1..k {
                    combo[t] = combo[t - 1] + 1;
                }
                break;
            }
        }
    }
}

/// `M_p(optimum) / M_p(allocation)`; `+∞` when only the optimum is
/// positive, 1 when both are 0.
pub fn measure_ratio<V: Valuation>(
    instance: &Instance<V>,
    param: &WelfareParam,
    allocation: &Allocation,
    budget: u128,
) -> Result<f64> {
    let achieved = allocation.welfare(instance, param)?;
    let optimum = exact_optimum(instance, param, budget)?.welfare;
    Ok(if achieved > 0.0 {
        optimum / achieved
    } else if optimum > 0.0 {
        f64::INFINITY
    } else {
        1.0
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::ValuationOracle;

    fn additive_instance(rows: &[&[f64]]) -> Instance {
        let m = rows[0].len();
        Instance::new(m, rows.iter().map(|r| ValuationOracle::additive(r.to_vec()).unwrap()).collect()).unwrap()
    }

    #[test]
    fn small_optima() {
        let inst = additive_instance(&[&[3.0, 1.0], &[1.0, 3.0]]);
        let r = exact_optimum(&inst, &WelfareParam::nash(), DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert!((r.welfare - 3.0).abs() < 1e-12);
        assert_eq!(r.enumerated, 4);
        assert_eq!(r.allocation.bundle(0).to_vec(), [0]);

        let inst = additive_instance(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let r = exact_optimum(&inst, &WelfareParam::nash(), DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(r.welfare, 1.0);
        // first split in lexicographic order: good 0 to agent 0, good 1 to agent 1
        assert_eq!(r.allocation.bundle(0).to_vec(), [0]);

        let inst = additive_instance(&[&[1.0, 2.0, 3.0]]);
        let r = exact_optimum(&inst, &WelfareParam::egalitarian(), DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(r.welfare, 6.0);
        assert_eq!(r.enumerated, 1);
    }

    #[test]
    fn budget_is_enforced() {
        let rows = [[1.0; 10]; 3];
        let refs: Vec<&[f64]> = rows.iter().map(|r| &r[..]).collect();
        let inst = additive_instance(&refs);
        assert_eq!(
            exact_optimum(&inst, &WelfareParam::nash(), 1000),
            Err(Error::BudgetExceeded { required: 59049, budget: 1000 })
        );
        assert!(exact_ell(&inst, 0, 100).is_err());
    }

    #[test]
    fn utilitarian_is_max_value_assignment() {
        let inst = additive_instance(&[&[3.0, 0.0, 2.0, 5.0], &[1.0, 4.0, 2.5, 5.0], &[0.0, 0.0, 1.0, 6.0]]);
        let r = exact_optimum(&inst, &WelfareParam::utilitarian(), DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert!((r.welfare - (3.0 + 4.0 + 2.5 + 6.0) / 3.0).abs() < 1e-12);
    }

    #[test]
    fn ell_examples() {
        let inst = additive_instance(&[&[5.0, 4.0, 3.0, 2.0, 1.0]]);
        assert_eq!(exact_ell(&inst, 0, DEFAULT_ENUMERATION_BUDGET).unwrap(), 3.0);
        let inst = additive_instance(&[&[5.0, 4.0, 3.0, 2.0], &[1.0; 4]]);
        assert_eq!(exact_ell(&inst, 1, DEFAULT_ENUMERATION_BUDGET).unwrap(), 0.0);
        let inst = additive_instance(&[&[0.0, 0.0, 0.0, 7.0, 0.0, 0.0]]);
        assert_eq!(exact_ell(&inst, 0, DEFAULT_ENUMERATION_BUDGET).unwrap(), 0.0);
        let inst = additive_instance(&[&[1.0, 2.0, 3.0, 4.0, 5.0]]);
        assert_eq!(exact_ell(&inst, 0, DEFAULT_ENUMERATION_BUDGET).unwrap(), 3.0);
    }

    #[test]
    fn ratios() {
        let inst = additive_instance(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let nash = WelfareParam::nash();
        let greedy = Allocation::from_assignment(2, &[0, 0]).unwrap();
        assert_eq!(measure_ratio(&inst, &nash, &greedy, 100).unwrap(), f64::INFINITY);
        let opt = exact_optimum(&inst, &nash, 100).unwrap();
        assert_eq!(measure_ratio(&inst, &nash, &opt.allocation, 100).unwrap(), 1.0);
        let zero = additive_instance(&[&[0.0, 0.0], &[0.0, 0.0]]);
        assert_eq!(measure_ratio(&zero, &nash, &greedy, 100).unwrap(), 1.0);
        let util = WelfareParam::utilitarian();
        let inst = additive_instance(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let swap = Allocation::from_assignment(2, &[1, 0]).unwrap();
        assert_eq!(measure_ratio(&inst, &util, &swap, 100).unwrap(), 2.0);
    }
}
