//! Seeded instance families.
//!
//! Every generator is a pure function of its parameters and seed (ChaCha8).

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::valuation::{GoodSet, Instance, ValuationOracle};

/// Splits the `n²` goods into `n` blocks of `n` goods by a seeded shuffle.
pub fn random_equal_partition(n: usize, seed: u64) -> Vec<GoodSet> {
    let m = n * n;
    let mut goods: Vec<usize> = (0..m).collect();
    goods.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    goods
        .chunks(n.max(1))
        .map(|block| GoodSet::from_indices(m, block.iter().copied()).expect("indices below n²"))
        .collect()
}

/// Oracle kind for [`gen_random`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RandomKind {
    Additive,
    /// Maximum of `clauses` additive clauses.
    Xos { clauses: usize },
    /// Additive values capped at `cap_fraction` of their sum.
    BudgetAdditive { cap_fraction: f64 },
    /// Each good covers each of `universe` elements with probability `density`.
    Coverage { universe: usize, density: f64 },
}

impl RandomKind {
    pub fn name(&self) -> &'static str {
        match self {
            RandomKind::Additive => "additive",
            RandomKind::Xos { .. } => "xos",
            RandomKind::BudgetAdditive { .. } => "budget_additive",
            RandomKind::Coverage { .. } => "coverage",
        }
    }
}

/// Uniform on `[0, 10]`, rounded to two decimals.
fn draw_value(rng: &mut ChaCha8Rng) -> f64 {
    f64::from(rng.gen_range(0u32..=1000)) / 100.0
}

fn draw_values(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    (0..m).map(|_| draw_value(rng)).collect()
}

/// A reproducible random instance with `n` agents and `m` goods.
pub fn gen_random(kind: RandomKind, n: usize, m: usize, seed: u64) -> Result<Instance> {
    if n == 0 {
        return Err(Error::invalid("need at least one agent"));
    }
    match kind {
        RandomKind::Xos { clauses: 0 } => return Err(Error::invalid("xos needs at least one clause")),
        RandomKind::BudgetAdditive { cap_fraction } if !(cap_fraction > 0.0 && cap_fraction <= 1.0) => {
            return Err(Error::InvalidInput(alloc::format!(
                "cap fraction must lie in (0, 1], got {cap_fraction}"
            )))
        }
        RandomKind::Coverage { universe, density } if universe == 0 || !(0.0..=1.0).contains(&density) => {
            return Err(Error::invalid("coverage needs a nonempty universe and density in [0, 1]"))
        }
        _ => {}
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let oracles = (0..n)
        .map(|_| match kind {
            RandomKind::Additive => ValuationOracle::additive(draw_values(&mut rng, m)),
            RandomKind::Xos { clauses } => {
                let clauses = (0..clauses).map(|_| draw_values(&mut rng, m)).collect();
                ValuationOracle::xos(m, clauses)
            }
            RandomKind::BudgetAdditive { cap_fraction } => {
                let values = draw_values(&mut rng, m);
                let cap = libm::round(values.iter().sum::<f64>() * cap_fraction * 100.0) / 100.0;
                ValuationOracle::budget_additive(values, cap)
            }
            RandomKind::Coverage { universe, density } => {
                let goods = (0..m)
                    .map(|_| (0..universe).filter(|_| rng.gen_bool(density)).collect())
                    .collect();
                ValuationOracle::coverage(universe, goods)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Instance::new(m, oracles)
}

/// The XOS family on `m = n²` goods. With `identical` every agent holds the
/// shared function `f`; otherwise agent `i` holds `max(f, |· ∩ T_i|)` for the
/// seeded partition `T_1..T_n`.
pub fn gen_xos_hard(n: usize, delta: f64, seed: u64, identical: bool) -> Result<Instance> {
    let oracles = (0..n)
        .map(|i| ValuationOracle::xos_hard(n, delta, seed, (!identical).then_some(i)))
        .collect::<Result<Vec<_>>>()?;
    Instance::new(n * n, oracles)
}

/// Instance built from a Partition input `s`: `k` agents and `k` goods,
/// agents 0 and 1 additive with values `s`, everyone else values nothing.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionFamily {
    pub s: Vec<u64>,
    /// `Σ s`.
    pub z: u64,
    pub instance: Instance,
}

impl PartitionFamily {
    /// `(2/m)^{1/p} · z/2`: the `p`-mean of giving agents 0 and 1 half of `z`
    /// each, reachable iff `s` splits into two equal halves.
    pub fn target_welfare(&self, p: f64) -> f64 {
        let m = self.s.len() as f64;
        libm::pow(2.0 / m, 1.0 / p) * self.z as f64 / 2.0
    }
}

pub fn gen_partition_reduction(s: &[u64]) -> Result<PartitionFamily> {
    if s.len() < 2 {
        return Err(Error::invalid("partition input needs at least two numbers"));
    }
    if s.contains(&0) {
        return Err(Error::invalid("partition numbers must be positive"));
    }
    let k = s.len();
    let values: Vec<f64> = s.iter().map(|&x| x as f64).collect();
    let oracles = (0..k)
        .map(|i| {
            if i < 2 {
                ValuationOracle::additive(values.clone())
            } else {
                ValuationOracle::additive(alloc::vec![0.0; k])
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PartitionFamily {
        s: s.to_vec(),
        z: s.iter().sum(),
        instance: Instance::new(k, oracles)?,
    })
}
