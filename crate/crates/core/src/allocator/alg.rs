use alloc::vec;
use alloc::vec::Vec;

use super::knife::{moving_knife, singleton_phase};
use super::Allocation;
use crate::error::{Error, Result};
use crate::matching::{bottleneck_matching, max_weight_matching, min_weight_matching, WeightMatrix, BIG};
use crate::valuation::{GoodSet, Instance, Valuation};
use crate::welfare::{effective_p, WelfareParam};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgOptions {
    /// The loop aborts with [`Error::Diverged`] after
    /// `⌈cap_factor · alg_iteration_bound⌉` rounds.
    pub cap_factor: f64,
}

impl Default for AlgOptions {
    fn default() -> Self {
        AlgOptions { cap_factor: 2.0 }
    }
}

/// Per-agent γ estimates and satisfaction flags of the outer loop.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaState {
    pub iteration: usize,
    pub gamma: Vec<f64>,
    /// `true` for SAT agents; every agent starts unsatisfied.
    pub satisfied: Vec<bool>,
}

impl GammaState {
    pub fn unsatisfied(&self) -> impl Iterator<Item = usize> + '_ {
        self.satisfied.iter().enumerate().filter(|(_, s)| !**s).map(|(i, _)| i)
    }

    pub fn all_satisfied(&self) -> bool {
        self.satisfied.iter().all(|&s| s)
    }
}

/// Everything one round of the outer loop produced.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    /// γ used in this round.
    pub gamma: Vec<f64>,
    /// Good matched to each agent.
    pub matching: Vec<usize>,
    pub matching_uses_sentinel: bool,
    /// `(agent, good)` pairs from the singleton phase.
    pub singletons: Vec<(usize, usize)>,
    /// Agents that went through the moving knife.
    pub knife_agents: Vec<usize>,
    /// `B_i^t`: the bundle each agent got besides its matched good.
    pub bundles: Vec<GoodSet>,
    pub bundle_values: Vec<f64>,
    /// `v_i(B_i^t) >= γ_i^t`.
    pub satisfied: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub rounds: Vec<IterationRecord>,
    /// Value queries issued by the whole run.
    pub queries: u64,
    /// Analytic iteration bound for the instance.
    pub bound: u64,
    /// Iteration cap actually enforced.
    pub cap: u64,
    /// Exponent after clamping.
    pub effective_p: f64,
}

impl RunTrace {
    pub fn iterations(&self) -> usize {
        self.rounds.len()
    }
}

fn singleton_table<V: Valuation>(instance: &Instance<V>) -> Vec<Vec<f64>> {
    (0..instance.n())
        .map(|i| (0..instance.m()).map(|g| instance.oracle(i).singleton_value(g)).collect())
        .collect()
}

fn init_from_singletons<V: Valuation>(instance: &Instance<V>, singles: &[Vec<f64>]) -> GammaState {
    let (n, m) = (instance.n(), instance.m());
    let everything = instance.all_goods();
    let gamma = (0..n)
        .map(|i| {
            let mut order: Vec<usize> = (0..m).collect();
            // descending value, ties by index (stable sort)
            order.sort_by(|&a, &b| singles[i][b].total_cmp(&singles[i][a]));
            let top = GoodSet::from_indices(m, order.iter().copied().take(2 * n)).unwrap();
            let rest = everything.difference(&top);
            if instance.oracle(i).value(&rest) == 0.0 {
                0.0
            } else {
                instance.oracle(i).value(&everything)
            }
        })
        .collect();
    GammaState {
        iteration: 0,
        gamma,
        satisfied: vec![false; n],
    }
}

/// Initial estimates: `γ_i = 0` when removing agent `i`'s `2n` best singleton
/// goods leaves nothing of value, `v_i([m])` otherwise.
pub fn gamma_init<V: Valuation>(instance: &Instance<V>) -> GammaState {
    init_from_singletons(instance, &singleton_table(instance))
}

fn bound_from_singletons(n: usize, m: usize, singles: &[Vec<f64>]) -> u64 {
    let mut total = 0.0;
    for row in singles {
        let max = row.iter().copied().fold(0.0, f64::max);
        let min_pos = row.iter().copied().filter(|&v| v > 0.0).fold(f64::INFINITY, f64::min);
        if max > 0.0 {
            let ratio = max / min_pos;
            total += m as f64 * libm::log(2.0 * n as f64 * m as f64 * ratio);
        }
    }
    libm::ceil(total) as u64 + n as u64 + 1
}

/// `⌈Σ_i m·ln(2·n·m·V_i)⌉ + n + 1`, with `V_i` the ratio of agent `i`'s
/// largest to smallest positive singleton value. Agents valuing no single
/// good contribute nothing.
pub fn alg_iteration_bound<V: Valuation>(instance: &Instance<V>) -> u64 {
    bound_from_singletons(instance.n(), instance.m(), &singleton_table(instance))
}

#[derive(Clone, Copy)]
enum Route {
    Log,
    PowerMax(f64),
    PowerMin(f64),
    Bottleneck,
}

fn route(p: f64) -> Route {
    if p == f64::NEG_INFINITY {
        Route::Bottleneck
    } else if p == 0.0 {
        Route::Log
    } else if p > 0.0 {
        Route::PowerMax(p)
    } else {
        Route::PowerMin(p)
    }
}

/// Matches one good to every agent with edge weights built from
/// `base(i, g)` according to the exponent route.
pub(super) fn match_agents(
    n: usize,
    m: usize,
    p: f64,
    param: &WelfareParam,
    base: impl Fn(usize, usize) -> f64,
) -> Result<(Vec<usize>, bool)> {
    let route = route(p);
    let w = WeightMatrix::from_fn(n, m, |i, g| {
        let b = base(i, g);
        let eta = param.weight(i);
        match route {
            Route::Log if eta == 0.0 => 0.0,
            Route::Log if b > 0.0 => eta * libm::log(b),
            Route::Log => -BIG,
            Route::PowerMax(p) => eta * libm::pow(b, p),
            Route::PowerMin(_) if eta == 0.0 => 0.0,
            Route::PowerMin(p) => {
                let x = eta * libm::pow(b, p);
                if b > 0.0 && x.is_finite() {
                    x
                } else {
                    BIG
                }
            }
            Route::Bottleneck => b,
        }
    })?;
    let result = match route {
        Route::Log | Route::PowerMax(_) => max_weight_matching(&w)?,
        Route::PowerMin(_) => min_weight_matching(&w)?,
        Route::Bottleneck => bottleneck_matching(&w)?,
    };
    Ok((result.assignment, result.uses_sentinel))
}

/// Runs the γ-estimate outer loop and returns the final allocation with a
/// full trace.
///
/// Each round: (1) match one good per agent with weights derived from
/// `v_i(g) + γ_i` (log and max-weight at `p = 0`, power and max-weight for
/// `p ∈ (0, 1]`, power and min-weight for finite `p < 0`, bottleneck at
/// `p = -∞`, after clamping with [`effective_p`]); (2) hand out high-value
/// singletons from the unmatched goods; (3) split the rest with the moving
/// knife; (4) agents whose bundle is worth less than `γ_i` have `γ_i`
/// multiplied by `1 - 1/m`. The loop stops at the first round where every
/// agent is satisfied, and each agent receives that round's bundle plus its
/// matched good.
///
/// Goods left over when the singleton phase serves every agent join the
/// most recent singleton bundle, so the output always partitions `[m]`.
pub fn alg_solve<V: Valuation>(
    instance: &Instance<V>,
    param: &WelfareParam,
    options: AlgOptions,
) -> Result<(Allocation, RunTrace)> {
    let (n, m) = (instance.n(), instance.m());
    if m < n {
        return Err(Error::Infeasible { agents: n, goods: m });
    }
    param.check_agents(n)?;
    let p = effective_p(param.p(), n);

    let counted = instance.counting();
    let oracles = counted.oracles();
    let singles = singleton_table(&counted);
    let bound = bound_from_singletons(n, m, &singles);
    let cap = libm::ceil(bound as f64 * options.cap_factor.max(1.0)) as u64;
    let mut state = init_from_singletons(&counted, &singles);
    let shrink = 1.0 - 1.0 / m as f64;
    let everyone: Vec<usize> = (0..n).collect();
    let mut rounds: Vec<IterationRecord> = Vec::new();

    loop {
        if rounds.len() as u64 >= cap {
            return Err(Error::Diverged { cap });
        }
        let gamma = state.gamma.clone();
        let (matching, uses_sentinel) = match_agents(n, m, p, param, |i, g| singles[i][g] + gamma[i])?;

        let mut unmatched = GoodSet::full(m);
        for &g in &matching {
            unmatched.remove(g);
        }
        let phase = singleton_phase(&unmatched, &everyone, oracles, n);
        let mut bundles = vec![GoodSet::empty(m); n];
        for &(a, g) in &phase.assigned {
            bundles[a].insert(g);
        }
        if phase.remaining_agents.is_empty() {
            if let Some(&(last, _)) = phase.assigned.last() {
                bundles[last].union_with(&phase.remaining_goods);
            }
        } else {
            let pieces = moving_knife(&phase.remaining_goods, &phase.remaining_agents, oracles, n);
            for (&a, piece) in phase.remaining_agents.iter().zip(pieces) {
                bundles[a] = piece;
            }
        }

        let bundle_values: Vec<f64> = bundles
            .iter()
            .enumerate()
            .map(|(i, b)| oracles[i].value(b))
            .collect();
        let satisfied: Vec<bool> = bundle_values.iter().zip(&gamma).map(|(v, g)| v >= g).collect();
        for i in 0..n {
            if !satisfied[i] {
                state.gamma[i] *= shrink;
            }
        }
        state.satisfied.clone_from(&satisfied);
        state.iteration += 1;

        let done = state.all_satisfied();
        rounds.push(IterationRecord {
            gamma,
            matching,
            matching_uses_sentinel: uses_sentinel,
            singletons: phase.assigned,
            knife_agents: phase.remaining_agents,
            bundles,
            bundle_values,
            satisfied,
        });
        if done {
            break;
        }
    }

    let last = rounds.last().expect("at least one round");
    let mut finals = last.bundles.clone();
    for (i, &g) in last.matching.iter().enumerate() {
        finals[i].insert(g);
    }
    let allocation = Allocation::new(finals)?;
    let trace = RunTrace {
        rounds,
        queries: counted.total_queries(),
        bound,
        cap,
        effective_p: p,
    };
    Ok((allocation, trace))
}
