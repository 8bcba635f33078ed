use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::valuation::{GoodSet, Valuation};

/// Scans `goods` in ascending index order; see [`moving_knife_with_order`].
pub fn moving_knife<V: Valuation>(goods: &GoodSet, agents: &[usize], oracles: &[V], n: usize) -> Vec<GoodSet> {
    let order: Vec<usize> = goods.iter().collect();
    knife(goods, agents, oracles, n, &order)
}

/// Moving-knife split of `goods` among `agents`.
///
/// Goods are added one at a time, in `order`, to a running piece `S`. As soon
/// as some remaining agent `a` has `v_a(S) >= v_a(goods) / (2n)` the piece is
/// cut and handed to `a` (the first such agent in `agents` order). Goods left
/// once every agent is served, and any final uncut piece, join the most
/// recently cut bundle (the first agent's bundle if nobody was served).
///
/// Returns one bundle per entry of `agents`, in the same order. With no
/// agents the result is empty.
pub fn moving_knife_with_order<V: Valuation>(
    goods: &GoodSet,
    agents: &[usize],
    oracles: &[V],
    n: usize,
    order: &[usize],
) -> Result<Vec<GoodSet>> {
    let listed = GoodSet::from_indices(goods.universe(), order.iter().copied())?;
    if listed != *goods || order.len() != goods.len() {
        return Err(Error::invalid("knife order must list every good exactly once"));
    }
    Ok(knife(goods, agents, oracles, n, order))
}

fn knife<V: Valuation>(goods: &GoodSet, agents: &[usize], oracles: &[V], n: usize, order: &[usize]) -> Vec<GoodSet> {
    let universe = goods.universe();
    let mut bundles = vec![GoodSet::empty(universe); agents.len()];
    if agents.is_empty() {
        return bundles;
    }
    let scale = 2.0 * n as f64;
    let thresholds: Vec<f64> = agents
        .iter()
        .map(|&a| oracles[a].value(goods) / scale)
        .collect();
    let mut waiting = vec![true; agents.len()];
    let mut open = agents.len();
    let mut piece = GoodSet::empty(universe);
    let mut leftover = GoodSet::empty(universe);
    let mut last_cut: Option<usize> = None;

    for &g in order {
        if open == 0 {
            leftover.insert(g);
            continue;
        }
        piece.insert(g);
        let taker = (0..agents.len())
            .find(|&k| waiting[k] && oracles[agents[k]].value(&piece) >= thresholds[k]);
        if let Some(k) = taker {
            bundles[k] = core::mem::replace(&mut piece, GoodSet::empty(universe));
            waiting[k] = false;
            open -= 1;
            last_cut = Some(k);
        }
    }
    leftover.union_with(&piece);
    if !leftover.is_empty() {
        bundles[last_cut.unwrap_or(0)].union_with(&leftover);
    }
    bundles
}

/// Result of the high-value singleton phase.
#[derive(Debug, Clone, PartialEq)]
pub struct SingletonOutcome {
    /// `(agent, good)` pairs in the order they were assigned.
    pub assigned: Vec<(usize, usize)>,
    pub remaining_goods: GoodSet,
    /// Agents without a singleton, ascending.
    pub remaining_agents: Vec<usize>,
}

/// Repeatedly gives a single good `g` to an agent `a` with
/// `v_a({g}) >= v_a(G) / (2n)`, where `G` is the current remaining set,
/// removing both, until no such pair exists. Pairs are chosen in
/// lexicographic (agent, good) order.
pub fn singleton_phase<V: Valuation>(goods: &GoodSet, agents: &[usize], oracles: &[V], n: usize) -> SingletonOutcome {
    let scale = 2.0 * n as f64;
    let mut remaining_goods = goods.clone();
    let mut remaining_agents: Vec<usize> = agents.to_vec();
    remaining_agents.sort_unstable();
    remaining_agents.dedup();
    let mut singles: Vec<Option<Vec<f64>>> = vec![None; oracles.len()];
    let mut assigned = Vec::new();

    'scan: loop {
        if remaining_goods.is_empty() {
            break;
        }
        for pos in 0..remaining_agents.len() {
            let a = remaining_agents[pos];
            let threshold = oracles[a].value(&remaining_goods) / scale;
            let table = singles[a].get_or_insert_with(|| {
                (0..goods.universe())
                    .map(|g| if goods.contains(g) { oracles[a].singleton_value(g) } else { 0.0 })
                    .collect()
            });
            let hit = remaining_goods.iter().find(|&g| table[g] >= threshold);
            if let Some(g) = hit {
                assigned.push((a, g));
                remaining_goods.remove(g);
                remaining_agents.remove(pos);
                continue 'scan;
            }
        }
        break;
    }
    SingletonOutcome {
        assigned,
        remaining_goods,
        remaining_agents,
    }
}
