//! Value oracles over a ground set of `m` indivisible goods.
//!
//! A valuation is only ever accessed through [`Valuation::value`]. Every
//! shipped kind is nonnegative, normalized, monotone and subadditive;
//! [`check_axioms`] tests an arbitrary oracle for those four properties.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A subset of the goods `0..universe`, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GoodSet {
    universe: usize,
    words: Vec<u64>,
}

impl GoodSet {
    pub fn empty(universe: usize) -> Self {
        GoodSet {
            universe,
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = Self::empty(universe);
        for g in 0..universe {
            set.insert(g);
        }
        set
    }

    pub fn singleton(universe: usize, good: usize) -> Self {
        let mut set = Self::empty(universe);
        set.insert(good);
        set
    }

    /// Builds a set from indices, rejecting any index `>= universe`.
    /// Duplicates collapse.
    pub fn from_indices<I>(universe: usize, indices: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut set = Self::empty(universe);
        for g in indices {
            if g >= universe {
                return Err(Error::InvalidInput(alloc::format!(
                    "good index {g} out of range for {universe} goods"
                )));
            }
            set.insert(g);
        }
        Ok(set)
    }

    /// Set from the low `universe` bits of `mask`. Requires `universe <= 64`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= 64, "mask sets hold at most 64 goods");
        let mut set = Self::empty(universe);
        if universe > 0 {
            let keep = if universe == 64 { u64::MAX } else { (1u64 << universe) - 1 };
            set.words[0] = mask & keep;
        }
        set
    }

    /// The set as a bitmask, when it fits in 64 goods.
    pub fn to_mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn contains(&self, good: usize) -> bool {
        good < self.universe && self.words[good / 64] & (1 << (good % 64)) != 0
    }

    /// Inserts `good`; returns whether it was newly added.
    ///
    /// Panics if `good` is outside the universe.
    pub fn insert(&mut self, good: usize) -> bool {
        assert!(good < self.universe, "good {good} outside universe {}", self.universe);
        let (w, b) = (good / 64, 1u64 << (good % 64));
        let fresh = self.words[w] & b == 0;
        self.words[w] |= b;
        fresh
    }

    pub fn remove(&mut self, good: usize) -> bool {
        if good >= self.universe {
            return false;
        }
        let (w, b) = (good / 64, 1u64 << (good % 64));
        let present = self.words[w] & b != 0;
        self.words[w] &= !b;
        present
    }

    /// Goods in ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut rest = word;
            core::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * 64 + bit)
            })
        })
    }

    /// Largest index in the set.
    pub fn max(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(wi, &w)| wi * 64 + 63 - w.leading_zeros() as usize)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        let universe = self.universe.max(other.universe);
        let mut out = Self::empty(universe);
        for (i, slot) in out.words.iter_mut().enumerate() {
            let a = self.words.get(i).copied().unwrap_or(0);
            let b = other.words.get(i).copied().unwrap_or(0);
            *slot = op(a, b);
        }
        out
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn union_with(&mut self, other: &Self) {
        for g in other.iter() {
            self.insert(g);
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.iter().all(|g| other.contains(g))
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersection(other).is_empty()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for GoodSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Value-query access to one agent's valuation.
pub trait Valuation {
    /// Size `m` of the ground set.
    fn num_goods(&self) -> usize;

    /// `v(S)`. Callers pass sets whose indices are below [`num_goods`](Self::num_goods).
    fn value(&self, goods: &GoodSet) -> f64;

    /// `v({g})`.
    fn singleton_value(&self, good: usize) -> f64 {
        self.value(&GoodSet::singleton(self.num_goods(), good))
    }

    /// `v(S)` with an index check.
    fn try_value(&self, goods: &GoodSet) -> Result<f64> {
        match goods.max() {
            Some(g) if g >= self.num_goods() => Err(Error::InvalidInput(alloc::format!(
                "good index {g} out of range for {} goods",
                self.num_goods()
            ))),
            _ => Ok(self.value(goods)),
        }
    }
}

impl<V: Valuation + ?Sized> Valuation for &V {
    fn num_goods(&self) -> usize {
        (**self).num_goods()
    }
    fn value(&self, goods: &GoodSet) -> f64 {
        (**self).value(goods)
    }
    fn singleton_value(&self, good: usize) -> f64 {
        (**self).singleton_value(good)
    }
}

impl<V: Valuation + ?Sized> Valuation for alloc::boxed::Box<V> {
    fn num_goods(&self) -> usize {
        (**self).num_goods()
    }
    fn value(&self, goods: &GoodSet) -> f64 {
        (**self).value(goods)
    }
    fn singleton_value(&self, good: usize) -> f64 {
        (**self).singleton_value(good)
    }
}

fn check_values(what: &str, values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite() || *v < 0.0) {
        Some(i) => Err(Error::InvalidInput(alloc::format!(
            "{what}: entry {i} is {} (must be finite and nonnegative)",
            values[i]
        ))),
        None => Ok(()),
    }
}

/// Coverage valuation: each good covers a subset of `0..universe`; a bundle
/// is worth the size of the union it covers.
#[derive(Clone, PartialEq)]
pub struct CoverageValuation {
    universe: usize,
    goods: Vec<Vec<usize>>,
    masks: Vec<GoodSet>,
}

impl CoverageValuation {
    pub fn new(universe: usize, goods: Vec<Vec<usize>>) -> Result<Self> {
        let masks = goods
            .iter()
            .map(|cover| GoodSet::from_indices(universe, cover.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Ok(CoverageValuation { universe, goods, masks })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Covered elements per good, as supplied.
    pub fn goods(&self) -> &[Vec<usize>] {
        &self.goods
    }
}

impl fmt::Debug for CoverageValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoverageValuation")
            .field("universe", &self.universe)
            .field("goods", &self.goods)
            .finish()
    }
}

impl Valuation for CoverageValuation {
    fn num_goods(&self) -> usize {
        self.goods.len()
    }

    fn value(&self, goods: &GoodSet) -> f64 {
        let mut covered = GoodSet::empty(self.universe);
        for g in goods.iter() {
            covered.union_with(&self.masks[g]);
        }
        covered.len() as f64
    }
}

/// Member of the XOS family used for the query lower bound on `m = n²` goods.
///
/// The common function is `f(T) = max(min(|T|, cap), slope·|T|)` with
/// `cap = ⌊(1+δ)·n^{4δ}⌋` and `slope = (1+δ)/n^{1-2δ}`. It is the closed form
/// of the maximum over the unit clauses `a_S` with `|S| <= cap` and the
/// uniform clause `slope`. An agent with its own block `T_i` of a seeded
/// random equal partition values `max(f(T), |T ∩ T_i|)`.
#[derive(Clone, PartialEq)]
pub struct XosHardValuation {
    n: usize,
    delta: f64,
    seed: u64,
    agent: Option<usize>,
    cap: usize,
    slope: f64,
    own: Option<GoodSet>,
}

impl XosHardValuation {
    /// `agent = None` gives the shared function `f`; `Some(i)` gives `v_i`.
    pub fn new(n: usize, delta: f64, seed: u64, agent: Option<usize>) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("xos_hard needs n >= 2"));
        }
        if !(delta > 0.0 && delta < 0.25) {
            return Err(Error::InvalidInput(alloc::format!(
                "xos_hard delta must lie in (0, 1/4), got {delta}"
            )));
        }
        if let Some(i) = agent {
            if i >= n {
                return Err(Error::InvalidInput(alloc::format!(
                    "xos_hard agent {i} out of range for n = {n}"
                )));
            }
        }
        let nf = n as f64;
        let cap = libm::floor((1.0 + delta) * libm::pow(nf, 4.0 * delta)) as usize;
        let slope = (1.0 + delta) / libm::pow(nf, 1.0 - 2.0 * delta);
        let own = agent.map(|i| crate::generators::random_equal_partition(n, seed)[i].clone());
        Ok(XosHardValuation { n, delta, seed, agent, cap, slope, own })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }
    pub fn agent(&self) -> Option<usize> {
        self.agent
    }
    pub fn is_identical(&self) -> bool {
        self.agent.is_none()
    }
    /// Integer cap on the cardinality clauses.
    pub fn cap(&self) -> usize {
        self.cap
    }
    /// Per-good value of the uniform clause.
    pub fn slope(&self) -> f64 {
        self.slope
    }
    /// The agent's own block `T_i`, if any.
    pub fn own_block(&self) -> Option<&GoodSet> {
        self.own.as_ref()
    }

    /// The shared function `f`.
    pub fn common_value(&self, goods: &GoodSet) -> f64 {
        let k = goods.len();
        (k.min(self.cap) as f64).max(self.slope * k as f64)
    }
}

impl fmt::Debug for XosHardValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("XosHardValuation")
            .field("n", &self.n)
            .field("delta", &self.delta)
            .field("seed", &self.seed)
            .field("agent", &self.agent)
            .finish()
    }
}

impl Valuation for XosHardValuation {
    fn num_goods(&self) -> usize {
        self.n * self.n
    }

    fn value(&self, goods: &GoodSet) -> f64 {
        let common = self.common_value(goods);
        match &self.own {
            Some(block) => common.max(goods.intersection(block).len() as f64),
            None => common,
        }
    }
}

/// The shipped valuation kinds.
#[derive(Debug, Clone, PartialEq)]
pub enum ValuationOracle {
    /// `v(S) = Σ_{g∈S} values[g]`.
    Additive { values: Vec<f64> },
    /// `v(S) = max_c Σ_{g∈S} clauses[c][g]`; zero when there are no clauses.
    Xos { num_goods: usize, clauses: Vec<Vec<f64>> },
    /// `v(S) = min(Σ_{g∈S} values[g], cap)`.
    BudgetAdditive { values: Vec<f64>, cap: f64 },
    Coverage(CoverageValuation),
    XosHard(XosHardValuation),
}

impl ValuationOracle {
    pub fn additive(values: Vec<f64>) -> Result<Self> {
        check_values("additive values", &values)?;
        Ok(ValuationOracle::Additive { values })
    }

    pub fn xos(num_goods: usize, clauses: Vec<Vec<f64>>) -> Result<Self> {
        for (c, clause) in clauses.iter().enumerate() {
            if clause.len() != num_goods {
                return Err(Error::InvalidInput(alloc::format!(
                    "xos clause {c} has {} entries, expected {num_goods}",
                    clause.len()
                )));
            }
            check_values("xos clause", clause)?;
        }
        Ok(ValuationOracle::Xos { num_goods, clauses })
    }

    pub fn budget_additive(values: Vec<f64>, cap: f64) -> Result<Self> {
        check_values("budget-additive values", &values)?;
        check_values("budget-additive cap", &[cap])?;
        Ok(ValuationOracle::BudgetAdditive { values, cap })
    }

    pub fn coverage(universe: usize, goods: Vec<Vec<usize>>) -> Result<Self> {
        CoverageValuation::new(universe, goods).map(ValuationOracle::Coverage)
    }

    pub fn xos_hard(n: usize, delta: f64, seed: u64, agent: Option<usize>) -> Result<Self> {
        XosHardValuation::new(n, delta, seed, agent).map(ValuationOracle::XosHard)
    }
}

#[inline]
fn additive_sum(values: &[f64], goods: &GoodSet) -> f64 {
    goods.iter().map(|g| values[g]).sum()
}

impl Valuation for ValuationOracle {
    fn num_goods(&self) -> usize {
        match self {
            ValuationOracle::Additive { values } => values.len(),
            ValuationOracle::Xos { num_goods, .. } => *num_goods,
            ValuationOracle::BudgetAdditive { values, .. } => values.len(),
            ValuationOracle::Coverage(c) => c.num_goods(),
            ValuationOracle::XosHard(h) => h.num_goods(),
        }
    }

    fn value(&self, goods: &GoodSet) -> f64 {
        match self {
            ValuationOracle::Additive { values } => additive_sum(values, goods),
            ValuationOracle::Xos { clauses, .. } => clauses
                .iter()
                .map(|clause| additive_sum(clause, goods))
                .fold(0.0, f64::max),
            ValuationOracle::BudgetAdditive { values, cap } => additive_sum(values, goods).min(*cap),
            ValuationOracle::Coverage(c) => c.value(goods),
            ValuationOracle::XosHard(h) => h.value(goods),
        }
    }
}

/// Wraps an oracle and counts value queries.
///
/// The counter is atomic, so a shared reference may be queried from several
/// threads.
#[derive(Debug)]
pub struct CountingOracle<V> {
    inner: V,
    queries: AtomicU64,
}

impl<V: Valuation> CountingOracle<V> {
    pub fn new(inner: V) -> Self {
        CountingOracle {
            inner,
            queries: AtomicU64::new(0),
        }
    }

    /// Number of `value` calls since construction or the last reset.
    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.queries.store(0, Ordering::Relaxed);
    }

    pub fn inner(&self) -> &V {
        &self.inner
    }

    pub fn into_inner(self) -> V {
        self.inner
    }
}

impl<V: Valuation> Valuation for CountingOracle<V> {
    fn num_goods(&self) -> usize {
        self.inner.num_goods()
    }

    fn value(&self, goods: &GoodSet) -> f64 {
        self.queries.fetch_add(1, Ordering::Relaxed);
        self.inner.value(goods)
    }
}

/// A fair division instance: `n` agents with oracles over the same `m` goods.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance<V = ValuationOracle> {
    num_goods: usize,
    oracles: Vec<V>,
}

impl<V: Valuation> Instance<V> {
    pub fn new(num_goods: usize, oracles: Vec<V>) -> Result<Self> {
        if oracles.is_empty() {
            return Err(Error::invalid("an instance needs at least one agent"));
        }
        if let Some((i, o)) = oracles
            .iter()
            .enumerate()
            .find(|(_, o)| o.num_goods() != num_goods)
        {
            return Err(Error::InvalidInput(alloc::format!(
                "agent {i} is defined on {} goods, instance has {num_goods}",
                o.num_goods()
            )));
        }
        Ok(Instance { num_goods, oracles })
    }

    /// Number of agents.
    #[inline]
    pub fn n(&self) -> usize {
        self.oracles.len()
    }

    /// Number of goods.
    #[inline]
    pub fn m(&self) -> usize {
        self.num_goods
    }

    #[inline]
    pub fn oracle(&self, agent: usize) -> &V {
        &self.oracles[agent]
    }

    pub fn oracles(&self) -> &[V] {
        &self.oracles
    }

    pub fn all_goods(&self) -> GoodSet {
        GoodSet::full(self.num_goods)
    }

    /// A view of this instance whose oracles count queries.
    pub fn counting(&self) -> Instance<CountingOracle<&V>> {
        Instance {
            num_goods: self.num_goods,
            oracles: self.oracles.iter().map(CountingOracle::new).collect(),
        }
    }

    pub fn into_oracles(self) -> Vec<V> {
        self.oracles
    }
}

impl<V: Valuation> Instance<CountingOracle<V>> {
    /// Total queries over all agents.
    pub fn total_queries(&self) -> u64 {
        self.oracles.iter().map(CountingOracle::queries).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    Negative,
    NotNormalized,
    NotMonotone,
    NotSubadditive,
}

/// One witnessed axiom failure.
///
/// `Negative`/`NotNormalized`: `first` is the offending set.
/// `NotMonotone`: `first ⊆ second` but `v(first) > v(second)`.
/// `NotSubadditive`: `v(first ∪ second) > v(first) + v(second)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub first: GoodSet,
    pub second: GoodSet,
    pub first_value: f64,
    pub second_value: f64,
    pub union_value: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AxiomReport {
    /// Witnesses, at most [`AxiomReport::MAX_WITNESSES`] per kind.
    pub violations: Vec<Violation>,
    /// Total violations found, including those without stored witnesses.
    pub total: usize,
    /// Whether every set (pair) was examined rather than sampled.
    pub exhaustive: bool,
}

impl AxiomReport {
    pub const MAX_WITNESSES: usize = 8;

    pub fn is_clean(&self) -> bool {
        self.total == 0
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }

    fn push(&mut self, v: Violation) {
        self.total += 1;
        if self.count(v.kind) < Self::MAX_WITNESSES {
            self.violations.push(v);
        }
    }
}

/// Largest ground set checked exhaustively.
pub const EXHAUSTIVE_AXIOM_LIMIT: usize = 12;

/// Relative slack for the axiom comparisons, absorbing summation-order rounding.
pub const AXIOM_TOLERANCE: f64 = 1e-9;

#[inline]
fn exceeds(lhs: f64, rhs: f64) -> bool {
    lhs > rhs && lhs - rhs > AXIOM_TOLERANCE * lhs.abs().max(rhs.abs())
}

/// Tests nonnegativity, normalization, monotonicity and subadditivity.
///
/// Up to [`EXHAUSTIVE_AXIOM_LIMIT`] goods every set and every disjoint pair
/// is examined (monotone + subadditive on disjoint pairs implies subadditive
/// on all pairs). Above that, `samples` random pairs `(A, B)` are drawn from
/// a generator seeded with `seed`.
pub fn check_axioms<V: Valuation + ?Sized>(oracle: &V, samples: usize, seed: u64) -> AxiomReport {
    let m = oracle.num_goods();
    let mut report = AxiomReport::default();

    let empty = GoodSet::empty(m);
    let v_empty = oracle.value(&empty);
    if v_empty != 0.0 {
        report.push(Violation {
            kind: ViolationKind::NotNormalized,
            first: empty.clone(),
            second: empty.clone(),
            first_value: v_empty,
            second_value: v_empty,
            union_value: v_empty,
        });
    }

    if m <= EXHAUSTIVE_AXIOM_LIMIT {
        report.exhaustive = true;
        check_exhaustive(oracle, m, &mut report);
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples.max(1) {
            let a = random_subset(&mut rng, m);
            let b = random_subset(&mut rng, m);
            check_pair(oracle, &a, &b, &mut report);
        }
    }
    report
}

fn random_subset(rng: &mut ChaCha8Rng, m: usize) -> GoodSet {
    let mut s = GoodSet::empty(m);
    for g in 0..m {
        if rng.gen_bool(0.5) {
            s.insert(g);
        }
    }
    s
}

fn check_pair<V: Valuation + ?Sized>(oracle: &V, a: &GoodSet, b: &GoodSet, report: &mut AxiomReport) {
    let union = a.union(b);
    let meet = a.intersection(b);
    let (va, vb, vu, vm) = (
        oracle.value(a),
        oracle.value(b),
        oracle.value(&union),
        oracle.value(&meet),
    );
    for (set, v) in [(a, va), (b, vb)] {
        if v < 0.0 {
            report.push(Violation {
                kind: ViolationKind::Negative,
                first: set.clone(),
                second: GoodSet::empty(set.universe()),
                first_value: v,
                second_value: 0.0,
                union_value: v,
            });
        }
    }
    for (small, vs, big, vbig) in [(&meet, vm, a, va), (a, va, &union, vu), (b, vb, &union, vu)] {
        if exceeds(vs, vbig) {
            report.push(Violation {
                kind: ViolationKind::NotMonotone,
                first: small.clone(),
                second: big.clone(),
                first_value: vs,
                second_value: vbig,
                union_value: vbig,
            });
        }
    }
    if exceeds(vu, va + vb) {
        report.push(Violation {
            kind: ViolationKind::NotSubadditive,
            first: a.clone(),
            second: b.clone(),
            first_value: va,
            second_value: vb,
            union_value: vu,
        });
    }
}

fn check_exhaustive<V: Valuation + ?Sized>(oracle: &V, m: usize, report: &mut AxiomReport) {
    let size = 1usize << m;
    let table: Vec<f64> = (0..size as u64)
        .map(|mask| oracle.value(&GoodSet::from_mask(m, mask)))
        .collect();
    let set = |mask: usize| GoodSet::from_mask(m, mask as u64);

    for (mask, &v) in table.iter().enumerate() {
        if v < 0.0 {
            report.push(Violation {
                kind: ViolationKind::Negative,
                first: set(mask),
                second: set(0),
                first_value: v,
                second_value: 0.0,
                union_value: v,
            });
        }
    }

    for (mask, &v) in table.iter().enumerate() {
        for g in 0..m {
            let bigger = mask | (1 << g);
            if bigger != mask && exceeds(v, table[bigger]) {
                report.push(Violation {
                    kind: ViolationKind::NotMonotone,
                    first: set(mask),
                    second: set(bigger),
                    first_value: v,
                    second_value: table[bigger],
                    union_value: table[bigger],
                });
            }
        }
    }

    let full = size - 1;
    for a in 1..size {
        let rest = full & !a;
        // nonempty submasks of the complement, each unordered pair once
        let mut b = rest;
        while b > 0 {
            if b > a && exceeds(table[a | b], table[a] + table[b]) {
                report.push(Violation {
                    kind: ViolationKind::NotSubadditive,
                    first: set(a),
                    second: set(b),
                    first_value: table[a],
                    second_value: table[b],
                    union_value: table[a | b],
                });
            }
            b = (b - 1) & rest;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Squared(usize);
    impl Valuation for Squared {
        fn num_goods(&self) -> usize {
            self.0
        }
        fn value(&self, goods: &GoodSet) -> f64 {
            let k = goods.len() as f64;
            k * k
        }
    }

    struct Decreasing(usize);
    impl Valuation for Decreasing {
        fn num_goods(&self) -> usize {
            self.0
        }
        fn value(&self, goods: &GoodSet) -> f64 {
            if goods.is_empty() {
                0.0
            } else {
                10.0 - goods.len() as f64
            }
        }
    }

    fn set(m: usize, goods: &[usize]) -> GoodSet {
        GoodSet::from_indices(m, goods.iter().copied()).unwrap()
    }

    #[test]
    fn goodset_basics() {
        let mut s = GoodSet::empty(130);
        assert!(s.is_empty());
        assert!(s.insert(3));
        assert!(!s.insert(3));
        s.insert(129);
        s.insert(64);
        assert_eq!(s.to_vec(), [3, 64, 129]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.max(), Some(129));
        assert!(s.remove(64));
        assert!(!s.contains(64));
        assert_eq!(s.to_mask(), None);

        let a = set(5, &[0, 1, 2]);
        let b = set(5, &[2, 3]);
        assert_eq!(a.union(&b).to_vec(), [0, 1, 2, 3]);
        assert_eq!(a.intersection(&b).to_vec(), [2]);
        assert_eq!(a.difference(&b).to_vec(), [0, 1]);
        assert!(set(5, &[1]).is_subset(&a));
        assert!(!b.is_subset(&a));
        assert_eq!(GoodSet::from_mask(5, 0b10110).to_vec(), [1, 2, 4]);
        assert_eq!(set(5, &[4, 1, 4]), set(5, &[1, 4]));
    }

    #[test]
    fn goodset_rejects_out_of_range() {
        assert!(matches!(
            GoodSet::from_indices(3, [0, 3]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn value_examples() {
        let add = ValuationOracle::additive(alloc::vec![5.0, 4.0, 3.0]).unwrap();
        assert_eq!(add.value(&set(3, &[0, 2])), 8.0);
        assert_eq!(add.value(&GoodSet::empty(3)), 0.0);

        let xos = ValuationOracle::xos(2, alloc::vec![alloc::vec![3.0, 0.0], alloc::vec![0.0, 2.0]]).unwrap();
        assert_eq!(xos.value(&set(2, &[0, 1])), 3.0);
        assert_eq!(xos.value(&GoodSet::empty(2)), 0.0);

        let ba = ValuationOracle::budget_additive(alloc::vec![2.0, 2.0], 3.0).unwrap();
        assert_eq!(ba.value(&set(2, &[0, 1])), 3.0);
        assert_eq!(ba.value(&set(2, &[1])), 2.0);

        let cov = ValuationOracle::coverage(4, alloc::vec![alloc::vec![0, 1], alloc::vec![1, 2], alloc::vec![]]).unwrap();
        assert_eq!(cov.value(&set(3, &[0, 1])), 3.0);
        assert_eq!(cov.value(&set(3, &[2])), 0.0);
    }

    #[test]
    fn try_value_checks_indices() {
        let add = ValuationOracle::additive(alloc::vec![1.0, 1.0]).unwrap();
        assert!(add.try_value(&set(5, &[4])).is_err());
        assert_eq!(add.try_value(&set(5, &[1])).unwrap(), 1.0);
    }

    #[test]
    fn constructors_reject_bad_parameters() {
        assert!(ValuationOracle::additive(alloc::vec![1.0, -1.0]).is_err());
        assert!(ValuationOracle::additive(alloc::vec![f64::NAN]).is_err());
        assert!(ValuationOracle::xos(2, alloc::vec![alloc::vec![1.0]]).is_err());
        assert!(ValuationOracle::budget_additive(alloc::vec![1.0], -2.0).is_err());
        assert!(ValuationOracle::coverage(2, alloc::vec![alloc::vec![2]]).is_err());
        assert!(ValuationOracle::xos_hard(3, 0.3, 0, None).is_err());
        assert!(ValuationOracle::xos_hard(1, 0.1, 0, None).is_err());
        assert!(ValuationOracle::xos_hard(3, 0.1, 0, Some(3)).is_err());
    }

    #[test]
    fn counting_is_transparent() {
        let add = ValuationOracle::additive(alloc::vec![1.0, 2.0]).unwrap();
        let counted = CountingOracle::new(&add);
        let s = set(2, &[1]);
        assert_eq!(counted.value(&s), add.value(&s));
        assert_eq!(counted.singleton_value(0), 1.0);
        assert_eq!(counted.queries(), 2);
        counted.reset();
        assert_eq!(counted.queries(), 0);
    }

    #[test]
    fn counting_tolerates_threads() {
        let add = ValuationOracle::additive(alloc::vec![1.0; 4]).unwrap();
        let counted = CountingOracle::new(&add);
        std::thread::scope(|scope| {
            for _ in 0..4 {
                scope.spawn(|| {
                    for _ in 0..250 {
                        counted.value(&GoodSet::full(4));
                    }
                });
            }
        });
        assert_eq!(counted.queries(), 1000);
    }

    #[test]
    fn instance_validates_dimensions() {
        let a = ValuationOracle::additive(alloc::vec![1.0, 2.0]).unwrap();
        let b = ValuationOracle::additive(alloc::vec![1.0]).unwrap();
        assert!(Instance::new(2, alloc::vec![a.clone(), b]).is_err());
        assert!(Instance::<ValuationOracle>::new(2, alloc::vec![]).is_err());
        let inst = Instance::new(2, alloc::vec![a.clone(), a]).unwrap();
        assert_eq!((inst.n(), inst.m()), (2, 2));
    }

    #[test]
    fn axioms_hold_for_shipped_kinds() {
        let add = ValuationOracle::additive(alloc::vec![1.5, 0.0, 3.0, 2.25]).unwrap();
        assert!(check_axioms(&add, 10, 1).is_clean());
        let ba = ValuationOracle::budget_additive(alloc::vec![2.0, 2.0], 3.0).unwrap();
        let r = check_axioms(&ba, 10, 1);
        assert!(r.is_clean() && r.exhaustive);
        let big = ValuationOracle::additive(alloc::vec![0.5; 20]).unwrap();
        let r = check_axioms(&big, 200, 9);
        assert!(r.is_clean() && !r.exhaustive);
    }

    #[test]
    fn superadditive_stub_is_caught() {
        let report = check_axioms(&Squared(2), 1, 0);
        assert!(!report.is_clean());
        let w = &report.violations[0];
        assert_eq!(w.kind, ViolationKind::NotSubadditive);
        assert!(w.first.is_disjoint(&w.second));
        assert_eq!((w.first.len(), w.second.len()), (1, 1));
        assert_eq!(w.union_value, 4.0);
        assert_eq!(w.first_value + w.second_value, 2.0);

        let sampled = check_axioms(&Squared(16), 50, 3);
        assert!(sampled.count(ViolationKind::NotSubadditive) > 0);
    }

    #[test]
    fn non_monotone_stub_is_caught() {
        let report = check_axioms(&Decreasing(3), 1, 0);
        assert!(report.count(ViolationKind::NotMonotone) > 0);
        let w = report
            .violations
            .iter()
            .find(|v| v.kind == ViolationKind::NotMonotone)
            .unwrap();
        assert!(w.first.is_subset(&w.second));
        assert!(w.first_value > w.second_value);
    }
}
