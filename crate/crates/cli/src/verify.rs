//! Invariant checks on solver traces against brute-force oracles.

use std::fmt;

use pmeanfair_core::{
    alg_solve, check_axioms, exact_ell, exact_optimum, matching_baseline, moving_knife_with_order, singleton_phase,
    AlgOptions, Instance, Valuation, ViolationKind, WelfareParam,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::param::format_p;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    /// Seeds for sampled axiom checks and random knife orders.
    pub seeds: Vec<u64>,
    /// Relative slack on every floating-point inequality except the knife
    /// bound, which is checked exactly.
    pub tolerance: f64,
    pub budget: u128,
    /// Sampled pairs per seed when `m` is too large for exhaustive axiom checks.
    pub samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seeds: vec![0, 1, 2],
            tolerance: 1e-9,
            budget: pmeanfair_core::DEFAULT_ENUMERATION_BUDGET,
            samples: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Summary on success, first witness on failure.
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    fn push(&mut self, name: &str, witnesses: Vec<String>, summary: impl Into<String>) {
        let passed = witnesses.is_empty();
        let detail = if passed {
            summary.into()
        } else {
            let more = if witnesses.len() > 1 {
                format!(" (+{} more)", witnesses.len() - 1)
            } else {
                String::new()
            };
            format!("{}{more}", witnesses[0])
        };
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        });
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn all_passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        Ok(())
    }
}

fn geq(a: f64, b: f64, tol: f64) -> bool {
    a >= b - tol * a.abs().max(b.abs())
}

fn kind_name(kind: ViolationKind) -> &'static str {
    match kind {
        ViolationKind::Negative => "negative value",
        ViolationKind::NotNormalized => "v(empty) != 0",
        ViolationKind::NotMonotone => "not monotone",
        ViolationKind::NotSubadditive => "not subadditive",
    }
}

/// Runs every check. Only budget overflow in the exact oracles is an error;
/// everything else ends up in the report.
pub fn verify<V: Valuation>(instance: &Instance<V>, param: &WelfareParam, options: &VerifyOptions) -> Result<VerifyReport> {
    let (n, m) = (instance.n(), instance.m());
    let tol = options.tolerance;
    let mut report = VerifyReport::default();

    let mut witnesses = Vec::new();
    let mut examined = 0;
    // exhaustive below 13 goods, so one sweep suffices there
    let seeds: Vec<u64> = match options.seeds.as_slice() {
        [] => vec![0],
        [first, ..] if m <= 12 => vec![*first],
        all => all.to_vec(),
    };
    for (i, oracle) in instance.oracles().iter().enumerate() {
        for &seed in &seeds {
            let r = check_axioms(oracle, options.samples, seed);
            examined += 1;
            for v in &r.violations {
                witnesses.push(format!(
                    "agent {i}: {} at A = {:?}, B = {:?}; v(A) = {}, v(B) = {}, v(A ∪ B) = {}",
                    kind_name(v.kind),
                    v.first.to_vec(),
                    v.second.to_vec(),
                    v.first_value,
                    v.second_value,
                    v.union_value
                ));
            }
        }
    }
    report.push("valuation-axioms", witnesses, format!("{examined} oracle sweeps clean"));

    if m < n || m == 0 {
        report.push("solver-invariants", Vec::new(), format!("vacuous: {n} agents, {m} goods"));
        return Ok(report);
    }

    let opt = exact_optimum(instance, param, options.budget)?;
    let ells = (0..n)
        .map(|i| exact_ell(instance, i, options.budget))
        .collect::<pmeanfair_core::Result<Vec<f64>>>()?;

    let mut witnesses = Vec::new();
    for (i, bundle) in opt.allocation.bundles().iter().enumerate() {
        let top = bundle.iter().map(|g| instance.oracle(i).singleton_value(g)).fold(0.0, f64::max);
        let share = instance.oracle(i).value(bundle) / (4 * n) as f64;
        if !geq(top + ells[i], share, tol) {
            witnesses.push(format!("agent {i}: best good {top} + ell {} < v(A*)/4n = {share}", ells[i]));
        }
    }
    report.push("optimal-bundle-cover", witnesses, format!("optimum {} at p = {}", opt.welfare, format_p(param.p())));

    match alg_solve(instance, param, AlgOptions::default()) {
        Err(e) => report.push("alg-run", vec![e.to_string()], ""),
        Ok((alloc, trace)) => {
            let partition = if alloc.is_partition_of(m) {
                Vec::new()
            } else {
                vec![format!("bundles {:?} do not partition the goods", alloc.bundles())]
            };
            report.push("alg-partition", partition, "output partitions the goods");

            let mut w = Vec::new();
            if trace.iterations() as u64 > trace.bound {
                w.push(format!("{} rounds > bound {}", trace.iterations(), trace.bound));
            }
            report.push("alg-termination", w, format!("{} rounds, bound {}", trace.iterations(), trace.bound));

            let mut bundles = Vec::new();
            let mut gammas = Vec::new();
            let shrink = 1.0 - 1.0 / m as f64;
            for (t, round) in trace.rounds.iter().enumerate() {
                for i in 0..n {
                    if !geq(round.bundle_values[i], ells[i], tol) {
                        bundles.push(format!("round {t} agent {i}: v(B) = {} < ell = {}", round.bundle_values[i], ells[i]));
                    }
                    if !geq(round.gamma[i], shrink * ells[i], tol) {
                        gammas.push(format!("round {t} agent {i}: gamma = {} < (1-1/m) ell = {}", round.gamma[i], shrink * ells[i]));
                    }
                }
            }
            report.push("round-bundle-floor", bundles, format!("ell = {ells:?}"));
            report.push("round-gamma-floor", gammas, format!("{} rounds", trace.iterations()));

            let claimed = param.weights().is_none() || param.p() == 0.0;
            let achieved = alloc.welfare(instance, param)?;
            let need = shrink * opt.welfare / (8 * n) as f64;
            if claimed {
                let w = if geq(achieved, need, tol) {
                    Vec::new()
                } else {
                    vec![format!("welfare {achieved} < (1-1/m) OPT / 8n = {need}")]
                };
                report.push("alg-approximation", w, format!("welfare {achieved}, floor {need}"));
            }
        }
    }

    if param.p() <= 0.0 {
        let alloc = matching_baseline(instance, param)?;
        let achieved = alloc.welfare(instance, param)?;
        let need = opt.welfare / (m - n + 1) as f64;
        let w = if geq(achieved, need, tol) {
            Vec::new()
        } else {
            vec![format!("welfare {achieved} < OPT / (m-n+1) = {need}")]
        };
        report.push("matching-approximation", w, format!("welfare {achieved}, floor {need}"));
    }

    // knife on the goods left after the singleton phase, in random orders
    let everyone: Vec<usize> = (0..n).collect();
    let low = singleton_phase(&instance.all_goods(), &everyone, instance.oracles(), n);
    let mut witnesses = Vec::new();
    if !low.remaining_agents.is_empty() {
        for &seed in &options.seeds {
            let mut order = low.remaining_goods.to_vec();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let pieces = moving_knife_with_order(&low.remaining_goods, &low.remaining_agents, instance.oracles(), n, &order)?;
            for (&i, piece) in low.remaining_agents.iter().zip(&pieces) {
                let share = instance.oracle(i).value(&low.remaining_goods) / (2 * n) as f64;
                let got = instance.oracle(i).value(piece);
                if got < share {
                    witnesses.push(format!("seed {seed} agent {i}: v(P) = {got} < v(G)/2n = {share}"));
                }
            }
        }
    }
    report.push(
        "knife-proportional",
        witnesses,
        format!("{} agents, {} seeds", low.remaining_agents.len(), options.seeds.len()),
    );
    Ok(report)
}
