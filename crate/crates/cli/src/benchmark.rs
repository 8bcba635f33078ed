//! Batch experiments: every family × p × seed × algorithm cell, one CSV row
//! each.
//!
//! ```json
//! {
//!   "families": [{"family": "random", "kind": "additive", "n": 2, "m": 5}],
//!   "p": ["0", "-inf", 0.5],
//!   "seeds": {"start": 0, "count": 50},
//!   "algorithms": ["alg", "matching", "exact"]
//! }
//! ```

use std::io::Write;

use pmeanfair_core::{exact_optimum, Error as CoreError, Instance, WelfareParam};
use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{CliError, Result};
use crate::generate::Family;
use crate::param::{format_p, parse_p};
use crate::solve::{solve, Algorithm, SolveOptions};

pub const COLUMNS: [&str; 12] = [
    "family",
    "n",
    "m",
    "p",
    "seed",
    "algorithm",
    "welfare",
    "opt_welfare",
    "ratio",
    "iterations",
    "queries",
    "ms",
];

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum PValue {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum Seeds {
    List(Vec<u64>),
    Range { start: u64, count: u64 },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    families: Vec<Family>,
    p: Vec<PValue>,
    seeds: Seeds,
    algorithms: Vec<Algorithm>,
    #[serde(default)]
    exact_budget: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    pub families: Vec<Family>,
    pub p: Vec<f64>,
    pub seeds: Vec<u64>,
    pub algorithms: Vec<Algorithm>,
    pub exact_budget: u128,
}

impl BenchmarkConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(text)?;
        let p = raw
            .p
            .iter()
            .map(|v| match v {
                PValue::Number(x) => parse_p(&x.to_string()),
                PValue::Text(t) => parse_p(t),
            })
            .collect::<Result<Vec<f64>>>()?;
        let seeds = match raw.seeds {
            Seeds::List(s) => s,
            Seeds::Range { start, count } => (start..start + count).collect(),
        };
        if raw.families.is_empty() || p.is_empty() || seeds.is_empty() || raw.algorithms.is_empty() {
            return Err(CliError::malformed("families, p, seeds and algorithms must be nonempty"));
        }
        Ok(BenchmarkConfig {
            families: raw.families,
            p,
            seeds,
            algorithms: raw.algorithms,
            exact_budget: raw
                .exact_budget
                .map_or(pmeanfair_core::DEFAULT_ENUMERATION_BUDGET, u128::from),
        })
    }

    pub fn rows(&self) -> usize {
        self.families.len() * self.p.len() * self.seeds.len() * self.algorithms.len()
    }
}

/// One CSV row. Empty optionals become blank cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub p: f64,
    pub seed: u64,
    pub algorithm: Algorithm,
    /// `None` when the algorithm does not apply (e.g. `m < n`, `p > 0` for
    /// the matching baseline).
    pub welfare: Option<f64>,
    /// `None` when the exact oracle exceeds its budget.
    pub opt_welfare: Option<f64>,
    pub iterations: Option<usize>,
    pub queries: Option<u64>,
    pub ms: Option<f64>,
}

impl Row {
    /// `opt_welfare / welfare`, with `+∞` for a zero welfare against a
    /// positive optimum and 1 when both are 0.
    pub fn ratio(&self) -> Option<f64> {
        let (w, opt) = (self.welfare?, self.opt_welfare?);
        Some(if w > 0.0 {
            opt / w
        } else if opt > 0.0 {
            f64::INFINITY
        } else {
            1.0
        })
    }

    fn record(&self) -> [String; 12] {
        let num = |x: Option<f64>| match x {
            Some(v) if v == f64::INFINITY => "inf".to_string(),
            Some(v) => v.to_string(),
            None => String::new(),
        };
        [
            self.family.clone(),
            self.n.to_string(),
            self.m.to_string(),
            format_p(self.p),
            self.seed.to_string(),
            self.algorithm.to_string(),
            num(self.welfare),
            num(self.opt_welfare),
            num(self.ratio()),
            self.iterations.map(|i| i.to_string()).unwrap_or_default(),
            self.queries.map(|q| q.to_string()).unwrap_or_default(),
            self.ms.map(|ms| format!("{ms:.3}")).unwrap_or_default(),
        ]
    }
}

fn rows_for(
    config: &BenchmarkConfig,
    family: &Family,
    instance: &Instance,
    p: f64,
    seed: u64,
    timing: bool,
) -> Result<Vec<Row>> {
    let param = WelfareParam::new(p)?;
    let opt = match exact_optimum(instance, &param, config.exact_budget) {
        Ok(r) => Some(r.welfare),
        Err(CoreError::BudgetExceeded { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let options = SolveOptions {
        budget: config.exact_budget,
        ..SolveOptions::default()
    };
    let mut rows = Vec::new();
    for &algorithm in &config.algorithms {
        let mut row = Row {
            family: family.label(),
            n: instance.n(),
            m: instance.m(),
            p,
            seed,
            algorithm,
            welfare: None,
            opt_welfare: opt,
            iterations: None,
            queries: None,
            ms: None,
        };
        match solve(instance, &param, algorithm, options) {
            Ok(report) => {
                row.welfare = Some(report.welfare);
                row.iterations = report.iterations;
                row.queries = Some(report.queries);
                row.ms = timing.then_some(report.wall_ms);
            }
            Err(CliError::Core(_)) => {}
            Err(e) => return Err(e),
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Runs every cell, in parallel across (family, seed, p) groups. Rows come
/// back in config order: family, then p, then seed, then algorithm.
pub fn run(config: &BenchmarkConfig, timing: bool) -> Result<Vec<Row>> {
    let mut jobs = Vec::new();
    for (fi, family) in config.families.iter().enumerate() {
        for (si, &seed) in config.seeds.iter().enumerate() {
            let instance = family.generate(seed)?;
            for (pi, &p) in config.p.iter().enumerate() {
                jobs.push(((fi, pi, si), family, instance.clone(), p, seed));
            }
        }
    }
    let mut done = jobs
        .into_par_iter()
        .map(|(key, family, instance, p, seed)| Ok((key, rows_for(config, family, &instance, p, seed, timing)?)))
        .collect::<Result<Vec<_>>>()?;
    done.sort_by_key(|(key, _)| *key);
    Ok(done.into_iter().flat_map(|(_, rows)| rows).collect())
}

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush().map_err(|e| CliError::Csv(e.into()))?;
    Ok(())
}
