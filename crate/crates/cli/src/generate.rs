use pmeanfair_core::generators::{gen_partition_reduction, gen_random, gen_xos_hard, RandomKind};
use pmeanfair_core::Instance;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// One instance family with fixed parameters; the seed is supplied
/// separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum Family {
    Random {
        kind: String,
        n: usize,
        m: usize,
        #[serde(default)]
        clauses: Option<usize>,
        #[serde(default)]
        cap_fraction: Option<f64>,
        #[serde(default)]
        universe: Option<usize>,
        #[serde(default)]
        density: Option<f64>,
    },
    XosHard {
        n: usize,
        #[serde(default = "default_delta")]
        delta: f64,
        #[serde(default)]
        identical: bool,
    },
    Partition {
        s: Vec<u64>,
    },
}

pub fn default_delta() -> f64 {
    0.1
}

pub fn random_kind(
    kind: &str,
    clauses: Option<usize>,
    cap_fraction: Option<f64>,
    universe: Option<usize>,
    density: Option<f64>,
) -> Result<RandomKind> {
    let unused = |name: &str, present: bool| {
        if present {
            Err(CliError::Malformed(format!("{name} does not apply to kind {kind}")))
        } else {
            Ok(())
        }
    };
    Ok(match kind {
        "additive" => {
            unused("clauses", clauses.is_some())?;
            unused("cap_fraction", cap_fraction.is_some())?;
            unused("universe/density", universe.is_some() || density.is_some())?;
            RandomKind::Additive
        }
        "xos" => {
            unused("cap_fraction", cap_fraction.is_some())?;
            unused("universe/density", universe.is_some() || density.is_some())?;
            RandomKind::Xos {
                clauses: clauses.unwrap_or(3),
            }
        }
        "budget_additive" => {
            unused("clauses", clauses.is_some())?;
            unused("universe/density", universe.is_some() || density.is_some())?;
            RandomKind::BudgetAdditive {
                cap_fraction: cap_fraction.unwrap_or(0.5),
            }
        }
        "coverage" => {
            unused("clauses", clauses.is_some())?;
            unused("cap_fraction", cap_fraction.is_some())?;
            RandomKind::Coverage {
                universe: universe.unwrap_or(10),
                density: density.unwrap_or(0.3),
            }
        }
        other => {
            return Err(CliError::Malformed(format!(
                "unknown random kind {other:?} (additive, xos, budget_additive, coverage)"
            )))
        }
    })
}

impl Family {
    /// Label used in benchmark output, e.g. `random:xos` or `partition`.
    pub fn label(&self) -> String {
        match self {
            Family::Random { kind, .. } => format!("random:{kind}"),
            Family::XosHard { identical: true, .. } => "xos_hard:identical".to_string(),
            Family::XosHard { .. } => "xos_hard".to_string(),
            Family::Partition { .. } => "partition".to_string(),
        }
    }

    /// Seed is ignored by the partition family.
    pub fn generate(&self, seed: u64) -> Result<Instance> {
        Ok(match self {
            Family::Random {
                kind,
                n,
                m,
                clauses,
                cap_fraction,
                universe,
                density,
            } => {
                let kind = random_kind(kind, *clauses, *cap_fraction, *universe, *density)?;
                gen_random(kind, *n, *m, seed)?
            }
            Family::XosHard { n, delta, identical } => gen_xos_hard(*n, *delta, seed, *identical)?,
            Family::Partition { s } => gen_partition_reduction(s)?.instance,
        })
    }
}
