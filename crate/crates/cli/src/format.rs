//! Instance JSON.
//!
//! ```json
//! {"n": 2, "m": 3, "agents": [
//!   {"kind": "additive", "values": [1.0, 2.0, 0.5]},
//!   {"kind": "budget_additive", "values": [1.0, 1.0, 1.0], "cap": 2.0}
//! ]}
//! ```
//!
//! Other kinds: `{"kind": "xos", "clauses": [[..], ..]}`,
//! `{"kind": "coverage", "universe": u, "goods": [[..], ..]}` and
//! `{"kind": "xos_hard", "n": k, "delta": d, "seed": s, "identical": b}`.
//! A non-identical `xos_hard` entry is agent `i` of its family, where `i`
//! is its position in `agents` unless an explicit `"agent"` is given.

use std::path::Path;

use pmeanfair_core::valuation::ValuationOracle;
use pmeanfair_core::{Instance, XosHardValuation};
use serde::{Deserialize, Serialize};

use crate::error::{read, CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    pub m: usize,
    pub agents: Vec<AgentSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AgentSpec {
    Additive {
        values: Vec<f64>,
    },
    Xos {
        clauses: Vec<Vec<f64>>,
    },
    BudgetAdditive {
        values: Vec<f64>,
        cap: f64,
    },
    Coverage {
        universe: usize,
        goods: Vec<Vec<usize>>,
    },
    XosHard {
        n: usize,
        delta: f64,
        seed: u64,
        identical: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        agent: Option<usize>,
    },
}

fn expect_len(what: &str, i: usize, got: usize, m: usize) -> Result<()> {
    if got == m {
        Ok(())
    } else {
        Err(CliError::Malformed(format!("agent {i}: {what} has {got} entries, expected m = {m}")))
    }
}

impl AgentSpec {
    fn to_oracle(&self, i: usize, m: usize) -> Result<ValuationOracle> {
        let oracle = match self {
            AgentSpec::Additive { values } => {
                expect_len("values", i, values.len(), m)?;
                ValuationOracle::additive(values.clone())?
            }
            AgentSpec::Xos { clauses } => ValuationOracle::xos(m, clauses.clone())?,
            AgentSpec::BudgetAdditive { values, cap } => {
                expect_len("values", i, values.len(), m)?;
                ValuationOracle::budget_additive(values.clone(), *cap)?
            }
            AgentSpec::Coverage { universe, goods } => {
                expect_len("goods", i, goods.len(), m)?;
                ValuationOracle::coverage(*universe, goods.clone())?
            }
            AgentSpec::XosHard {
                n,
                delta,
                seed,
                identical,
                agent,
            } => {
                if *n * *n != m {
                    return Err(CliError::Malformed(format!(
                        "agent {i}: xos_hard with n = {n} needs m = {}, file has {m}",
                        n * n
                    )));
                }
                let who = match (identical, agent) {
                    (true, None) => None,
                    (true, Some(_)) => {
                        return Err(CliError::Malformed(format!("agent {i}: identical xos_hard takes no agent")))
                    }
                    (false, a) => Some(a.unwrap_or(i)),
                };
                ValuationOracle::xos_hard(*n, *delta, *seed, who)?
            }
        };
        Ok(oracle)
    }

    fn from_oracle(i: usize, oracle: &ValuationOracle) -> Self {
        match oracle {
            ValuationOracle::Additive { values } => AgentSpec::Additive { values: values.clone() },
            ValuationOracle::Xos { clauses, .. } => AgentSpec::Xos { clauses: clauses.clone() },
            ValuationOracle::BudgetAdditive { values, cap } => AgentSpec::BudgetAdditive {
                values: values.clone(),
                cap: *cap,
            },
            ValuationOracle::Coverage(c) => AgentSpec::Coverage {
                universe: c.universe(),
                goods: c.goods().to_vec(),
            },
            ValuationOracle::XosHard(h) => xos_hard_spec(i, h),
        }
    }
}

fn xos_hard_spec(i: usize, h: &XosHardValuation) -> AgentSpec {
    AgentSpec::XosHard {
        n: h.n(),
        delta: h.delta(),
        seed: h.seed(),
        identical: h.is_identical(),
        agent: h.agent().filter(|&a| a != i),
    }
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read(path)?)
    }

    pub fn to_instance(&self) -> Result<Instance> {
        if self.agents.len() != self.n {
            return Err(CliError::Malformed(format!(
                "n = {} but {} agents listed",
                self.n,
                self.agents.len()
            )));
        }
        let oracles = self
            .agents
            .iter()
            .enumerate()
            .map(|(i, a)| a.to_oracle(i, self.m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Instance::new(self.m, oracles)?)
    }

    pub fn from_instance(instance: &Instance) -> Self {
        InstanceFile {
            n: instance.n(),
            m: instance.m(),
            agents: instance
                .oracles()
                .iter()
                .enumerate()
                .map(|(i, o)| AgentSpec::from_oracle(i, o))
                .collect(),
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance files always serialize");
        s.push('\n');
        s
    }
}

pub fn load_instance(path: &Path) -> Result<Instance> {
    InstanceFile::load(path)?.to_instance()
}

#[cfg(test)]
mod tests {
    use super::*;
    use pmeanfair_core::generators::{gen_random, gen_xos_hard, RandomKind};

    #[test]
    fn parses_every_kind() {
        let text = r#"{"n": 4, "m": 2, "agents": [
            {"kind": "additive", "values": [1, 2.5]},
            {"kind": "xos", "clauses": [[1, 0], [0, 1]]},
            {"kind": "budget_additive", "values": [3, 3], "cap": 4},
            {"kind": "coverage", "universe": 3, "goods": [[0, 1], [1, 2]]}
        ]}"#;
        let inst = InstanceFile::parse(text).unwrap().to_instance().unwrap();
        assert_eq!((inst.n(), inst.m()), (4, 2));
        let all = inst.all_goods();
        use pmeanfair_core::Valuation;
        let values: Vec<f64> = inst.oracles().iter().map(|o| o.value(&all)).collect();
        assert_eq!(values, [3.5, 1.0, 4.0, 3.0]);
    }

    #[test]
    fn rejects_malformed_files() {
        let bad = [
            r#"{"n": 1, "m": 1, "agents": [{"kind": "additive", "values": [1]}], "extra": 0}"#,
            r#"{"n": 1, "m": 1, "agents": [{"kind": "additive", "values": [1], "cap": 2}]}"#,
            r#"{"n": 2, "m": 1, "agents": [{"kind": "additive", "values": [1]}]}"#,
            r#"{"n": 1, "m": 2, "agents": [{"kind": "additive", "values": [1]}]}"#,
            r#"{"n": 1, "m": 1, "agents": [{"kind": "additive", "values": [-1]}]}"#,
            r#"{"n": 1, "m": 1, "agents": [{"kind": "submodular", "values": [1]}]}"#,
            r#"{"n": 1, "m": 4, "agents": [{"kind": "xos_hard", "n": 3, "delta": 0.1, "seed": 0, "identical": true}]}"#,
            r#"{"n": 1, "m": 1, "agents": [{"kind": "coverage", "universe": 2, "goods": [[5]]}]}"#,
        ];
        for text in bad {
            let err = InstanceFile::parse(text).and_then(|f| f.to_instance()).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{text}");
        }
    }

    #[test]
    fn round_trips() {
        let kinds = [
            RandomKind::Additive,
            RandomKind::Xos { clauses: 2 },
            RandomKind::BudgetAdditive { cap_fraction: 0.4 },
            RandomKind::Coverage { universe: 6, density: 0.5 },
        ];
        for kind in kinds {
            let inst = gen_random(kind, 3, 5, 1).unwrap();
            let text = InstanceFile::from_instance(&inst).to_json();
            let back = InstanceFile::parse(&text).unwrap().to_instance().unwrap();
            assert_eq!(back, inst);
            assert_eq!(InstanceFile::from_instance(&back).to_json(), text);
        }
        for identical in [false, true] {
            let inst = gen_xos_hard(3, 0.1, 4, identical).unwrap();
            let file = InstanceFile::from_instance(&inst);
            let text = file.to_json();
            assert!(!text.contains("\"agent\""));
            assert_eq!(InstanceFile::parse(&text).unwrap().to_instance().unwrap(), inst);
        }
    }

    #[test]
    fn explicit_hard_agent() {
        let text = r#"{"n": 1, "m": 4, "agents": [{"kind": "xos_hard", "n": 2, "delta": 0.1, "seed": 3, "identical": false, "agent": 1}]}"#;
        let file = InstanceFile::parse(text).unwrap();
        let inst = file.to_instance().unwrap();
        let ValuationOracle::XosHard(h) = inst.oracle(0) else { panic!() };
        assert_eq!(h.agent(), Some(1));
        assert_eq!(InstanceFile::from_instance(&inst), file);
    }
}
