//! Machine-readable solve and bench reports.
//!
//! Rationals are written as literals, floats rounded to four decimals, and
//! wall time only when asked for, so reports are byte-stable.

use std::collections::BTreeMap;
use std::time::Duration;

use num_traits::Zero;
use serde::Serialize;

use crate::bench::{certify, instance_checks, run, Algorithm, Check, Run, RunDetail, RunOptions};
use crate::costs::derive_costs;
use crate::error::Result;
use crate::generators::{generate, FamilySpec};
use crate::gmc::TraceSummary;
use crate::instance::Instance;
use crate::io::digest;
use crate::oracle::{exact_solve, ExactLimits, ExactResult, OracleError};
use crate::scalar::Scalar;
use crate::Rational;

pub const SCHEMA_VERSION: u32 = 1;

/// Rounds to four decimals for reporting.
pub fn round4(x: f64) -> f64 {
    if x.is_finite() {
        (x * 1e4).round() / 1e4
    } else {
        x
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NodeValue {
    pub node: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnitAudit {
    pub winning_k: usize,
    pub c_size: usize,
    pub a_size: usize,
    pub candidates: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport {
    pub schema_version: u32,
    pub instance_digest: String,
    pub algorithm: Algorithm,
    /// Nodes with a positive value, in id order.
    pub assignment: Vec<NodeValue>,
    pub value: String,
    pub theta: String,
    pub delta: usize,
    pub claimed_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claimed_bound_exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub picks: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit_audit: Option<UnitAudit>,
    /// Failed certification checks; empty when certified or not checked.
    pub violations: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl SolveReport {
    pub fn new(
        inst: &Instance<Rational>,
        run: &Run,
        exact: Option<&ExactResult<Rational>>,
        violations: Vec<Check>,
        wall_time: Option<Duration>,
    ) -> Result<Self> {
        let costs = derive_costs(inst)?;
        let assignment = inst
            .nodes()
            .filter(|&v| !run.assignment.get(v).is_zero())
            .map(|v| NodeValue { node: inst.name(v).to_string(), value: run.assignment.get(v).to_literal() })
            .collect();
        let (trace, picks, unit_audit) = match &run.detail {
            RunDetail::General(sol) => (Some(sol.trace.summary()), None, None),
            RunDetail::LocallyUniform(_, sol) => (
                None,
                Some(sol.picks.iter().map(|p| inst.name(p.facility).to_string()).collect()),
                None,
            ),
            RunDetail::Unit(sol) => (
                None,
                Some(sol.cover.chosen.iter().map(|&v| inst.name(v).to_string()).collect()),
                sol.audit.as_ref().map(|a| UnitAudit {
                    winning_k: a.winning_k,
                    c_size: a.c_size,
                    a_size: a.a_size,
                    candidates: a.candidates.clone(),
                }),
            ),
        };
        let claimed_bound_exact = match &run.claimed_bound {
            crate::bench::Bound::Exact(b) => Some(b.to_literal()),
            crate::bench::Bound::Real(_) => None,
        };
        Ok(SolveReport {
            schema_version: SCHEMA_VERSION,
            instance_digest: digest(inst),
            algorithm: run.algorithm,
            assignment,
            value: run.value.to_literal(),
            theta: costs.theta.to_literal(),
            delta: costs.delta,
            claimed_bound: round4(run.claimed_bound.as_f64()),
            claimed_bound_exact,
            exact_value: exact.map(|e| e.value.to_literal()),
            empirical_ratio: exact
                .filter(|e| !e.value.is_zero())
                .map(|e| round4((run.value.clone() / e.value.clone()).as_f64())),
            trace,
            picks,
            unit_audit,
            violations,
            wall_time_ms: wall_time.map(|d| round4(d.as_secs_f64() * 1e3)),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchInstance {
    pub seed: u64,
    pub instance_digest: String,
    pub nodes: usize,
    pub terminals: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_value: Option<String>,
    /// Why the instance was not certified, if it was not.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    pub runs: Vec<SolveReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlgorithmSummary {
    pub algorithm: Algorithm,
    pub runs: usize,
    pub max_ratio: f64,
    pub mean_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algorithm: Option<Algorithm>,
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub schema_version: u32,
    pub family: FamilySpec,
    pub seeds: (u64, u64),
    pub algorithms: Vec<Algorithm>,
    pub instances: Vec<BenchInstance>,
    pub summary: Vec<AlgorithmSummary>,
    /// How many times each check was evaluated.
    pub checks_evaluated: BTreeMap<String, usize>,
    pub violations: Vec<Violation>,
}

impl BenchReport {
    pub fn skipped(&self) -> usize {
        self.instances.iter().filter(|i| i.skipped.is_some()).count()
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}

/// Generates every seed in `seeds` (half-open) from `template`, runs each
/// algorithm and the oracle, and certifies the outputs.
pub fn bench(
    template: &FamilySpec,
    seeds: std::ops::Range<u64>,
    algorithms: &[Algorithm],
    options: &RunOptions,
    limits: &ExactLimits,
) -> Result<BenchReport> {
    let mut instances = Vec::new();
    let mut violations = Vec::new();
    let mut evaluated: BTreeMap<String, usize> = BTreeMap::new();
    let mut ratios: Vec<Vec<f64>> = vec![Vec::new(); algorithms.len()];
    for seed in seeds.clone() {
        let spec = FamilySpec { seed, ..template.clone() };
        let generated = generate(&spec)?;
        let inst = generated.instance;
        let mut options = options.clone();
        if let Some(order) = generated.order {
            options.tie_break = crate::uniform::TieBreak::Priority(order);
        }
        let mut record = BenchInstance {
            seed,
            instance_digest: digest(&inst),
            nodes: inst.node_count(),
            terminals: inst.terminals().len(),
            exact_value: None,
            skipped: None,
            runs: Vec::new(),
        };
        let opt = match exact_solve(&inst, limits) {
            Ok(opt) => opt,
            Err(err @ (OracleError::TooLarge { .. } | OracleError::BudgetExceeded(_))) => {
                record.skipped = Some(err.to_string());
                instances.push(record);
                continue;
            }
            Err(OracleError::Infeasible(msg)) => {
                violations.push(Violation { seed, algorithm: None, check: "generated-feasible".into(), detail: msg });
                instances.push(record);
                continue;
            }
        };
        record.exact_value = Some(opt.value.to_literal());
        let costs = derive_costs(&inst)?;
        for c in instance_checks(&costs, &opt) {
            *evaluated.entry(c.name.to_string()).or_default() += 1;
            if !c.passed {
                violations.push(Violation { seed, algorithm: None, check: c.name.into(), detail: c.detail });
            }
        }
        for (i, &algorithm) in algorithms.iter().enumerate() {
            let outcome = match run(&inst, algorithm, &options) {
                Ok(outcome) => outcome,
                Err(err) => {
                    violations.push(Violation {
                        seed,
                        algorithm: Some(algorithm),
                        check: "run".into(),
                        detail: err.to_string(),
                    });
                    continue;
                }
            };
            let checks = certify(&inst, &outcome, &opt)?;
            let mut failed = Vec::new();
            for c in checks {
                *evaluated.entry(c.name.to_string()).or_default() += 1;
                if !c.passed {
                    violations.push(Violation {
                        seed,
                        algorithm: Some(algorithm),
                        check: c.name.into(),
                        detail: c.detail.clone(),
                    });
                    failed.push(c);
                }
            }
            if !opt.value.is_zero() {
                ratios[i].push((outcome.value.clone() / opt.value.clone()).as_f64());
            }
            record.runs.push(SolveReport::new(&inst, &outcome, Some(&opt), failed, None)?);
        }
        instances.push(record);
    }
    let summary = algorithms
        .iter()
        .zip(&ratios)
        .map(|(&algorithm, r)| AlgorithmSummary {
            algorithm,
            runs: r.len(),
            max_ratio: round4(r.iter().copied().fold(1.0, f64::max)),
            mean_ratio: round4(if r.is_empty() { 1.0 } else { r.iter().sum::<f64>() / r.len() as f64 }),
        })
        .collect();
    Ok(BenchReport {
        schema_version: SCHEMA_VERSION,
        family: FamilySpec { seed: seeds.start, ..template.clone() },
        seeds: (seeds.start, seeds.end),
        algorithms: algorithms.to_vec(),
        instances,
        summary,
        checks_evaluated: evaluated,
        violations,
    })
}
