//! Running a solver by name and certifying its output against the exact
//! optimum.
//!
//! A certification is a list of named [`Check`]s; only checks whose
//! preconditions hold are emitted, so callers can count how often each
//! inequality was actually exercised.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;

use crate::bounds;
use crate::costs::{derive_costs, DerivedCosts, Slope};
use crate::error::{Error, Result};
use crate::general::{solve_general, GeneralSolution};
use crate::gmc::theorem2_bound;
use crate::instance::{Assignment, Instance, NodeId};
use crate::oracle::{exact_star_decomposition, ExactResult};
use crate::scalar::Scalar;
use crate::uniform::{solve_locally_uniform, star_payment_bound, validate_locally_uniform, TieBreak, UniformBipartiteInstance, UniformSolution};
use crate::unit::{algorithm1, algorithm2, reduce_unit, ExactSubsolver, GreedySubsolver, KSetCoverSolver, UnitSolution};
use crate::Rational;

/// Slack allowed when comparing against an irrational bound.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    General,
    LocallyUniform,
    UnitA1,
    UnitA2,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::General, Algorithm::LocallyUniform, Algorithm::UnitA1, Algorithm::UnitA2];

    pub fn id(self) -> &'static str {
        match self {
            Algorithm::General => "general",
            Algorithm::LocallyUniform => "locally-uniform",
            Algorithm::UnitA1 => "unit-a1",
            Algorithm::UnitA2 => "unit-a2",
        }
    }

    /// Unit thresholds first, then locally uniform, then general.
    pub fn auto<T: Scalar>(inst: &Instance<T>) -> Algorithm {
        if inst.has_unit_thresholds() && !inst.edges().is_empty() {
            Algorithm::UnitA2
        } else if validate_locally_uniform(inst).is_ok() {
            Algorithm::LocallyUniform
        } else {
            Algorithm::General
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.id() == s)
            .ok_or_else(|| Error::Parse(format!("unknown algorithm {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subsolver {
    #[default]
    Exact,
    Greedy,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub tie_break: TieBreak,
    pub subsolver: Subsolver,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { tie_break: TieBreak::LowestId, subsolver: Subsolver::Exact }
    }
}

/// A guarantee, exact when the constant is rational.
#[derive(Clone, Debug, PartialEq)]
pub enum Bound {
    Exact(Rational),
    Real(f64),
}

impl Bound {
    pub fn as_f64(&self) -> f64 {
        match self {
            Bound::Exact(b) => b.as_f64(),
            Bound::Real(b) => *b,
        }
    }

    /// `value <= bound · opt`, exactly when possible.
    pub fn holds(&self, value: &Rational, opt: &Rational) -> bool {
        match self {
            Bound::Exact(b) => value <= &(b.clone() * opt.clone()),
            Bound::Real(b) => ratio_at_most(value, opt, *b),
        }
    }
}

fn ratio_at_most(value: &Rational, opt: &Rational, bound: f64) -> bool {
    if opt.is_zero() {
        return value.is_zero();
    }
    (value.clone() / opt.clone()).as_f64() <= bound + FLOAT_TOLERANCE
}

#[derive(Clone, Debug)]
pub enum RunDetail {
    General(Box<GeneralSolution<Rational>>),
    LocallyUniform(Box<UniformBipartiteInstance<Rational>>, Box<UniformSolution<Rational>>),
    Unit(Box<UnitSolution>),
}

/// One solver run.
#[derive(Clone, Debug)]
pub struct Run {
    pub algorithm: Algorithm,
    pub assignment: Assignment<Rational>,
    pub value: Rational,
    pub claimed_bound: Bound,
    pub detail: RunDetail,
}

pub fn run(inst: &Instance<Rational>, algorithm: Algorithm, options: &RunOptions) -> Result<Run> {
    let (assignment, value, claimed_bound, detail) = match algorithm {
        Algorithm::General => {
            let sol = solve_general(inst)?;
            (sol.assignment.clone(), sol.value.clone(), Bound::Real(sol.claimed_bound), RunDetail::General(Box::new(sol)))
        }
        Algorithm::LocallyUniform => {
            let ubi = validate_locally_uniform(inst)?;
            let sol = solve_locally_uniform(&ubi, &options.tie_break)?;
            (
                sol.assignment.clone(),
                sol.value.clone(),
                Bound::Exact(sol.claimed_bound.clone()),
                RunDetail::LocallyUniform(Box::new(ubi), Box::new(sol)),
            )
        }
        Algorithm::UnitA1 | Algorithm::UnitA2 => {
            let res = reduce_unit(inst)?;
            let sol = if algorithm == Algorithm::UnitA1 {
                algorithm1(&res)?
            } else {
                let subsolver: &dyn KSetCoverSolver = match options.subsolver {
                    Subsolver::Exact => &ExactSubsolver,
                    Subsolver::Greedy => &GreedySubsolver,
                };
                algorithm2(&res, subsolver)?
            };
            (
                sol.assignment.clone(),
                Rational::of_usize(sol.value),
                Bound::Exact(sol.claimed_bound.clone()),
                RunDetail::Unit(Box::new(sol)),
            )
        }
    };
    Ok(Run { algorithm, assignment, value, claimed_bound, detail })
}

/// Outcome of one certified inequality.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(out: &mut Vec<Check>, name: &'static str, passed: bool, detail: impl FnOnce() -> String) {
    out.push(Check { name, passed, detail: if passed { String::new() } else { detail() } });
}

/// Checks on the instance and its optimum alone: `opt >= Q` and
/// `Q <= opt <= Q + C <= (θ + 1) opt`.
pub fn instance_checks(costs: &DerivedCosts<Rational>, opt: &ExactResult<Rational>) -> Vec<Check> {
    let mut out = Vec::new();
    let q = &costs.q_sum;
    let qc = costs.q_sum.clone() + costs.c_sum.clone();
    check(&mut out, "oracle-at-least-q", &opt.value >= q, || format!("opt {} < Q {}", opt.value, q));
    check(&mut out, "oracle-at-most-q-plus-c", opt.value <= qc, || format!("opt {} > Q+C {}", opt.value, qc));
    if let Slope::Finite(theta) = &costs.theta {
        let cap = (theta.clone() + Rational::of_usize(1)) * opt.value.clone();
        check(&mut out, "sandwich", qc <= cap, || format!("Q+C {qc} > (θ+1)·opt {cap}"));
    }
    out
}

/// Certifies a run against the exact optimum.
pub fn certify(inst: &Instance<Rational>, run: &Run, opt: &ExactResult<Rational>) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let costs = derive_costs(inst)?;
    let (ok, uncovered) = inst.covers(&run.assignment);
    check(&mut out, "feasible", ok, || format!("uncovered terminals {uncovered:?}"));
    check(&mut out, "value-matches-assignment", run.value == run.assignment.total(), || {
        format!("value {} vs assignment total {}", run.value, run.assignment.total())
    });
    check(&mut out, "oracle-at-most-solver", opt.value <= run.value, || {
        format!("oracle {} above solver {}", opt.value, run.value)
    });
    check(&mut out, "ratio", run.claimed_bound.holds(&run.value, &opt.value), || {
        format!("value {} opt {} bound {:.6}", run.value, opt.value, run.claimed_bound.as_f64())
    });
    match &run.detail {
        RunDetail::General(sol) => general_checks(&mut out, &costs, sol, run, opt),
        RunDetail::LocallyUniform(ubi, sol) => uniform_checks(&mut out, inst, ubi, sol, opt),
        RunDetail::Unit(sol) => {
            let res = reduce_unit(inst)?;
            let exact = res.base_value + ExactSubsolver.solve(&res.problem, res.problem.max_set_size())?.size();
            check(&mut out, "unit-optimum-structure", Rational::of_usize(exact) == opt.value, || {
                format!("|R| + exact cover {exact} differs from oracle {}", opt.value)
            });
            if let Some(audit) = &sol.audit {
                let consistent = audit.c_size + audit.a_size + res.base_value == sol.value;
                check(&mut out, "unit-audit", consistent, || format!("audit {audit:?} vs value {}", sol.value));
            }
        }
    }
    Ok(out)
}

fn general_checks(
    out: &mut Vec<Check>,
    costs: &DerivedCosts<Rational>,
    sol: &GeneralSolution<Rational>,
    run: &Run,
    opt: &ExactResult<Rational>,
) {
    let value = &run.value;
    let optv = &opt.value;
    if let Slope::Finite(theta) = &costs.theta {
        let t = theta.as_f64();
        let b = if t > 0.0 { 1.0 + bounds::omega(t).expect("positive") } else { 1.0 };
        check(out, "ratio-omega", ratio_at_most(value, optv, b), || format!("ratio above 1+ω(θ) = {b:.6}"));
    }
    let ln_bound = 1.0 + ((costs.delta + 1) as f64).ln();
    check(out, "ratio-ln-delta", ratio_at_most(value, optv, ln_bound), || {
        format!("ratio above 1+ln(Δ+1) = {ln_bound:.6}")
    });
    if costs.terminals_independent && costs.delta >= 1 {
        let b = 1.0 + (costs.delta as f64).ln();
        check(out, "ratio-ln-delta-independent", ratio_at_most(value, optv, b), || {
            format!("ratio above 1+ln Δ = {b:.6}")
        });
    }
    let trace = &sol.trace;
    check(out, "trace-decreasing", trace.strictly_decreasing(), || "potential not strictly decreasing".into());
    check(out, "trace-density", trace.densities_at_most_one(), || "accepted step with density above 1".into());
    let nu_star = costs.q_sum.clone();
    let tau_star = optv.clone() - nu_star.clone();
    let nu0 = trace.initial_potential.clone();
    if tau_star > Rational::of_usize(0) {
        let bound = theorem2_bound(&nu0, &nu_star, &tau_star).expect("τ* > 0");
        check(out, "trace-bound", ratio_at_most(value, optv, bound), || format!("ratio above {bound:.6}"));
        if nu0 > nu_star.clone() + tau_star.clone() {
            let slack = trace.darboux_slack(&nu_star, &tau_star).expect("preconditions checked");
            check(out, "darboux", slack >= -FLOAT_TOLERANCE, || format!("slack {slack:.3e}"));
        }
        if let Slope::Finite(theta) = &costs.theta {
            let one = Rational::of_usize(1);
            let lhs = optv.clone() * theta.clone();
            let rhs = tau_star.clone() * (theta.clone() + one.clone());
            check(out, "payment-lower", lhs >= rhs, || format!("opt·θ {lhs} < τ*(θ+1) {rhs}"));
            let cap = (theta.clone() + one.clone()) * (optv.clone() - tau_star.clone());
            check(out, "potential-upper", nu0 <= cap, || format!("ν0 {nu0} > (θ+1)(opt−τ*) {cap}"));
            let spread = nu0.clone() - nu_star.clone();
            let delta_cap = tau_star.clone() * Rational::of_usize(costs.delta + 1);
            check(out, "potential-spread", spread <= delta_cap, || format!("ν0−ν* {spread} > (Δ+1)τ* {delta_cap}"));
            if costs.terminals_independent {
                let delta_cap = tau_star.clone() * Rational::of_usize(costs.delta);
                check(out, "potential-spread-independent", spread <= delta_cap, || {
                    format!("ν0−ν* {spread} > Δτ* {delta_cap}")
                });
            }
        }
    }
}

fn uniform_checks(
    out: &mut Vec<Check>,
    inst: &Instance<Rational>,
    ubi: &UniformBipartiteInstance<Rational>,
    sol: &UniformSolution<Rational>,
    opt: &ExactResult<Rational>,
) {
    for star in exact_star_decomposition(inst, opt) {
        let Some(facility) = ubi.facility(star.root) else {
            check(out, "star-accounting", false, || format!("optimal star rooted at client {}", star.root));
            continue;
        };
        let paid = star.leaves.iter().fold(Rational::of_usize(0), |acc, u| acc + sol.client_price[u.0].clone());
        let cap = star_payment_bound(&facility.weight, &facility.service, star.leaves.len());
        check(out, "star-accounting", paid <= cap, || {
            format!("star at {} paid {paid} above wH_k + kt = {cap}", star.root)
        });
    }
}

/// Facilities picked by the classical set-cover greedy: largest uncovered
/// count first, lowest id on ties.
pub fn classical_greedy_sequence(ubi: &UniformBipartiteInstance<Rational>) -> Vec<NodeId> {
    let mut covered = vec![false; ubi.node_count];
    let mut out = Vec::new();
    loop {
        let best = ubi
            .facilities
            .iter()
            .map(|f| (f.clients.iter().filter(|u| !covered[u.0]).count(), f))
            .filter(|(k, _)| *k > 0)
            .max_by_key(|(k, f)| (*k, std::cmp::Reverse(f.node)));
        let Some((_, f)) = best else { break };
        for u in &f.clients {
            covered[u.0] = true;
        }
        out.push(f.node);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, tight73, Family, FamilySpec};
    use crate::oracle::{exact_solve, ExactLimits};

    #[test]
    fn auto_dispatch() {
        let one = Rational::of_usize(1);
        let unit = Instance::new(&["a", "v"], &["a"], vec![("a", "v", one.clone(), one.clone())]).unwrap();
        assert_eq!(Algorithm::auto(&unit), Algorithm::UnitA2);
        let single = Instance::new(&["u", "v"], &["u"], vec![("u", "v", Rational::of_usize(2), Rational::of_usize(3))]).unwrap();
        assert_eq!(Algorithm::auto(&single), Algorithm::LocallyUniform);
        let general = Instance::new(&["u", "v"], &["u", "v"], vec![("u", "v", Rational::of_usize(2), Rational::of_usize(3))]).unwrap();
        assert_eq!(Algorithm::auto(&general), Algorithm::General);
    }

    #[test]
    fn general_runs_certify() {
        for seed in 0..10 {
            let inst = generate(&FamilySpec::new(Family::GeneralRandom, seed)).unwrap().instance;
            let opt = exact_solve(&inst, &ExactLimits::default()).unwrap();
            let run = run(&inst, Algorithm::General, &RunOptions::default()).unwrap();
            let checks = certify(&inst, &run, &opt).unwrap();
            let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
            assert!(failed.is_empty(), "seed {seed}: {failed:?}");
        }
    }

    #[test]
    fn tight_instance_pays_73() {
        let (inst, order) = tight73();
        let options = RunOptions { tie_break: TieBreak::Priority(order), ..RunOptions::default() };
        let run = run(&inst, Algorithm::LocallyUniform, &options).unwrap();
        assert_eq!(run.value, Rational::of_usize(73));
        assert_eq!(run.claimed_bound, Bound::Exact(Rational::from_ratio(73, 60)));
    }
}
