//! Exact optimum for small instances.
//!
//! Some optimal assignment is the pointwise maximum of the thresholds of one
//! covering edge per terminal, so branch-and-bound over those choices is
//! exhaustive. Branching picks the uncovered terminal with the fewest edges;
//! the bound adds, per uncovered terminal, the cheapest raise of its own
//! value that any of its edges needs.

use std::fmt;
use std::time::{Duration, Instant};

use crate::costs::{cheapest_edge_cover, derive_costs};
use crate::error::Error;
use crate::instance::{Assignment, Instance, NodeId};
use crate::scalar::{self, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct ExactLimits {
    pub max_terminals: usize,
    pub max_nodes: Option<usize>,
    pub max_expansions: Option<u64>,
    pub time_budget: Option<Duration>,
    /// Ignore `max_terminals` and `max_nodes`.
    pub force: bool,
}

impl Default for ExactLimits {
    fn default() -> Self {
        ExactLimits { max_terminals: 10, max_nodes: None, max_expansions: None, time_budget: None, force: false }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactResult<T> {
    pub value: T,
    pub assignment: Assignment<T>,
    /// Covering edge picked for each terminal, in terminal order.
    pub choice: Vec<(NodeId, usize)>,
    pub expansions: u64,
    /// `false` when a budget ran out before the search finished.
    pub optimal: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum OracleError<T> {
    TooLarge { terminals: usize, nodes: usize },
    /// Carries the best incumbent, flagged non-optimal.
    BudgetExceeded(Box<ExactResult<T>>),
    Infeasible(String),
}

impl<T: Scalar> fmt::Display for OracleError<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooLarge { terminals, nodes } => {
                write!(f, "instance too large for the exact oracle ({terminals} terminals, {nodes} nodes)")
            }
            OracleError::BudgetExceeded(best) => {
                write!(f, "search budget exceeded; best value found {}", best.value.to_literal())
            }
            OracleError::Infeasible(msg) => write!(f, "infeasible: {msg}"),
        }
    }
}

impl<T: Scalar> std::error::Error for OracleError<T> {}

struct Search<'a, T> {
    inst: &'a Instance<T>,
    limits: &'a ExactLimits,
    started: Instant,
    expansions: u64,
    exhausted: bool,
    best_value: T,
    best: Assignment<T>,
    best_choice: Vec<(NodeId, usize)>,
    current: Assignment<T>,
    choice: Vec<(NodeId, usize)>,
}

impl<T: Scalar> Search<'_, T> {
    fn out_of_budget(&self) -> bool {
        self.limits.max_expansions.is_some_and(|m| self.expansions >= m)
            || self.limits.time_budget.is_some_and(|b| self.started.elapsed() >= b)
    }

    fn run(&mut self) {
        if self.exhausted {
            return;
        }
        if self.out_of_budget() {
            self.exhausted = true;
            return;
        }
        self.expansions += 1;
        let covered = self.inst.covered_mask(&self.current);
        let uncovered: Vec<NodeId> =
            self.inst.terminals().iter().copied().filter(|t| !covered[t.0]).collect();
        let value = self.current.total();
        if uncovered.is_empty() {
            if value < self.best_value {
                self.best_value = value;
                self.best = self.current.clone();
                self.best_choice = self.choice.clone();
            }
            return;
        }
        let bound = uncovered.iter().fold(value.clone(), |acc, &u| {
            let raise = self
                .inst
                .incident(u)
                .iter()
                .map(|&i| scalar::shortfall(self.inst.edge(i).threshold_at(u), self.current.get(u)))
                .reduce(|a, b| scalar::min_of(&a, &b))
                .expect("terminal has an edge");
            acc + raise
        });
        if bound >= self.best_value {
            return;
        }
        let u = *uncovered
            .iter()
            .min_by_key(|u| (self.inst.incident(**u).len(), **u))
            .expect("non-empty");
        let mut options: Vec<(T, usize)> = self
            .inst
            .incident(u)
            .iter()
            .map(|&i| {
                let e = self.inst.edge(i);
                let cost = scalar::shortfall(&e.tu, self.current.get(e.u))
                    + scalar::shortfall(&e.tv, self.current.get(e.v));
                (cost, i)
            })
            .collect();
        options.sort_by(|a, b| scalar::cmp(&a.0, &b.0).then(a.1.cmp(&b.1)));
        for (_, i) in options {
            let e = self.inst.edge(i);
            let (old_u, old_v) = (self.current.get(e.u).clone(), self.current.get(e.v).clone());
            self.current.raise_to(e.u, &e.tu);
            self.current.raise_to(e.v, &e.tv);
            self.choice.push((u, i));
            self.run();
            self.choice.pop();
            self.current.set(e.u, old_u);
            self.current.set(e.v, old_v);
            if self.exhausted {
                return;
            }
        }
    }
}

/// Minimum-value feasible assignment, in the instance's scalar arithmetic.
pub fn exact_solve<T: Scalar>(inst: &Instance<T>, limits: &ExactLimits) -> Result<ExactResult<T>, OracleError<T>> {
    let terminals = inst.terminals().len();
    let nodes = inst.node_count();
    if !limits.force && (terminals > limits.max_terminals || limits.max_nodes.is_some_and(|m| nodes > m)) {
        return Err(OracleError::TooLarge { terminals, nodes });
    }
    let costs = derive_costs(inst).map_err(|e| match e {
        Error::IsolatedTerminal(t) => OracleError::Infeasible(format!("terminal {t} has no incident edge")),
        other => OracleError::Infeasible(other.to_string()),
    })?;
    let incumbent = cheapest_edge_cover(inst, &costs);
    let incumbent_choice = inst
        .terminals()
        .iter()
        .map(|&t| (t, costs.cheapest_edge[t.0].expect("terminal has an edge")))
        .collect();
    let mut search = Search {
        inst,
        limits,
        started: Instant::now(),
        expansions: 0,
        exhausted: false,
        best_value: incumbent.total(),
        best: incumbent,
        best_choice: incumbent_choice,
        current: Assignment::zeros(nodes),
        choice: Vec::new(),
    };
    search.run();
    let mut choice = search.best_choice;
    choice.sort();
    let result = ExactResult {
        value: search.best_value,
        assignment: search.best,
        choice,
        expansions: search.expansions,
        optimal: !search.exhausted,
    };
    if result.optimal {
        Ok(result)
    } else {
        Err(OracleError::BudgetExceeded(Box::new(result)))
    }
}

/// A component of an inclusion-minimal activated cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactStar {
    pub root: NodeId,
    /// Terminal leaves in id order.
    pub leaves: Vec<NodeId>,
    pub edges: Vec<usize>,
}

impl ExactStar {
    /// Terminals of the star, including a terminal root.
    pub fn terminals<T: Scalar>(&self, inst: &Instance<T>) -> Vec<NodeId> {
        let mut out = self.leaves.clone();
        if inst.is_terminal(self.root) {
            out.push(self.root);
            out.sort_unstable();
        }
        out
    }
}

/// Splits the cover made of the result's chosen edges into node-disjoint
/// stars after dropping redundant edges.
pub fn exact_star_decomposition<T: Scalar>(inst: &Instance<T>, result: &ExactResult<T>) -> Vec<ExactStar> {
    let mut edges: Vec<usize> = result.choice.iter().map(|&(_, i)| i).collect();
    edges.sort_unstable();
    edges.dedup();
    let count = |edges: &[usize], x: NodeId| edges.iter().filter(|&&i| inst.edge(i).touches(x)).count();
    // Drop edges whose endpoints are all terminals covered elsewhere or non-terminals.
    let mut i = edges.len();
    while i > 0 {
        i -= 1;
        let e = inst.edge(edges[i]);
        let needed = [e.u, e.v].iter().any(|&x| inst.is_terminal(x) && count(&edges, x) == 1);
        if !needed {
            edges.remove(i);
        }
    }
    let n = inst.node_count();
    let mut degree = vec![0usize; n];
    for &i in &edges {
        let e = inst.edge(i);
        degree[e.u.0] += 1;
        degree[e.v.0] += 1;
    }
    let mut stars: Vec<ExactStar> = Vec::new();
    let mut assigned = vec![false; edges.len()];
    for (k, &i) in edges.iter().enumerate() {
        if assigned[k] {
            continue;
        }
        let e = inst.edge(i);
        let root = if degree[e.u.0] > 1 {
            e.u
        } else if degree[e.v.0] > 1 {
            e.v
        } else if !inst.is_terminal(e.u) {
            e.u
        } else if !inst.is_terminal(e.v) {
            e.v
        } else {
            e.u.min(e.v)
        };
        let mut star = ExactStar { root, leaves: Vec::new(), edges: Vec::new() };
        for (j, &other) in edges.iter().enumerate() {
            if !assigned[j] && inst.edge(other).touches(root) {
                assigned[j] = true;
                star.edges.push(other);
                let leaf = inst.edge(other).other(root);
                if inst.is_terminal(leaf) {
                    star.leaves.push(leaf);
                }
            }
        }
        star.leaves.sort_unstable();
        stars.push(star);
    }
    stars.sort_by_key(|s| s.root);
    debug_assert!({
        let mut all: Vec<NodeId> = stars.iter().flat_map(|s| s.terminals(inst)).collect();
        all.sort_unstable();
        all == inst.terminals()
    });
    stars
}
