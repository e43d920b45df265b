//! Per-terminal derived costs `q`, `c`, their sums, the slope and the
//! terminal degree bound.

use std::fmt;


use crate::error::{Error, Result};
use crate::instance::{Assignment, Instance, NodeId};
use crate::scalar::{self, Scalar};

/// Slope of an instance: a finite value or `+inf`.
#[derive(Clone, Debug, PartialEq)]
pub enum Slope<T> {
    Finite(T),
    Infinite,
}

impl<T: Scalar> Slope<T> {
    pub fn finite(&self) -> Option<&T> {
        match self {
            Slope::Finite(t) => Some(t),
            Slope::Infinite => None,
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Slope::Finite(t) => t.as_f64(),
            Slope::Infinite => f64::INFINITY,
        }
    }

    pub fn to_literal(&self) -> String {
        match self {
            Slope::Finite(t) => t.to_literal(),
            Slope::Infinite => "inf".to_string(),
        }
    }

    /// Larger of two slopes.
    pub fn max(self, other: Self) -> Self {
        match (self, other) {
            (Slope::Finite(a), Slope::Finite(b)) => Slope::Finite(scalar::max_of(&a, &b)),
            _ => Slope::Infinite,
        }
    }
}

impl<T: Scalar> fmt::Display for Slope<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

/// `q_u`: cheapest threshold at `u` over its edges; `c_u + q_u`: cheapest
/// edge total at `u`. Both are zero on non-terminals.
#[derive(Clone, Debug)]
pub struct DerivedCosts<T> {
    pub q: Vec<T>,
    pub c: Vec<T>,
    pub q_sum: T,
    pub c_sum: T,
    pub theta: Slope<T>,
    pub delta: usize,
    /// For each terminal, the first canonical edge of minimum total value.
    pub cheapest_edge: Vec<Option<usize>>,
    pub terminals_independent: bool,
}

impl<T: Scalar> DerivedCosts<T> {
    pub fn q(&self, v: NodeId) -> &T {
        &self.q[v.0]
    }

    pub fn c(&self, v: NodeId) -> &T {
        &self.c[v.0]
    }

    /// The assignment `q` (zero off the terminals).
    pub fn q_assignment(&self) -> Assignment<T> {
        Assignment::from_values(self.q.clone())
    }
}

/// Computes `q`, `c`, `Q`, `C`, the slope and `Δ` exactly.
pub fn derive_costs<T: Scalar>(inst: &Instance<T>) -> Result<DerivedCosts<T>> {
    let n = inst.node_count();
    let mut q = vec![T::zero(); n];
    let mut c = vec![T::zero(); n];
    let mut cheapest_edge = vec![None; n];
    let mut theta = Slope::Finite(T::zero());
    for &u in inst.terminals() {
        let incident = inst.incident(u);
        if incident.is_empty() {
            return Err(Error::IsolatedTerminal(inst.name(u).to_string()));
        }
        let mut min_own: Option<T> = None;
        let mut best: Option<(T, usize)> = None;
        for &i in incident {
            let e = inst.edge(i);
            let own = e.threshold_at(u);
            if min_own.as_ref().is_none_or(|m| own < m) {
                min_own = Some(own.clone());
            }
            let total = e.total();
            if best.as_ref().is_none_or(|(b, _)| &total < b) {
                best = Some((total, i));
            }
        }
        let (total, edge) = best.expect("terminal has an incident edge");
        let qu = min_own.expect("terminal has an incident edge");
        let cu = total - qu.clone();
        theta = theta.max(if qu.is_zero() {
            if cu.is_zero() {
                Slope::Finite(T::zero())
            } else {
                Slope::Infinite
            }
        } else {
            Slope::Finite(cu.clone() / qu.clone())
        });
        q[u.0] = qu;
        c[u.0] = cu;
        cheapest_edge[u.0] = Some(edge);
    }
    let q_sum = q.iter().fold(T::zero(), |acc, x| acc + x.clone());
    let c_sum = c.iter().fold(T::zero(), |acc, x| acc + x.clone());
    let delta = inst.nodes().map(|v| inst.terminal_degree(v)).max().unwrap_or(0);
    Ok(DerivedCosts {
        q,
        c,
        q_sum,
        c_sum,
        theta,
        delta,
        cheapest_edge,
        terminals_independent: inst.terminals_independent(),
    })
}

/// The `Q + C` cover: `q` plus, for every terminal, its cheapest edge raised
/// to both thresholds.
pub fn cheapest_edge_cover<T: Scalar>(inst: &Instance<T>, costs: &DerivedCosts<T>) -> Assignment<T> {
    let mut a = costs.q_assignment();
    for &u in inst.terminals() {
        if let Some(i) = costs.cheapest_edge[u.0] {
            let e = inst.edge(i);
            a.raise_to(e.u, &e.tu);
            a.raise_to(e.v, &e.tv);
        }
    }
    a
}
