//! Average-price greedy for bipartite instances with locally uniform
//! thresholds.
//!
//! Every facility `v` (non-terminal) has a weight `w_v`, its side of every
//! incident edge, and a service threshold `t^v`, the client side of every
//! incident edge. Serving `k` clients from `v` costs `w_v + k t^v`, so the
//! greedy repeatedly opens the facility with the smallest `w_v / k_v + t^v`
//! over its `k_v` uncovered clients.

use std::cmp::Ordering;

use crate::bounds;
use crate::costs::Slope;
use crate::error::{Error, Result};
use crate::instance::{Assignment, Instance, NodeId};
use crate::scalar::{self, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Facility<T> {
    pub node: NodeId,
    /// `w_v`.
    pub weight: T,
    /// `t^v`.
    pub service: T,
    /// Adjacent clients in id order.
    pub clients: Vec<NodeId>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniformBipartiteInstance<T> {
    pub node_count: usize,
    pub clients: Vec<NodeId>,
    /// Facilities with at least one client, in id order.
    pub facilities: Vec<Facility<T>>,
    /// `max w_v / t^v` over facilities.
    pub theta: Slope<T>,
    /// Largest facility degree.
    pub delta: usize,
}

impl<T: Scalar> UniformBipartiteInstance<T> {
    pub fn facility(&self, v: NodeId) -> Option<&Facility<T>> {
        self.facilities.iter().find(|f| f.node == v)
    }

    /// `1 + ω̄(θ)` truncated at `Δ`.
    pub fn bound(&self) -> T {
        bounds::locally_uniform_bound(&self.theta, self.delta)
    }
}

/// Checks that terminals and non-terminals are both independent, the graph
/// is simple and each facility's edges share one `(t^v, w_v)` pair.
pub fn validate_locally_uniform<T: Scalar>(inst: &Instance<T>) -> Result<UniformBipartiteInstance<T>> {
    for e in inst.edges() {
        if inst.is_terminal(e.u) == inst.is_terminal(e.v) {
            return Err(Error::NotBipartite);
        }
    }
    let mut facilities = Vec::new();
    let mut theta = Slope::Finite(T::zero());
    let mut delta = 0;
    for v in inst.nodes().filter(|&v| !inst.is_terminal(v)) {
        let incident = inst.incident(v);
        let Some(&first) = incident.first() else {
            continue;
        };
        let e = inst.edge(first);
        let weight = e.threshold_at(v).clone();
        let service = e.threshold_at(e.other(v)).clone();
        let mut clients = Vec::with_capacity(incident.len());
        for &i in incident {
            let e = inst.edge(i);
            let u = e.other(v);
            if e.threshold_at(v) != &weight || e.threshold_at(u) != &service || clients.contains(&u) {
                return Err(Error::NonUniformFacility(inst.name(v).to_string()));
            }
            clients.push(u);
        }
        clients.sort_unstable();
        theta = theta.max(if service.is_zero() {
            if weight.is_zero() {
                Slope::Finite(T::zero())
            } else {
                Slope::Infinite
            }
        } else {
            Slope::Finite(weight.clone() / service.clone())
        });
        delta = delta.max(clients.len());
        facilities.push(Facility { node: v, weight, service, clients });
    }
    Ok(UniformBipartiteInstance {
        node_count: inst.node_count(),
        clients: inst.terminals().to_vec(),
        facilities,
        theta,
        delta,
    })
}

/// How equal average prices are resolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TieBreak {
    LowestId,
    /// Earlier facilities win; unlisted ones rank after all listed ones, by id.
    Priority(Vec<NodeId>),
}

impl TieBreak {
    fn rank(&self, v: NodeId) -> (usize, NodeId) {
        match self {
            TieBreak::LowestId => (0, v),
            TieBreak::Priority(order) => (order.iter().position(|&x| x == v).unwrap_or(order.len()), v),
        }
    }
}

/// One greedy iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct Pick<T> {
    pub facility: NodeId,
    pub clients: Vec<NodeId>,
    /// `w_v / k + t^v`, charged to each newly served client.
    pub price: T,
}

#[derive(Clone, Debug)]
pub struct UniformSolution<T> {
    pub assignment: Assignment<T>,
    pub value: T,
    pub picks: Vec<Pick<T>>,
    /// Price charged to each client (zero on other nodes).
    pub client_price: Vec<T>,
    pub claimed_bound: T,
}

pub fn solve_locally_uniform<T: Scalar>(
    ubi: &UniformBipartiteInstance<T>,
    tie_break: &TieBreak,
) -> Result<UniformSolution<T>> {
    let n = ubi.node_count;
    let mut covered = vec![false; n];
    let mut remaining = ubi.clients.len();
    let mut assignment = Assignment::zeros(n);
    let mut client_price = vec![T::zero(); n];
    let mut picks = Vec::new();
    while remaining > 0 {
        let mut best: Option<(&Facility<T>, usize, T)> = None;
        for f in &ubi.facilities {
            let k = f.clients.iter().filter(|u| !covered[u.0]).count();
            if k == 0 {
                continue;
            }
            let price = f.weight.clone() / T::of_usize(k) + f.service.clone();
            let better = match &best {
                None => true,
                Some((g, _, p)) => match scalar::cmp(&price, p) {
                    Ordering::Less => true,
                    Ordering::Equal => tie_break.rank(f.node) < tie_break.rank(g.node),
                    Ordering::Greater => false,
                },
            };
            if better {
                best = Some((f, k, price));
            }
        }
        let Some((f, _, price)) = best else {
            let u = ubi.clients.iter().find(|u| !covered[u.0]).expect("a client is uncovered");
            return Err(Error::Infeasible(format!("client {u} has no facility")));
        };
        assignment.raise_to(f.node, &f.weight);
        let served: Vec<NodeId> = f.clients.iter().copied().filter(|u| !covered[u.0]).collect();
        for &u in &served {
            covered[u.0] = true;
            assignment.raise_to(u, &f.service);
            client_price[u.0] = price.clone();
        }
        remaining -= served.len();
        picks.push(Pick { facility: f.node, clients: served, price });
    }
    let value = assignment.total();
    Ok(UniformSolution { assignment, value, picks, client_price, claimed_bound: ubi.bound() })
}

/// Upper bound `w H_k + k t` on what the greedy pays for the `k` clients of
/// one optimal star with weight `w` and service `t`.
pub fn star_payment_bound<T: Scalar>(weight: &T, service: &T, k: usize) -> T {
    weight.clone() * bounds::harmonic::<T>(k) + T::of_usize(k) * service.clone()
}
