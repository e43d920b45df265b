//! Activation edge-cover instances and assignments.
//!
//! An [`Instance`] is a multigraph whose edges carry one threshold per
//! endpoint, together with a set of terminals. An edge `uv` is activated by
//! an [`Assignment`] `a` when `a[u] >= tu` and `a[v] >= tv`; a feasible
//! assignment activates an edge set touching every terminal.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// Dense node index. Ids follow the order of the instance's node list and
/// are used for every lowest-id tie break.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A `uv`-edge with threshold `tu` at `u` and `tv` at `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge<T> {
    pub u: NodeId,
    pub v: NodeId,
    pub tu: T,
    pub tv: T,
}

impl<T: Scalar> Edge<T> {
    pub fn new(u: NodeId, v: NodeId, tu: T, tv: T) -> Self {
        Edge { u, v, tu, tv }
    }

    pub fn touches(&self, x: NodeId) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint opposite to `x`.
    pub fn other(&self, x: NodeId) -> NodeId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    /// Threshold on `x`'s side of the edge.
    pub fn threshold_at(&self, x: NodeId) -> &T {
        if self.u == x {
            &self.tu
        } else {
            &self.tv
        }
    }

    /// Minimum assignment value needed to activate this edge alone.
    pub fn total(&self) -> T {
        self.tu.clone() + self.tv.clone()
    }

    fn oriented(self) -> Self {
        if self.u <= self.v {
            self
        } else {
            Edge { u: self.v, v: self.u, tu: self.tv, tv: self.tu }
        }
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        (self.u, self.v)
            .cmp(&(other.u, other.v))
            .then_with(|| scalar::cmp(&self.tu, &other.tu))
            .then_with(|| scalar::cmp(&self.tv, &other.tv))
    }

    /// Both thresholds of `self` are at most those of `other`.
    fn dominates(&self, other: &Self) -> bool {
        self.u == other.u && self.v == other.v && self.tu <= other.tu && self.tv <= other.tv
    }
}

/// Immutable problem instance with canonical edge order.
#[derive(Clone, Debug)]
pub struct Instance<T> {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
    is_terminal: Vec<bool>,
    terminals: Vec<NodeId>,
    edges: Vec<Edge<T>>,
    incident: Vec<Vec<usize>>,
}

impl<T: Scalar> Instance<T> {
    /// Builds an instance from node names, terminal names and named edges.
    pub fn new<S: AsRef<str>, E: AsRef<str>>(
        nodes: &[S],
        terminals: &[S],
        edges: Vec<(E, E, T, T)>,
    ) -> Result<Self> {
        let names: Vec<String> = nodes.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), NodeId(i)).is_some() {
                return Err(Error::InvalidInstance(format!("duplicate node {name}")));
            }
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::InvalidInstance(format!("unknown node {name}")))
        };
        let terminal_ids = terminals
            .iter()
            .map(|t| lookup(t.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let edges = edges
            .into_iter()
            .map(|(u, v, tu, tv)| Ok(Edge::new(lookup(u.as_ref())?, lookup(v.as_ref())?, tu, tv)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(names, terminal_ids, edges)
    }

    /// Builds an instance from already-indexed parts.
    pub fn from_parts(names: Vec<String>, terminals: Vec<NodeId>, edges: Vec<Edge<T>>) -> Result<Self> {
        let n = names.len();
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), NodeId(i)).is_some() {
                return Err(Error::InvalidInstance(format!("duplicate node {name}")));
            }
        }
        let mut is_terminal = vec![false; n];
        for &t in &terminals {
            if t.0 >= n {
                return Err(Error::InvalidInstance(format!("terminal {t} out of range")));
            }
            if is_terminal[t.0] {
                return Err(Error::InvalidInstance(format!("duplicate terminal {}", names[t.0])));
            }
            is_terminal[t.0] = true;
        }
        let mut canonical = Vec::with_capacity(edges.len());
        for e in edges {
            if e.u.0 >= n || e.v.0 >= n {
                return Err(Error::InvalidInstance("edge endpoint out of range".into()));
            }
            if e.u == e.v {
                return Err(Error::InvalidInstance(format!("self-loop at {}", names[e.u.0])));
            }
            if e.tu < T::zero() || e.tv < T::zero() {
                return Err(Error::InvalidInstance(format!(
                    "negative threshold on {}-{}",
                    names[e.u.0], names[e.v.0]
                )));
            }
            canonical.push(e.oriented());
        }
        canonical.sort_by(|a, b| a.canonical_cmp(b));
        canonical.dedup_by(|a, b| a.canonical_cmp(b) == Ordering::Equal);
        let edges = prune_dominated(canonical);

        let mut incident = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            incident[e.u.0].push(i);
            incident[e.v.0].push(i);
        }
        let terminals = (0..n).filter(|&i| is_terminal[i]).map(NodeId).collect();
        Ok(Instance { names, index, is_terminal, terminals, edges, incident })
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.names.len()).map(NodeId)
    }

    pub fn name(&self, v: NodeId) -> &str {
        &self.names[v.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Option<NodeId> {
        self.index.get(name).copied()
    }

    /// Terminals in increasing id order.
    pub fn terminals(&self) -> &[NodeId] {
        &self.terminals
    }

    pub fn is_terminal(&self, v: NodeId) -> bool {
        self.is_terminal[v.0]
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Edge<T> {
        &self.edges[i]
    }

    /// Indices of edges incident to `v`, in canonical order.
    pub fn incident(&self, v: NodeId) -> &[usize] {
        &self.incident[v.0]
    }

    /// Edges between `a` and `b`.
    pub fn edges_between(&self, a: NodeId, b: NodeId) -> impl Iterator<Item = usize> + '_ {
        self.incident[a.0].iter().copied().filter(move |&i| self.edges[i].other(a) == b)
    }

    /// `true` when no edge joins two terminals.
    pub fn terminals_independent(&self) -> bool {
        self.edges.iter().all(|e| !(self.is_terminal(e.u) && self.is_terminal(e.v)))
    }

    /// Every edge has both thresholds equal to one.
    pub fn has_unit_thresholds(&self) -> bool {
        self.edges.iter().all(|e| e.tu == T::one() && e.tv == T::one())
    }

    pub fn is_activated(&self, edge: usize, a: &Assignment<T>) -> bool {
        let e = &self.edges[edge];
        a.get(e.u) >= &e.tu && a.get(e.v) >= &e.tv
    }

    /// Indices of the edges activated by `a`.
    pub fn activated_edges(&self, a: &Assignment<T>) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.is_activated(i, a)).collect()
    }

    /// Per-node flag: touched by an edge activated by `a`.
    pub fn covered_mask(&self, a: &Assignment<T>) -> Vec<bool> {
        let mut mask = vec![false; self.node_count()];
        for i in self.activated_edges(a) {
            let e = &self.edges[i];
            mask[e.u.0] = true;
            mask[e.v.0] = true;
        }
        mask
    }

    /// Whether `a` is feasible, and the terminals it leaves uncovered.
    pub fn covers(&self, a: &Assignment<T>) -> (bool, Vec<NodeId>) {
        let mask = self.covered_mask(a);
        let uncovered: Vec<NodeId> = self.terminals.iter().copied().filter(|t| !mask[t.0]).collect();
        (uncovered.is_empty(), uncovered)
    }

    /// Number of distinct terminal neighbours of `v`.
    pub fn terminal_degree(&self, v: NodeId) -> usize {
        let mut seen: Vec<NodeId> = self.incident[v.0]
            .iter()
            .map(|&i| self.edges[i].other(v))
            .filter(|&x| self.is_terminal(x))
            .collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    /// Same instance with a different scalar type.
    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Instance<U> {
        Instance {
            names: self.names.clone(),
            index: self.index.clone(),
            is_terminal: self.is_terminal.clone(),
            terminals: self.terminals.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge { u: e.u, v: e.v, tu: f(&e.tu), tv: f(&e.tv) })
                .collect(),
            incident: self.incident.clone(),
        }
    }
}

/// Drops parallel edges whose thresholds are both at least those of another
/// parallel edge. Input must be sorted canonically and deduplicated.
fn prune_dominated<T: Scalar>(edges: Vec<Edge<T>>) -> Vec<Edge<T>> {
    let mut kept: Vec<Edge<T>> = Vec::with_capacity(edges.len());
    let mut group_start = 0;
    for e in edges {
        if kept.last().is_some_and(|k| (k.u, k.v) != (e.u, e.v)) {
            group_start = kept.len();
        }
        // Within a group, sorted by (tu, tv): an earlier edge can dominate a later one only.
        if !kept[group_start..].iter().any(|k| k.dominates(&e)) {
            kept.push(e);
        }
    }
    kept
}

/// Node values, defaulting to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Assignment<T> {
    values: Vec<T>,
}

impl<T: Scalar> Assignment<T> {
    pub fn zeros(n: usize) -> Self {
        Assignment { values: vec![T::zero(); n] }
    }

    pub fn from_values(values: Vec<T>) -> Self {
        Assignment { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, v: NodeId) -> &T {
        &self.values[v.0]
    }

    pub fn set(&mut self, v: NodeId, value: T) {
        self.values[v.0] = value;
    }

    pub fn add_to(&mut self, v: NodeId, delta: &T) {
        let slot = &mut self.values[v.0];
        *slot = slot.clone() + delta.clone();
    }

    /// Raises `v` to at least `level`; returns the increment paid.
    pub fn raise_to(&mut self, v: NodeId, level: &T) -> T {
        let inc = scalar::shortfall(level, &self.values[v.0]);
        if !inc.is_zero() {
            self.values[v.0] = level.clone();
        }
        inc
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Value `a(V)`.
    pub fn total(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, x| acc + x.clone())
    }

    /// Pointwise sum.
    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "assignments over different node sets");
        Assignment {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    /// `self <= other` pointwise.
    pub fn le(&self, other: &Self) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }
}
