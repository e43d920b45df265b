//! Activation functions over finite level sets and their expansion into
//! threshold edges.
//!
//! A pair `uv` is activated by `(x, y)` when its predicate holds at
//! `(x, y) ∈ L_u × L_v`. Because predicates are monotone, only the
//! Pareto-minimal activating pairs matter; each becomes one parallel edge.


use crate::error::{Error, Result};
use crate::instance::{Edge, Instance, NodeId};
use crate::scalar::Scalar;

/// Activation predicate of one node pair.
#[derive(Clone, Debug, PartialEq)]
pub enum Predicate<T> {
    /// `table[i][j]` tells whether `(L_u[i], L_v[j])` activates the pair.
    Table(Vec<Vec<bool>>),
    /// Activated when `gamma_uv * x + gamma_vu * y >= demand`.
    Installation { demand: T, gamma_uv: T, gamma_vu: T },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ActivationPair<T> {
    pub u: NodeId,
    pub v: NodeId,
    pub predicate: Predicate<T>,
}

/// Nodes with their level lists and the activation predicates of node pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct ActivationSpec<T> {
    pub names: Vec<String>,
    pub levels: Vec<Vec<T>>,
    pub pairs: Vec<ActivationPair<T>>,
}

impl<T: Scalar> ActivationSpec<T> {
    /// Whether the pair's predicate holds at level indices `(i, j)`.
    pub fn activates(&self, pair: &ActivationPair<T>, i: usize, j: usize) -> bool {
        match &pair.predicate {
            Predicate::Table(table) => table[i][j],
            Predicate::Installation { demand, gamma_uv, gamma_vu } => {
                let x = &self.levels[pair.u.0][i];
                let y = &self.levels[pair.v.0][j];
                gamma_uv.clone() * x.clone() + gamma_vu.clone() * y.clone() >= *demand
            }
        }
    }

    fn validate(&self) -> Result<()> {
        if self.levels.len() != self.names.len() {
            return Err(Error::InvalidInstance("one level list per node required".into()));
        }
        for (name, levels) in self.names.iter().zip(&self.levels) {
            if levels.is_empty() {
                return Err(Error::EmptyLevels(name.clone()));
            }
            if levels[0] < T::zero() || levels.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidInstance(format!(
                    "levels of {name} must be non-negative and strictly ascending"
                )));
            }
        }
        for pair in &self.pairs {
            let (lu, lv) = (self.levels[pair.u.0].len(), self.levels[pair.v.0].len());
            match &pair.predicate {
                Predicate::Table(table) => {
                    if table.len() != lu || table.iter().any(|row| row.len() != lv) {
                        return Err(Error::InvalidInstance(format!(
                            "table for {}-{} must be {lu}x{lv}",
                            self.names[pair.u.0], self.names[pair.v.0]
                        )));
                    }
                }
                Predicate::Installation { demand, gamma_uv, gamma_vu } => {
                    if demand < &T::zero() || gamma_uv <= &T::zero() || gamma_vu <= &T::zero() {
                        return Err(Error::DomainError(
                            "installation needs demand >= 0 and positive coefficients".into(),
                        ));
                    }
                }
            }
            let monotone = (0..lu).all(|i| {
                (0..lv).all(|j| {
                    !self.activates(pair, i, j)
                        || ((i + 1 >= lu || self.activates(pair, i + 1, j))
                            && (j + 1 >= lv || self.activates(pair, i, j + 1)))
                })
            });
            if !monotone {
                return Err(Error::NonMonotone(
                    self.names[pair.u.0].clone(),
                    self.names[pair.v.0].clone(),
                ));
            }
        }
        Ok(())
    }
}

/// Expands every pair into one threshold edge per Pareto-minimal activating
/// level pair.
pub fn levels_reduction<T: Scalar>(spec: &ActivationSpec<T>, terminals: &[NodeId]) -> Result<Instance<T>> {
    spec.validate()?;
    let mut edges = Vec::new();
    for pair in &spec.pairs {
        let (lu, lv) = (&spec.levels[pair.u.0], &spec.levels[pair.v.0]);
        // Smallest activating j for each i is non-increasing in i; keep strict drops.
        let mut best_j = lv.len();
        for (i, level) in lu.iter().enumerate() {
            let Some(j) = (0..best_j).find(|&j| spec.activates(pair, i, j)) else {
                continue;
            };
            best_j = j;
            edges.push(Edge::new(pair.u, pair.v, level.clone(), lv[j].clone()));
            if j == 0 {
                break;
            }
        }
    }
    Instance::from_parts(spec.names.clone(), terminals.to_vec(), edges)
}

/// Whether `x` belongs to the level list of node `v`, or is zero (node off).
pub fn is_level_or_zero<T: Scalar>(spec: &ActivationSpec<T>, v: NodeId, x: &T) -> bool {
    x.is_zero() || spec.levels[v.0].iter().any(|l| l == x)
}
