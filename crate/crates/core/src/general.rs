//! The `1 + ω(θ)` greedy for arbitrary thresholds.
//!
//! The instance is cast as a greedy-covering problem over assignments `a`
//! that augment `q`:
//!
//! * payment `τ(a) = a(V)`;
//! * potential `ν(a) = Q + c(R ∖ R_{q+a})`, where `R_{q+a}` are the terminals
//!   covered by the edges `q + a` activates.
//!
//! A minimum-density augmentation is always the cheapest activation of a
//! proper star (a root plus terminal leaves), so the oracle enumerates roots
//! and root increments and picks leaves by increasing `b_u / c_u`. When the
//! greedy stops, every still-uncovered terminal is served by its cheapest edge.

use std::cell::RefCell;
use std::cmp::Ordering;


use crate::bounds;
use crate::costs::{derive_costs, DerivedCosts};
use crate::error::{Error, Result};
use crate::gmc::{gmc_greedy, Augmentation, GmcProblem, GreedyTrace};
use crate::instance::{Assignment, Instance, NodeId};
use crate::scalar::{self, Scalar};

/// A proper star with the increments that activate it.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateStar<T> {
    pub root: NodeId,
    pub root_increment: T,
    /// `(terminal, increment b_u, edge used)`.
    pub leaves: Vec<(NodeId, T, usize)>,
    /// The root is an uncovered terminal and counts towards the gain.
    pub root_gains: bool,
    /// `c` summed over the terminals the star newly covers.
    pub gain: T,
    /// `w + Σ b_u`.
    pub payment: T,
}

impl<T: Scalar> CandidateStar<T> {
    pub fn density(&self) -> T {
        self.payment.clone() / self.gain.clone()
    }

    fn density_cmp(&self, other: &Self) -> Ordering {
        scalar::cmp_fractions(&self.payment, &self.gain, &other.payment, &other.gain)
    }
}

/// Greedy state: the augmentation `a` on top of `q` and the covered mask.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralState<T> {
    pub extra: Assignment<T>,
    pub covered: Vec<bool>,
}

impl<T: Scalar> GeneralState<T> {
    pub fn new(inst: &Instance<T>, costs: &DerivedCosts<T>, extra: Assignment<T>) -> Self {
        let covered = inst.covered_mask(&costs.q_assignment().plus(&extra));
        GeneralState { extra, covered }
    }

    /// `q + a`.
    pub fn current(&self, costs: &DerivedCosts<T>) -> Assignment<T> {
        costs.q_assignment().plus(&self.extra)
    }

    /// `ν(a) = Q + c(uncovered terminals)`.
    pub fn potential(&self, inst: &Instance<T>, costs: &DerivedCosts<T>) -> T {
        inst.terminals()
            .iter()
            .filter(|t| !self.covered[t.0])
            .fold(costs.q_sum.clone(), |acc, t| acc + costs.c(*t).clone())
    }
}

/// Minimum-density proper star with respect to `q + state.extra`, or `None`
/// when no star covers an uncovered terminal of positive `c`.
///
/// Ties are broken by root id, then by root increment.
pub fn min_density_star<T: Scalar>(
    inst: &Instance<T>,
    costs: &DerivedCosts<T>,
    state: &GeneralState<T>,
) -> Option<CandidateStar<T>> {
    let current = state.current(costs);
    let open = |u: NodeId| inst.is_terminal(u) && !state.covered[u.0] && !costs.c(u).is_zero();
    let mut best: Option<CandidateStar<T>> = None;
    for root in inst.nodes() {
        let mut increments: Vec<T> = inst
            .incident(root)
            .iter()
            .map(|&i| scalar::shortfall(inst.edge(i).threshold_at(root), current.get(root)))
            .collect();
        increments.sort_by(scalar::cmp);
        increments.dedup();
        let root_gain = if open(root) { costs.c(root).clone() } else { T::zero() };
        for w in increments {
            let level = current.get(root).clone() + w.clone();
            // Cheapest leaf increment per reachable open terminal.
            let mut options: Vec<(NodeId, T, usize)> = Vec::new();
            for &i in inst.incident(root) {
                let e = inst.edge(i);
                let u = e.other(root);
                if !open(u) || e.threshold_at(root) > &level {
                    continue;
                }
                let b = scalar::shortfall(e.threshold_at(u), current.get(u));
                match options.iter_mut().find(|(x, _, _)| *x == u) {
                    Some(slot) if b < slot.1 => *slot = (u, b, i),
                    Some(_) => {}
                    None => options.push((u, b, i)),
                }
            }
            if options.is_empty() {
                continue;
            }
            options.sort_by(|(u1, b1, _), (u2, b2, _)| {
                scalar::cmp_fractions(b1, costs.c(*u1), b2, costs.c(*u2)).then(u1.cmp(u2))
            });
            let mut payment = w.clone();
            let mut gain = root_gain.clone();
            let mut leaves = Vec::new();
            for (u, b, edge) in options {
                let new_payment = payment.clone() + b.clone();
                let new_gain = gain.clone() + costs.c(u).clone();
                let improves = leaves.is_empty()
                    || scalar::cmp_fractions(&new_payment, &new_gain, &payment, &gain) == Ordering::Less;
                if !improves {
                    break;
                }
                payment = new_payment;
                gain = new_gain;
                leaves.push((u, b, edge));
            }
            let star = CandidateStar {
                root,
                root_increment: w,
                leaves,
                root_gains: !root_gain.is_zero(),
                gain,
                payment,
            };
            if best.as_ref().is_none_or(|b| star.density_cmp(b) == Ordering::Less) {
                best = Some(star);
            }
        }
    }
    best
}

/// The greedy-covering view of an instance. Accepted stars are logged.
pub struct GeneralProblem<'a, T> {
    pub inst: &'a Instance<T>,
    pub costs: &'a DerivedCosts<T>,
    accepted: RefCell<Vec<CandidateStar<T>>>,
}

impl<'a, T: Scalar> GeneralProblem<'a, T> {
    pub fn new(inst: &'a Instance<T>, costs: &'a DerivedCosts<T>) -> Self {
        GeneralProblem { inst, costs, accepted: RefCell::new(Vec::new()) }
    }

    /// Stars accepted so far, in order.
    pub fn into_accepted(self) -> Vec<CandidateStar<T>> {
        self.accepted.into_inner()
    }

    fn advance(&self, state: &mut GeneralState<T>, star: &CandidateStar<T>) {
        state.extra.add_to(star.root, &star.root_increment);
        for (u, b, _) in &star.leaves {
            state.extra.add_to(*u, b);
        }
        state.covered = self.inst.covered_mask(&state.current(self.costs));
    }
}

impl<T: Scalar> GmcProblem<T> for GeneralProblem<'_, T> {
    type State = GeneralState<T>;
    type Step = CandidateStar<T>;

    fn initial_state(&self) -> GeneralState<T> {
        GeneralState::new(self.inst, self.costs, Assignment::zeros(self.inst.node_count()))
    }

    fn potential(&self, state: &GeneralState<T>) -> T {
        state.potential(self.inst, self.costs)
    }

    fn target(&self) -> T {
        self.costs.q_sum.clone()
    }

    fn min_density(&self, state: &GeneralState<T>) -> Option<Augmentation<CandidateStar<T>, T>> {
        let star = min_density_star(self.inst, self.costs, state)?;
        let mut next = state.clone();
        self.advance(&mut next, &star);
        Some(Augmentation {
            payment: star.payment.clone(),
            potential_after: next.potential(self.inst, self.costs),
            step: star,
        })
    }

    fn apply(&self, state: &mut GeneralState<T>, star: &CandidateStar<T>) {
        self.accepted.borrow_mut().push(star.clone());
        self.advance(state, star);
    }
}

/// Covers every terminal left uncovered by `q + a` with its cheapest edge.
/// The result costs at most `Q + a(V) + c(uncovered)`.
pub fn complete<T: Scalar>(
    inst: &Instance<T>,
    costs: &DerivedCosts<T>,
    state: &GeneralState<T>,
) -> Result<Assignment<T>> {
    let mut a = state.current(costs);
    let mut covered = state.covered.clone();
    for &u in inst.terminals() {
        if covered[u.0] {
            continue;
        }
        let i = costs.cheapest_edge[u.0]
            .ok_or_else(|| Error::Infeasible(format!("terminal {} has no incident edge", inst.name(u))))?;
        let e = inst.edge(i);
        a.raise_to(e.u, &e.tu);
        a.raise_to(e.v, &e.tv);
        covered[e.u.0] = true;
        covered[e.v.0] = true;
    }
    Ok(a)
}

#[derive(Clone, Debug)]
pub struct GeneralSolution<T> {
    pub assignment: Assignment<T>,
    pub value: T,
    pub costs: DerivedCosts<T>,
    pub trace: GreedyTrace<T>,
    /// State the greedy stopped in, before completion.
    pub greedy_state: GeneralState<T>,
    pub stars: Vec<CandidateStar<T>>,
    /// `min(1 + ω(θ), 1 + ln(Δ + 1)[, 1 + ln Δ])`.
    pub claimed_bound: f64,
}

/// Runs the greedy, then completes the cover.
pub fn solve_general<T: Scalar>(inst: &Instance<T>) -> Result<GeneralSolution<T>> {
    let costs = derive_costs(inst).map_err(|e| match e {
        Error::IsolatedTerminal(t) => Error::Infeasible(format!("terminal {t} has no incident edge")),
        other => other,
    })?;
    let problem = GeneralProblem::new(inst, &costs);
    let (state, trace) = gmc_greedy(&problem)?;
    let stars = problem.into_accepted();
    let assignment = complete(inst, &costs, &state)?;
    debug_assert!(inst.covers(&assignment).0);
    let value = assignment.total();
    let claimed_bound = bounds::general_bound(&costs.theta, costs.delta, costs.terminals_independent);
    Ok(GeneralSolution { assignment, value, costs, trace, greedy_state: state, stars, claimed_bound })
}
