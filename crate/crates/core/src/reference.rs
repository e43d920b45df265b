//! Exhaustive reference solvers for tiny inputs.
//!
//! Each routine enumerates its whole search space without sharing code with
//! the solvers it is used to check. Running time is exponential.

use crate::general::GeneralState;
use crate::costs::DerivedCosts;
use crate::instance::{Assignment, Instance, NodeId};
use crate::levels::ActivationSpec;
use crate::scalar::{self, Scalar};
use crate::unit::CoverProblem;

/// Minimum AEC value by trying every node value in `{0} ∪ {thresholds at v}`.
pub fn aec_optimum<T: Scalar>(inst: &Instance<T>) -> Option<T> {
    let candidates: Vec<Vec<T>> = inst
        .nodes()
        .map(|v| {
            let mut vals = vec![T::zero()];
            vals.extend(inst.incident(v).iter().map(|&i| inst.edge(i).threshold_at(v).clone()));
            vals.sort_by(scalar::cmp);
            vals.dedup();
            vals
        })
        .collect();
    let mut current = Assignment::zeros(inst.node_count());
    let mut best = None;
    aec_walk(inst, &candidates, 0, T::zero(), &mut current, &mut best);
    best
}

fn aec_walk<T: Scalar>(
    inst: &Instance<T>,
    candidates: &[Vec<T>],
    v: usize,
    total: T,
    current: &mut Assignment<T>,
    best: &mut Option<T>,
) {
    if best.as_ref().is_some_and(|b| &total >= b) {
        return;
    }
    if v == candidates.len() {
        if inst.covers(current).0 {
            *best = Some(total);
        }
        return;
    }
    for x in &candidates[v] {
        current.set(NodeId(v), x.clone());
        aec_walk(inst, candidates, v + 1, total.clone() + x.clone(), current, best);
    }
    current.set(NodeId(v), T::zero());
}

/// Smallest density over every proper star: each root, each root increment
/// in `{shortfalls of incident edges}`, each non-empty subset of reachable
/// open terminals with their cheapest leaf increments.
pub fn min_star_density<T: Scalar>(
    inst: &Instance<T>,
    costs: &DerivedCosts<T>,
    state: &GeneralState<T>,
) -> Option<T> {
    let current = state.current(costs);
    let open = |u: NodeId| inst.is_terminal(u) && !state.covered[u.0] && !costs.c(u).is_zero();
    let mut best: Option<T> = None;
    for root in inst.nodes() {
        let root_gain = if open(root) { costs.c(root).clone() } else { T::zero() };
        for &i in inst.incident(root) {
            let w = scalar::shortfall(inst.edge(i).threshold_at(root), current.get(root));
            let level = current.get(root).clone() + w.clone();
            let mut leaves: Vec<(NodeId, T)> = Vec::new();
            for &j in inst.incident(root) {
                let e = inst.edge(j);
                let u = e.other(root);
                if !open(u) || e.threshold_at(root) > &level {
                    continue;
                }
                let b = scalar::shortfall(e.threshold_at(u), current.get(u));
                match leaves.iter_mut().find(|(x, _)| *x == u) {
                    Some(slot) => slot.1 = scalar::min_of(&slot.1, &b),
                    None => leaves.push((u, b)),
                }
            }
            for mask in 1u64..(1u64 << leaves.len()) {
                let mut payment = w.clone();
                let mut gain = root_gain.clone();
                for (k, (u, b)) in leaves.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        payment = payment + b.clone();
                        gain = gain + costs.c(*u).clone();
                    }
                }
                let density = payment / gain;
                if best.as_ref().is_none_or(|d| &density < d) {
                    best = Some(density);
                }
            }
        }
    }
    best
}

/// Minimum number of sets covering every element, or `None` if impossible.
pub fn set_cover_optimum(problem: &CoverProblem) -> Option<usize> {
    let n = problem.elements.len();
    let full: u64 = if n == 0 { 0 } else { (1u64 << n) - 1 };
    let masks: Vec<u64> = problem
        .sets
        .iter()
        .map(|s| s.members.iter().fold(0u64, |m, &e| m | 1 << e))
        .collect();
    let mut best: Option<usize> = None;
    for pick in 0u64..(1u64 << masks.len()) {
        let size = pick.count_ones() as usize;
        if best.is_some_and(|b| size >= b) {
            continue;
        }
        let hit = (0..masks.len()).filter(|&i| pick >> i & 1 == 1).fold(0u64, |m, i| m | masks[i]);
        if hit == full {
            best = Some(size);
        }
    }
    best
}

/// Minimum total level when every node is off or at one of its levels and
/// a pair is active when both ends are on at an activating level pair.
pub fn levels_optimum<T: Scalar>(spec: &ActivationSpec<T>, terminals: &[NodeId]) -> Option<T> {
    let n = spec.names.len();
    // choice[v] = 0 for off, i + 1 for level i.
    let mut choice = vec![0usize; n];
    let mut best: Option<T> = None;
    loop {
        let mut covered = vec![false; n];
        for pair in &spec.pairs {
            let (a, b) = (choice[pair.u.0], choice[pair.v.0]);
            if a > 0 && b > 0 && spec.activates(pair, a - 1, b - 1) {
                covered[pair.u.0] = true;
                covered[pair.v.0] = true;
            }
        }
        if terminals.iter().all(|t| covered[t.0]) {
            let total = (0..n)
                .filter(|&v| choice[v] > 0)
                .fold(T::zero(), |acc, v| acc + spec.levels[v][choice[v] - 1].clone());
            if best.as_ref().is_none_or(|b| &total < b) {
                best = Some(total);
            }
        }
        // Odometer step.
        let mut v = 0;
        loop {
            if v == n {
                return best;
            }
            choice[v] += 1;
            if choice[v] <= spec.levels[v].len() {
                break;
            }
            choice[v] = 0;
            v += 1;
        }
    }
}

/// Facility location by trying every set of open facilities:
/// `min_S w(S) + Σ_u min_{v ∈ S} d(u, v)` over `S` serving every client.
pub fn facility_location_optimum<T: Scalar>(clients: usize, opening: &[T], service: &[(usize, usize, T)]) -> Option<T> {
    let mut best: Option<T> = None;
    for open in 1u64..(1u64 << opening.len()) {
        let mut total = (0..opening.len())
            .filter(|&f| open >> f & 1 == 1)
            .fold(T::zero(), |acc, f| acc + opening[f].clone());
        let mut served = true;
        for c in 0..clients {
            let d = service
                .iter()
                .filter(|s| s.0 == c && open >> s.1 & 1 == 1)
                .map(|s| s.2.clone())
                .reduce(|a, b| scalar::min_of(&a, &b));
            match d {
                Some(d) => total = total + d,
                None => {
                    served = false;
                    break;
                }
            }
        }
        if served && best.as_ref().is_none_or(|b| &total < b) {
            best = Some(total);
        }
    }
    best
}
