//! Unit thresholds.
//!
//! With every threshold equal to one, an optimal assignment is 0/1, puts 1
//! on every terminal, and its non-terminal support covers the terminals not
//! already covered by a terminal-terminal edge. The problem is therefore
//! `|R|` plus an unweighted set cover whose sets are the terminal
//! neighbourhoods of the non-terminals.

use std::collections::HashMap;

use petgraph::algo::maximum_matching;
use petgraph::graph::{NodeIndex, UnGraph};

use crate::bounds;
use crate::error::{Error, Result};
use crate::instance::{Assignment, Instance, NodeId};
use crate::scalar::Scalar;
use crate::Rational;

/// A set named by its root node; `members` index [`CoverProblem::elements`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSet {
    pub root: NodeId,
    pub members: Vec<usize>,
}

/// Unweighted set cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverProblem {
    pub elements: Vec<NodeId>,
    /// Non-empty sets in root order.
    pub sets: Vec<CoverSet>,
}

impl CoverProblem {
    pub fn max_set_size(&self) -> usize {
        self.sets.iter().map(|s| s.members.len()).max().unwrap_or(0)
    }

    /// Sub-problem on the elements not yet covered, without the removed roots.
    pub fn restrict(&self, covered: &[bool], removed: &[NodeId]) -> CoverProblem {
        let mut index = vec![usize::MAX; self.elements.len()];
        let mut elements = Vec::new();
        for (i, &e) in self.elements.iter().enumerate() {
            if !covered[i] {
                index[i] = elements.len();
                elements.push(e);
            }
        }
        let sets = self
            .sets
            .iter()
            .filter(|s| !removed.contains(&s.root))
            .map(|s| CoverSet {
                root: s.root,
                members: s.members.iter().filter(|&&m| !covered[m]).map(|&m| index[m]).collect(),
            })
            .filter(|s| !s.members.is_empty())
            .collect();
        CoverProblem { elements, sets }
    }

    fn check_coverable(&self) -> Result<()> {
        let mut hit = vec![false; self.elements.len()];
        for s in &self.sets {
            for &m in &s.members {
                hit[m] = true;
            }
        }
        match hit.iter().position(|h| !h) {
            Some(i) => Err(Error::Infeasible(format!("terminal {} has no covering node", self.elements[i]))),
            None => Ok(()),
        }
    }

    fn check_size(&self, k: usize) -> Result<()> {
        match self.sets.iter().find(|s| s.members.len() > k) {
            Some(s) => Err(Error::SizeBoundViolated {
                root: s.root.to_string(),
                size: s.members.len(),
                k,
            }),
            None => Ok(()),
        }
    }

    /// Whether the sets rooted at `chosen` cover every element.
    pub fn is_cover(&self, chosen: &[NodeId]) -> bool {
        let mut hit = vec![false; self.elements.len()];
        for s in self.sets.iter().filter(|s| chosen.contains(&s.root)) {
            for &m in &s.members {
                hit[m] = true;
            }
        }
        hit.into_iter().all(|h| h)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCoverSolution {
    /// Roots of the chosen sets.
    pub chosen: Vec<NodeId>,
}

impl SetCoverSolution {
    pub fn size(&self) -> usize {
        self.chosen.len()
    }
}

/// The set-cover residual of a unit instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitResidual {
    pub node_count: usize,
    pub terminals: Vec<NodeId>,
    /// Terminals covered by a terminal-terminal edge.
    pub precovered: Vec<NodeId>,
    pub problem: CoverProblem,
    /// `|R|`: every terminal pays one.
    pub base_value: usize,
}

/// Builds the set-cover residual.
pub fn reduce_unit<T: Scalar>(inst: &Instance<T>) -> Result<UnitResidual> {
    if !inst.has_unit_thresholds() {
        return Err(Error::NotUnitThresholds);
    }
    let mut precovered_mask = vec![false; inst.node_count()];
    for e in inst.edges() {
        if inst.is_terminal(e.u) && inst.is_terminal(e.v) {
            precovered_mask[e.u.0] = true;
            precovered_mask[e.v.0] = true;
        }
    }
    let precovered: Vec<NodeId> = inst.terminals().iter().copied().filter(|t| precovered_mask[t.0]).collect();
    let elements: Vec<NodeId> = inst.terminals().iter().copied().filter(|t| !precovered_mask[t.0]).collect();
    let position: HashMap<NodeId, usize> = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let sets = inst
        .nodes()
        .filter(|&v| !inst.is_terminal(v))
        .map(|v| {
            let mut members: Vec<usize> = inst
                .incident(v)
                .iter()
                .filter_map(|&i| position.get(&inst.edge(i).other(v)).copied())
                .collect();
            members.sort_unstable();
            members.dedup();
            CoverSet { root: v, members }
        })
        .filter(|s| !s.members.is_empty())
        .collect();
    let problem = CoverProblem { elements, sets };
    problem.check_coverable()?;
    Ok(UnitResidual {
        node_count: inst.node_count(),
        terminals: inst.terminals().to_vec(),
        precovered,
        problem,
        base_value: inst.terminals().len(),
    })
}

/// Minimum cover when no set exceeds two elements: `|R'| − |M|` for a
/// maximum matching `M` of the element graph joining pairs that share a set.
pub fn exact_2setcover(problem: &CoverProblem) -> Result<SetCoverSolution> {
    problem.check_size(2)?;
    problem.check_coverable()?;
    let n = problem.elements.len();
    let mut graph: UnGraph<(), ()> = UnGraph::with_capacity(n, problem.sets.len());
    let nodes: Vec<NodeIndex> = (0..n).map(|_| graph.add_node(())).collect();
    let mut pair_root: HashMap<(usize, usize), NodeId> = HashMap::new();
    for s in &problem.sets {
        if let [a, b] = s.members[..] {
            if let std::collections::hash_map::Entry::Vacant(slot) = pair_root.entry((a.min(b), a.max(b))) {
                slot.insert(s.root);
                graph.add_edge(nodes[a], nodes[b], ());
            }
        }
    }
    let matching = maximum_matching(&graph);
    let mut chosen = Vec::with_capacity(n - matching.len());
    for i in 0..n {
        match matching.mate(nodes[i]) {
            Some(j) if j.index() > i => chosen.push(pair_root[&(i, j.index())]),
            Some(_) => {}
            None => {
                let s = problem.sets.iter().find(|s| s.members.contains(&i)).expect("coverable");
                chosen.push(s.root);
            }
        }
    }
    chosen.sort_unstable();
    chosen.dedup();
    debug_assert_eq!(chosen.len(), n - matching.len());
    Ok(SetCoverSolution { chosen })
}

/// Optimal cover by iterative deepening over element branching, with the
/// `⌈remaining / k⌉` bound and a memo of exhausted `(covered, budget)` states.
pub fn exact_bb(problem: &CoverProblem, k: usize) -> Result<SetCoverSolution> {
    problem.check_size(k)?;
    problem.check_coverable()?;
    let n = problem.elements.len();
    if n == 0 {
        return Ok(SetCoverSolution { chosen: Vec::new() });
    }
    let k = problem.max_set_size().max(1);
    let words = n.div_ceil(64);
    let masks: Vec<Vec<u64>> = problem
        .sets
        .iter()
        .map(|s| {
            let mut m = vec![0u64; words];
            for &e in &s.members {
                m[e / 64] |= 1 << (e % 64);
            }
            m
        })
        .collect();
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, s) in problem.sets.iter().enumerate() {
        for &e in &s.members {
            containing[e].push(i);
        }
    }
    let mut search = CoverSearch { n, k, masks, containing, failed: HashMap::new(), picked: Vec::new() };
    let mut budget = n.div_ceil(k);
    loop {
        if search.feasible(&mut vec![0u64; words], budget) {
            let mut chosen: Vec<NodeId> = search.picked.iter().map(|&i| problem.sets[i].root).collect();
            chosen.sort_unstable();
            return Ok(SetCoverSolution { chosen });
        }
        budget += 1;
    }
}

struct CoverSearch {
    n: usize,
    k: usize,
    masks: Vec<Vec<u64>>,
    containing: Vec<Vec<usize>>,
    /// Largest budget known to be insufficient from a covered state.
    failed: HashMap<Vec<u64>, usize>,
    picked: Vec<usize>,
}

impl CoverSearch {
    fn is_set(covered: &[u64], e: usize) -> bool {
        covered[e / 64] >> (e % 64) & 1 == 1
    }

    fn gain(&self, covered: &[u64], set: usize) -> u32 {
        self.masks[set].iter().zip(covered).map(|(m, c)| (m & !c).count_ones()).sum()
    }

    fn feasible(&mut self, covered: &mut Vec<u64>, budget: usize) -> bool {
        let remaining = self.n - covered.iter().map(|w| w.count_ones() as usize).sum::<usize>();
        if remaining == 0 {
            return true;
        }
        if remaining.div_ceil(self.k) > budget {
            return false;
        }
        if self.failed.get(covered.as_slice()).is_some_and(|&b| b >= budget) {
            return false;
        }
        let element = (0..self.n)
            .filter(|&e| !Self::is_set(covered, e))
            .min_by_key(|&e| (self.containing[e].len(), e))
            .expect("an element is uncovered");
        let mut options = self.containing[element].clone();
        options.sort_by_key(|&s| (std::cmp::Reverse(self.gain(covered, s)), s));
        for s in options {
            let before = covered.clone();
            for (c, m) in covered.iter_mut().zip(&self.masks[s]) {
                *c |= m;
            }
            self.picked.push(s);
            if self.feasible(covered, budget - 1) {
                return true;
            }
            self.picked.pop();
            *covered = before;
        }
        self.failed.insert(covered.clone(), budget);
        false
    }
}

/// Classical greedy: repeatedly the set with the most uncovered elements,
/// lowest root on ties. Ratio `H_k`.
pub fn greedy_hk(problem: &CoverProblem, k: usize) -> Result<SetCoverSolution> {
    problem.check_size(k)?;
    problem.check_coverable()?;
    let mut covered = vec![false; problem.elements.len()];
    let mut used = vec![false; problem.sets.len()];
    let mut chosen = Vec::new();
    loop {
        let best = (0..problem.sets.len())
            .filter(|&i| !used[i])
            .map(|i| (problem.sets[i].members.iter().filter(|&&m| !covered[m]).count(), i))
            .filter(|&(gain, _)| gain > 0)
            .max_by_key(|&(gain, i)| (gain, std::cmp::Reverse(i)));
        let Some((_, i)) = best else { break };
        used[i] = true;
        for &m in &problem.sets[i].members {
            covered[m] = true;
        }
        chosen.push(problem.sets[i].root);
    }
    Ok(SetCoverSolution { chosen })
}

/// A k-set-cover algorithm plugged into [`algorithm2`].
pub trait KSetCoverSolver {
    fn name(&self) -> &'static str;
    fn solve(&self, problem: &CoverProblem, k: usize) -> Result<SetCoverSolution>;
    /// Whether the solver's ratio on k-set-cover is at most `α_k`.
    fn within_alpha(&self, k: usize) -> bool;
}

/// Optimal covers: matching for `k <= 2`, branch-and-bound above.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExactSubsolver;

impl KSetCoverSolver for ExactSubsolver {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn solve(&self, problem: &CoverProblem, k: usize) -> Result<SetCoverSolution> {
        if k <= 2 {
            exact_2setcover(problem)
        } else {
            exact_bb(problem, k)
        }
    }

    fn within_alpha(&self, _k: usize) -> bool {
        true
    }
}

/// The `H_k` greedy.
#[derive(Clone, Copy, Debug, Default)]
pub struct GreedySubsolver;

impl KSetCoverSolver for GreedySubsolver {
    fn name(&self) -> &'static str {
        "greedy"
    }

    fn solve(&self, problem: &CoverProblem, k: usize) -> Result<SetCoverSolution> {
        greedy_hk(problem, k)
    }

    fn within_alpha(&self, k: usize) -> bool {
        k <= 1
    }
}

/// Which `C ∪ A_k` candidate won.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algorithm2Audit {
    pub winning_k: usize,
    pub c_size: usize,
    pub a_size: usize,
    /// `(k, |C ∪ A_k|)` for every evaluated `k`, from `Δ` down to 0.
    pub candidates: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct UnitSolution {
    pub cover: SetCoverSolution,
    /// `|R| + |cover|`.
    pub value: usize,
    pub assignment: Assignment<Rational>,
    pub claimed_bound: Rational,
    pub audit: Option<Algorithm2Audit>,
}

impl UnitSolution {
    fn new(res: &UnitResidual, mut chosen: Vec<NodeId>, claimed_bound: Rational, audit: Option<Algorithm2Audit>) -> Self {
        chosen.sort_unstable();
        let mut assignment = Assignment::zeros(res.node_count);
        for &v in res.terminals.iter().chain(&chosen) {
            assignment.set(v, Rational::from_ratio(1, 1));
        }
        UnitSolution {
            value: res.base_value + chosen.len(),
            cover: SetCoverSolution { chosen },
            assignment,
            claimed_bound,
            audit,
        }
    }
}

/// Takes maximum stars while they have at least three terminals, then
/// finishes optimally with matching.
pub fn algorithm1(res: &UnitResidual) -> Result<UnitSolution> {
    let problem = &res.problem;
    problem.check_coverable()?;
    let mut covered = vec![false; problem.elements.len()];
    let mut removed = Vec::new();
    loop {
        let best = problem
            .sets
            .iter()
            .filter(|s| !removed.contains(&s.root))
            .map(|s| (s.members.iter().filter(|&&m| !covered[m]).count(), s))
            .max_by_key(|&(size, s)| (size, std::cmp::Reverse(s.root)));
        match best {
            Some((size, s)) if size >= 3 => {
                for &m in &s.members {
                    covered[m] = true;
                }
                removed.push(s.root);
            }
            _ => break,
        }
    }
    let rest = exact_2setcover(&problem.restrict(&covered, &removed))?;
    removed.extend(rest.chosen);
    Ok(UnitSolution::new(res, removed, bounds::algorithm1_ratio(), None))
}

/// Peels maximal disjoint `(k+1)`-stars for `k = Δ..0`, solving the
/// remaining k-set-cover with `subsolver` for `1 <= k <= 6`, and returns the
/// smallest `C ∪ A_k`.
pub fn algorithm2(res: &UnitResidual, subsolver: &dyn KSetCoverSolver) -> Result<UnitSolution> {
    let problem = &res.problem;
    problem.check_coverable()?;
    let delta = problem.max_set_size();
    let mut covered = vec![false; problem.elements.len()];
    let mut stars: Vec<NodeId> = Vec::new();
    let mut best: Option<(usize, Vec<NodeId>, Algorithm2Audit)> = None;
    let mut candidates = Vec::new();
    let mut certified = true;
    for k in (0..=delta).rev() {
        for s in &problem.sets {
            if stars.contains(&s.root) {
                continue;
            }
            let open: Vec<usize> = s.members.iter().copied().filter(|&m| !covered[m]).collect();
            if open.len() > k {
                for &m in &open[..k + 1] {
                    covered[m] = true;
                }
                stars.push(s.root);
            }
        }
        let extra = match k {
            0 => {
                debug_assert!(covered.iter().all(|&c| c));
                Vec::new()
            }
            1..=6 => {
                certified &= subsolver.within_alpha(k);
                subsolver.solve(&problem.restrict(&covered, &stars), k)?.chosen
            }
            _ => continue,
        };
        let size = stars.len() + extra.len();
        candidates.push((k, size));
        if best.as_ref().is_none_or(|(b, _, _)| size < *b) {
            let audit = Algorithm2Audit {
                winning_k: k,
                c_size: stars.len(),
                a_size: extra.len(),
                candidates: Vec::new(),
            };
            let mut chosen = stars.clone();
            chosen.extend(extra);
            best = Some((size, chosen, audit));
        }
    }
    let (_, chosen, mut audit) = best.expect("k = 0 is always evaluated");
    audit.candidates = candidates;
    let claimed = if certified { bounds::alpha_table::<Rational>().rho } else { bounds::unit_greedy_ratio() };
    Ok(UnitSolution::new(res, chosen, claimed, Some(audit)))
}
