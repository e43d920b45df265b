//! Reductions from named problems and seeded random instance families.
//!
//! Every random family draws from a ChaCha8 stream seeded with the family
//! seed and redraws until each terminal has an incident edge, so a
//! [`FamilySpec`] always maps to the same instance bytes.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::costs::Slope;
use crate::error::{Error, Result};
use crate::instance::{Edge, Instance, NodeId};
use crate::levels::{levels_reduction, ActivationPair, ActivationSpec, Predicate};
use crate::scalar::Scalar;
use crate::Rational;

/// Draws per spec before giving up.
pub const RETRIES: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    FacilityLocation,
    ThetaSetcover,
    MinPower,
    Installation,
    UnitRandom,
    UniformRandom,
    GeneralRandom,
    Tight73,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::FacilityLocation,
        Family::ThetaSetcover,
        Family::MinPower,
        Family::Installation,
        Family::UnitRandom,
        Family::UniformRandom,
        Family::GeneralRandom,
        Family::Tight73,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Family::FacilityLocation => "facility-location",
            Family::ThetaSetcover => "theta-setcover",
            Family::MinPower => "min-power",
            Family::Installation => "installation",
            Family::UnitRandom => "unit-random",
            Family::UniformRandom => "uniform-random",
            Family::GeneralRandom => "general-random",
            Family::Tight73 => "tight73",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.id() == s)
            .ok_or_else(|| Error::Parse(format!("unknown family {s:?}")))
    }
}

/// A family with its seed and size parameters. Bipartite families read
/// `terminals` as the client count and `nodes − terminals` as the
/// facility count.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilySpec {
    pub family: Family,
    pub seed: u64,
    pub nodes: usize,
    pub terminals: usize,
    /// Edge count for the graph families, level-list length for installation.
    pub edges: usize,
    pub levels: usize,
    /// Slope target of the set-cover and facility-location families.
    #[serde(serialize_with = "literal")]
    pub theta: Rational,
    /// Uniform family with every weight and service threshold equal to one.
    pub unit_weights: bool,
}

fn literal<S: serde::Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_literal())
}

impl FamilySpec {
    /// Desk-scale defaults: at most 10 nodes and 6 terminals.
    pub fn new(family: Family, seed: u64) -> Self {
        let (nodes, terminals, edges) = match family {
            Family::UnitRandom => (14, 10, 20),
            Family::Tight73 => (73, 48, 96),
            _ => (10, 6, 14),
        };
        FamilySpec {
            family,
            seed,
            nodes,
            terminals,
            edges,
            levels: 3,
            theta: Rational::from_ratio(2, 1),
            unit_weights: false,
        }
    }
}

/// A generated instance; `order` is the adversarial facility order of
/// [`tight73`].
#[derive(Clone, Debug)]
pub struct Generated {
    pub instance: Instance<Rational>,
    pub order: Option<Vec<NodeId>>,
}

pub fn generate(spec: &FamilySpec) -> Result<Generated> {
    if spec.family == Family::Tight73 {
        let (instance, order) = tight73();
        return Ok(Generated { instance, order: Some(order) });
    }
    if spec.terminals == 0 || spec.terminals > spec.nodes {
        return Err(Error::DomainError("need 1 <= terminals <= nodes".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let facilities = spec.nodes - spec.terminals;
    for _ in 0..RETRIES {
        let inst = match spec.family {
            Family::MinPower => random_minpower(spec.nodes, spec.terminals, spec.edges, &mut rng)?,
            Family::GeneralRandom => random_general(spec.nodes, spec.terminals, spec.edges, &mut rng)?,
            Family::UnitRandom => random_unit(spec.nodes, spec.terminals, spec.edges, &mut rng)?,
            Family::FacilityLocation => random_facility_location(spec.terminals, facilities, &spec.theta, &mut rng)?,
            Family::ThetaSetcover => random_theta_setcover(spec.terminals, facilities, &spec.theta, &mut rng)?,
            Family::UniformRandom => random_uniform(spec.terminals, facilities, spec.unit_weights, &mut rng)?,
            Family::Installation => random_installation(spec.nodes, spec.terminals, spec.edges, spec.levels, &mut rng)?,
            Family::Tight73 => unreachable!(),
        };
        if inst.terminals().iter().all(|&t| !inst.incident(t).is_empty()) {
            return Ok(Generated { instance: inst, order: None });
        }
    }
    Err(Error::GenerationFailed(RETRIES))
}

fn r(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn names(prefix: &str, count: usize) -> Vec<String> {
    (0..count).map(|i| format!("{prefix}{i}")).collect()
}

/// `m` distinct node pairs drawn uniformly, with a random terminal subset.
fn random_graph(n: usize, terminals: usize, m: usize, rng: &mut ChaCha8Rng) -> (Vec<String>, Vec<NodeId>, Vec<(usize, usize)>) {
    let mut all: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    all.shuffle(rng);
    all.truncate(m);
    all.sort_unstable();
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    let mut chosen: Vec<NodeId> = ids[..terminals].iter().map(|&i| NodeId(i)).collect();
    chosen.sort_unstable();
    (names("n", n), chosen, all)
}

/// Equal thresholds on both sides of every edge, drawn from `{1, 2, 3}`.
pub fn random_minpower(n: usize, terminals: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<Instance<Rational>> {
    let (names, terms, pairs) = random_graph(n, terminals, m, rng);
    let edges = pairs
        .into_iter()
        .map(|(u, v)| {
            let p = r(rng.random_range(1..=3), 1);
            Edge::new(NodeId(u), NodeId(v), p.clone(), p)
        })
        .collect();
    Instance::from_parts(names, terms, edges)
}

const GENERAL_POOL: [(i64, i64); 5] = [(1, 2), (1, 1), (3, 2), (2, 1), (3, 1)];

/// Independent per-endpoint thresholds from a small rational pool.
pub fn random_general(n: usize, terminals: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<Instance<Rational>> {
    let (names, terms, pairs) = random_graph(n, terminals, m, rng);
    let draw = |rng: &mut ChaCha8Rng| {
        let (a, b) = GENERAL_POOL[rng.random_range(0..GENERAL_POOL.len())];
        r(a, b)
    };
    let edges = pairs
        .into_iter()
        .map(|(u, v)| {
            let tu = draw(rng);
            let tv = draw(rng);
            Edge::new(NodeId(u), NodeId(v), tu, tv)
        })
        .collect();
    Instance::from_parts(names, terms, edges)
}

/// All thresholds one; edges between two non-terminals are never drawn.
pub fn random_unit(n: usize, terminals: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<Instance<Rational>> {
    let names = names("n", n);
    let mut pairs: Vec<(usize, usize)> = (0..terminals).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs.shuffle(rng);
    // Terminal pairs are rare: keep at most one per draw.
    let mut seen_rr = false;
    pairs.retain(|&(_, v)| {
        if v < terminals {
            let keep = !seen_rr;
            seen_rr = true;
            keep
        } else {
            true
        }
    });
    pairs.truncate(m);
    pairs.sort_unstable();
    let edges = pairs.into_iter().map(|(u, v)| Edge::new(NodeId(u), NodeId(v), r(1, 1), r(1, 1))).collect();
    Instance::from_parts(names, (0..terminals).map(NodeId).collect(), edges)
}

fn bipartite_names(clients: usize, facilities: usize) -> Vec<String> {
    names("c", clients).into_iter().chain(names("f", facilities)).collect()
}

/// Each client joins each facility with probability one half.
fn random_incidence(clients: usize, facilities: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for c in 0..clients {
        for f in 0..facilities {
            if rng.random_bool(0.5) {
                out.push((c, f));
            }
        }
    }
    out
}

/// Bipartite instance: client `u`, facility `v`, `tu = d_uv`, `tv = w_v`.
pub fn from_facility_location<T: Scalar>(
    clients: &[String],
    facilities: &[String],
    opening: &[T],
    service: &[(usize, usize, T)],
) -> Result<Instance<T>> {
    if opening.len() != facilities.len() {
        return Err(Error::InvalidInstance("one opening cost per facility".into()));
    }
    if opening.iter().chain(service.iter().map(|s| &s.2)).any(|x| x < &T::zero()) {
        return Err(Error::DomainError("costs must be non-negative".into()));
    }
    let names: Vec<String> = clients.iter().chain(facilities).cloned().collect();
    let edges = service
        .iter()
        .map(|(c, f, d)| Edge::new(NodeId(*c), NodeId(clients.len() + f), d.clone(), opening[*f].clone()))
        .collect();
    Instance::from_parts(names, (0..clients.len()).map(NodeId).collect(), edges)
}

/// Facility slope `max w_v / d_uv` over service edges. Never below the
/// derived-cost slope of the reduced instance.
pub fn facility_theta<T: Scalar>(opening: &[T], service: &[(usize, usize, T)]) -> Slope<T> {
    service.iter().fold(Slope::Finite(T::zero()), |acc, (_, f, d)| {
        let w = &opening[*f];
        acc.max(match (d.is_zero(), w.is_zero()) {
            (_, true) => Slope::Finite(T::zero()),
            (true, false) => Slope::Infinite,
            (false, false) => Slope::Finite(w.clone() / d.clone()),
        })
    })
}

/// Facility location with `w_v <= θ · d_uv` on every edge.
pub fn random_facility_location(
    clients: usize,
    facilities: usize,
    theta: &Rational,
    rng: &mut ChaCha8Rng,
) -> Result<Instance<Rational>> {
    let pairs = random_incidence(clients, facilities, rng);
    let service: Vec<(usize, usize, Rational)> =
        pairs.iter().map(|&(c, f)| (c, f, r(rng.random_range(1..=4), 1))).collect();
    let opening = (0..facilities)
        .map(|f| {
            let cap = service
                .iter()
                .filter(|s| s.1 == f)
                .map(|s| theta.clone() * s.2.clone())
                .min()
                .unwrap_or_else(|| theta.clone());
            // A random fraction j/4 of the cap, j in 1..=4.
            cap * r(rng.random_range(1..=4), 4)
        })
        .collect::<Vec<_>>();
    from_facility_location(&names("c", clients), &names("f", facilities), &opening, &service)
}

/// Set `v` with weight `w_v` pays `w_v / θ` per covered element:
/// `tu = w_v / θ` on the element side and `tv = w_v` on the set side.
pub fn from_theta_setcover<T: Scalar>(
    elements: &[String],
    sets: &[(String, Vec<usize>)],
    weights: &[T],
    theta: &T,
) -> Result<Instance<T>> {
    if theta <= &T::zero() {
        return Err(Error::DomainError("theta must be positive".into()));
    }
    let names: Vec<String> = elements.iter().cloned().chain(sets.iter().map(|s| s.0.clone())).collect();
    let mut edges = Vec::new();
    for (j, (_, members)) in sets.iter().enumerate() {
        let w = &weights[j];
        for &e in members {
            edges.push(Edge::new(NodeId(e), NodeId(elements.len() + j), w.clone() / theta.clone(), w.clone()));
        }
    }
    Instance::from_parts(names, (0..elements.len()).map(NodeId).collect(), edges)
}

pub fn random_theta_setcover(
    elements: usize,
    sets: usize,
    theta: &Rational,
    rng: &mut ChaCha8Rng,
) -> Result<Instance<Rational>> {
    let pairs = random_incidence(elements, sets, rng);
    let set_list: Vec<(String, Vec<usize>)> = (0..sets)
        .map(|j| (format!("f{j}"), pairs.iter().filter(|p| p.1 == j).map(|p| p.0).collect()))
        .collect();
    let weights: Vec<Rational> = (0..sets).map(|_| r(rng.random_range(1..=5), 1)).collect();
    from_theta_setcover(&names("c", elements), &set_list, &weights, theta)
}

/// Bipartite instance with one weight and one service threshold per facility.
pub fn random_uniform(clients: usize, facilities: usize, unit: bool, rng: &mut ChaCha8Rng) -> Result<Instance<Rational>> {
    let pairs = random_incidence(clients, facilities, rng);
    let params: Vec<(Rational, Rational)> = (0..facilities)
        .map(|_| {
            if unit {
                (r(1, 1), r(1, 1))
            } else {
                (r(rng.random_range(1..=6), 1), r(rng.random_range(1..=3), 1))
            }
        })
        .collect();
    let edges = pairs
        .into_iter()
        .map(|(c, f)| Edge::new(NodeId(c), NodeId(clients + f), params[f].1.clone(), params[f].0.clone()))
        .collect();
    Instance::from_parts(bipartite_names(clients, facilities), (0..clients).map(NodeId).collect(), edges)
}

/// One installation record: `γ_uv a_u + γ_vu a_v >= h` activates `uv`.
#[derive(Clone, Debug, PartialEq)]
pub struct InstallationPair<T> {
    pub u: usize,
    pub v: usize,
    pub demand: T,
    pub gamma_uv: T,
    pub gamma_vu: T,
}

pub fn from_installation<T: Scalar>(
    nodes: &[String],
    terminals: &[usize],
    levels: Vec<Vec<T>>,
    pairs: &[InstallationPair<T>],
) -> Result<Instance<T>> {
    let spec = ActivationSpec {
        names: nodes.to_vec(),
        levels,
        pairs: pairs
            .iter()
            .map(|p| ActivationPair {
                u: NodeId(p.u),
                v: NodeId(p.v),
                predicate: Predicate::Installation {
                    demand: p.demand.clone(),
                    gamma_uv: p.gamma_uv.clone(),
                    gamma_vu: p.gamma_vu.clone(),
                },
            })
            .collect(),
    };
    let terminals: Vec<NodeId> = terminals.iter().map(|&t| NodeId(t)).collect();
    levels_reduction(&spec, &terminals)
}

/// The installation model behind [`random_installation`], exposed so the
/// activation formulation can be checked directly.
pub fn random_installation_spec(
    n: usize,
    terminals: usize,
    m: usize,
    levels: usize,
    rng: &mut ChaCha8Rng,
) -> (ActivationSpec<Rational>, Vec<NodeId>) {
    let (names, terms, pairs) = random_graph(n, terminals, m, rng);
    let level_lists = (0..n)
        .map(|_| {
            let mut pool: Vec<i64> = (1..=6).collect();
            pool.shuffle(rng);
            let mut l: Vec<i64> = pool[..levels.clamp(1, 6)].to_vec();
            l.sort_unstable();
            l.into_iter().map(|x| r(x, 1)).collect()
        })
        .collect();
    let pairs = pairs
        .into_iter()
        .map(|(u, v)| ActivationPair {
            u: NodeId(u),
            v: NodeId(v),
            predicate: Predicate::Installation {
                demand: r(rng.random_range(1..=8), 1),
                gamma_uv: r(rng.random_range(1..=2), 1),
                gamma_vu: r(rng.random_range(1..=2), 1),
            },
        })
        .collect();
    (ActivationSpec { names, levels: level_lists, pairs }, terms)
}

pub fn random_installation(
    n: usize,
    terminals: usize,
    m: usize,
    levels: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Instance<Rational>> {
    let (spec, terms) = random_installation_spec(n, terminals, m, levels, rng);
    levels_reduction(&spec, &terms)
}

/// The 48-terminal instance on which the average-price greedy can pay 73
/// against an optimum of 60, with the facility order that makes it do so.
///
/// Twelve upper nodes each serve four private terminals (the optimum).
/// Thirteen bottom nodes of degrees 4, 4, 4, 3, 3, 3, 3, 2, 2, 2, 2, 2, 2
/// take leaf 1, 2 or 3 of distinct upper stars; leaf 4 is reachable only
/// from its upper node. All thresholds are one.
pub fn tight73() -> (Instance<Rational>, Vec<NodeId>) {
    let mut names = Vec::new();
    for s in 0..12 {
        for l in 1..=4 {
            names.push(format!("T{s:02}_{l}"));
        }
    }
    let leaf = |s: usize, l: usize| NodeId(4 * s + l - 1);
    let upper = |s: usize| NodeId(48 + s);
    let bottom = |b: usize| NodeId(60 + b);
    names.extend((0..12).map(|s| format!("U{s:02}")));
    names.extend((0..13).map(|b| format!("B{b:02}")));
    let one = || r(1, 1);
    let mut edges = Vec::new();
    for s in 0..12 {
        for l in 1..=4 {
            edges.push(Edge::new(leaf(s, l), upper(s), one(), one()));
        }
    }
    // (first bottom, bottom count, leaf index, uppers per bottom)
    for (first, count, l, per) in [(0, 3, 1, 4), (3, 4, 2, 3), (7, 6, 3, 2)] {
        for b in 0..count {
            for j in 0..per {
                edges.push(Edge::new(leaf(b * per + j, l), bottom(first + b), one(), one()));
            }
        }
    }
    let inst = Instance::from_parts(names, (0..48).map(NodeId).collect(), edges).expect("valid construction");
    let order = (0..13).map(bottom).chain((0..12).map(upper)).collect();
    (inst, order)
}
