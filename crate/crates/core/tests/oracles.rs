//! Exact oracles and sub-oracles against exhaustive enumeration.

use actcover::derive_costs;
use actcover::general::{min_density_star, GeneralState};
use actcover::generators::{
    from_facility_location, generate, random_installation_spec, Family, FamilySpec,
};
use actcover::levels::{is_level_or_zero, levels_reduction};
use actcover::oracle::{exact_solve, ExactLimits};
use actcover::reference;
use actcover::unit::{exact_2setcover, exact_bb, greedy_hk, CoverProblem, CoverSet};
use actcover::{Assignment, Instance, NodeId, Rational, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small(family: Family, seed: u64) -> Instance<Rational> {
    let spec = FamilySpec { nodes: 7, terminals: 4, edges: 9, ..FamilySpec::new(family, seed) };
    generate(&spec).unwrap().instance
}

const SMALL_FAMILIES: [Family; 6] = [
    Family::MinPower,
    Family::GeneralRandom,
    Family::Installation,
    Family::ThetaSetcover,
    Family::FacilityLocation,
    Family::UniformRandom,
];

#[test]
fn oracle_matches_value_enumeration() {
    for family in SMALL_FAMILIES {
        for seed in 0..40 {
            let inst = small(family, seed);
            let exact = exact_solve(&inst, &ExactLimits::default()).unwrap();
            assert!(exact.optimal);
            assert!(inst.covers(&exact.assignment).0);
            assert_eq!(exact.assignment.total(), exact.value);
            let brute = reference::aec_optimum(&inst).unwrap();
            assert_eq!(exact.value, brute, "{family} seed {seed}");
        }
    }
}

fn random_extra(inst: &Instance<Rational>, rng: &mut ChaCha8Rng) -> Assignment<Rational> {
    let mut extra = Assignment::zeros(inst.node_count());
    for v in inst.nodes() {
        let incident = inst.incident(v);
        if !incident.is_empty() && rng.random_bool(0.3) {
            let e = inst.edge(incident[rng.random_range(0..incident.len())]);
            extra.set(v, e.threshold_at(v).clone());
        }
    }
    extra
}

#[test]
fn min_density_star_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for seed in 0..200 {
        let family = SMALL_FAMILIES[seed as usize % SMALL_FAMILIES.len()];
        let inst = generate(&FamilySpec::new(family, seed)).unwrap().instance;
        let costs = derive_costs(&inst).unwrap();
        let extra = if seed % 2 == 0 { Assignment::zeros(inst.node_count()) } else { random_extra(&inst, &mut rng) };
        let state = GeneralState::new(&inst, &costs, extra);
        let fast = min_density_star(&inst, &costs, &state).map(|s| s.density());
        let brute = reference::min_star_density(&inst, &costs, &state);
        assert_eq!(fast, brute, "{family} seed {seed}");
    }
}

fn random_cover(rng: &mut ChaCha8Rng, max_size: usize) -> CoverProblem {
    let n = rng.random_range(1..=12);
    let m = rng.random_range(1..=14);
    let elements: Vec<NodeId> = (0..n).map(NodeId).collect();
    let mut sets: Vec<CoverSet> = (0..m)
        .map(|j| {
            let size = rng.random_range(1..=max_size.min(n));
            let mut members: Vec<usize> = (0..n).collect();
            for i in 0..size {
                let k = rng.random_range(i..n);
                members.swap(i, k);
            }
            members.truncate(size);
            members.sort_unstable();
            CoverSet { root: NodeId(n + j), members }
        })
        .collect();
    // Singletons for anything left uncovered.
    for e in 0..n {
        if !sets.iter().any(|s| s.members.contains(&e)) {
            let root = NodeId(n + sets.len());
            sets.push(CoverSet { root, members: vec![e] });
        }
    }
    CoverProblem { elements, sets }
}

#[test]
fn matching_cover_matches_subset_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..500 {
        let problem = random_cover(&mut rng, 2);
        let sol = exact_2setcover(&problem).unwrap();
        assert!(problem.is_cover(&sol.chosen), "case {case}");
        assert_eq!(Some(sol.size()), reference::set_cover_optimum(&problem), "case {case}");
    }
}

#[test]
fn branch_and_bound_matches_subset_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for case in 0..500 {
        let k = rng.random_range(1..=6);
        let problem = random_cover(&mut rng, k);
        let sol = exact_bb(&problem, k).unwrap();
        assert!(problem.is_cover(&sol.chosen), "case {case}");
        assert_eq!(Some(sol.size()), reference::set_cover_optimum(&problem), "case {case}");
    }
}

#[test]
fn greedy_within_harmonic_factor() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for case in 0..300 {
        let k = rng.random_range(1..=6);
        let problem = random_cover(&mut rng, k);
        let greedy = greedy_hk(&problem, k).unwrap();
        assert!(problem.is_cover(&greedy.chosen));
        let opt = reference::set_cover_optimum(&problem).unwrap();
        let hk: Rational = (1..=k).map(|i| Rational::from_ratio(1, i as i64)).sum();
        let bound = hk * Rational::of_usize(opt);
        assert!(Rational::of_usize(greedy.size()) <= bound, "case {case}");
    }
}

#[test]
fn installation_matches_level_enumeration() {
    for seed in 0..60 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (spec, terminals) = random_installation_spec(6, 3, 8, 3, &mut rng);
        let brute = reference::levels_optimum(&spec, &terminals);
        let inst = levels_reduction(&spec, &terminals).unwrap();
        match exact_solve(&inst, &ExactLimits::default()) {
            Ok(exact) => {
                assert_eq!(Some(exact.value.clone()), brute, "seed {seed}");
                for v in inst.nodes() {
                    assert!(is_level_or_zero(&spec, v, exact.assignment.get(v)));
                }
            }
            Err(_) => assert_eq!(brute, None, "seed {seed}"),
        }
    }
}

#[test]
fn facility_location_matches_subset_enumeration() {
    for seed in 0..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let clients = rng.random_range(1..=4);
        let facilities = rng.random_range(1..=6);
        let opening: Vec<Rational> =
            (0..facilities).map(|_| Rational::from_ratio(rng.random_range(0..=6), 1)).collect();
        let mut service = Vec::new();
        for c in 0..clients {
            for f in 0..facilities {
                if f == c % facilities || rng.random_bool(0.5) {
                    service.push((c, f, Rational::from_ratio(rng.random_range(0..=5), 1)));
                }
            }
        }
        let client_names: Vec<String> = (0..clients).map(|i| format!("c{i}")).collect();
        let facility_names: Vec<String> = (0..facilities).map(|i| format!("f{i}")).collect();
        let inst = from_facility_location(&client_names, &facility_names, &opening, &service).unwrap();
        let exact = exact_solve(&inst, &ExactLimits::default()).unwrap();
        let brute = reference::facility_location_optimum(clients, &opening, &service);
        assert_eq!(Some(exact.value), brute, "seed {seed}");
    }
}
