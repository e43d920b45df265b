//! Certification harness behaviour on hand-built instances.

use actcover::bench::{certify, run, Algorithm, RunOptions};
use actcover::oracle::{exact_solve, ExactLimits};
use actcover::{derive_costs, Instance, Rational, Scalar};

fn r(n: i64) -> Rational {
    Rational::from_ratio(n, 1)
}

/// Two adjacent terminals: the optimum pays one unit above `q`, while
/// `c(R)` is five and every node has at most one terminal neighbour.
fn adjacent_terminals() -> Instance<Rational> {
    Instance::new(&["a", "b", "s"], &["a", "b"], vec![("a", "b", r(3), r(3)), ("a", "s", r(2), r(2))]).unwrap()
}

#[test]
fn spread_can_exceed_degree_bound_with_adjacent_terminals() {
    let inst = adjacent_terminals();
    let costs = derive_costs(&inst).unwrap();
    assert_eq!(costs.q_sum, r(5));
    assert_eq!(costs.c_sum, r(5));
    assert_eq!(costs.delta, 1);
    assert!(!costs.terminals_independent);
    let opt = exact_solve(&inst, &ExactLimits::default()).unwrap();
    assert_eq!(opt.value, r(6));
    let tau_star = opt.value.clone() - costs.q_sum.clone();
    assert!(costs.c_sum > tau_star * Rational::of_usize(costs.delta + 1));

    let out = run(&inst, Algorithm::General, &RunOptions::default()).unwrap();
    let checks = certify(&inst, &out, &opt).unwrap();
    let spread = checks.iter().find(|c| c.name == "potential-spread").unwrap();
    assert!(!spread.passed);
    for c in checks.iter().filter(|c| c.name != "potential-spread") {
        assert!(c.passed, "{}: {}", c.name, c.detail);
    }
}
