//! Acceptance suite: nine criteria, one PASS/FAIL line each.
//!
//! Lines go straight to stderr so they show without `--nocapture`.

use std::collections::BTreeMap;
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use actcover::bench::{classical_greedy_sequence, run, Algorithm, RunOptions};
use actcover::bounds::{alpha_table, algorithm1_constant, k_theta, omega_bar, rho_from};
use actcover::derive_costs;
use actcover::general::{min_density_star, GeneralState};
use actcover::generators::{generate, tight73, Family, FamilySpec};
use actcover::oracle::{exact_solve, ExactLimits};
use actcover::reference;
use actcover::report::{bench, BenchReport};
use actcover::uniform::{solve_locally_uniform, validate_locally_uniform, TieBreak};
use actcover::unit::{exact_2setcover, exact_bb, CoverProblem, CoverSet};
use actcover::{Assignment, NodeId, Rational, Scalar, Slope};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEEDS: u64 = 200;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome { passed, detail: detail.into() }
    }
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

// Criterion 1.

const TABLE1: [(&str, [Option<f64>; 10]); 4] = [
    (
        "1+omega(theta)",
        [Some(1.2785), Some(1.4631), Some(1.6036), Some(1.7179), Some(1.8146), Some(2.1569), Some(3.6360), Some(5.4214), Some(7.3603), Some(11.4673)],
    ),
    (
        "1+omegabar(theta)",
        [Some(1.2167), Some(1.3667), Some(1.4834), Some(1.5800), Some(1.6637), Some(1.9645), Some(3.3428), Some(5.0808), Some(6.9967), Some(11.0820)],
    ),
    (
        "ln(theta)-lnln(theta)",
        [None, Some(1.0597), Some(1.0046), Some(1.0597), Some(1.1336), Some(1.4686), Some(3.0780), Some(4.9752), Some(6.9901), Some(11.1898)],
    ),
    (
        "1+ln(theta+1)",
        [Some(1.6932), Some(2.0987), Some(2.3863), Some(2.6095), Some(2.7918), Some(3.3979), Some(5.6152), Some(7.9088), Some(10.2105), Some(14.8156)],
    ),
];

fn table1_reproduction() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_actcover")).args(["bounds", "--table1"]).output().expect("binary runs");
    let elapsed = start.elapsed();
    if !out.status.success() {
        return Outcome::new(false, format!("exit status {}", out.status));
    }
    let text = String::from_utf8(out.stdout).expect("utf-8");
    let mut worst = 0.0f64;
    let mut compared = 0;
    for (label, expected) in TABLE1 {
        let Some(line) = text.lines().find(|l| l.starts_with(label)) else {
            return Outcome::new(false, format!("row {label} missing"));
        };
        let cells: Vec<&str> = line[label.len()..].split_whitespace().collect();
        if cells.len() != expected.len() {
            return Outcome::new(false, format!("row {label} has {} cells", cells.len()));
        }
        for (cell, want) in cells.iter().zip(expected) {
            match want {
                Some(want) => {
                    let got: f64 = cell.parse().expect("numeric cell");
                    worst = worst.max((got - want).abs());
                    compared += 1;
                }
                None => {
                    if *cell != "-" {
                        return Outcome::new(false, format!("row {label} prints {cell} where the table has none"));
                    }
                }
            }
        }
    }
    Outcome::new(
        worst <= 5e-5 && elapsed < Duration::from_secs(1),
        format!("{compared} entries, max deviation {worst:.1e}, {} ms", elapsed.as_millis()),
    )
}

// Criterion 2.

fn exact_constants() -> Outcome {
    let start = Instant::now();
    let one = Slope::Finite(rat(1, 1));
    let omega_bar_one: Rational = omega_bar(&one, None).unwrap();
    let k_one = k_theta(&rat(1, 1)).unwrap();
    let (argmax, constant) = algorithm1_constant::<Rational>(100);
    let table = alpha_table::<Rational>();
    let rho_direct = rho_from(&rat(28, 15), &rat(1581, 240));
    let checks = [
        ("omegabar(1) = 13/60", omega_bar_one == rat(13, 60)),
        ("k_theta(1) = 4", k_one == 4),
        ("algorithm-1 constant = 67/360 at k = 5", constant == rat(67, 360) && argmax == 5),
        ("sigma = 1581/240", table.sigma == rat(1581, 240)),
        ("rho = 1555/1347", table.rho == rat(1555, 1347) && rho_direct == rat(1555, 1347)),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    let elapsed = start.elapsed();
    let passed = failed.is_empty() && elapsed < Duration::from_secs(1);
    let detail = if failed.is_empty() {
        format!("{} identities exact, {} ms", checks.len(), elapsed.as_millis())
    } else {
        format!("failed: {}", failed.join("; "))
    };
    Outcome::new(passed, detail)
}

// Criterion 3.

fn tight_example() -> Outcome {
    let start = Instant::now();
    let (inst, order) = tight73();
    let limits = ExactLimits { force: true, ..ExactLimits::default() };
    let opt = exact_solve(&inst, &limits).unwrap();
    let ubi = validate_locally_uniform(&inst).unwrap();
    let greedy = solve_locally_uniform(&ubi, &TieBreak::Priority(order)).unwrap();
    let ratio = greedy.value.clone() / opt.value.clone();
    let elapsed = start.elapsed();
    Outcome::new(
        opt.optimal && opt.value == rat(60, 1) && greedy.value == rat(73, 1) && ratio == rat(73, 60)
            && elapsed < Duration::from_secs(10),
        format!("oracle {}, greedy {}, ratio {}, {} ms", opt.value, greedy.value, ratio, elapsed.as_millis()),
    )
}

// Criteria 4 to 6 share their campaigns with 8 and 9.

struct Campaign {
    label: String,
    report: BenchReport,
    elapsed: Duration,
}

fn campaign(label: &str, spec: FamilySpec, algorithms: &[Algorithm]) -> Campaign {
    let start = Instant::now();
    let report = bench(&spec, 0..SEEDS, algorithms, &RunOptions::default(), &ExactLimits::default()).unwrap();
    Campaign { label: label.to_string(), report, elapsed: start.elapsed() }
}

fn general_campaigns() -> Vec<Campaign> {
    let mut out = vec![campaign("min-power", FamilySpec::new(Family::MinPower, 0), &[Algorithm::General])];
    for theta in [2, 5, 10] {
        let spec = FamilySpec { theta: rat(theta, 1), ..FamilySpec::new(Family::ThetaSetcover, 0) };
        out.push(campaign(&format!("theta-setcover θ={theta}"), spec, &[Algorithm::General]));
    }
    out.push(campaign("installation", FamilySpec::new(Family::Installation, 0), &[Algorithm::General]));
    out
}

/// Violations of the checks in `names`, counted over all campaigns, with
/// how often those checks were evaluated and how many instances were skipped.
fn tally(campaigns: &[Campaign], names: &[&str], algorithm: Option<Algorithm>) -> (usize, usize, usize, Vec<String>) {
    let mut evaluated = 0;
    let mut skipped = 0;
    let mut violations = Vec::new();
    for c in campaigns {
        skipped += c.report.skipped();
        evaluated += names.iter().map(|n| c.report.checks_evaluated.get(*n).copied().unwrap_or(0)).sum::<usize>();
        for v in &c.report.violations {
            let relevant = names.contains(&v.check.as_str()) || v.check == "run" || v.check == "generated-feasible";
            if relevant && (algorithm.is_none() || v.algorithm == algorithm || v.algorithm.is_none()) {
                violations.push(format!("{} seed {} {}: {}", c.label, v.seed, v.check, v.detail));
            }
        }
    }
    (evaluated, skipped, violations.len(), violations)
}

fn describe(evaluated: usize, skipped: usize, violations: &[String], elapsed: Duration) -> String {
    let mut s = format!("{evaluated} checks, {skipped} skipped, {} violations, {:.1} s", violations.len(), elapsed.as_secs_f64());
    if let Some(first) = violations.first() {
        s.push_str(&format!("; first: {first}"));
    }
    s
}

fn general_certification(campaigns: &[Campaign]) -> Outcome {
    let names = ["feasible", "value-matches-assignment", "oracle-at-most-solver", "ratio", "ratio-omega", "ratio-ln-delta"];
    let (evaluated, skipped, count, violations) = tally(campaigns, &names, Some(Algorithm::General));
    let elapsed: Duration = campaigns.iter().map(|c| c.elapsed).sum();
    let runs: usize = campaigns.iter().flat_map(|c| &c.report.summary).map(|s| s.runs).sum();
    let max_ratio = campaigns.iter().flat_map(|c| &c.report.summary).map(|s| s.max_ratio).fold(1.0, f64::max);
    Outcome::new(
        count == 0 && skipped == 0 && runs == 5 * SEEDS as usize && elapsed < Duration::from_secs(300),
        format!("{runs} runs, max ratio {max_ratio}, {}", describe(evaluated, skipped, &violations, elapsed)),
    )
}

fn uniform_certification(campaign: &Campaign) -> Outcome {
    let start = Instant::now();
    let names = ["feasible", "value-matches-assignment", "oracle-at-most-solver", "ratio", "star-accounting"];
    let (evaluated, skipped, count, violations) =
        tally(std::slice::from_ref(campaign), &names, Some(Algorithm::LocallyUniform));
    let mut mismatches = Vec::new();
    for seed in 0..SEEDS {
        let spec = FamilySpec { unit_weights: true, ..FamilySpec::new(Family::UniformRandom, seed) };
        let inst = generate(&spec).unwrap().instance;
        let ubi = validate_locally_uniform(&inst).unwrap();
        let sol = solve_locally_uniform(&ubi, &TieBreak::LowestId).unwrap();
        let picks: Vec<NodeId> = sol.picks.iter().map(|p| p.facility).collect();
        if picks != classical_greedy_sequence(&ubi) {
            mismatches.push(seed);
        }
    }
    let elapsed = campaign.elapsed + start.elapsed();
    let max_ratio = campaign.report.summary.iter().find(|s| s.algorithm == Algorithm::LocallyUniform).map(|s| s.max_ratio);
    Outcome::new(
        count == 0 && skipped == 0 && mismatches.is_empty() && elapsed < Duration::from_secs(120),
        format!(
            "max ratio {:?}, {}; unit-weight sequences: {} of {SEEDS} equal",
            max_ratio,
            describe(evaluated, skipped, &violations, elapsed),
            SEEDS as usize - mismatches.len()
        ),
    )
}

fn unit_certification(campaign: &Campaign) -> Outcome {
    let names = ["feasible", "value-matches-assignment", "oracle-at-most-solver", "ratio", "unit-optimum-structure", "unit-audit"];
    let mut violations = Vec::new();
    let mut evaluated = 0;
    for algorithm in [Algorithm::UnitA1, Algorithm::UnitA2] {
        let (e, _, _, v) = tally(std::slice::from_ref(campaign), &names, Some(algorithm));
        evaluated = e;
        violations.extend(v);
    }
    violations.sort();
    violations.dedup();
    // The claimed bounds must be the stated constants, not something looser.
    let mut wrong_bounds = 0;
    let mut residual_too_big = 0;
    for inst in &campaign.report.instances {
        for r in &inst.runs {
            let want = match r.algorithm {
                Algorithm::UnitA1 => Some("427/360"),
                Algorithm::UnitA2 => Some("1555/1347"),
                _ => None,
            };
            if want.is_some() && r.claimed_bound_exact.as_deref() != want {
                wrong_bounds += 1;
            }
        }
    }
    for seed in 0..SEEDS {
        let inst = generate(&FamilySpec::new(Family::UnitRandom, seed)).unwrap().instance;
        let res = actcover::unit::reduce_unit(&inst).unwrap();
        if res.problem.elements.len() > 10 {
            residual_too_big += 1;
        }
    }
    let skipped = campaign.report.skipped();
    let maxima: BTreeMap<String, f64> =
        campaign.report.summary.iter().map(|s| (s.algorithm.to_string(), s.max_ratio)).collect();
    Outcome::new(
        violations.is_empty()
            && skipped == 0
            && wrong_bounds == 0
            && residual_too_big == 0
            && campaign.elapsed < Duration::from_secs(300),
        format!(
            "max ratios {maxima:?}, {wrong_bounds} wrong bound claims, {}",
            describe(evaluated, skipped, &violations, campaign.elapsed)
        ),
    )
}

// Criterion 7.

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
    for e in 0..n {
        if !sets.iter().any(|s| s.members.contains(&e)) {
            let root = NodeId(n + sets.len());
            sets.push(CoverSet { root, members: vec![e] });
        }
    }
    CoverProblem { elements, sets }
}

fn sub_oracles() -> Outcome {
    let start = Instant::now();
    let families = [Family::MinPower, Family::GeneralRandom, Family::Installation, Family::ThetaSetcover, Family::UniformRandom];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut star_mismatch = Vec::new();
    for seed in 0..SEEDS {
        let family = families[seed as usize % families.len()];
        let inst = generate(&FamilySpec::new(family, seed)).unwrap().instance;
        let costs = derive_costs(&inst).unwrap();
        let mut extra = Assignment::zeros(inst.node_count());
        if seed % 2 == 1 {
            for v in inst.nodes() {
                let incident = inst.incident(v);
                if !incident.is_empty() && rng.random_bool(0.3) {
                    let e = inst.edge(incident[rng.random_range(0..incident.len())]);
                    extra.set(v, e.threshold_at(v).clone());
                }
            }
        }
        let state = GeneralState::new(&inst, &costs, extra);
        let fast = min_density_star(&inst, &costs, &state).map(|s| s.density());
        if fast != reference::min_star_density(&inst, &costs, &state) {
            star_mismatch.push(seed);
        }
    }
    let mut matching_mismatch = 0;
    let mut bb_mismatch = 0;
    for case in 0..500u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(case);
        let problem = random_cover(&mut rng, 2);
        let sol = exact_2setcover(&problem).unwrap();
        if !problem.is_cover(&sol.chosen) || Some(sol.size()) != reference::set_cover_optimum(&problem) {
            matching_mismatch += 1;
        }
        let k = rng.random_range(1..=6);
        let problem = random_cover(&mut rng, k);
        let sol = exact_bb(&problem, k).unwrap();
        if !problem.is_cover(&sol.chosen) || Some(sol.size()) != reference::set_cover_optimum(&problem) {
            bb_mismatch += 1;
        }
    }
    let elapsed = start.elapsed();
    Outcome::new(
        star_mismatch.is_empty() && matching_mismatch == 0 && bb_mismatch == 0 && elapsed < Duration::from_secs(300),
        format!(
            "star {}/{SEEDS}, matching {}/500, branch-and-bound {}/500 agree, {:.1} s",
            SEEDS as usize - star_mismatch.len(),
            500 - matching_mismatch,
            500 - bb_mismatch,
            elapsed.as_secs_f64()
        ),
    )
}

// Criteria 8 and 9 read every campaign.

fn trace_inequality(all: &[&Campaign]) -> Outcome {
    let mut evaluated = 0;
    let mut violations = Vec::new();
    for c in all {
        evaluated += c.report.checks_evaluated.get("darboux").copied().unwrap_or(0);
        for v in c.report.violations.iter().filter(|v| v.check == "darboux") {
            violations.push(format!("{} seed {}: {}", c.label, v.seed, v.detail));
        }
    }
    Outcome::new(
        violations.is_empty() && evaluated > 0,
        format!("{evaluated} runs with ν0 > ν* + τ*, {} violations", violations.len()),
    )
}

fn potential_bounds(all: &[&Campaign]) -> Outcome {
    let names = ["payment-lower", "potential-upper", "potential-spread", "potential-spread-independent"];
    let mut lines = Vec::new();
    let mut failed = false;
    for name in names {
        let evaluated: usize = all.iter().map(|c| c.report.checks_evaluated.get(name).copied().unwrap_or(0)).sum();
        let mut bad = Vec::new();
        for c in all {
            for v in c.report.violations.iter().filter(|v| v.check == name) {
                bad.push(format!("{} seed {} ({})", c.label, v.seed, v.detail));
            }
        }
        failed |= !bad.is_empty() || evaluated == 0;
        let mut line = format!("{name} {}/{evaluated}", evaluated - bad.len());
        if let Some(first) = bad.first() {
            line.push_str(&format!(" [first failure: {first}]"));
        }
        lines.push(line);
    }
    Outcome::new(!failed, lines.join(", "))
}

fn report(number: usize, title: &str, outcome: &Outcome) {
    let verdict = if outcome.passed { "PASS" } else { "FAIL" };
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "criterion {number} {verdict}: {title} -- {}", outcome.detail);
}

#[test]
fn acceptance() {
    let mut results = Vec::new();
    let mut record = |number: usize, title: &str, outcome: Outcome| {
        report(number, title, &outcome);
        results.push((number, outcome.passed));
    };
    record(1, "table of bounds", table1_reproduction());
    record(2, "exact constants", exact_constants());
    record(3, "tight example 73 against 60", tight_example());

    let general = general_campaigns();
    record(4, "general solver certification", general_certification(&general));

    let uniform = campaign(
        "uniform-random",
        FamilySpec::new(Family::UniformRandom, 0),
        &[Algorithm::LocallyUniform, Algorithm::General],
    );
    record(5, "locally uniform certification", uniform_certification(&uniform));

    let unit = campaign(
        "unit-random",
        FamilySpec::new(Family::UnitRandom, 0),
        &[Algorithm::UnitA1, Algorithm::UnitA2, Algorithm::General],
    );
    record(6, "unit threshold certification", unit_certification(&unit));

    record(7, "sub-oracle equivalences", sub_oracles());

    let all: Vec<&Campaign> = general.iter().chain([&uniform, &unit]).collect();
    record(8, "trace inequality", trace_inequality(&all));
    record(9, "potential bounds", potential_bounds(&all));

    // The tight example must also be reachable through the solver dispatch.
    let (inst, order) = tight73();
    let via_run = run(&inst, Algorithm::LocallyUniform, &RunOptions { tie_break: TieBreak::Priority(order), ..RunOptions::default() })
        .unwrap();
    assert_eq!(via_run.value, rat(73, 1));

    let failed: Vec<usize> = results.iter().filter(|r| !r.1).map(|r| r.0).collect();
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "acceptance: {} of {} criteria pass", results.len() - failed.len(), results.len());
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
