//! Greedy minimization of a decreasing potential plus a sub-additive payment.
//!
//! Starting from an empty solution, the greedy repeatedly asks an oracle for
//! a minimum-density augmentation (payment per unit of potential decrease)
//! and accepts it while its density is at most one. Minimum density plus the
//! `<= 1` test is all that is needed: if the best augmentation fails the
//! test, no augmentation can satisfy the stopping rule either.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An augmentation proposed by the oracle.
#[derive(Clone, Debug)]
pub struct Augmentation<S, T> {
    pub step: S,
    /// `τ(B)`.
    pub payment: T,
    /// `ν(A ∪ B)`.
    pub potential_after: T,
}

/// A problem instance for [`gmc_greedy`].
pub trait GmcProblem<T: Scalar> {
    type State: Clone;
    type Step;

    fn initial_state(&self) -> Self::State;
    /// `ν(A)`; must not increase when augmentations are applied.
    fn potential(&self, state: &Self::State) -> T;
    /// `ν*`, the potential of some optimal solution; the greedy stops once reached.
    fn target(&self) -> T;
    /// A minimum-density augmentation, or `None` when nothing decreases `ν`.
    fn min_density(&self, state: &Self::State) -> Option<Augmentation<Self::Step, T>>;
    fn apply(&self, state: &mut Self::State, step: &Self::Step);
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceStep<T> {
    pub payment: T,
    pub potential_before: T,
    pub potential_after: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    TargetReached,
    NoAugmentation,
    DensityAboveOne,
    ZeroGain,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GreedyTrace<T> {
    pub initial_potential: T,
    pub steps: Vec<TraceStep<T>>,
    pub stop: StopReason,
}

impl<T: Scalar> GreedyTrace<T> {
    /// `ν_ℓ`.
    pub fn final_potential(&self) -> &T {
        self.steps.last().map_or(&self.initial_potential, |s| &s.potential_after)
    }

    /// `Σ τ(B_i)`.
    pub fn total_payment(&self) -> T {
        self.steps.iter().fold(T::zero(), |acc, s| acc + s.payment.clone())
    }

    pub fn strictly_decreasing(&self) -> bool {
        let mut prev = &self.initial_potential;
        for s in &self.steps {
            if &s.potential_before != prev || s.potential_after >= s.potential_before {
                return false;
            }
            prev = &s.potential_after;
        }
        true
    }

    /// Every accepted step has density `τ(B_i) / (ν_{i-1} - ν_i) <= 1`.
    pub fn densities_at_most_one(&self) -> bool {
        self.steps
            .iter()
            .all(|s| s.payment <= s.potential_before.clone() - s.potential_after.clone())
    }

    /// Slack of `Σ τ(B_i) <= τ* + ν* - ν_ℓ + τ* ln((ν_0 - ν*)/τ*)`, i.e.
    /// right side minus left side. `None` unless `τ* > 0` and `ν_0 > ν* + τ*`.
    pub fn darboux_slack(&self, nu_star: &T, tau_star: &T) -> Option<f64> {
        if tau_star <= &T::zero() || self.initial_potential <= nu_star.clone() + tau_star.clone() {
            return None;
        }
        let exact_part = tau_star.clone() + nu_star.clone() - self.final_potential().clone();
        let log_arg = (self.initial_potential.clone() - nu_star.clone()) / tau_star.clone();
        let rhs = exact_part.as_f64() + tau_star.as_f64() * log_arg.as_f64().ln();
        Some(rhs - self.total_payment().as_f64())
    }

    pub fn summary(&self) -> TraceSummary {
        TraceSummary {
            initial_potential: self.initial_potential.to_literal(),
            final_potential: self.final_potential().to_literal(),
            total_payment: self.total_payment().to_literal(),
            stop: self.stop,
            steps: self
                .steps
                .iter()
                .enumerate()
                .map(|(index, s)| TraceRecord {
                    index,
                    payment: s.payment.to_literal(),
                    potential_before: s.potential_before.to_literal(),
                    potential_after: s.potential_after.to_literal(),
                })
                .collect(),
        }
    }
}

/// Serializable view of a trace.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceSummary {
    pub initial_potential: String,
    pub final_potential: String,
    pub total_payment: String,
    pub stop: StopReason,
    pub steps: Vec<TraceRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceRecord {
    pub index: usize,
    pub payment: String,
    pub potential_before: String,
    pub potential_after: String,
}

/// Runs the greedy and returns the final state with its trace.
pub fn gmc_greedy<T, P>(problem: &P) -> Result<(P::State, GreedyTrace<T>)>
where
    T: Scalar,
    P: GmcProblem<T>,
{
    let mut state = problem.initial_state();
    let target = problem.target();
    let initial_potential = problem.potential(&state);
    let mut current = initial_potential.clone();
    let mut steps = Vec::new();
    let stop = loop {
        if current <= target {
            break StopReason::TargetReached;
        }
        let Some(aug) = problem.min_density(&state) else {
            break StopReason::NoAugmentation;
        };
        if aug.potential_after > current {
            return Err(Error::OracleViolation {
                before: current.to_literal(),
                after: aug.potential_after.to_literal(),
            });
        }
        let gain = current.clone() - aug.potential_after.clone();
        if gain <= T::zero() {
            break StopReason::ZeroGain;
        }
        if aug.payment > gain {
            break StopReason::DensityAboveOne;
        }
        problem.apply(&mut state, &aug.step);
        debug_assert!(
            problem.potential(&state) == aug.potential_after,
            "oracle mispredicted the potential after its augmentation"
        );
        steps.push(TraceStep {
            payment: aug.payment,
            potential_before: current,
            potential_after: aug.potential_after.clone(),
        });
        current = aug.potential_after;
    };
    Ok((state, GreedyTrace { initial_potential, steps, stop }))
}

/// The greedy's guarantee `1 + τ*/(τ*+ν*) · ln((ν_0 − ν*)/τ*)`, or 1 when
/// `ν_0 − ν* <= τ*`.
pub fn theorem2_bound<T: Scalar>(nu0: &T, nu_star: &T, tau_star: &T) -> Result<f64> {
    if tau_star <= &T::zero() {
        return Err(Error::DomainError("optimal payment must be positive".into()));
    }
    let spread = nu0.clone() - nu_star.clone();
    if spread <= *tau_star {
        return Ok(1.0);
    }
    let opt = tau_star.clone() + nu_star.clone();
    let weight = (tau_star.clone() / opt).as_f64();
    Ok(1.0 + weight * (spread / tau_star.clone()).as_f64().ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    /// Items with fixed (payment, gain); potential = base + remaining gains.
    struct Table {
        items: Vec<(Rational, Rational)>,
        base: Rational,
    }

    impl GmcProblem<Rational> for Table {
        type State = Vec<bool>;
        type Step = usize;

        fn initial_state(&self) -> Vec<bool> {
            vec![false; self.items.len()]
        }

        fn potential(&self, taken: &Vec<bool>) -> Rational {
            self.items
                .iter()
                .zip(taken)
                .filter(|(_, &t)| !t)
                .fold(self.base.clone(), |acc, ((_, g), _)| acc + g.clone())
        }

        fn target(&self) -> Rational {
            self.base.clone()
        }

        fn min_density(&self, taken: &Vec<bool>) -> Option<Augmentation<usize, Rational>> {
            let now = self.potential(taken);
            (0..self.items.len())
                .filter(|&i| !taken[i] && self.items[i].1 > r(0, 1))
                .min_by(|&a, &b| {
                    let (pa, ga) = &self.items[a];
                    let (pb, gb) = &self.items[b];
                    (pa.clone() / ga.clone()).cmp(&(pb.clone() / gb.clone()))
                })
                .map(|i| Augmentation {
                    step: i,
                    payment: self.items[i].0.clone(),
                    potential_after: now - self.items[i].1.clone(),
                })
        }

        fn apply(&self, taken: &mut Vec<bool>, step: &usize) {
            taken[*step] = true;
        }
    }

    #[test]
    fn constant_potential_takes_no_step() {
        let problem = Table { items: vec![(r(1, 1), r(0, 1))], base: r(3, 1) };
        let (state, trace) = gmc_greedy(&problem).unwrap();
        assert!(trace.steps.is_empty());
        assert_eq!(state, vec![false]);
        assert_eq!(trace.stop, StopReason::TargetReached);
    }

    #[test]
    fn stops_at_first_density_above_one() {
        let problem = Table { items: vec![(r(1, 1), r(2, 1)), (r(4, 1), r(2, 1))], base: r(0, 1) };
        let (state, trace) = gmc_greedy(&problem).unwrap();
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(state, vec![true, false]);
        assert_eq!(trace.stop, StopReason::DensityAboveOne);
        assert!(trace.strictly_decreasing());
        assert!(trace.densities_at_most_one());
        assert_eq!(trace.total_payment(), r(1, 1));
        assert_eq!(trace.final_potential(), &r(2, 1));
    }

    struct Liar;

    impl GmcProblem<Rational> for Liar {
        type State = ();
        type Step = ();
        fn initial_state(&self) {}
        fn potential(&self, _: &()) -> Rational {
            r(1, 1)
        }
        fn target(&self) -> Rational {
            r(0, 1)
        }
        fn min_density(&self, _: &()) -> Option<Augmentation<(), Rational>> {
            Some(Augmentation { step: (), payment: r(0, 1), potential_after: r(2, 1) })
        }
        fn apply(&self, _: &mut (), _: &()) {}
    }

    #[test]
    fn increasing_potential_is_an_oracle_violation() {
        assert!(matches!(gmc_greedy(&Liar), Err(Error::OracleViolation { .. })));
    }

    #[test]
    fn bound_is_one_without_a_log_phase() {
        assert_eq!(theorem2_bound(&r(5, 1), &r(2, 1), &r(3, 1)).unwrap(), 1.0);
    }

    #[test]
    fn bound_with_unit_log() {
        let e = std::f64::consts::E;
        let b = theorem2_bound(&e, &0.0, &1.0).unwrap();
        assert!((b - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bound_rejects_nonpositive_optimal_payment() {
        assert!(matches!(theorem2_bound(&r(3, 1), &r(1, 1), &r(0, 1)), Err(Error::DomainError(_))));
    }
}
