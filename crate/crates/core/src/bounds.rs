//! Closed-form approximation bounds and the constants behind them.
//!
//! * `ω(θ)`: the real root of `x + 1 = ln(θ/x)`, i.e. `W(θ/e)`. For large
//!   `θ`, `1 + ω(θ)` approaches `ln θ − ln ln θ`.
//! * `ω̄(θ) = max_k (H_k − 1)/(1 + k/θ)`, attained at `k_θ`, the smallest `k`
//!   with `H_k >= 2 + (θ − 1)/(k + 1)`. There is no closed form; the scan is
//!   the definition.
//! * `α_k`: best known ratios for k-set-cover with sets of size `<= k`,
//!   and `ρ = (7α_6 − σ)/(6α_6 − σ + 1)` with `σ = α_1 + … + α_5`.
//!
//! Constants that are fractions are kept exact; floats only appear where a
//! logarithm or root is involved.

use std::fmt::Write as _;

use num_traits::Float;
use serde::Serialize;

use crate::costs::Slope;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `ω(θ)` by bisection on `(0, θ]`, where `h(x) = x + 1 − ln(θ/x)` is
/// strictly increasing with `h(θ) > 0`.
pub fn omega<F: Float>(theta: F) -> Result<F> {
    if theta.partial_cmp(&F::zero()) != Some(std::cmp::Ordering::Greater) || !theta.is_finite() {
        return Err(Error::DomainError("omega needs a finite positive theta".into()));
    }
    let h = |x: F| x + F::one() - (theta / x).ln();
    let mut hi = theta;
    let two = F::one() + F::one();
    let mut lo = theta / two;
    while h(lo) >= F::zero() {
        hi = lo;
        lo = lo / two;
    }
    loop {
        let mid = lo + (hi - lo) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) < F::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if h(hi).abs() < h(lo).abs() { hi } else { lo })
}

/// `H_k = 1 + 1/2 + … + 1/k`.
pub fn harmonic<T: Scalar>(k: usize) -> T {
    (1..=k).fold(T::zero(), |acc, i| acc + T::one() / T::of_usize(i))
}

/// `g(k) = θ(H_k − 1)/(θ + k)`, or `H_k − 1` for infinite `θ`.
fn g_value<T: Scalar>(theta: &Slope<T>, k: usize, h_k: &T) -> T {
    let excess = h_k.clone() - T::one();
    match theta {
        Slope::Finite(t) => t.clone() * excess / (t.clone() + T::of_usize(k)),
        Slope::Infinite => excess,
    }
}

/// Smallest `k >= 1` with `H_k >= 2 + (θ − 1)/(k + 1)`.
pub fn k_theta<T: Scalar>(theta: &T) -> Result<usize> {
    if theta <= &T::zero() {
        return Err(Error::DomainError("k_theta needs theta > 0".into()));
    }
    let two = T::one() + T::one();
    let mut h = T::zero();
    let mut k = 0usize;
    loop {
        k += 1;
        h = h + T::one() / T::of_usize(k);
        let rhs = two.clone() + (theta.clone() - T::one()) / T::of_usize(k + 1);
        if h >= rhs {
            return Ok(k);
        }
    }
}

/// `max_{1 <= k <= cap} (H_k − 1)/(1 + k/θ) = g(min(k_θ, cap))`.
/// Infinite `θ` requires a cap.
pub fn omega_bar<T: Scalar>(theta: &Slope<T>, cap: Option<usize>) -> Result<T> {
    if let Slope::Finite(t) = theta {
        if t <= &T::zero() {
            return Err(Error::DomainError("omega_bar needs theta > 0".into()));
        }
    }
    if cap == Some(0) {
        return Ok(T::zero());
    }
    if matches!(theta, Slope::Infinite) && cap.is_none() {
        return Err(Error::DomainError("omega_bar of an infinite slope needs a degree cap".into()));
    }
    let two = T::one() + T::one();
    let mut h = T::zero();
    let mut k = 0usize;
    loop {
        k += 1;
        h = h + T::one() / T::of_usize(k);
        let reached = match theta {
            Slope::Finite(t) => {
                h >= two.clone() + (t.clone() - T::one()) / T::of_usize(k + 1)
            }
            Slope::Infinite => false,
        };
        if reached || cap == Some(k) {
            return Ok(g_value(theta, k, &h));
        }
    }
}

/// Set-cover greedy guarantee `1 + ω̄(nM/τ)(1 + 1/M)` for `n` elements,
/// optimum size `τ` and any `M > 0`.
pub fn setcover_greedy_bound(n: f64, tau: f64, m: f64) -> Result<f64> {
    if !(n > 0.0 && tau > 0.0 && m > 0.0) {
        return Err(Error::DomainError("set-cover bound needs positive n, tau, M".into()));
    }
    let wbar = omega_bar(&Slope::Finite(n * m / tau), None)?;
    Ok(1.0 + wbar * (1.0 + 1.0 / m))
}

/// Guarantee of the general greedy: `min(1 + ω(θ), 1 + ln(Δ + 1))`, plus
/// `1 + ln Δ` when no edge joins two terminals.
pub fn general_bound<T: Scalar>(theta: &Slope<T>, delta: usize, terminals_independent: bool) -> f64 {
    let mut bound = 1.0 + ((delta + 1) as f64).ln();
    if terminals_independent && delta >= 1 {
        bound = bound.min(1.0 + (delta as f64).ln());
    }
    if let Slope::Finite(t) = theta {
        let t = t.as_f64();
        let slope_bound = if t > 0.0 { 1.0 + omega(t).expect("positive slope") } else { 1.0 };
        bound = bound.min(slope_bound);
    }
    bound
}

/// Guarantee of the average-price greedy on locally uniform instances,
/// `1 + ω̄(θ)` truncated at `Δ`.
pub fn locally_uniform_bound<T: Scalar>(theta: &Slope<T>, delta: usize) -> T {
    if matches!(theta, Slope::Finite(t) if t.is_zero()) {
        return T::one();
    }
    T::one() + omega_bar(theta, Some(delta)).expect("theta > 0 with a cap")
}

/// Best known k-set-cover ratios `α_1..α_7` with `σ` and `ρ`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaTable<T> {
    pub alpha: [T; 7],
    pub sigma: T,
    pub rho: T,
}

impl<T: Scalar> AlphaTable<T> {
    /// `α_k` for `1 <= k <= 7`.
    pub fn alpha(&self, k: usize) -> &T {
        &self.alpha[k - 1]
    }
}

pub fn alpha_table<T: Scalar>() -> AlphaTable<T> {
    let alpha = [(1, 1), (1, 1), (4, 3), (73, 48), (26, 15), (28, 15), (212, 105)]
        .map(|(n, d)| T::from_ratio(n, d));
    let sigma = alpha[..5].iter().fold(T::zero(), |acc, a| acc + a.clone());
    let rho = rho_from(&alpha[5], &sigma);
    AlphaTable { alpha, sigma, rho }
}

/// `(7α_6 − σ)/(6α_6 − σ + 1)`.
pub fn rho_from<T: Scalar>(alpha6: &T, sigma: &T) -> T {
    let seven = T::of_usize(7);
    let six = T::of_usize(6);
    (seven * alpha6.clone() - sigma.clone()) / (six * alpha6.clone() - sigma.clone() + T::one())
}

/// `1 + 67/360`: the unit-threshold guarantee of the star-then-matching algorithm.
pub fn algorithm1_ratio<T: Scalar>() -> T {
    T::from_ratio(427, 360)
}

/// `73/60`: guarantee of the plain star-size greedy on unit thresholds.
pub fn unit_greedy_ratio<T: Scalar>() -> T {
    T::from_ratio(73, 60)
}

/// `max_{2 <= k <= max_k} (H_k − 7/6)/(k + 1)` with its argmax.
pub fn algorithm1_constant<T: Scalar>(max_k: usize) -> (usize, T) {
    let seven_sixths = T::from_ratio(7, 6);
    let mut h = T::one();
    let mut best: Option<(usize, T)> = None;
    for k in 2..=max_k {
        h = h + T::one() / T::of_usize(k);
        let value = (h.clone() - seven_sixths.clone()) / T::of_usize(k + 1);
        if best.as_ref().is_none_or(|(_, b)| &value > b) {
            best = Some((k, value));
        }
    }
    best.expect("max_k >= 2")
}

/// One column of the bound table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    pub theta: f64,
    pub one_plus_omega: f64,
    pub one_plus_omega_bar: f64,
    /// `ln θ − ln ln θ`; undefined at `θ = 1`.
    pub log_minus_loglog: Option<f64>,
    pub one_plus_log: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundTable {
    pub rows: Vec<BoundRow>,
}

pub const TABLE1_THETAS: [f64; 10] = [1.0, 2.0, 3.0, 4.0, 5.0, 10.0, 100.0, 1e3, 1e4, 1e6];

pub fn bound_row(theta: f64) -> Result<BoundRow> {
    let loglog = theta.ln().ln();
    Ok(BoundRow {
        theta,
        one_plus_omega: 1.0 + omega(theta)?,
        one_plus_omega_bar: 1.0 + omega_bar(&Slope::Finite(theta), None)?,
        log_minus_loglog: loglog.is_finite().then(|| theta.ln() - loglog),
        one_plus_log: 1.0 + (theta + 1.0).ln(),
    })
}

pub fn bound_table(thetas: &[f64]) -> Result<BoundTable> {
    Ok(BoundTable { rows: thetas.iter().map(|&t| bound_row(t)).collect::<Result<_>>()? })
}

pub fn table1() -> BoundTable {
    bound_table(&TABLE1_THETAS).expect("table thetas are positive")
}

/// Rounds up to four decimals, so a printed ratio bound is still a bound.
pub fn ceil4(x: f64) -> f64 {
    (x * 1e4 - 1e-6).ceil() / 1e4
}

/// Renders the table with one column per `θ`, values rounded up to four decimals.
pub fn format_table(table: &BoundTable) -> String {
    let mut out = String::new();
    let label_width = 22;
    let _ = write!(out, "{:<label_width$}", "theta");
    for row in &table.rows {
        let _ = write!(out, " {:>9}", format_theta(row.theta));
    }
    out.push('\n');
    type Line = (&'static str, fn(&BoundRow) -> Option<f64>);
    let lines: [Line; 4] = [
        ("1+omega(theta)", |r| Some(r.one_plus_omega)),
        ("1+omegabar(theta)", |r| Some(r.one_plus_omega_bar)),
        ("ln(theta)-lnln(theta)", |r| r.log_minus_loglog),
        ("1+ln(theta+1)", |r| Some(r.one_plus_log)),
    ];
    for (label, value) in lines {
        let _ = write!(out, "{label:<label_width$}");
        for row in &table.rows {
            match value(row) {
                Some(v) => {
                    let _ = write!(out, " {:>9.4}", ceil4(v));
                }
                None => {
                    let _ = write!(out, " {:>9}", "-");
                }
            }
        }
        out.push('\n');
    }
    out
}

fn format_theta(theta: f64) -> String {
    if theta.fract() == 0.0 && theta.abs() < 1e15 {
        format!("{}", theta as i64)
    } else {
        format!("{theta}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic::<Rational>(1), r(1, 1));
        assert_eq!(harmonic::<Rational>(4), r(25, 12));
        assert_eq!(harmonic::<Rational>(5), r(137, 60));
    }

    #[test]
    fn omega_solves_its_equation() {
        for i in 0..50 {
            let theta = 10f64.powf(-3.0 + 9.0 * i as f64 / 49.0);
            let x = omega(theta).unwrap();
            assert!(x > 0.0 && x <= theta);
            assert!((x + 1.0 - (theta / x).ln()).abs() < 1e-12, "theta={theta}");
        }
    }

    #[test]
    fn omega_rejects_nonpositive() {
        assert!(omega(0.0).is_err());
        assert!(omega(-1.0).is_err());
        assert!(omega(f64::NAN).is_err());
    }

    #[test]
    fn omega_in_single_precision() {
        let x = omega(1.0f32).unwrap();
        assert!((x - 0.278_464_5).abs() < 1e-5);
    }

    #[test]
    fn k_theta_and_omega_bar_at_one() {
        assert_eq!(k_theta(&r(1, 1)).unwrap(), 4);
        assert_eq!(omega_bar(&Slope::Finite(r(1, 1)), None).unwrap(), r(13, 60));
        assert_eq!(locally_uniform_bound(&Slope::Finite(r(1, 1)), 10), r(73, 60));
    }

    #[test]
    fn omega_bar_cap_truncates() {
        // g(1) = 0, g(2) = θ/2 / (θ + 2) = 1/6 at θ = 1.
        assert_eq!(omega_bar(&Slope::Finite(r(1, 1)), Some(1)).unwrap(), r(0, 1));
        assert_eq!(omega_bar(&Slope::Finite(r(1, 1)), Some(2)).unwrap(), r(1, 6));
        assert_eq!(omega_bar::<Rational>(&Slope::Infinite, Some(3)).unwrap(), r(5, 6));
        assert!(omega_bar::<Rational>(&Slope::Infinite, None).is_err());
    }

    #[test]
    fn omega_bar_below_omega_on_table_thetas() {
        for row in table1().rows {
            assert!(row.one_plus_omega_bar < row.one_plus_omega, "theta={}", row.theta);
        }
    }

    #[test]
    fn alpha_table_constants() {
        let table = alpha_table::<Rational>();
        assert_eq!(table.sigma, r(1581, 240));
        assert_eq!(table.rho, r(1555, 1347));
        assert_eq!(
            Rational::from_ratio(1, 1)
                + (table.alpha(6).clone() - r(1, 1))
                    / (r(6, 1) * table.alpha(6).clone() - table.sigma.clone() + r(1, 1)),
            r(1555, 1347)
        );
    }

    #[test]
    fn setcover_bound_is_at_least_one_and_decreasing_in_m_tail() {
        assert!(setcover_greedy_bound(10.0, 10.0, 1.0).unwrap() >= 1.0);
        let direct = 1.0 + omega_bar(&Slope::Finite(1000.0 * 10.0 / 10.0), None).unwrap() * 1.1;
        assert_eq!(setcover_greedy_bound(1000.0, 10.0, 10.0).unwrap(), direct);
        assert!(setcover_greedy_bound(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn general_bound_picks_the_smallest_guarantee() {
        let one = Slope::Finite(r(1, 1));
        assert!((general_bound(&one, 100, false) - 1.278_464_5).abs() < 1e-6);
        let inf = Slope::<Rational>::Infinite;
        assert!((general_bound(&inf, 3, false) - (1.0 + 4f64.ln())).abs() < 1e-15);
        assert!((general_bound(&inf, 3, true) - (1.0 + 3f64.ln())).abs() < 1e-15);
        assert_eq!(general_bound(&Slope::Finite(r(0, 1)), 3, false), 1.0);
    }

    #[test]
    fn ceil4_is_stable_on_exact_decimals() {
        assert_eq!(ceil4(1.58), 1.58);
        assert_eq!(ceil4(1.2784648), 1.2785);
        assert_eq!(ceil4(2.0986123), 2.0987);
    }
}
