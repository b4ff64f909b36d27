//! The `tau / mu / nu` recurrences expressing `x_{n+1}` through `x_1`, and
//! their closed forms.
//!
//! With `A = (gamma-3)/2`, `B = t`, `C = t/2` and `tau_0 = A, mu_0 = B, nu_0 = 1`:
//!
//! ```text
//! tau_{m+1} = tau_m A - nu_m
//! mu_{m+1}  = tau_m B + mu_m + nu_m C
//! nu_{m+1}  = tau_m + nu_m
//! ```
//!
//! Equality in every constraint gives `x_{m+2} = tau_m x_1 - mu_m`, so
//! `delta(n) = tau_{n-1} x_1 - mu_{n-1}` is the would-be `x_{n+1}`.

use serde::Serialize;

use crate::error::{invalid, Result, SearchError};
use crate::model::Tolerances;
use crate::scalar::{idx, lit, to_f64, Scalar};
use crate::verify::lp::Verdict;
use crate::verify::roots::roots;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedFormKind {
    /// Distinct roots, `gamma > 9`.
    Distinct,
    /// Double root `r = 2` at `gamma = 9`.
    DoubleRoot,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecurrenceTriple<T> {
    pub gamma: T,
    pub t: T,
    pub tau: Vec<T>,
    pub mu: Vec<T>,
    pub nu: Vec<T>,
    /// `delta(n)` for `n = 1..=n_max + 1`; empty until [`RecurrenceTriple::with_delta`].
    pub delta: Vec<T>,
    pub closed_tau: Vec<T>,
    pub closed_mu: Vec<T>,
    pub closed_nu: Vec<T>,
    pub closed_form: ClosedFormKind,
    /// Largest relative disagreement between recurrence and closed forms.
    pub max_rel_error: T,
}

impl<T: Scalar> RecurrenceTriple<T> {
    /// Fills `delta(n) = tau_{n-1} x1 - mu_{n-1}`.
    pub fn with_delta(mut self, x1: T) -> Self {
        self.delta = self
            .tau
            .iter()
            .zip(&self.mu)
            .map(|(&tau, &mu)| tau * x1 - mu)
            .collect();
        self
    }

    pub fn agrees(&self, rel_tol: T) -> bool {
        self.max_rel_error <= rel_tol
    }
}

fn rel_err<T: Scalar>(a: T, b: T) -> T {
    let scale = a.abs().max(b.abs());
    if scale == T::zero() {
        T::zero()
    } else {
        (a - b).abs() / scale
    }
}

fn recurrence_terms<T: Scalar>(gamma: T, t: T, n_max: usize) -> (Vec<T>, Vec<T>, Vec<T>) {
    let a = (gamma - lit(3.0)) / lit(2.0);
    let b = t;
    let c = t / lit(2.0);
    let (mut tau, mut mu, mut nu) = (vec![a], vec![b], vec![T::one()]);
    for k in 0..n_max {
        let (tk, mk, nk) = (tau[k], mu[k], nu[k]);
        tau.push(tk * a - nk);
        mu.push(tk * b + mk + nk * c);
        nu.push(tk + nk);
    }
    (tau, mu, nu)
}

/// Computes `tau, mu, nu` for `m = 0..=n_max` by recurrence and by closed form.
pub fn recurrences<T: Scalar>(gamma: T, t: T, n_max: usize) -> Result<RecurrenceTriple<T>> {
    let rp = roots(gamma)?;
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(invalid("t", format!("must be >= 0, got {t}")));
    }
    let (tau, mu, nu) = recurrence_terms(gamma, t, n_max);
    let one = T::one();
    let two: T = lit(2.0);
    let (closed_tau, closed_mu, closed_nu, kind);
    if rp.is_double() {
        kind = ClosedFormKind::DoubleRoot;
        let p = |n: usize| two.powi(n as i32);
        closed_tau = (0..=n_max)
            .map(|n| (idx::<T>(n) + lit(3.0)) * p(n))
            .collect::<Vec<_>>();
        closed_mu = (0..=n_max)
            .map(|n| ((lit::<T>(3.0) * idx(n) + one) * p(n) + one) * t / two)
            .collect::<Vec<_>>();
        closed_nu = (0..=n_max)
            .map(|n| (idx::<T>(n) + one) * p(n))
            .collect::<Vec<_>>();
    } else {
        kind = ClosedFormKind::Distinct;
        let (r1, r2) = (rp.r1, rp.r2);
        let d = r1 - r2;
        closed_tau = (0..=n_max)
            .map(|n| {
                (r1 * (r1 - one) * r1.powi(n as i32) - r2 * (r2 - one) * r2.powi(n as i32)) / d
            })
            .collect::<Vec<_>>();
        closed_nu = (0..=n_max)
            .map(|n| (r1.powi(n as i32 + 1) - r2.powi(n as i32 + 1)) / d)
            .collect::<Vec<_>>();
        let k1 = t * r1 * (two * r1 - one) / (two * (r1 - one) * d);
        let k2 = t * r2 * (two * r2 - one) / (two * (r2 - one) * d);
        closed_mu = (0..=n_max)
            .map(|n| k1 * r1.powi(n as i32) - k2 * r2.powi(n as i32) + t / two)
            .collect::<Vec<_>>();
    }
    let max_rel_error = tau
        .iter()
        .zip(&closed_tau)
        .chain(mu.iter().zip(&closed_mu))
        .chain(nu.iter().zip(&closed_nu))
        .map(|(&a, &b)| rel_err(a, b))
        .fold(T::zero(), T::max);
    Ok(RecurrenceTriple {
        gamma,
        t,
        tau,
        mu,
        nu,
        delta: Vec::new(),
        closed_tau,
        closed_mu,
        closed_nu,
        closed_form: kind,
        max_rel_error,
    })
}

/// Residuals `x_{n+1} - (tau_{n-1} x_1 - mu_{n-1})`, `n = 1..`, scaled by `tau_{n-1} x_1`.
///
/// `xs[0]` is `x_1`. Zero residuals mean every constraint of the prefix is tight at `gamma`.
pub fn chain_residuals<T: Scalar>(gamma: T, t: T, xs: &[T]) -> Result<Vec<T>> {
    if xs.len() < 2 {
        return Ok(Vec::new());
    }
    let rec = recurrences(gamma, t, xs.len() - 2)?;
    let x1 = xs[0];
    Ok((1..xs.len())
        .map(|n| {
            let predicted = rec.tau[n - 1] * x1 - rec.mu[n - 1];
            (xs[n] - predicted) / (rec.tau[n - 1] * x1).abs().max(T::one())
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaReport<T> {
    pub t: T,
    pub lambda: T,
    pub x1: T,
    /// Admissible first steps `[lambda, (8 lambda - t) / 2]`.
    pub x1_interval: (T, T),
    pub x1_in_interval: bool,
    /// `delta(n+1) - delta(n)` from the recurrence, `n = 1..=n_max`.
    pub differences: Vec<T>,
    /// `(2(n+4) x1 - (3n+4) t) / 4 * 2^n`.
    pub formula: Vec<T>,
    pub max_rel_error: T,
    pub differences_positive: bool,
    /// `t <= 2 x1 / 3`, needed for `delta` to stay increasing for all `n`.
    pub requirement_holds: bool,
    pub verdict: Verdict,
}

/// Compares the closed-form increment of `delta` at `gamma = 9` with the recurrence.
pub fn lemma2_delta_check<T: Scalar>(
    t: T,
    lambda: T,
    x1: T,
    n_max: usize,
) -> Result<DeltaReport<T>> {
    if !(lambda > T::zero()) || !(t >= T::zero()) || !(x1 > T::zero()) {
        return Err(invalid(
            "t, lambda, x1",
            format!("need t >= 0, lambda > 0, x1 > 0; got t={t}, lambda={lambda}, x1={x1}"),
        ));
    }
    let hi = (lit::<T>(8.0) * lambda - t) / lit(2.0);
    if hi < lambda {
        return Err(SearchError::VacuousRegime(format!(
            "no first step satisfies lambda <= x1 <= (8 lambda - t)/2 when t = {t} > 6 lambda = {}",
            lit::<T>(6.0) * lambda
        )));
    }
    if n_max == 0 {
        return Err(invalid("n_max", "must be >= 1"));
    }
    let rec = recurrences(lit(9.0), t, n_max)?.with_delta(x1);
    let tol = Tolerances::default();
    let mut differences = Vec::with_capacity(n_max);
    let mut formula = Vec::with_capacity(n_max);
    let mut max_rel_error = T::zero();
    for n in 1..=n_max {
        let d = rec.delta[n] - rec.delta[n - 1];
        let nn: T = idx(n);
        let f = (lit::<T>(2.0) * (nn + lit(4.0)) * x1 - (lit::<T>(3.0) * nn + lit(4.0)) * t)
            / lit(4.0)
            * lit::<T>(2.0).powi(n as i32);
        let scale = rec.delta[n].abs().max(rec.delta[n - 1].abs()).max(f.abs());
        if scale > T::zero() {
            max_rel_error = max_rel_error.max((d - f).abs() / scale);
        }
        differences.push(d);
        formula.push(f);
    }
    let requirement_holds = to_f64(t) <= to_f64(x1) * 2.0 / 3.0 * (1.0 + tol.rel) + tol.abs;
    Ok(DeltaReport {
        t,
        lambda,
        x1,
        x1_interval: (lambda, hi),
        x1_in_interval: x1 >= lambda && x1 <= hi,
        differences_positive: differences.iter().all(|d| *d > T::zero()),
        differences,
        formula,
        verdict: Verdict::from_bool(to_f64(max_rel_error) <= tol.rel),
        max_rel_error,
        requirement_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_root_tau_and_nu() {
        let r = recurrences(9.0_f64, 2.0, 3).unwrap();
        assert_eq!(r.tau, vec![3.0, 8.0, 20.0, 48.0]);
        assert_eq!(r.closed_tau, vec![3.0, 8.0, 20.0, 48.0]);
        assert_eq!(r.nu, vec![1.0, 4.0, 12.0, 32.0]);
        assert_eq!(r.closed_form, ClosedFormKind::DoubleRoot);
        assert_eq!(r.max_rel_error, 0.0);
    }

    #[test]
    fn distinct_roots_agree() {
        for gamma in [10.0, 25.0, 9.5, 100.0] {
            let r = recurrences(gamma, 1.0, 30).unwrap();
            assert_eq!(r.closed_form, ClosedFormKind::Distinct);
            assert!(r.agrees(1e-9), "gamma {gamma}: {}", r.max_rel_error);
        }
    }

    #[test]
    fn zero_turn_cost_mu_vanishes() {
        let r = recurrences(12.0_f64, 0.0, 10).unwrap();
        assert!(r.mu.iter().all(|&m| m == 0.0));
        assert!(r.agrees(1e-9));
    }

    #[test]
    fn delta_increment_boundary() {
        let r = lemma2_delta_check(2.0_f64, 1.0, 3.0, 20).unwrap();
        assert!(r.verdict.passed(), "{}", r.max_rel_error);
        assert!(r.requirement_holds);
        assert!(r.x1_in_interval);
    }

    #[test]
    fn delta_requirement_fails_for_large_turn_cost() {
        let r = lemma2_delta_check(3.0_f64, 1.0, 2.5, 20).unwrap();
        assert!(r.verdict.passed());
        assert!(!r.requirement_holds);
        assert!(!r.differences_positive);
    }

    #[test]
    fn delta_without_turn_cost_increases() {
        let r = lemma2_delta_check(0.0_f64, 1.0, 1.0, 20).unwrap();
        assert!(r.differences_positive);
        assert!(r.requirement_holds);
    }

    #[test]
    fn vacuous_interval() {
        assert!(matches!(
            lemma2_delta_check(7.0_f64, 1.0, 1.0, 5),
            Err(SearchError::VacuousRegime(_))
        ));
    }
}
