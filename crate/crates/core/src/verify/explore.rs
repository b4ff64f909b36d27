//! Exploratory solver that turns every ratio constraint into an equality.
//!
//! With `m` rays visited cyclically, step `k + m` revisits the ray of step
//! `k`, and tightness of consecutive constraints gives
//! `x_{k+m} = ((gamma-1)(x_{k+1} - x_k) - t) / 2`. The first block comes from
//! the first-visit constraint `sum_{i<m} (2 x_i + t) + lambda = gamma lambda`
//! (which fixes `x_1` when `m = 2`) and from tightness at step `m + 1`.
//! No optimality claim is attached to the output.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::scalar::{lit, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqualitySolution<T> {
    pub gamma: T,
    pub steps: Vec<T>,
    /// All steps positive and strictly increasing.
    pub valid: bool,
    /// Largest relative deviation from a reference strategy, if one was given.
    pub max_rel_deviation: Option<T>,
}

impl<T: Scalar> EqualitySolution<T> {
    /// Records the deviation from `reference`, compared index by index.
    pub fn compare(mut self, reference: &[T]) -> Self {
        let dev = self
            .steps
            .iter()
            .zip(reference)
            .map(|(&a, &b)| (a - b).abs() / a.abs().max(b.abs()).max(T::min_positive_value()))
            .fold(T::zero(), T::max);
        self.max_rel_deviation = Some(dev);
        self
    }
}

fn is_valid<T: Scalar>(steps: &[T]) -> bool {
    steps.iter().all(|x| *x > T::zero() && x.is_finite()) && steps.windows(2).all(|w| w[0] < w[1])
}

/// Solves the equality system for `horizon` steps.
///
/// `initial` supplies `x_1..x_{m-2}` (empty for `m = 2`). `x_{m-1}` follows
/// from the first-visit equality and `x_m` from tightness at step `m + 1`.
pub fn equality_system<T: Scalar>(
    m: usize,
    lambda: T,
    t: T,
    gamma: T,
    initial: &[T],
    horizon: usize,
) -> Result<EqualitySolution<T>> {
    if m < 2 {
        return Err(invalid("m", format!("need at least 2 rays, got {m}")));
    }
    if initial.len() != m - 2 {
        return Err(invalid(
            "initial",
            format!(
                "need {} initial steps for m = {m}, got {}",
                m - 2,
                initial.len()
            ),
        ));
    }
    if !(lambda > T::zero()) || !(t >= T::zero()) || !gamma.is_finite() {
        return Err(invalid(
            "lambda, t, gamma",
            "need lambda > 0, t >= 0, finite gamma",
        ));
    }
    if horizon < m {
        return Err(invalid("horizon", format!("need at least m = {m} steps")));
    }
    let two: T = lit(2.0);
    let g1 = gamma - T::one();
    let mut x: Vec<T> = initial.to_vec();
    // first visits: sum_{i<m} (2 x_i + t) = (gamma - 1) lambda
    let used = x.iter().fold(T::zero(), |acc, &v| acc + two * v + t);
    x.push((g1 * lambda - used - t) / two);
    // step m+1 revisits ray of x_1: sum_{i<=m} (2 x_i + t) = (gamma - 1) x_1
    let used = x.iter().fold(T::zero(), |acc, &v| acc + two * v + t);
    x.push((g1 * x[0] - used - t) / two);
    while x.len() < horizon {
        let k = x.len() - m; // 0-based index of x_{k+1}
        x.push((g1 * (x[k + 1] - x[k]) - t) / two);
    }
    x.truncate(horizon);
    Ok(EqualitySolution {
        gamma,
        valid: is_valid(&x),
        steps: x,
        max_rel_deviation: None,
    })
}

/// Smallest `gamma` in `[lo, hi]` for which the two-ray equality system stays
/// positive and increasing over `horizon` steps, by bisection.
///
/// Finite horizons only detect the breakdown eventually, so the result
/// approaches the true threshold from below as `horizon` grows.
pub fn min_gamma_equality<T: Scalar>(lambda: T, t: T, lo: T, hi: T, horizon: usize) -> Result<T> {
    let ok = |g: T| equality_system(2, lambda, t, g, &[], horizon).map(|s| s.valid);
    if !ok(hi)? {
        return Err(invalid(
            "hi",
            format!("equality system invalid at gamma = {hi}"),
        ));
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let mid = (a + b) / lit(2.0);
        if mid <= a || mid >= b {
            break;
        }
        if ok(mid)? {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(b)
}
