//! Normalizations that rewrite a strategy without increasing its worst-case cost.

use crate::model::{Step, StepSequence};
use crate::scalar::Scalar;

/// Drops every step whose distance does not exceed an earlier sweep of the
/// same ray. Per-ray distances of the result are strictly increasing.
///
/// Removing the later member of a dominated pair never changes which earlier
/// steps dominate, so a single pass against the running per-ray maximum
/// reaches the same fixed point as repeated pairwise deletion.
pub fn make_monotonic<T: Scalar>(seq: &StepSequence<T>) -> StepSequence<T> {
    let mut deepest: Vec<Option<T>> = vec![None; seq.rays()];
    let kept = seq
        .steps()
        .iter()
        .filter(|s| {
            let keep = deepest[s.ray].is_none_or(|d| s.distance > d);
            if keep {
                deepest[s.ray] = Some(s.distance);
            }
            keep
        })
        .copied()
        .collect();
    seq.with_steps(kept, seq.rays())
}

/// Sorts distances non-decreasingly and visits rays cyclically, `ray(i) = (i-1) mod m`.
pub fn make_periodic_fully_monotonic<T: Scalar>(
    seq: &StepSequence<T>,
    m: usize,
) -> StepSequence<T> {
    let m = m.max(1);
    let mut distances: Vec<T> = seq.steps().iter().map(|s| s.distance).collect();
    distances.sort_by(|a, b| a.partial_cmp(b).expect("distances are finite"));
    let steps = distances
        .into_iter()
        .enumerate()
        .map(|(k, d)| Step::new(d, k % m))
        .collect();
    seq.with_steps(steps, m.max(seq.rays()))
}

/// Per-ray distances strictly increase.
pub fn is_monotonic<T: Scalar>(seq: &StepSequence<T>) -> bool {
    make_monotonic(seq).len() == seq.len()
}

/// Monotonic and globally non-decreasing.
pub fn is_fully_monotonic<T: Scalar>(seq: &StepSequence<T>) -> bool {
    is_monotonic(seq)
        && seq
            .steps()
            .windows(2)
            .all(|w| w[0].distance <= w[1].distance)
}

/// Rays follow the cycle `0, 1, ..., m-1, 0, ...`.
pub fn is_periodic<T: Scalar>(seq: &StepSequence<T>, m: usize) -> bool {
    m > 0 && seq.steps().iter().enumerate().all(|(k, s)| s.ray == k % m)
}
