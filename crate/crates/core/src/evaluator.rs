//! Worst-case competitive cost of arbitrary strategies under affine leg costs.
//!
//! For a feasible step `j` the worst target sits just beyond the deepest
//! earlier sweep of ray `r_j`, at `x_prev(j)` (or `x_0 = lambda` if the ray is
//! new), giving
//!
//! ```text
//! CR_j = (sum_{i<j} (cost_out(x_i) + cost_back(x_i)) + cost_out(x_prev)) / x_prev
//! ```
//!
//! and `CR = sup_j CR_j` over feasible steps.

use serde::Serialize;

use crate::error::{Result, SearchError};
use crate::model::{CostModel, StepSequence, Target};
use crate::scalar::{lit, to_f64, Scalar};
use crate::strategies::StepOracle;

/// Adversarial offsets are this fraction of the strategy's length scale.
pub const ADVERSARY_EPS_FRACTION: f64 = 1e-7;

/// Number of trailing ratios inspected by the convergence heuristic.
pub const CONVERGENCE_WINDOW: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepRecord<T> {
    pub j: usize,
    pub feasible: bool,
    pub prev_index: usize,
    pub cr_j: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport<T> {
    pub horizon: usize,
    pub per_step: Vec<StepRecord<T>>,
    pub supremum: T,
    /// Step attaining the supremum.
    pub supremum_step: usize,
    pub converged: bool,
    pub convergence_note: String,
}

impl<T: Scalar> EvaluationReport<T> {
    /// `j,feasible,prev,cr_j` rows; `cr_j` is empty for infeasible steps.
    pub fn to_csv(&self, fmt: impl Fn(T) -> String) -> String {
        let mut out = String::from("j,feasible,prev,cr_j\n");
        for r in &self.per_step {
            let cr = r.cr_j.map(&fmt).unwrap_or_default();
            out.push_str(&format!("{},{},{},{}\n", r.j, r.feasible, r.prev_index, cr));
        }
        out
    }
}

fn check_index<T: Scalar>(seq: &StepSequence<T>, j: usize) -> Result<()> {
    if j == 0 || j > seq.len() {
        Err(SearchError::StepOutOfRange { j, len: seq.len() })
    } else {
        Ok(())
    }
}

/// Index `j' < j` of the deepest earlier sweep on ray `r_j`, or 0 if the ray is new.
pub fn prev_index<T: Scalar>(seq: &StepSequence<T>, j: usize) -> Result<usize> {
    check_index(seq, j)?;
    let ray = seq.steps()[j - 1].ray;
    let mut best: Option<(usize, T)> = None;
    for (k, s) in seq.steps()[..j - 1].iter().enumerate() {
        if s.ray == ray && best.is_none_or(|(_, d)| s.distance > d) {
            best = Some((k + 1, s.distance));
        }
    }
    Ok(best.map_or(0, |(k, _)| k))
}

/// `x_j'` < `x_j` for every earlier step `j'` on the same ray.
pub fn is_feasible<T: Scalar>(seq: &StepSequence<T>, j: usize) -> Result<bool> {
    check_index(seq, j)?;
    let s = seq.steps()[j - 1];
    Ok(seq.steps()[..j - 1]
        .iter()
        .all(|p| p.ray != s.ray || p.distance < s.distance))
}

/// `CR_j` for a feasible step.
pub fn cr_step<T: Scalar>(seq: &StepSequence<T>, j: usize, cost: &CostModel<T>) -> Result<T> {
    if !is_feasible(seq, j)? {
        return Err(SearchError::InfeasibleStep(j));
    }
    let prev = seq.distance(prev_index(seq, j)?);
    let travel = seq.steps()[..j - 1]
        .iter()
        .fold(T::zero(), |acc, s| acc + cost.round_trip(s.distance));
    Ok((travel + cost.outbound(prev)) / prev)
}

/// Per-step records in one pass.
fn scan<T: Scalar>(seq: &StepSequence<T>, cost: &CostModel<T>) -> Vec<StepRecord<T>> {
    let mut deepest: Vec<Option<(usize, T)>> = vec![None; seq.rays()];
    let mut travel = T::zero();
    let mut records = Vec::with_capacity(seq.len());
    for (k, s) in seq.steps().iter().enumerate() {
        let j = k + 1;
        let (prev_index, prev_distance) = deepest[s.ray].unwrap_or((0, seq.origin_distance()));
        let feasible = deepest[s.ray].is_none_or(|(_, d)| d < s.distance);
        let cr_j = feasible.then(|| (travel + cost.outbound(prev_distance)) / prev_distance);
        records.push(StepRecord {
            j,
            feasible,
            prev_index,
            cr_j,
        });
        if feasible {
            deepest[s.ray] = Some((j, s.distance));
        }
        travel = travel + cost.round_trip(s.distance);
    }
    records
}

fn converged_tail<T: Scalar>(records: &[StepRecord<T>], tol: T) -> bool {
    let tail: Vec<T> = records
        .iter()
        .rev()
        .filter_map(|r| r.cr_j)
        .take(CONVERGENCE_WINDOW)
        .collect();
    if tail.len() < CONVERGENCE_WINDOW {
        return false;
    }
    let hi = tail.iter().copied().fold(T::neg_infinity(), T::max);
    let lo = tail.iter().copied().fold(T::infinity(), T::min);
    hi - lo < tol * hi.abs()
}

/// Evaluates every step of a finite sequence.
pub fn evaluate_sequence<T: Scalar>(
    seq: &StepSequence<T>,
    cost: &CostModel<T>,
    tol: T,
) -> Result<EvaluationReport<T>> {
    if seq.is_empty() {
        return Err(SearchError::StepOutOfRange { j: 1, len: 0 });
    }
    let per_step = scan(seq, cost);
    let (supremum_step, supremum) = per_step
        .iter()
        .filter_map(|r| r.cr_j.map(|v| (r.j, v)))
        .fold((0, T::neg_infinity()), |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        });
    let converged = converged_tail(&per_step, tol);
    let convergence_note = format!(
        "supremum over the first {} steps; this is a lower bound on the ratio of the infinite strategy. \
         converged is a heuristic: the last {CONVERGENCE_WINDOW} feasible ratios {} within relative tolerance {:e}",
        seq.len(),
        if converged { "agree" } else { "do not agree" },
        to_f64(tol),
    );
    Ok(EvaluationReport {
        horizon: seq.len(),
        per_step,
        supremum,
        supremum_step,
        converged,
        convergence_note,
    })
}

/// Worst-case ratio over the first `horizon` steps of a strategy.
pub fn worst_case_cr<T: Scalar, S: StepOracle<T> + ?Sized>(
    strategy: &S,
    cost: &CostModel<T>,
    horizon: usize,
    tol: T,
) -> Result<EvaluationReport<T>> {
    let min = strategy.rays() + 1;
    if horizon < min {
        return Err(SearchError::HorizonTooSmall { horizon, min });
    }
    let seq = strategy.materialize(horizon)?;
    evaluate_sequence(&seq, cost, tol)
}

/// Ratio every infinite continuation of the prefix must pay when a ray is
/// next revisited: `max_r (sum_i (cost_out + cost_back)(x_i) + cost_out(M_r)) / M_r`,
/// where `M_r` is the deepest sweep of ray `r` (`x_0` if unvisited).
pub fn continuation_bound<T: Scalar>(seq: &StepSequence<T>, cost: &CostModel<T>) -> T {
    let mut deepest = vec![seq.origin_distance(); seq.rays()];
    let mut travel = T::zero();
    for s in seq.steps() {
        deepest[s.ray] = deepest[s.ray].max(s.distance);
        travel = travel + cost.round_trip(s.distance);
    }
    deepest
        .into_iter()
        .map(|m| (travel + cost.outbound(m)) / m)
        .fold(T::neg_infinity(), T::max)
}

/// Competitive ratio attributable to a finite prefix: the larger of its
/// feasible-step supremum and [`continuation_bound`]. Every infinite strategy
/// extending the prefix has at least this ratio.
pub fn prefix_ratio<T: Scalar>(seq: &StepSequence<T>, cost: &CostModel<T>) -> T {
    let sup = scan(seq, cost)
        .iter()
        .filter_map(|r| r.cr_j)
        .fold(T::neg_infinity(), T::max);
    sup.max(continuation_bound(seq, cost))
}

/// Total cost until the target is found: `sum_{i<j} (cost_out + cost_back)(x_i) + cost_out(D)`
/// where `j` is the first sweep of the target's ray reaching `D`.
pub fn simulate<T: Scalar, S: StepOracle<T> + ?Sized>(
    strategy: &S,
    target: &Target<T>,
    cost: &CostModel<T>,
    max_steps: usize,
) -> Result<T> {
    if target.ray >= strategy.rays() {
        return Err(SearchError::RayOutOfRange {
            ray: target.ray,
            rays: strategy.rays(),
        });
    }
    if !(target.distance >= strategy.origin_distance()) {
        return Err(SearchError::TargetTooClose {
            distance: to_f64(target.distance),
            lambda: to_f64(strategy.origin_distance()),
        });
    }
    let mut travel = T::zero();
    for i in 1..=max_steps {
        let Some(step) = strategy.step(i) else { break };
        if step.ray == target.ray && step.distance >= target.distance {
            return Ok(travel + cost.outbound(target.distance));
        }
        travel = travel + cost.round_trip(step.distance);
    }
    Err(SearchError::TargetNotFound { max_steps })
}

/// Offset used when placing a target just beyond a sweep.
pub fn adversary_eps<T: Scalar, S: StepOracle<T> + ?Sized>(strategy: &S) -> T {
    strategy.scale() * lit(ADVERSARY_EPS_FRACTION)
}

/// Distances just beyond the origin and the first `count` sweeps: `x_i + eps`, `i = 0..=count`.
pub fn breakpoint_distances<T: Scalar, S: StepOracle<T> + ?Sized>(
    strategy: &S,
    count: usize,
) -> Vec<T> {
    let eps = adversary_eps(strategy);
    std::iter::once(strategy.origin_distance() + eps)
        .chain((1..=count).filter_map(|i| strategy.step(i).map(|s| s.distance + eps)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopeSample<T> {
    pub ray: usize,
    pub distance: T,
    pub cost: T,
    pub bound: T,
    /// `bound - cost`; negative means the envelope is violated.
    pub slack: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvelopeReport<T> {
    pub gamma: T,
    pub phi: T,
    pub samples: Vec<EnvelopeSample<T>>,
    pub min_slack: T,
    pub within_envelope: bool,
}

/// Simulates a target at every `D` in `distances` on every ray and compares
/// the cost against `gamma D + phi`.
pub fn affine_envelope_check<T: Scalar, S: StepOracle<T> + ?Sized>(
    strategy: &S,
    cost: &CostModel<T>,
    gamma: T,
    phi: T,
    distances: &[T],
    abs_tol: T,
    max_steps: usize,
) -> Result<EnvelopeReport<T>> {
    let mut samples = Vec::with_capacity(distances.len() * strategy.rays());
    for &distance in distances {
        for ray in 0..strategy.rays() {
            let paid = simulate(strategy, &Target { ray, distance }, cost, max_steps)?;
            let bound = gamma * distance + phi;
            samples.push(EnvelopeSample {
                ray,
                distance,
                cost: paid,
                bound,
                slack: bound - paid,
            });
        }
    }
    let min_slack = samples.iter().map(|s| s.slack).fold(T::infinity(), T::min);
    Ok(EnvelopeReport {
        gamma,
        phi,
        within_envelope: samples.iter().all(|s| s.slack >= -abs_tol),
        samples,
        min_slack,
    })
}
