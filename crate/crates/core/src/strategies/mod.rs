//! Closed-form strategy families and the step-oracle abstraction.
//!
//! Every family is evaluated lazily: a [`StrategyHandle`] maps a 1-based step
//! index `i` to `(x_i, ray_i)` and carries the cost the family is claimed to
//! achieve. Finite prefixes are materialized only when an evaluator asks for
//! a horizon.

mod families;
mod spec;

pub use families::*;
pub use spec::StrategySpec;

use serde::Serialize;

use crate::error::Result;
use crate::model::{Step, StepSequence};
use crate::scalar::{idx, Scalar};

/// Lazily evaluable strategy `i -> (x_i, r_i)`, `i >= 1`.
pub trait StepOracle<T: Scalar> {
    /// Step `i` (1-based), or `None` past the end of a finite strategy.
    fn step(&self, i: usize) -> Option<Step<T>>;

    fn rays(&self) -> usize;

    /// `x_0`, the distance used for a ray's first sweep.
    fn origin_distance(&self) -> T;

    /// Number of steps for finite strategies.
    fn len_hint(&self) -> Option<usize> {
        None
    }

    /// Length unit for adversarial offsets. Defaults to the origin distance.
    fn scale(&self) -> T {
        self.origin_distance()
    }

    /// First `n` steps (fewer if the strategy is finite and shorter).
    fn materialize(&self, n: usize) -> Result<StepSequence<T>> {
        let n = self.len_hint().map_or(n, |len| len.min(n));
        let steps = (1..=n).map_while(|i| self.step(i)).collect();
        StepSequence::new(steps, self.origin_distance(), self.rays())
    }
}

impl<T: Scalar> StepOracle<T> for StepSequence<T> {
    fn step(&self, i: usize) -> Option<Step<T>> {
        self.get(i).copied()
    }
    fn rays(&self) -> usize {
        StepSequence::rays(self)
    }
    fn origin_distance(&self) -> T {
        StepSequence::origin_distance(self)
    }
    fn len_hint(&self) -> Option<usize> {
        Some(self.len())
    }
}

/// Whether a claimed competitive ratio is known to be the best possible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Optimality {
    Optimal,
    /// The family attains the ratio; no matching lower bound is known.
    Achieved,
}

/// Cost a family is claimed to guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClaimedCost<T> {
    /// Worst-case total cost at most `value * D`.
    CompetitiveRatio { value: T, status: Optimality },
    /// Worst-case total cost at most `gamma * D + phi`.
    AffineTotal { gamma: T, phi: T },
}

impl<T: Scalar> ClaimedCost<T> {
    pub fn ratio(&self) -> Option<T> {
        match *self {
            ClaimedCost::CompetitiveRatio { value, .. } => Some(value),
            ClaimedCost::AffineTotal { .. } => None,
        }
    }

    /// `(gamma, phi)` of an affine claim.
    pub fn affine(&self) -> Option<(T, T)> {
        match *self {
            ClaimedCost::AffineTotal { gamma, phi } => Some((gamma, phi)),
            ClaimedCost::CompetitiveRatio { .. } => None,
        }
    }
}

/// Which of a two-regime family's formulas produced a handle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Small fixed costs: the no-turn-cost ratio is still attainable.
    First,
    /// Fixed costs large relative to the lower bound.
    Second,
}

/// `x_i = ((slope i + intercept) base^(i / exponent_div) - shift) unit`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ClosedForm<T> {
    pub slope: T,
    pub intercept: T,
    pub base: T,
    /// `None` for integer exponents `i`, `Some(d)` for `i / d`.
    pub exponent_div: Option<T>,
    pub shift: T,
    pub unit: T,
}

impl<T: Scalar> ClosedForm<T> {
    pub fn at(&self, i: usize) -> T {
        let ii: T = idx(i);
        let growth = match self.exponent_div {
            None => self.base.powi(i as i32),
            Some(d) => self.base.powf(ii / d),
        };
        ((self.slope * ii + self.intercept) * growth - self.shift) * self.unit
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Law<T> {
    Closed(ClosedForm<T>),
    Explicit(StepSequence<T>),
}

/// A constructed strategy: its spec, step oracle and claimed cost.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyHandle<T> {
    spec: StrategySpec<T>,
    law: Law<T>,
    rays: usize,
    origin: T,
    scale: T,
    claimed: Option<ClaimedCost<T>>,
    branch: Option<Branch>,
}

impl<T: Scalar> StrategyHandle<T> {
    pub(crate) fn closed(
        spec: StrategySpec<T>,
        form: ClosedForm<T>,
        rays: usize,
        origin: T,
        claimed: ClaimedCost<T>,
    ) -> Self {
        StrategyHandle {
            spec,
            law: Law::Closed(form),
            rays,
            origin,
            scale: origin,
            claimed: Some(claimed),
            branch: None,
        }
    }

    pub(crate) fn explicit(seq: StepSequence<T>) -> Self {
        StrategyHandle {
            spec: StrategySpec::Explicit(seq.clone()),
            rays: seq.rays(),
            origin: seq.origin_distance(),
            scale: seq.origin_distance(),
            law: Law::Explicit(seq),
            claimed: None,
            branch: None,
        }
    }

    pub(crate) fn with_scale(mut self, scale: T) -> Self {
        self.scale = scale;
        self
    }

    pub(crate) fn with_branch(mut self, branch: Branch) -> Self {
        self.branch = Some(branch);
        self
    }

    pub fn spec(&self) -> &StrategySpec<T> {
        &self.spec
    }

    /// `None` for explicit strategies.
    pub fn claimed_cost(&self) -> Option<&ClaimedCost<T>> {
        self.claimed.as_ref()
    }

    pub fn branch(&self) -> Option<Branch> {
        self.branch
    }

    /// `x_i` for `i >= 1`; `x_0` is the origin distance.
    pub fn x(&self, i: usize) -> Option<T> {
        self.step(i).map(|s| s.distance)
    }
}

impl<T: Scalar> StepOracle<T> for StrategyHandle<T> {
    fn step(&self, i: usize) -> Option<Step<T>> {
        if i == 0 {
            return None;
        }
        match &self.law {
            Law::Closed(form) => Some(Step::new(form.at(i), (i - 1) % self.rays)),
            Law::Explicit(seq) => seq.get(i).copied(),
        }
    }

    fn rays(&self) -> usize {
        self.rays
    }

    fn origin_distance(&self) -> T {
        self.origin
    }

    fn len_hint(&self) -> Option<usize> {
        match &self.law {
            Law::Closed(_) => None,
            Law::Explicit(seq) => Some(seq.len()),
        }
    }

    fn scale(&self) -> T {
        self.scale
    }
}
