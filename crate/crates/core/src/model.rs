//! Domain types: cost models, search problems, targets and step sequences.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, SearchError};
use crate::scalar::{lit, to_f64, Scalar};

/// Global comparison tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rel: 1e-9,
            abs: 1e-12,
        }
    }
}

impl Tolerances {
    /// `|a - b| <= abs + rel * max(|a|, |b|)`.
    pub fn eq<T: Scalar>(&self, a: T, b: T) -> bool {
        let scale = a.abs().max(b.abs());
        (a - b).abs() <= lit::<T>(self.abs) + lit::<T>(self.rel) * scale
    }

    /// `a <= b` up to the tolerance band.
    pub fn le<T: Scalar>(&self, a: T, b: T) -> bool {
        a <= b || self.eq(a, b)
    }
}

/// Default `(rel_tol, abs_tol)` used by every "equal within tolerance" check.
pub fn tolerances() -> (f64, f64) {
    let t = Tolerances::default();
    (t.rel, t.abs)
}

/// Affine leg costs: `cost_out(x) = alpha1 x + beta1`, `cost_back(y) = alpha2 y + beta2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostModel<T> {
    alpha1: T,
    beta1: T,
    alpha2: T,
    beta2: T,
}

impl<T: Scalar> CostModel<T> {
    pub fn new(alpha1: T, beta1: T, alpha2: T, beta2: T) -> Result<Self> {
        for (name, v) in [
            ("alpha1", alpha1),
            ("beta1", beta1),
            ("alpha2", alpha2),
            ("beta2", beta2),
        ] {
            if !(v >= T::zero()) || !v.is_finite() {
                return Err(invalid(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        if !(alpha1 + alpha2 > T::zero()) {
            return Err(invalid("alpha1", "alpha1 + alpha2 must be positive"));
        }
        Ok(CostModel {
            alpha1,
            beta1,
            alpha2,
            beta2,
        })
    }

    /// Distance travelled, no fixed charges: `(1, 0, 1, 0)`.
    pub fn plain() -> Self {
        CostModel {
            alpha1: T::one(),
            beta1: T::zero(),
            alpha2: T::one(),
            beta2: T::zero(),
        }
    }

    /// Distance travelled plus `t` per turn: `(1, 0, 1, t)`.
    pub fn turn(t: T) -> Result<Self> {
        Self::new(T::one(), T::zero(), T::one(), t)
    }

    pub fn alpha1(&self) -> T {
        self.alpha1
    }
    pub fn beta1(&self) -> T {
        self.beta1
    }
    pub fn alpha2(&self) -> T {
        self.alpha2
    }
    pub fn beta2(&self) -> T {
        self.beta2
    }

    #[inline]
    pub fn outbound(&self, x: T) -> T {
        self.alpha1 * x + self.beta1
    }

    #[inline]
    pub fn inbound(&self, y: T) -> T {
        self.alpha2 * y + self.beta2
    }

    /// Cost of a full excursion of depth `x`.
    #[inline]
    pub fn round_trip(&self, x: T) -> T {
        self.outbound(x) + self.inbound(x)
    }
}

#[derive(Deserialize)]
struct RawCost<T> {
    alpha1: T,
    beta1: T,
    alpha2: T,
    beta2: T,
}

impl<'de, T: Scalar> Deserialize<'de> for CostModel<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawCost::<T>::deserialize(d)?;
        CostModel::new(raw.alpha1, raw.beta1, raw.alpha2, raw.beta2)
            .map_err(serde::de::Error::custom)
    }
}

/// A search instance: `m` rays, lower bound `lambda` on the target distance, leg costs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchProblem<T> {
    m: usize,
    lambda: T,
    cost: CostModel<T>,
}

impl<T: Scalar> SearchProblem<T> {
    pub fn new(m: usize, lambda: T, cost: CostModel<T>) -> Result<Self> {
        if m < 2 {
            return Err(invalid("m", format!("need at least 2 rays, got {m}")));
        }
        check_positive("lambda", lambda)?;
        Ok(SearchProblem { m, lambda, cost })
    }

    pub fn m(&self) -> usize {
        self.m
    }
    pub fn lambda(&self) -> T {
        self.lambda
    }
    pub fn cost(&self) -> &CostModel<T> {
        &self.cost
    }
}

/// Hidden target: a ray index and a distance no smaller than the lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Target<T> {
    pub ray: usize,
    pub distance: T,
}

impl<T: Scalar> Target<T> {
    pub fn new(ray: usize, distance: T, problem: &SearchProblem<T>) -> Result<Self> {
        if ray >= problem.m() {
            return Err(SearchError::RayOutOfRange {
                ray,
                rays: problem.m(),
            });
        }
        if !(distance >= problem.lambda()) {
            return Err(SearchError::TargetTooClose {
                distance: to_f64(distance),
                lambda: to_f64(problem.lambda()),
            });
        }
        Ok(Target { ray, distance })
    }
}

/// One excursion: walk `distance` along `ray`, then return to the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Step<T> {
    pub distance: T,
    pub ray: usize,
}

impl<T> Step<T> {
    pub fn new(distance: T, ray: usize) -> Self {
        Step { distance, ray }
    }
}

/// A finite strategy prefix together with the `x_0 = lambda` origin convention.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepSequence<T> {
    steps: Vec<Step<T>>,
    origin_distance: T,
    rays: usize,
}

impl<T: Scalar> StepSequence<T> {
    /// `rays` is the number of rays of the enclosing problem; every step ray must be below it.
    pub fn new(steps: Vec<Step<T>>, origin_distance: T, rays: usize) -> Result<Self> {
        check_positive("origin_distance", origin_distance)?;
        if rays < 2 {
            return Err(invalid("rays", format!("need at least 2 rays, got {rays}")));
        }
        for (i, s) in steps.iter().enumerate() {
            if !(s.distance > T::zero()) || !s.distance.is_finite() {
                return Err(invalid(
                    "steps",
                    format!("step {} has non-positive distance {}", i + 1, s.distance),
                ));
            }
            if s.ray >= rays {
                return Err(invalid(
                    "steps",
                    format!(
                        "step {} uses ray {} but only {rays} rays exist",
                        i + 1,
                        s.ray
                    ),
                ));
            }
        }
        Ok(StepSequence {
            steps,
            origin_distance,
            rays,
        })
    }

    /// Builds a sequence whose ray count is inferred as `max(2, max_ray + 1)`.
    pub fn from_pairs(pairs: &[(T, usize)], origin_distance: T) -> Result<Self> {
        let rays = pairs.iter().map(|p| p.1 + 1).max().unwrap_or(2).max(2);
        let steps = pairs.iter().map(|&(d, r)| Step::new(d, r)).collect();
        Self::new(steps, origin_distance, rays)
    }

    pub fn steps(&self) -> &[Step<T>] {
        &self.steps
    }
    pub fn len(&self) -> usize {
        self.steps.len()
    }
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
    pub fn origin_distance(&self) -> T {
        self.origin_distance
    }
    pub fn rays(&self) -> usize {
        self.rays
    }

    /// Step `i`, 1-based.
    pub fn get(&self, i: usize) -> Option<&Step<T>> {
        i.checked_sub(1).and_then(|k| self.steps.get(k))
    }

    /// Distance `x_i` with `x_0` being the origin distance.
    pub fn distance(&self, i: usize) -> T {
        if i == 0 {
            self.origin_distance
        } else {
            self.steps[i - 1].distance
        }
    }

    /// Same origin, new steps; `rays` must cover every step ray.
    pub(crate) fn with_steps(&self, steps: Vec<Step<T>>, rays: usize) -> Self {
        StepSequence {
            steps,
            origin_distance: self.origin_distance,
            rays,
        }
    }
}

pub(crate) fn check_positive<T: Scalar>(name: &'static str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite and > 0, got {v}")))
    }
}

pub(crate) fn check_non_negative<T: Scalar>(name: &'static str, v: T) -> Result<()> {
    if v >= T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite and >= 0, got {v}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_tolerances() {
        assert_eq!(tolerances(), (1e-9, 1e-12));
        let tol = Tolerances::default();
        assert!(tol.eq(9.0, 9.0 + 1e-13));
        assert!(!tol.eq(9.0, 9.1));
    }

    #[test]
    fn cost_model_rejects_zero_slopes() {
        assert!(CostModel::new(0.0, 1.0, 0.0, 1.0).is_err());
        assert!(CostModel::new(-1.0, 0.0, 1.0, 0.0).is_err());
        assert!(CostModel::new(0.0, 0.0, 1.0, 0.0).is_ok());
        let turn = CostModel::turn(2.0).unwrap();
        assert_eq!(turn.round_trip(3.0), 8.0);
    }

    #[test]
    fn cost_model_json_validates() {
        let ok: CostModel<f64> =
            serde_json::from_str(r#"{"alpha1":1,"beta1":0,"alpha2":1,"beta2":2}"#).unwrap();
        assert_eq!(ok.beta2(), 2.0);
        let bad = serde_json::from_str::<CostModel<f64>>(
            r#"{"alpha1":0,"beta1":0,"alpha2":0,"beta2":2}"#,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn target_below_lambda_rejected() {
        let p = SearchProblem::new(2, 1.0, CostModel::plain()).unwrap();
        assert!(matches!(
            Target::new(0, 0.5, &p),
            Err(SearchError::TargetTooClose { .. })
        ));
        assert!(matches!(
            Target::new(2, 1.5, &p),
            Err(SearchError::RayOutOfRange { .. })
        ));
        assert!(Target::new(1, 1.0, &p).is_ok());
    }

    #[test]
    fn problem_needs_two_rays() {
        assert!(SearchProblem::new(1, 1.0, CostModel::<f64>::plain()).is_err());
        assert!(SearchProblem::new(2, 0.0, CostModel::<f64>::plain()).is_err());
    }

    #[test]
    fn sequence_validation() {
        assert!(StepSequence::from_pairs(&[(1.0, 0), (0.0, 1)], 1.0).is_err());
        let s = StepSequence::from_pairs(&[(1.0, 0), (2.0, 3)], 1.0).unwrap();
        assert_eq!(s.rays(), 4);
        assert_eq!(s.distance(0), 1.0);
        assert_eq!(s.distance(2), 2.0);
        assert!(StepSequence::new(vec![Step::new(1.0, 2)], 1.0, 2).is_err());
    }
}
