use crate::error::{invalid, Result, SearchError};
use crate::model::{check_non_negative, check_positive, SearchProblem, StepSequence, Tolerances};
use crate::scalar::{idx, lit, Scalar};
use crate::verify::roots::{phi, roots};

use super::{Branch, ClaimedCost, ClosedForm, Optimality, StrategyHandle, StrategySpec};

/// Origin distance given to families analysed without a lower bound, as a
/// fraction of their turn cost. Adversarial offsets for those families are
/// measured in units of `t` instead.
const UNBOUNDED_ORIGIN_FRACTION: f64 = 1e-9;

fn boundary_slack<T: Scalar>() -> T {
    lit(Tolerances::default().rel)
}

fn optimal<T: Scalar>(value: T) -> ClaimedCost<T> {
    ClaimedCost::CompetitiveRatio {
        value,
        status: Optimality::Optimal,
    }
}

/// `x_i = 2^i lambda` on alternating rays; competitive ratio 9.
pub fn doubling<T: Scalar>(lambda: T) -> Result<StrategyHandle<T>> {
    check_positive("lambda", lambda)?;
    let form = ClosedForm {
        slope: T::zero(),
        intercept: T::one(),
        base: lit(2.0),
        exponent_div: None,
        shift: T::zero(),
        unit: lambda,
    };
    Ok(StrategyHandle::closed(
        StrategySpec::Doubling { lambda },
        form,
        2,
        lambda,
        optimal(lit(9.0)),
    ))
}

fn check_turn_cost<T: Scalar>(t: T, family: &str) -> Result<()> {
    if !t.is_finite() || t < T::zero() {
        return Err(invalid("t", format!("must be finite and >= 0, got {t}")));
    }
    if t == T::zero() {
        return Err(SearchError::DegenerateStrategy(format!(
            "{family} needs t > 0; with t = 0 every x_i is 0 and the searcher never leaves the origin"
        )));
    }
    Ok(())
}

/// `x_i = ((base^i - 1) / 2) t`, the shape shared by the no-lower-bound families.
fn half_geometric<T: Scalar>(
    spec: StrategySpec<T>,
    base: T,
    t: T,
    gamma: T,
    phi: T,
) -> StrategyHandle<T> {
    let form = ClosedForm {
        slope: T::zero(),
        intercept: lit(0.5),
        base,
        exponent_div: None,
        shift: lit(0.5),
        unit: t,
    };
    StrategyHandle::closed(
        spec,
        form,
        2,
        t * lit(UNBOUNDED_ORIGIN_FRACTION),
        ClaimedCost::AffineTotal { gamma, phi },
    )
    .with_scale(t)
}

/// `x_i = (2^i - 1) t / 2` on alternating rays; worst-case total `9D + 2t`.
pub fn demaine_turn_cost<T: Scalar>(t: T) -> Result<StrategyHandle<T>> {
    check_turn_cost(t, "the 9D + 2t strategy")?;
    Ok(half_geometric(
        StrategySpec::DemaineTurnCost { t },
        lit(2.0),
        t,
        lit(9.0),
        t + t,
    ))
}

/// Optimal strategy for a fixed multiplicative constant `gamma >= 9`:
/// `x_i = (r2(gamma)^i - 1) t / 2`, worst-case total `gamma D + phi(gamma)`.
pub fn theorem2<T: Scalar>(gamma: T, t: T) -> Result<StrategyHandle<T>> {
    let pair = roots(gamma)?;
    check_turn_cost(t, "the gamma/phi strategy")?;
    Ok(half_geometric(
        StrategySpec::Theorem2 { gamma, t },
        pair.r2,
        t,
        gamma,
        phi(gamma, t)?,
    ))
}

/// `gamma* = 5 + 2 (4D + t) / sqrt(2D (2D + t))`, the envelope slope minimizing
/// the total cost for a known distance `D`.
pub fn gamma_star_closed<T: Scalar>(distance: T, t: T) -> T {
    let root = (lit::<T>(2.0) * distance * (lit::<T>(2.0) * distance + t)).sqrt();
    lit::<T>(5.0) + lit::<T>(2.0) * (lit::<T>(4.0) * distance + t) / root
}

/// `5D + t + 2 sqrt(2D (2D + t))`.
pub fn min_total_cost_closed<T: Scalar>(distance: T, t: T) -> T {
    let root = (lit::<T>(2.0) * distance * (lit::<T>(2.0) * distance + t)).sqrt();
    lit::<T>(5.0) * distance + t + lit::<T>(2.0) * root
}

/// Strategy minimizing the worst-case total cost when `D` is known.
pub fn min_total_cost<T: Scalar>(distance: T, t: T) -> Result<StrategyHandle<T>> {
    check_positive("D", distance)?;
    check_turn_cost(t, "the minimum total cost strategy")?;
    let root = (lit::<T>(2.0) * distance * (lit::<T>(2.0) * distance + t)).sqrt();
    let base = T::one() + lit::<T>(2.0) * distance / root;
    let gamma = gamma_star_closed(distance, t);
    Ok(half_geometric(
        StrategySpec::MinTotalCost { distance, t },
        base,
        t,
        gamma,
        phi(gamma, t)?,
    ))
}

/// Ratio-9 strategy for `t / 2 lambda <= 1`:
/// `x_i = (((1 - rho) i + (1 + rho)) 2^i - rho) lambda`.
pub fn lemma1<T: Scalar>(lambda: T, t: T) -> Result<StrategyHandle<T>> {
    check_positive("lambda", lambda)?;
    check_non_negative("t", t)?;
    let rho = t / (lambda + lambda);
    if rho > T::one() + boundary_slack() {
        return Err(SearchError::WrongRegime(format!(
            "t / 2 lambda = {rho} > 1; use theorem4"
        )));
    }
    let form = ClosedForm {
        slope: T::one() - rho,
        intercept: T::one() + rho,
        base: lit(2.0),
        exponent_div: None,
        shift: rho,
        unit: lambda,
    };
    Ok(StrategyHandle::closed(
        StrategySpec::Lemma1 { lambda, t },
        form,
        2,
        lambda,
        optimal(lit(9.0)),
    )
    .with_branch(Branch::First))
}

/// Optimal line ratio with turn cost: 9 for `rho <= 1`, else `2 (rho + 2)(rho + 1/2) / rho`.
pub fn optimal_line_ratio<T: Scalar>(rho: T) -> T {
    if rho <= T::one() {
        lit(9.0)
    } else {
        large_turn_ratio(rho)
    }
}

/// `2 (rho + 2)(rho + 1/2) / rho`.
pub fn large_turn_ratio<T: Scalar>(rho: T) -> T {
    lit::<T>(2.0) * (rho + lit(2.0)) * (rho + lit(0.5)) / rho
}

/// Optimal strategy for `t / 2 lambda >= 1`:
/// `x_i = ((1 + rho)(1 + 1/rho)^i - rho) lambda`.
pub fn theorem4<T: Scalar>(lambda: T, t: T) -> Result<StrategyHandle<T>> {
    check_positive("lambda", lambda)?;
    check_positive("t", t)?;
    let rho = t / (lambda + lambda);
    if rho < T::one() - boundary_slack() {
        return Err(SearchError::WrongRegime(format!(
            "t / 2 lambda = {rho} < 1; use lemma1"
        )));
    }
    let form = ClosedForm {
        slope: T::zero(),
        intercept: T::one() + rho,
        base: T::one() + rho.recip(),
        exponent_div: None,
        shift: rho,
        unit: lambda,
    };
    Ok(StrategyHandle::closed(
        StrategySpec::Theorem4 { lambda, t },
        form,
        2,
        lambda,
        optimal(large_turn_ratio(rho)),
    )
    .with_branch(Branch::Second))
}

/// Regime parameters of the general affine-cost line strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralLineParams<T> {
    /// `(3 beta1 + 2 beta2) / (2 (alpha1 + alpha2) lambda)`; the first formula applies when `<= 1`.
    pub theta: T,
    /// `(beta1 + beta2) / ((alpha1 + alpha2) lambda)`.
    pub sigma: T,
    /// Growth factor of the second formula.
    pub phi_growth: T,
}

pub fn general_line_params<T: Scalar>(problem: &SearchProblem<T>) -> GeneralLineParams<T> {
    let c = problem.cost();
    let two: T = lit(2.0);
    let a_lambda = (c.alpha1() + c.alpha2()) * problem.lambda();
    let theta = (lit::<T>(3.0) * c.beta1() + two * c.beta2()) / (two * a_lambda);
    let sigma = (c.beta1() + c.beta2()) / a_lambda;
    let lead = two * c.beta1() + c.beta2();
    let disc =
        lead * lead - c.beta2() * c.beta2() + (c.beta2() + a_lambda) * (c.beta2() + a_lambda);
    let inner = (lead - a_lambda + disc.sqrt()) / (two * a_lambda);
    GeneralLineParams {
        theta,
        sigma,
        phi_growth: T::one() + inner.recip(),
    }
}

/// Optimal line strategy under an arbitrary affine cost model, picking the
/// branch from the regime parameter (the first branch at the boundary).
pub fn theorem5<T: Scalar>(problem: &SearchProblem<T>) -> Result<StrategyHandle<T>> {
    let params = general_line_params(problem);
    let branch = if params.theta <= T::one() {
        Branch::First
    } else {
        Branch::Second
    };
    theorem5_branch(problem, branch)
}

/// Like [`theorem5`] with an explicit branch; both are accepted at the boundary.
pub fn theorem5_branch<T: Scalar>(
    problem: &SearchProblem<T>,
    branch: Branch,
) -> Result<StrategyHandle<T>> {
    if problem.m() != 2 {
        return Err(invalid(
            "m",
            format!(
                "the general cost strategy is for 2 rays, got {}",
                problem.m()
            ),
        ));
    }
    let p = general_line_params(problem);
    let lambda = problem.lambda();
    let c = problem.cost();
    let spec = StrategySpec::Theorem5 { lambda, cost: *c };
    let slack = boundary_slack::<T>();
    let (form, value) = match branch {
        Branch::First => {
            if p.theta > T::one() + slack {
                return Err(SearchError::WrongRegime(format!(
                    "theta = {} > 1; the first formula does not apply",
                    p.theta
                )));
            }
            let form = ClosedForm {
                slope: T::one() - p.theta,
                intercept: T::one() + p.sigma,
                base: lit(2.0),
                exponent_div: None,
                shift: p.sigma,
                unit: lambda,
            };
            (
                form,
                lit::<T>(5.0) * c.alpha1() + lit::<T>(4.0) * c.alpha2(),
            )
        }
        Branch::Second => {
            if p.theta < T::one() - slack {
                return Err(SearchError::WrongRegime(format!(
                    "theta = {} < 1; the second formula does not apply",
                    p.theta
                )));
            }
            let form = ClosedForm {
                slope: T::zero(),
                intercept: T::one() + p.sigma,
                base: p.phi_growth,
                exponent_div: None,
                shift: p.sigma,
                unit: lambda,
            };
            let x1 = form.at(1);
            let value = ((c.alpha1() + c.alpha2()) * x1
                + (c.beta1() + c.beta2())
                + (c.alpha1() * lambda + c.beta1()))
                / lambda;
            (form, value)
        }
    };
    Ok(StrategyHandle::closed(spec, form, 2, lambda, optimal(value)).with_branch(branch))
}

/// `tau_m = 1 / ((m / (m-1))^(m-1) - 1)`, the regime threshold for `m` rays.
pub fn mray_threshold<T: Scalar>(m: usize) -> T {
    let m_t: T = idx(m);
    let ratio = m_t / (m_t - T::one());
    (ratio.powi(m as i32 - 1) - T::one()).recip()
}

/// `1 + 2 m^m / (m-1)^(m-1)`, the classic `m`-ray ratio.
pub fn mray_classic_ratio<T: Scalar>(m: usize) -> T {
    let m_t: T = idx(m);
    let ratio = m_t / (m_t - T::one());
    // m^m / (m-1)^(m-1) = m (m/(m-1))^(m-1)
    T::one() + lit::<T>(2.0) * m_t * ratio.powi(m as i32 - 1)
}

/// Second-regime `m`-ray ratio:
/// `(q - (3 + 2/rho)) / (q - 1)` with `q = (1 + 1/rho)^(-1/(m-1))`.
pub fn mray_large_turn_ratio<T: Scalar>(m: usize, rho: T) -> T {
    let q = (T::one() + rho.recip()).powf(-(idx::<T>(m - 1)).recip());
    (q - (lit::<T>(3.0) + lit::<T>(2.0) / rho)) / (q - T::one())
}

/// Ratio of the `m`-ray turn-cost strategy at `rho = t / 2 lambda`.
pub fn mray_ratio<T: Scalar>(m: usize, rho: T) -> T {
    if rho <= mray_threshold(m) {
        mray_classic_ratio(m)
    } else {
        mray_large_turn_ratio(m, rho)
    }
}

/// `m`-ray strategy with turn cost, branch chosen from `rho` (first at the boundary).
pub fn theorem6<T: Scalar>(m: usize, lambda: T, t: T) -> Result<StrategyHandle<T>> {
    if m < 2 {
        return Err(invalid("m", format!("need at least 2 rays, got {m}")));
    }
    check_positive("lambda", lambda)?;
    check_non_negative("t", t)?;
    let rho = t / (lambda + lambda);
    let branch = if rho <= mray_threshold(m) {
        Branch::First
    } else {
        Branch::Second
    };
    theorem6_branch(m, lambda, t, branch)
}

/// Like [`theorem6`] with an explicit branch; both are accepted at the boundary.
pub fn theorem6_branch<T: Scalar>(
    m: usize,
    lambda: T,
    t: T,
    branch: Branch,
) -> Result<StrategyHandle<T>> {
    if m < 2 {
        return Err(invalid("m", format!("need at least 2 rays, got {m}")));
    }
    check_positive("lambda", lambda)?;
    check_non_negative("t", t)?;
    let rho = t / (lambda + lambda);
    let threshold: T = mray_threshold(m);
    let m_t: T = idx(m);
    let spec = StrategySpec::Theorem6 { m, lambda, t };
    let slack = boundary_slack::<T>() * threshold.max(T::one());
    match branch {
        Branch::First => {
            if rho > threshold + slack {
                return Err(SearchError::WrongRegime(format!(
                    "t / 2 lambda = {rho} exceeds the threshold {threshold}"
                )));
            }
            let ratio = m_t / (m_t - T::one());
            let growth_gap = ratio.powi(m as i32 - 1) - T::one();
            let form = ClosedForm {
                slope: (T::one() - growth_gap * rho) / (m_t - T::one()),
                intercept: T::one() + rho,
                base: ratio,
                exponent_div: None,
                shift: rho,
                unit: lambda,
            };
            Ok(
                StrategyHandle::closed(spec, form, m, lambda, optimal(mray_classic_ratio(m)))
                    .with_branch(Branch::First),
            )
        }
        Branch::Second => {
            if rho < threshold - slack || rho == T::zero() {
                return Err(SearchError::WrongRegime(format!(
                    "t / 2 lambda = {rho} is below the threshold {threshold}"
                )));
            }
            let form = ClosedForm {
                slope: T::zero(),
                intercept: T::one() + rho,
                base: T::one() + rho.recip(),
                exponent_div: if m == 2 { None } else { Some(m_t - T::one()) },
                shift: rho,
                unit: lambda,
            };
            // Optimality of this branch is only established for two rays.
            let status = if m == 2 {
                Optimality::Optimal
            } else {
                Optimality::Achieved
            };
            let claimed = ClaimedCost::CompetitiveRatio {
                value: mray_large_turn_ratio(m, rho),
                status,
            };
            Ok(StrategyHandle::closed(spec, form, m, lambda, claimed).with_branch(Branch::Second))
        }
    }
}

/// Wraps a finite step list; no cost claim.
pub fn explicit<T: Scalar>(seq: StepSequence<T>) -> StrategyHandle<T> {
    StrategyHandle::explicit(seq)
}
