//! One-dimensional optimizations behind the closed-form optima.

use serde::Serialize;

use crate::error::{invalid, Result, SearchError};
use crate::scalar::{idx, lit, Scalar};
use crate::strategies::{gamma_star_closed, large_turn_ratio, min_total_cost_closed};
use crate::verify::roots::roots;

/// Iterations used by every golden-section search in this module.
pub const GOLDEN_ITERATIONS: usize = 200;

/// Minimizes a unimodal `f` on `[lo, hi]`; returns `(argmin, min)`.
pub fn golden_section<T: Scalar>(f: impl Fn(T) -> T, lo: T, hi: T, iterations: usize) -> (T, T) {
    let inv_phi: T = lit((5f64.sqrt() - 1.0) / 2.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iterations {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d);
        }
        if b - a <= T::epsilon() * (a.abs() + b.abs()) {
            break;
        }
    }
    let (x, fx) = if fc <= fd { (c, fc) } else { (d, fd) };
    let (fa, fb) = (f(a), f(b));
    [(a, fa), (b, fb)]
        .into_iter()
        .fold((x, fx), |best, cur| if cur.1 < best.1 { cur } else { best })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaStar<T> {
    pub gamma: T,
    pub total: T,
    pub closed_gamma: T,
    pub closed_total: T,
    pub note: Option<String>,
}

/// Minimizes `gamma D + r2(gamma) t` over `gamma >= 9`.
pub fn gamma_star<T: Scalar>(distance: T, t: T) -> Result<GammaStar<T>> {
    if !(distance > T::zero()) || !distance.is_finite() {
        return Err(invalid("D", format!("must be > 0, got {distance}")));
    }
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(invalid("t", format!("must be >= 0, got {t}")));
    }
    let nine: T = lit(9.0);
    if t == T::zero() {
        return Ok(GammaStar {
            gamma: nine,
            total: nine * distance,
            closed_gamma: nine,
            closed_total: nine * distance,
            note: Some("t = 0: the envelope degenerates to 9 D, attained at gamma = 9".into()),
        });
    }
    let closed_gamma = gamma_star_closed(distance, t);
    let hi = lit::<T>(50.0).max(closed_gamma * lit(4.0));
    let objective = |g: T| g * distance + roots(g).map(|r| r.r2).unwrap_or(T::infinity()) * t;
    let (gamma, total) = golden_section(objective, nine, hi, GOLDEN_ITERATIONS);
    Ok(GammaStar {
        gamma,
        total,
        closed_gamma,
        closed_total: min_total_cost_closed(distance, t),
        note: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LargeTurnOptimum<T> {
    pub gamma: T,
    pub x1: T,
    pub closed_gamma: T,
    pub closed_x1: T,
}

/// Lower bound on `gamma` imposed by the tail constraints for a first step `x1`.
pub fn tail_constraint<T: Scalar>(t: T, x1: T) -> T {
    let three: T = lit(3.0);
    let two: T = lit(2.0);
    (t * t + three * t * x1 + (t + two * x1) * (t * (t + two * x1)).sqrt()) / (t * x1)
}

/// Lower bound on `gamma` from the first revisit, `(2 x1 + t + lambda) / lambda`.
pub fn first_revisit_constraint<T: Scalar>(lambda: T, t: T, x1: T) -> T {
    (lit::<T>(2.0) * x1 + t + lambda) / lambda
}

/// Minimizes `max(tail, first revisit)` over `x1 >= lambda` for `t > 2 lambda`.
pub fn thm4_opt_solve<T: Scalar>(lambda: T, t: T) -> Result<LargeTurnOptimum<T>> {
    if !(lambda > T::zero()) || !lambda.is_finite() {
        return Err(invalid("lambda", format!("must be > 0, got {lambda}")));
    }
    if !(t > lit::<T>(2.0) * lambda) || !t.is_finite() {
        return Err(SearchError::WrongRegime(format!(
            "needs t > 2 lambda, got t = {t}, lambda = {lambda}"
        )));
    }
    let g = |x1: T| tail_constraint(t, x1).max(first_revisit_constraint(lambda, t, x1));
    let lo = lambda;
    let hi = lambda * lit(10.0) + t * lit(2.0);
    const GRID: usize = 10_000;
    let step = (hi - lo) / idx(GRID);
    let at = |k: usize| lo + step * idx(k);
    let best = (0..=GRID)
        .map(|k| (k, g(at(k))))
        .fold((0, T::infinity()), |b, c| if c.1 < b.1 { c } else { b })
        .0;
    let a = at(best.saturating_sub(1));
    let b = at((best + 1).min(GRID));
    let (x1, gamma) = golden_section(g, a, b, GOLDEN_ITERATIONS);
    let rho = t / (lit::<T>(2.0) * lambda);
    Ok(LargeTurnOptimum {
        gamma,
        x1,
        closed_gamma: large_turn_ratio(rho),
        closed_x1: (lit::<T>(2.0) + rho.recip()) * lambda,
    })
}

/// `1 + 2 a^2 / (a - 1)`, the ratio of geometric line search with base `a`.
pub fn gal_objective<T: Scalar>(a: T) -> T {
    T::one() + lit::<T>(2.0) * a * a / (a - T::one())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GalBound<T> {
    pub value: T,
    pub argmin: T,
}

/// Minimum of [`gal_objective`] over `a > 1`.
///
/// Golden-section brackets the optimum; bisection on
/// `f'(a) = 2 (1 - 1/(a-1)^2)` then pins the argmin to machine precision,
/// which a value-only search cannot do on a quadratic minimum.
pub fn gal_line_bound<T: Scalar>() -> GalBound<T> {
    let (guess, _) = golden_section(
        gal_objective,
        lit::<T>(1.0 + 1e-6),
        lit(64.0),
        GOLDEN_ITERATIONS,
    );
    let derivative = |a: T| {
        let s = a - T::one();
        lit::<T>(2.0) * (T::one() - (s * s).recip())
    };
    let width: T = lit(0.5);
    let (mut lo, mut hi) = (guess - width, guess + width);
    while derivative(lo) > T::zero() {
        lo = T::one() + (lo - T::one()) / lit(2.0);
    }
    while derivative(hi) < T::zero() {
        hi = hi * lit(2.0);
    }
    for _ in 0..200 {
        let mid = (lo + hi) / lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if derivative(mid) < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let argmin = (lo + hi) / lit(2.0);
    GalBound {
        value: gal_objective(argmin),
        argmin,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_on_parabola() {
        let (x, fx) = golden_section(|x: f64| (x - 1.25).powi(2) + 3.0, -4.0, 9.0, 200);
        assert!((x - 1.25).abs() < 1e-7);
        assert!((fx - 3.0).abs() < 1e-14);
    }

    #[test]
    fn golden_at_boundary() {
        let (x, _) = golden_section(|x: f64| x, 2.0, 5.0, 200);
        assert_eq!(x, 2.0);
    }

    #[test]
    fn gamma_star_unit_example() {
        let g = gamma_star(1.0_f64, 2.0).unwrap();
        assert!((g.gamma - 9.24264).abs() < 1e-5);
        assert!((g.total - 12.65685).abs() < 1e-5);
        assert!(((g.gamma - g.closed_gamma) / g.closed_gamma).abs() < 1e-6);
        assert!(((g.total - g.closed_total) / g.closed_total).abs() < 1e-6);
        assert!(g.total < 9.0 + 4.0);
    }

    #[test]
    fn gamma_star_grid_search_oracle() {
        let mut best = (0.0, f64::INFINITY);
        let mut g = 9.0;
        while g < 12.0 {
            let v = g + roots(g).unwrap().r2 * 2.0;
            if v < best.1 {
                best = (g, v);
            }
            g += 1e-5;
        }
        let s = gamma_star(1.0_f64, 2.0).unwrap();
        assert!((s.gamma - best.0).abs() < 2e-5);
        assert!((s.total - best.1).abs() < 1e-9);
    }

    #[test]
    fn gamma_star_small_turn_cost() {
        let g = gamma_star(1.0_f64, 1e-8).unwrap();
        assert!((g.gamma - 9.0).abs() < 1e-3);
        assert!((g.total - 9.0).abs() < 1e-6);
        let z = gamma_star(1.0_f64, 0.0).unwrap();
        assert_eq!((z.gamma, z.total), (9.0, 9.0));
        assert!(z.note.is_some());
        assert!(gamma_star(0.0_f64, 1.0).is_err());
    }

    #[test]
    fn large_turn_optimum() {
        let o = thm4_opt_solve(1.0_f64, 4.0).unwrap();
        assert!((o.gamma - 10.0).abs() < 1e-6);
        assert!((o.x1 - 2.5).abs() < 1e-6);
        assert_eq!(o.closed_gamma, 10.0);
        assert_eq!(o.closed_x1, 2.5);
    }

    #[test]
    fn large_turn_grid_oracle() {
        let mut best = (0.0, f64::INFINITY);
        for k in 0..=90_000 {
            let x1 = 1.0 + k as f64 * 1e-4;
            let v = tail_constraint(4.0_f64, x1).max(first_revisit_constraint(1.0_f64, 4.0, x1));
            if v < best.1 {
                best = (x1, v);
            }
        }
        assert!((best.0 - 2.5).abs() < 2e-4);
        assert!((best.1 - 10.0).abs() < 1e-3);
    }

    #[test]
    fn large_turn_boundary_and_domain() {
        let o = thm4_opt_solve(1.0_f64, 2.0 + 1e-9).unwrap();
        assert!((o.gamma - 9.0).abs() < 1e-6);
        assert!(matches!(
            thm4_opt_solve(1.0_f64, 1.0),
            Err(SearchError::WrongRegime(_))
        ));
        assert!(matches!(
            thm4_opt_solve(1.0_f64, 2.0),
            Err(SearchError::WrongRegime(_))
        ));
    }

    #[test]
    fn tail_constraint_minimum_is_nine() {
        assert!((tail_constraint(2.0_f64, 3.0) - 9.0).abs() < 1e-12);
    }

    #[test]
    fn gal_bound() {
        let g = gal_line_bound::<f64>();
        assert!((g.value - 9.0).abs() < 1e-9);
        assert!((g.argmin - 2.0).abs() < 1e-9);
        assert_eq!(gal_objective(2.0_f64), 9.0);
        assert_eq!(gal_objective(3.0_f64), 10.0);
    }

    #[test]
    fn gal_bound_single_precision() {
        let g = gal_line_bound::<f32>();
        assert!((g.value - 9.0).abs() < 1e-5);
    }
}
