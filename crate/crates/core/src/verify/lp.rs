//! Certificate checks for the infinite linear program behind the `gamma D + phi` trade-off.
//!
//! Primal: for `n >= 1`,
//! `sum_{i=1}^n 2 x_i - (gamma-1) x_{n-1} + n t <= phi` with `x_0 = 0`.
//! Dual: multipliers `y_i = r1^{-i}` make every column vanish and bound `phi >= r2 t`.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::model::Tolerances;
use crate::scalar::{idx, lit, to_f64, Scalar};
use crate::verify::roots::roots;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

/// Truncated series against their closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualIdentities<T> {
    pub sum_y: T,
    /// `1 / (r1 - 1)`
    pub sum_y_closed: T,
    pub sum_i_y: T,
    /// `r1 / (r1 - 1)^2`
    pub sum_i_y_closed: T,
    /// `sum_i_y / sum_y`, the dual bound on `phi / t`.
    pub dual_bound: T,
    pub r2: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport<T> {
    pub check: String,
    pub gamma: T,
    /// Primal slack `lhs_n - phi`, divided by `max(1, sum of |terms|)` of constraint `n`.
    pub primal_residuals: Vec<T>,
    /// `sum_{i=l}^{L} 2 y_i - (gamma-1) y_{l+1}` for `l = 1..=ell_max`.
    pub dual_column_sums: Vec<T>,
    pub dual_scalar_identities: Option<DualIdentities<T>>,
    pub tail_bound: T,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

/// Evaluates the first `n` primal constraints at `x_i = (r2^i - 1) t / 2`.
///
/// The verdict passes iff every constraint holds, i.e. each raw slack is at
/// most `abs + rel * M_n`, where `M_n` is the constraint's absolute term mass.
pub fn lp_primal_check<T: Scalar>(
    gamma: T,
    t: T,
    phi: T,
    n: usize,
) -> Result<CertificateReport<T>> {
    let rp = roots(gamma)?;
    if !(t > T::zero()) || !t.is_finite() {
        return Err(invalid("t", format!("must be > 0, got {t}")));
    }
    if !phi.is_finite() {
        return Err(invalid("phi", "must be finite"));
    }
    if n < 2 {
        return Err(invalid(
            "N",
            format!("need at least 2 constraints, got {n}"),
        ));
    }
    let tol = Tolerances::default();
    let half: T = lit(0.5);
    let x = |i: usize| -> T {
        if i == 0 {
            T::zero()
        } else {
            (rp.r2.powi(i as i32) - T::one()) * t * half
        }
    };
    let g1 = gamma - T::one();
    let mut residuals = Vec::with_capacity(n);
    let mut ok = true;
    let mut sum2x = T::zero();
    for k in 1..=n {
        sum2x = sum2x + x(k) * lit(2.0);
        let back = g1 * x(k - 1);
        let fixed = idx::<T>(k) * t;
        let raw = sum2x - back + fixed - phi;
        let mass = sum2x.abs() + back.abs() + fixed + phi.abs();
        ok &= to_f64(raw) <= tol.abs + tol.rel * to_f64(mass);
        residuals.push(raw / mass.max(T::one()));
    }
    let mut notes = vec![format!(
        "x_i = (r2^i - 1) t / 2 with r2 = {}; constraints are tight iff phi = r2 t = {}",
        rp.r2,
        rp.r2 * t
    )];
    if let Some(k) = residuals
        .iter()
        .position(|r| to_f64(*r) > tol.abs + tol.rel)
    {
        notes.push(format!("constraint {} violated", k + 1));
    }
    Ok(CertificateReport {
        check: "lp_primal".into(),
        gamma,
        primal_residuals: residuals,
        dual_column_sums: Vec::new(),
        dual_scalar_identities: None,
        tail_bound: T::zero(),
        verdict: Verdict::from_bool(ok),
        notes,
    })
}

/// Checks the geometric dual multipliers `y_i = r1^{-i}` truncated at `L`.
///
/// Column sums and series identities must agree with zero and their closed
/// forms within `abs + tail_bound`, where the tail bound dominates every
/// truncated remainder.
pub fn lp_dual_check<T: Scalar>(
    gamma: T,
    l: usize,
    ell_max: usize,
) -> Result<CertificateReport<T>> {
    if !(gamma > lit(9.0)) {
        return Err(invalid(
            "gamma",
            format!("dual certificate needs gamma > 9 so that r1 > r2, got {gamma}"),
        ));
    }
    if l < 50 {
        return Err(invalid("L", format!("truncation must be >= 50, got {l}")));
    }
    if ell_max == 0 || ell_max >= l {
        return Err(invalid(
            "ell_max",
            format!("must be in 1..{l}, got {ell_max}"),
        ));
    }
    let rp = roots(gamma)?;
    let r1 = rp.r1;
    let inv = T::one() / r1;
    let tol = Tolerances::default();
    let two: T = lit(2.0);
    // y[i] for i = 0..=L+1
    let y: Vec<T> = (0..=l + 1).map(|i| inv.powi(i as i32)).collect();
    let geometric_tail = two * inv.powi(l as i32) / (T::one() - inv);
    let li: T = idx(l + 1);
    let weighted_tail = li * inv.powi((l + 1) as i32) / ((T::one() - inv) * (T::one() - inv));
    let tail_bound = geometric_tail.max(weighted_tail);
    let bound = T::from_f64(tol.abs).unwrap() + tail_bound;

    // suffix[l] = sum_{i=l}^{L} y_i
    let mut suffix = vec![T::zero(); l + 2];
    for i in (1..=l).rev() {
        suffix[i] = suffix[i + 1] + y[i];
    }
    let g1 = gamma - T::one();
    let columns: Vec<T> = (1..=ell_max)
        .map(|ell| two * suffix[ell] - g1 * y[ell + 1])
        .collect();
    let sum_y = suffix[1];
    let sum_i_y = (1..=l).fold(T::zero(), |acc, i| acc + idx::<T>(i) * y[i]);
    let ids = DualIdentities {
        sum_y,
        sum_y_closed: T::one() / (r1 - T::one()),
        sum_i_y,
        sum_i_y_closed: r1 / ((r1 - T::one()) * (r1 - T::one())),
        dual_bound: sum_i_y / sum_y,
        r2: rp.r2,
    };
    let ok = columns.iter().all(|c| c.abs() <= bound)
        && (ids.sum_y - ids.sum_y_closed).abs() <= bound
        && (ids.sum_i_y - ids.sum_i_y_closed).abs() <= bound
        && (ids.dual_bound - ids.r2).abs() <= bound * (T::one() + ids.r2);
    Ok(CertificateReport {
        check: "lp_dual".into(),
        gamma,
        primal_residuals: Vec::new(),
        dual_column_sums: columns,
        dual_scalar_identities: Some(ids),
        tail_bound,
        verdict: Verdict::from_bool(ok),
        notes: vec![format!(
            "y_i = r1^-i with r1 = {r1}; dual objective sum(i y_i)/sum(y_i) = r1/(r1-1) = r2, so phi >= r2 t"
        )],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primal_tight_at_nine() {
        let r = lp_primal_check(9.0_f64, 2.0, 4.0, 30).unwrap();
        assert!(r.verdict.passed());
        assert!(r.primal_residuals.iter().all(|v| v.abs() < 1e-9));
        assert_eq!(r.primal_residuals.len(), 30);
    }

    #[test]
    fn primal_tight_at_ten() {
        let r = lp_primal_check(10.0_f64, 1.0, 1.5, 30).unwrap();
        assert!(r.verdict.passed());
        assert!(r.primal_residuals.iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn primal_fails_below_optimum() {
        let r = lp_primal_check(10.0_f64, 1.0, 1.4, 30).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.primal_residuals[0] > 0.0);
    }

    #[test]
    fn primal_domain() {
        assert!(lp_primal_check(8.0_f64, 1.0, 1.0, 30).is_err());
        assert!(lp_primal_check(10.0_f64, 0.0, 1.0, 30).is_err());
        assert!(lp_primal_check(10.0_f64, 1.0, 1.5, 1).is_err());
    }

    #[test]
    fn dual_at_ten() {
        let r = lp_dual_check(10.0_f64, 200, 20).unwrap();
        assert!(r.verdict.passed());
        assert!(r.dual_column_sums.iter().all(|c| c.abs() < 1e-12));
        let ids = r.dual_scalar_identities.unwrap();
        assert!((ids.sum_y - 0.5).abs() < 1e-12);
        assert!((ids.sum_i_y - 0.75).abs() < 1e-12);
        assert!((ids.dual_bound - 1.5).abs() < 1e-12);
    }

    #[test]
    fn dual_at_twenty_five() {
        let r = lp_dual_check(25.0_f64, 200, 20).unwrap();
        let r1 = (24.0 + 384f64.sqrt()) / 4.0;
        let ids = r.dual_scalar_identities.unwrap();
        assert!((ids.sum_y - 1.0 / (r1 - 1.0)).abs() < 1e-12);
        assert!(r.verdict.passed());
    }

    #[test]
    fn dual_domain() {
        assert!(lp_dual_check(9.0_f64, 200, 20).is_err());
        assert!(lp_dual_check(10.0_f64, 40, 20).is_err());
        assert!(lp_dual_check(10.0_f64, 200, 200).is_err());
    }

    #[test]
    fn short_truncation_widens_tail_bound() {
        let r = lp_dual_check(9.5_f64, 50, 10).unwrap();
        assert!(r.tail_bound > 0.0);
        assert!(r.verdict.passed());
    }
}
