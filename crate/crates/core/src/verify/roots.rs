//! Roots of `r^2 - ((gamma-1)/2) r + (gamma-1)/2 = 0` and the gamma/phi trade-off.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::scalar::{lit, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootPair<T> {
    pub gamma: T,
    pub r1: T,
    pub r2: T,
}

impl<T: Scalar> RootPair<T> {
    /// Value of the characteristic quadratic at `r`.
    pub fn quadratic(gamma: T, r: T) -> T {
        let k = (gamma - T::one()) / lit(2.0);
        r * r - k * r + k
    }

    /// Largest absolute quadratic residual of the two roots.
    pub fn residual(&self) -> T {
        Self::quadratic(self.gamma, self.r1)
            .abs()
            .max(Self::quadratic(self.gamma, self.r2).abs())
    }

    pub fn is_double(&self) -> bool {
        (self.r1 - self.r2).abs() < lit(1e-9)
    }
}

/// `r1,2 = (gamma - 1 ± sqrt((gamma-9)(gamma-1))) / 4`, defined for `gamma >= 9`.
///
/// `r2` is recovered from `r1 * r2 = (gamma-1)/2` so it keeps full precision
/// when `gamma` is large.
pub fn roots<T: Scalar>(gamma: T) -> Result<RootPair<T>> {
    if !(gamma >= lit(9.0)) || !gamma.is_finite() {
        return Err(invalid(
            "gamma",
            format!("must be >= 9 (real roots), got {gamma}"),
        ));
    }
    let g1 = gamma - T::one();
    let disc = ((gamma - lit(9.0)) * g1).sqrt();
    let r1 = (g1 + disc) / lit(4.0);
    let r2 = (g1 / lit(2.0)) / r1;
    Ok(RootPair { gamma, r1, r2 })
}

/// Optimal additive term of the `gamma D + phi` envelope:
/// `phi(gamma) = (gamma - 1 - sqrt((gamma-1)(gamma-9))) t / 4`.
pub fn phi<T: Scalar>(gamma: T, t: T) -> Result<T> {
    if !(gamma >= lit(9.0)) || !gamma.is_finite() {
        return Err(invalid("gamma", format!("must be >= 9, got {gamma}")));
    }
    let g1 = gamma - T::one();
    Ok((g1 - (g1 * (gamma - lit(9.0))).sqrt()) / lit(4.0) * t)
}
