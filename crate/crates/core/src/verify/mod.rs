//! Numerical checks of the analytic machinery: roots, LP certificates,
//! recurrences and the one-dimensional optima.

pub mod explore;
pub mod lp;
pub mod optimize;
pub mod recurrence;
pub mod roots;

pub use explore::{equality_system, min_gamma_equality, EqualitySolution};
pub use lp::{lp_dual_check, lp_primal_check, CertificateReport, DualIdentities, Verdict};
pub use optimize::{
    gal_line_bound, gal_objective, gamma_star, golden_section, thm4_opt_solve, GalBound, GammaStar,
    LargeTurnOptimum,
};
pub use recurrence::{
    chain_residuals, lemma2_delta_check, recurrences, ClosedFormKind, DeltaReport, RecurrenceTriple,
};
pub use roots::{phi, roots, RootPair};
