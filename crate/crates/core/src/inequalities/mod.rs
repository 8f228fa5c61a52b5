//! Numerical verification of trace and norm inequalities for weighted geometric
//! means of matrix exponentials.

mod checks;
mod pair;
mod suite;
mod verdict;

pub use checks::*;
pub use pair::{HermitianPair, MeanCurves};
pub use suite::*;
pub use verdict::{
    majorization_results, norm_tolerance, CheckContext, CheckResult, Regime, RegimeLabel, Verdict,
    NORM_REL_TOL,
};
