//! Weighted geometric means of positive definite matrices for every real
//! weight, and a randomized verification harness for the Golden-Thompson
//! family of norm and log-majorization inequalities that surround them.

// Parameter checks are written `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod inequalities;
pub mod linalg;
pub mod majorization;
pub mod means;

pub use error::{MatError, Result};
