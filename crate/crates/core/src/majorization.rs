//! Unitarily invariant norms, (log-)majorization of singular value vectors and
//! compound matrices.
//!
//! All log-majorization arithmetic runs on prefix sums of logarithms so that
//! spectra spanning many orders of magnitude never overflow.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{MatError, Result};
use crate::linalg::{singular_values, ComplexMatrix, HermitianMatrix};

/// Entries below `s_1 * ZERO_FLOOR` are treated as exact zeros.
pub const ZERO_FLOOR: f64 = 1e-14;
/// Per-dimension log-domain slack for prefix inequalities.
pub const PREFIX_SLACK_PER_DIM: f64 = 1e-10;
/// Per-dimension log-domain slack for equality of total products.
pub const TOTAL_SLACK_PER_DIM: f64 = 1e-9;
/// Relative negative eigenvalue accepted as round-off in a positive semidefinite input.
pub const PSD_TOL: f64 = 1e-12;

/// A unitarily invariant norm, evaluated on singular values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum NormSelector {
    KyFan(usize),
    Schatten(f64),
    Trace,
    Operator,
    Frobenius,
}

impl NormSelector {
    /// Whether the norm strictly increases under strict singular value dominance.
    pub fn strictly_increasing(&self, n: usize) -> bool {
        match *self {
            NormSelector::Trace | NormSelector::Frobenius => true,
            NormSelector::Schatten(p) => p.is_finite(),
            NormSelector::KyFan(k) => k == n,
            NormSelector::Operator => false,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            NormSelector::KyFan(k) if k == 0 || k > n => Err(MatError::InvalidParameter(format!(
                "Ky Fan index {k} outside 1..={n}"
            ))),
            NormSelector::Schatten(p) if !(p >= 1.0) => Err(MatError::InvalidParameter(format!(
                "Schatten exponent {p} must be >= 1"
            ))),
            _ => Ok(()),
        }
    }

    /// Trace, Frobenius, Operator and every Ky Fan norm for dimension `n`.
    pub fn default_set(n: usize) -> Vec<NormSelector> {
        let mut v = vec![
            NormSelector::Trace,
            NormSelector::Frobenius,
            NormSelector::Operator,
        ];
        v.extend((1..=n).map(NormSelector::KyFan));
        v
    }
}

impl fmt::Display for NormSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormSelector::KyFan(k) => write!(f, "kyfan{k}"),
            NormSelector::Schatten(p) => write!(f, "schatten{p}"),
            NormSelector::Trace => write!(f, "trace"),
            NormSelector::Operator => write!(f, "operator"),
            NormSelector::Frobenius => write!(f, "frobenius"),
        }
    }
}

impl FromStr for NormSelector {
    type Err = MatError;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let bad = || MatError::InvalidParameter(format!("unknown norm `{s}`"));
        match lower.as_str() {
            "trace" => Ok(NormSelector::Trace),
            "operator" | "op" | "spectral" => Ok(NormSelector::Operator),
            "frobenius" | "fro" => Ok(NormSelector::Frobenius),
            _ => {
                if let Some(k) = lower.strip_prefix("kyfan") {
                    k.parse().map(NormSelector::KyFan).map_err(|_| bad())
                } else if let Some(p) = lower.strip_prefix("schatten") {
                    p.parse().map(NormSelector::Schatten).map_err(|_| bad())
                } else {
                    Err(bad())
                }
            }
        }
    }
}

/// Evaluates a norm on a descending vector of singular values.
pub fn norm_of_singular_values(s: &[f64], sel: NormSelector) -> Result<f64> {
    sel.validate(s.len())?;
    Ok(match sel {
        NormSelector::KyFan(k) => s[..k].iter().sum(),
        NormSelector::Trace => s.iter().sum(),
        NormSelector::Operator => s[0],
        NormSelector::Frobenius => s.iter().map(|x| x * x).sum::<f64>().sqrt(),
        NormSelector::Schatten(p) if p.is_infinite() => s[0],
        NormSelector::Schatten(p) => {
            // factor out s_1 to keep large entries from overflowing
            let top = s[0];
            if top == 0.0 {
                0.0
            } else {
                top * s
                    .iter()
                    .map(|x| (x / top).powf(p))
                    .sum::<f64>()
                    .powf(1.0 / p)
            }
        }
    })
}

/// `|||A|||` for the selected unitarily invariant norm.
pub fn ui_norm(a: &ComplexMatrix, sel: NormSelector) -> Result<f64> {
    sel.validate(a.dim())?;
    norm_of_singular_values(&singular_values(a)?, sel)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// Log-majorization: weak log-majorization plus equal total products.
    Log,
    WeakLog,
    None,
}

impl Relation {
    /// `true` when `self` is at least as strong as `required`.
    pub fn satisfies(self, required: Relation) -> bool {
        match required {
            Relation::None => true,
            Relation::WeakLog => matches!(self, Relation::WeakLog | Relation::Log),
            Relation::Log => self == Relation::Log,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MajorizationTolerance {
    /// A prefix holds when `prefix_log_b - prefix_log_a >= -prefix`.
    pub prefix: f64,
    /// Total products are equal when `|sum log a - sum log b| <= total`.
    pub total: f64,
}

impl MajorizationTolerance {
    pub fn for_dim(n: usize) -> Self {
        Self {
            prefix: n as f64 * PREFIX_SLACK_PER_DIM,
            total: n as f64 * TOTAL_SLACK_PER_DIM,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MajorizationVerdict {
    pub relation: Relation,
    /// Minimum over all prefixes of `prefix_log_b - prefix_log_a`.
    pub worst_margin: f64,
    pub prefix_margins: Vec<f64>,
    /// `sum log b - sum log a`.
    pub total_log_gap: f64,
}

impl MajorizationVerdict {
    /// Worst margin over the proper prefixes `k < n` (the full prefix is the
    /// determinant comparison, reported separately as `total_log_gap`).
    pub fn proper_prefix_margin(&self) -> f64 {
        let n = self.prefix_margins.len();
        if n <= 1 {
            return self.prefix_margins.first().copied().unwrap_or(0.0).max(0.0);
        }
        self.prefix_margins[..n - 1]
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

fn prefix_logs(v: &[f64]) -> Vec<f64> {
    let top = v.first().copied().unwrap_or(0.0);
    let floor = top * ZERO_FLOOR;
    v.iter()
        .scan(0.0f64, |acc, &x| {
            *acc += if x <= floor || x == 0.0 {
                f64::NEG_INFINITY
            } else {
                x.ln()
            };
            Some(*acc)
        })
        .collect()
}

fn check_descending_nonneg(v: &[f64], name: &str) -> Result<()> {
    if let Some(x) = v.iter().find(|x| !(**x >= 0.0)) {
        return Err(MatError::Domain(format!(
            "{name} has a negative or NaN entry {x}"
        )));
    }
    if v.windows(2).any(|w| w[0] < w[1]) {
        return Err(MatError::Domain(format!(
            "{name} is not sorted in descending order"
        )));
    }
    Ok(())
}

/// Log-majorization comparison `a ≺ b` of descending non-negative vectors.
pub fn log_majorization_compare(
    a: &[f64],
    b: &[f64],
    tol: MajorizationTolerance,
) -> Result<MajorizationVerdict> {
    if a.len() != b.len() {
        return Err(MatError::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    check_descending_nonneg(a, "left vector")?;
    check_descending_nonneg(b, "right vector")?;
    let la = prefix_logs(a);
    let lb = prefix_logs(b);
    let prefix_margins: Vec<f64> = la
        .iter()
        .zip(&lb)
        .map(
            |(&x, &y)| match (x == f64::NEG_INFINITY, y == f64::NEG_INFINITY) {
                (true, true) => 0.0,
                (true, false) => f64::INFINITY,
                (false, true) => f64::NEG_INFINITY,
                (false, false) => y - x,
            },
        )
        .collect();
    let worst_margin = prefix_margins.iter().copied().fold(f64::INFINITY, f64::min);
    let total_log_gap = prefix_margins.last().copied().unwrap_or(0.0);
    let weak = prefix_margins.iter().all(|&m| m >= -tol.prefix);
    let relation = if !weak {
        Relation::None
    } else if total_log_gap.abs() <= tol.total {
        Relation::Log
    } else {
        Relation::WeakLog
    };
    Ok(MajorizationVerdict {
        relation,
        worst_margin: if a.is_empty() { 0.0 } else { worst_margin },
        prefix_margins,
        total_log_gap,
    })
}

/// Eigenvalues of a positive semidefinite matrix, descending; these are its singular values.
pub fn psd_singular_values(a: &HermitianMatrix) -> Result<Vec<f64>> {
    let ev = a.eig()?.eigenvalues;
    let top = ev[0].max(0.0);
    let min = ev[ev.len() - 1];
    if min < -PSD_TOL * top.max(f64::MIN_POSITIVE) {
        return Err(MatError::NotPositiveDefinite {
            min_eigenvalue: min,
            threshold: -PSD_TOL * top,
        });
    }
    Ok(ev.into_iter().map(|l| l.max(0.0)).collect())
}

/// Log-majorization `A ≺_log B` of positive semidefinite matrices through their singular values.
pub fn matrix_log_majorization(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tol: MajorizationTolerance,
) -> Result<MajorizationVerdict> {
    if a.dim() != b.dim() {
        return Err(MatError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    log_majorization_compare(&psd_singular_values(a)?, &psd_singular_values(b)?, tol)
}

/// Weak majorization `a ≺_w b` of real (possibly signed) vectors: prefix sums of
/// the descending rearrangements.
pub fn weakly_majorizes(b: &[f64], a: &[f64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let sort = |v: &[f64]| {
        v.iter()
            .copied()
            .sorted_by(|x, y| y.total_cmp(x))
            .collect::<Vec<_>>()
    };
    let (a, b) = (sort(a), sort(b));
    let mut sa = 0.0;
    let mut sb = 0.0;
    a.iter().zip(&b).all(|(x, y)| {
        sa += x;
        sb += y;
        sa <= sb + tol
    })
}

/// Majorization `a ≺ b`: weak majorization with equal totals.
pub fn majorizes(b: &[f64], a: &[f64], tol: f64) -> bool {
    weakly_majorizes(b, a, tol) && (a.iter().sum::<f64>() - b.iter().sum::<f64>()).abs() <= tol
}

/// Binomial coefficient.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// The k-th compound (antisymmetric tensor power) `A^{∧k}`: all `k x k` minors,
/// rows and columns indexed by sorted index subsets in lexicographic order.
pub fn compound_matrix(a: &ComplexMatrix, k: usize) -> Result<ComplexMatrix> {
    let n = a.dim();
    if k == 0 || k > n {
        return Err(MatError::InvalidParameter(format!(
            "compound order {k} outside 1..={n}"
        )));
    }
    let subsets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
    let m = subsets.len();
    let mut data = Vec::with_capacity(m * m);
    for rows in &subsets {
        for cols in &subsets {
            data.push(a.submatrix(rows, cols).determinant());
        }
    }
    ComplexMatrix::from_row_major(m, data)
        .map_err(|_| MatError::Range("compound matrix entries overflow".into()))
}

/// `Π_{i≤k} s_i(A)` computed as `s_1(A^{∧k})`.
pub fn top_singular_product(a: &ComplexMatrix, k: usize) -> Result<f64> {
    let c = compound_matrix(a, k)?;
    Ok(singular_values(&c)?[0])
}
