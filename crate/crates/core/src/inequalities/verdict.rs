use std::fmt;

use serde::{Deserialize, Serialize};

use crate::majorization::{MajorizationTolerance, MajorizationVerdict, Relation};

/// Relative tolerance for trace and norm comparisons.
pub const NORM_REL_TOL: f64 = 1e-9;

/// `1e-9 * max(|lhs|, |rhs|, 1)`.
pub fn norm_tolerance(lhs: f64, rhs: f64) -> f64 {
    NORM_REL_TOL * lhs.abs().max(rhs.abs()).max(1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Equality,
    Violated,
    NotApplicable,
}

impl Verdict {
    /// `violated` iff `gap < -tol`, `equality` iff `|gap| <= tol`. NaN gaps are violations.
    pub fn from_gap(gap: f64, tol: f64) -> Self {
        if gap.is_nan() || gap < -tol {
            Verdict::Violated
        } else if gap.abs() <= tol {
            Verdict::Equality
        } else {
            Verdict::Holds
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Equality => "equality",
            Verdict::Violated => "violated",
            Verdict::NotApplicable => "not_applicable",
        })
    }
}

/// The regimes of the weight `t` in which the three operator families are ordered differently.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `0 <= t <= 1`
    Interior,
    /// `-1 <= t <= 0` or `1 <= t <= 2`
    NearExterior,
    /// `t <= -1` or `t >= 2`
    FarExterior,
}

impl Regime {
    pub fn contains(self, t: f64) -> bool {
        match self {
            Regime::Interior => (0.0..=1.0).contains(&t),
            Regime::NearExterior => (-1.0..=0.0).contains(&t) || (1.0..=2.0).contains(&t),
            Regime::FarExterior => t <= -1.0 || t >= 2.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::Interior => "interior",
            Regime::NearExterior => "near_exterior",
            Regime::FarExterior => "far_exterior",
        }
    }
}

/// Every regime containing `t`. Boundary points belong to all adjacent regimes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeLabel(pub Vec<Regime>);

impl RegimeLabel {
    pub fn of(t: f64) -> Self {
        Self(
            [Regime::Interior, Regime::NearExterior, Regime::FarExterior]
                .into_iter()
                .filter(|r| r.contains(t))
                .collect(),
        )
    }
}

impl fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.0.iter().map(|r| r.name()).collect();
        f.write_str(&names.join("+"))
    }
}

/// Parameters a check was evaluated at.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckContext {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm: Option<String>,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial: Option<usize>,
    /// Factor applied to the drawn pair by the conditioning guard.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub commutator: Option<f64>,
    /// Statistical side observation (e.g. strict separation), never asserted per trial.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flag: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckContext {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            ..Self::default()
        }
    }

    pub fn t(mut self, t: f64) -> Self {
        self.t = Some(t);
        self
    }

    pub fn r(mut self, r: f64) -> Self {
        self.r = Some(r);
        self
    }

    pub fn q(mut self, q: f64) -> Self {
        self.q = Some(q);
        self
    }

    pub fn k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn norm(mut self, norm: impl ToString) -> Self {
        self.norm = Some(norm.to_string());
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// One verdict on one inequality or identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs` for inequalities, a log-domain margin for majorization,
    /// `-|lhs - rhs|` for identities.
    pub gap: f64,
    pub tol: f64,
    pub verdict: Verdict,
    /// Non-asserting checks (the conjecture fuzzer) never count as failures.
    pub asserted: bool,
    pub context: CheckContext,
}

impl CheckResult {
    /// Asserts `lhs <= rhs` with the default relative tolerance.
    pub fn inequality(id: impl Into<String>, lhs: f64, rhs: f64, context: CheckContext) -> Self {
        Self::with_gap(id, lhs, rhs, rhs - lhs, norm_tolerance(lhs, rhs), context)
    }

    /// Asserts `lhs == rhs` within `tol`.
    pub fn identity(
        id: impl Into<String>,
        lhs: f64,
        rhs: f64,
        tol: f64,
        context: CheckContext,
    ) -> Self {
        Self::with_gap(id, lhs, rhs, -(lhs - rhs).abs(), tol, context)
    }

    pub fn with_gap(
        id: impl Into<String>,
        lhs: f64,
        rhs: f64,
        gap: f64,
        tol: f64,
        context: CheckContext,
    ) -> Self {
        let gap = if gap.is_nan() || lhs.is_nan() || rhs.is_nan() {
            f64::NAN
        } else {
            gap
        };
        Self {
            check_id: id.into(),
            lhs,
            rhs,
            gap,
            tol,
            verdict: Verdict::from_gap(gap, tol),
            asserted: true,
            context,
        }
    }

    pub fn not_applicable(id: impl Into<String>, context: CheckContext) -> Self {
        Self {
            check_id: id.into(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            gap: f64::NAN,
            tol: 0.0,
            verdict: Verdict::NotApplicable,
            asserted: true,
            context,
        }
    }

    /// A numerical failure inside an asserting check is reported as a violation.
    pub fn failed(id: impl Into<String>, err: &crate::MatError, context: CheckContext) -> Self {
        Self {
            check_id: id.into(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            gap: f64::NAN,
            tol: 0.0,
            verdict: Verdict::Violated,
            asserted: true,
            context: context.note(format!("numerical error: {err}")),
        }
    }

    pub fn unasserted(mut self) -> Self {
        self.asserted = false;
        self
    }

    pub fn is_failure(&self) -> bool {
        self.asserted && self.verdict == Verdict::Violated
    }
}

/// Splits a majorization verdict `A ≺ B` into a prefix check (proper prefixes
/// `k < n`) and, for `required = Log`, a determinant identity check.
pub fn majorization_results(
    id: &str,
    verdict: &MajorizationVerdict,
    required: Relation,
    tol: MajorizationTolerance,
    context: CheckContext,
) -> Vec<CheckResult> {
    let total_b = verdict.total_log_gap;
    let prefix = CheckResult::with_gap(
        format!("{id}.prefix"),
        0.0,
        verdict.proper_prefix_margin(),
        verdict.proper_prefix_margin(),
        tol.prefix,
        context.clone(),
    );
    let mut out = vec![prefix];
    match required {
        Relation::Log => out.push(CheckResult::identity(
            format!("{id}.det"),
            0.0,
            total_b,
            tol.total,
            context,
        )),
        Relation::WeakLog => out.push(CheckResult::with_gap(
            format!("{id}.det"),
            0.0,
            total_b,
            total_b,
            tol.prefix,
            context,
        )),
        Relation::None => {}
    }
    out
}
