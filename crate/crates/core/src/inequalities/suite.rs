//! Seeded randomized runs of the check catalog with aggregate reporting.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{MatError, Result};
use crate::linalg::{
    random_commuting_pair, random_ginibre, random_hermitian, ComplexMatrix, HermitianMatrix,
    PositiveDefiniteMatrix,
};
use crate::majorization::{MajorizationTolerance, NormSelector, Relation};

use super::checks::*;
use super::pair::HermitianPair;
use super::verdict::{majorization_results, CheckContext, CheckResult, Verdict};

/// Commutator norm from which a pair counts as clearly non-commuting in the statistics.
pub const NONCOMMUTING_THRESHOLD: f64 = 0.1;

/// A family of checks selectable on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    GoldenThompson,
    Theorem2,
    Interpolation,
    Hiai2019,
    Araki,
    GtLogmaj,
    Theorem5,
    Furuta,
    Equality,
    Derivative,
    LieTrotter,
    Convexity,
    Conjecture,
}

impl CheckKind {
    pub const ALL: [CheckKind; 13] = [
        CheckKind::GoldenThompson,
        CheckKind::Theorem2,
        CheckKind::Interpolation,
        CheckKind::Hiai2019,
        CheckKind::Araki,
        CheckKind::GtLogmaj,
        CheckKind::Theorem5,
        CheckKind::Furuta,
        CheckKind::Equality,
        CheckKind::Derivative,
        CheckKind::LieTrotter,
        CheckKind::Convexity,
        CheckKind::Conjecture,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::GoldenThompson => "golden_thompson",
            CheckKind::Theorem2 => "theorem2",
            CheckKind::Interpolation => "interpolation",
            CheckKind::Hiai2019 => "hiai2019",
            CheckKind::Araki => "araki",
            CheckKind::GtLogmaj => "gt_logmaj",
            CheckKind::Theorem5 => "theorem5",
            CheckKind::Furuta => "furuta",
            CheckKind::Equality => "equality",
            CheckKind::Derivative => "derivative",
            CheckKind::LieTrotter => "lie_trotter",
            CheckKind::Convexity => "convexity",
            CheckKind::Conjecture => "conjecture",
        }
    }
}

impl CheckKind {
    /// The family a result id belongs to.
    pub fn of_check_id(id: &str) -> Option<CheckKind> {
        let head = id.split('.').next().unwrap_or(id);
        let head = match head {
            "compound" => "theorem5",
            other => other,
        };
        CheckKind::ALL.into_iter().find(|k| k.name() == head)
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = MatError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase().replace('-', "_");
        CheckKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| MatError::InvalidParameter(format!("unknown check `{s}`")))
    }
}

/// Inclusive grid `start, start + step, ..., stop`, each point rounded to 9 decimals
/// so that accumulated steps land exactly on values such as `1` and `2`.
pub fn grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(start.is_finite() && stop.is_finite()) || !(start < stop) {
        return Err(MatError::InvalidParameter(format!(
            "grid needs start < stop, got [{start}, {stop}]"
        )));
    }
    if !(step > 0.0) || !step.is_finite() {
        return Err(MatError::InvalidParameter(format!(
            "grid step {step} must be positive"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=count)
        .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub n: usize,
    /// Entry scale of the random Hermitian ensemble.
    pub sigma: f64,
    pub trials: usize,
    pub seed: u64,
    pub t_grid: Vec<f64>,
    pub r_grid: Vec<f64>,
    pub norms: Vec<NormSelector>,
    pub checks: Vec<CheckKind>,
    pub araki_r: Vec<f64>,
    pub q_grid: Vec<f64>,
    /// `q` used for the small-`q` limit of the Golden-Thompson mean.
    pub small_q: f64,
    pub theorem5_t: Vec<f64>,
    pub furuta_t: Vec<f64>,
    pub conjecture_t: Vec<f64>,
    pub convexity_t: Vec<f64>,
    pub trotter_m: Vec<u64>,
    pub derivative_h: f64,
    /// Condition-number ceiling for norm and trace comparisons.
    pub kappa_max: f64,
    /// Condition-number ceiling for log-majorization and Loewner-order comparisons.
    pub kappa_max_logmaj: f64,
    /// Worker threads; 0 uses every available core. Never affects results.
    pub jobs: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        let n = 4;
        Self {
            n,
            sigma: 1.0,
            trials: 1000,
            seed: 42,
            t_grid: grid(-3.0, 3.0, 0.05).expect("static grid"),
            r_grid: vec![0.25, 0.5, 1.0, 2.0, 4.0],
            norms: NormSelector::default_set(n),
            checks: CheckKind::ALL.to_vec(),
            araki_r: vec![1.0, 1.5, 2.0, 4.0],
            q_grid: vec![0.25, 0.5, 1.0, 2.0, 4.0],
            small_q: 1e-3,
            theorem5_t: vec![1.0, 1.25, 1.5, 1.75, 2.0],
            furuta_t: vec![1.25, 1.5, 1.75, 2.0],
            conjecture_t: vec![2.0, 2.5, 3.0, 3.5, 4.0],
            convexity_t: vec![-0.5, 0.5, 1.5],
            trotter_m: vec![8, 16, 32, 64, 128, 256],
            derivative_h: 1e-4,
            kappa_max: 1e8,
            kappa_max_logmaj: 1e6,
            jobs: 0,
        }
    }
}

impl SuiteConfig {
    /// Defaults for dimension `n` (the norm set depends on `n`).
    pub fn for_dim(n: usize) -> Self {
        Self {
            n,
            norms: NormSelector::default_set(n),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad =
            |field: &str, msg: String| Err(MatError::InvalidParameter(format!("{field}: {msg}")));
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        if self.n == 0 || self.n > 16 {
            return bad("n", format!("dimension {} outside 1..=16", self.n));
        }
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return bad("sigma", format!("{} must be positive", self.sigma));
        }
        if self.t_grid.is_empty() || !finite(&self.t_grid) {
            return bad("t_grid", "must be a non-empty list of finite values".into());
        }
        if self.r_grid.is_empty() || self.r_grid.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
            return bad(
                "r_grid",
                "must be a non-empty list of positive values".into(),
            );
        }
        if self.norms.is_empty() {
            return bad("norms", "must not be empty".into());
        }
        for sel in &self.norms {
            if let Err(e) = sel.validate(self.n) {
                return bad("norms", e.to_string());
            }
        }
        if self.checks.is_empty() {
            return bad("checks", "must not be empty".into());
        }
        if self.araki_r.iter().any(|r| !(*r >= 1.0) || !r.is_finite()) {
            return bad("araki_r", "exponents must be >= 1".into());
        }
        if self.q_grid.iter().any(|q| !(*q > 0.0) || !q.is_finite())
            || self.q_grid.windows(2).any(|w| w[0] >= w[1])
        {
            return bad(
                "q_grid",
                "must be strictly increasing positive values".into(),
            );
        }
        if !(self.small_q > 0.0) {
            return bad("small_q", format!("{} must be positive", self.small_q));
        }
        if self.theorem5_t.iter().any(|t| !(1.0..=2.0).contains(t)) {
            return bad("theorem5_t", "values must lie in [1, 2]".into());
        }
        if self.furuta_t.iter().any(|t| !(*t > 1.0 && *t <= 2.0)) {
            return bad("furuta_t", "values must lie in (1, 2]".into());
        }
        if self
            .conjecture_t
            .iter()
            .any(|t| !(*t >= 2.0) || !t.is_finite())
        {
            return bad("conjecture_t", "values must be >= 2".into());
        }
        if !finite(&self.convexity_t) {
            return bad("convexity_t", "values must be finite".into());
        }
        if self.trotter_m.is_empty()
            || self.trotter_m[0] == 0
            || self.trotter_m.windows(2).any(|w| w[0] >= w[1])
        {
            return bad("trotter_m", "must be ascending positive integers".into());
        }
        if !(1e-6..=1e-3).contains(&self.derivative_h) {
            return bad(
                "derivative_h",
                format!("{} outside [1e-6, 1e-3]", self.derivative_h),
            );
        }
        if !(self.kappa_max > 1.0) {
            return bad("kappa_max", format!("{} must exceed 1", self.kappa_max));
        }
        if !(self.kappa_max_logmaj > 1.0) {
            return bad(
                "kappa_max_logmaj",
                format!("{} must exceed 1", self.kappa_max_logmaj),
            );
        }
        Ok(())
    }

    fn runs(&self, kind: CheckKind) -> bool {
        self.checks.contains(&kind)
    }
}

/// The configuration as written into reports. Excludes `jobs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub n: usize,
    pub sigma: f64,
    pub trials: usize,
    pub seed: u64,
    pub t_grid: Vec<f64>,
    pub r_grid: Vec<f64>,
    pub norms: Vec<String>,
    pub checks: Vec<CheckKind>,
    pub araki_r: Vec<f64>,
    pub q_grid: Vec<f64>,
    pub small_q: f64,
    pub theorem5_t: Vec<f64>,
    pub furuta_t: Vec<f64>,
    pub conjecture_t: Vec<f64>,
    pub convexity_t: Vec<f64>,
    pub trotter_m: Vec<u64>,
    pub derivative_h: f64,
    pub kappa_max: f64,
    pub kappa_max_logmaj: f64,
}

impl From<&SuiteConfig> for ConfigEcho {
    fn from(c: &SuiteConfig) -> Self {
        Self {
            n: c.n,
            sigma: c.sigma,
            trials: c.trials,
            seed: c.seed,
            t_grid: c.t_grid.clone(),
            r_grid: c.r_grid.clone(),
            norms: c.norms.iter().map(|s| s.to_string()).collect(),
            checks: c.checks.clone(),
            araki_r: c.araki_r.clone(),
            q_grid: c.q_grid.clone(),
            small_q: c.small_q,
            theorem5_t: c.theorem5_t.clone(),
            furuta_t: c.furuta_t.clone(),
            conjecture_t: c.conjecture_t.clone(),
            convexity_t: c.convexity_t.clone(),
            trotter_m: c.trotter_m.clone(),
            derivative_h: c.derivative_h,
            kappa_max: c.kappa_max,
            kappa_max_logmaj: c.kappa_max_logmaj,
        }
    }
}

/// Everything a trial needs beyond the main pair.
#[derive(Clone, Debug)]
pub struct TrialInputs {
    pub pair: HermitianPair,
    /// A commuting pair for the equality diagnostics.
    pub commuting: Option<HermitianPair>,
    /// Positive semidefinite perturbations used to build ordered pairs `A ⪰ B`.
    pub bumps: (HermitianMatrix, HermitianMatrix),
}

impl TrialInputs {
    /// Inputs for a user-supplied pair: identity perturbations, no commuting companion.
    pub fn for_pair(pair: HermitianPair) -> Self {
        let n = pair.dim();
        Self {
            pair,
            commuting: None,
            bumps: (HermitianMatrix::identity(n), HermitianMatrix::identity(n)),
        }
    }
}

/// The RNG for one trial: the master seed selects the key, the trial index the stream.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn random_bump(n: usize, sigma: f64, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    let g = random_ginibre(n, sigma, rng);
    HermitianMatrix::symmetrize(&(&g * &g.adjoint()).scale(1.0 / n as f64))
}

/// Draws the inputs of trial `trial`. The draw order is fixed and independent of
/// which checks are selected.
pub fn draw_trial(config: &SuiteConfig, trial: usize) -> Result<TrialInputs> {
    let mut rng = trial_rng(config.seed, trial);
    let h = random_hermitian(config.n, config.sigma, &mut rng);
    let k = random_hermitian(config.n, config.sigma, &mut rng);
    let (ch, ck) = random_commuting_pair(config.n, config.sigma, &mut rng);
    let b1 = random_bump(config.n, config.sigma, &mut rng);
    let b2 = random_bump(config.n, config.sigma, &mut rng);
    Ok(TrialInputs {
        pair: HermitianPair::new(h, k)?,
        commuting: Some(HermitianPair::new(ch, ck)?),
        bumps: (b1, b2),
    })
}

fn log_cond_of(m: Result<PositiveDefiniteMatrix>) -> f64 {
    m.map(|p| p.condition_number().ln())
        .unwrap_or(f64::INFINITY)
}

fn sandwich(
    outer: &PositiveDefiniteMatrix,
    mid: &PositiveDefiniteMatrix,
) -> Result<PositiveDefiniteMatrix> {
    let m = &(outer.as_matrix() * mid.as_matrix()) * outer.as_matrix();
    PositiveDefiniteMatrix::new(HermitianMatrix::symmetrize(&m))
}

fn add_psd(a: &PositiveDefiniteMatrix, bump: &HermitianMatrix) -> Result<PositiveDefiniteMatrix> {
    PositiveDefiniteMatrix::new(HermitianMatrix::symmetrize(
        &(a.as_matrix() + bump.as_matrix()),
    ))
}

struct Collector<'a> {
    out: &'a mut Vec<CheckResult>,
    n: usize,
}

impl Collector<'_> {
    /// Runs one check; numerical errors become violations of `family`.
    fn run(
        &mut self,
        family: &str,
        scale: f64,
        asserted: bool,
        f: impl FnOnce() -> Result<Vec<CheckResult>>,
    ) {
        let start = self.out.len();
        match f() {
            Ok(rs) => self.out.extend(rs),
            Err(e) => self
                .out
                .push(CheckResult::failed(family, &e, CheckContext::new(self.n))),
        }
        for r in &mut self.out[start..] {
            if scale != 1.0 {
                r.context.scale = Some(scale);
            }
            if !asserted {
                r.asserted = false;
            }
        }
    }
}

/// Runs every selected check family on one set of inputs, in a fixed order.
///
/// Each family (and, where a scale `r` or `q` enters, each value of it) runs on
/// a copy of the pair shrunk just enough to keep the relevant condition numbers
/// below the configured ceiling; the applied factor is recorded in the context.
pub fn run_checks(config: &SuiteConfig, inputs: &TrialInputs) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let mut c = Collector {
        out: &mut out,
        n: inputs.pair.dim(),
    };
    let base = &inputs.pair;
    let n = base.dim();
    let norm_guard =
        |rs: &[f64]| base.conditioned_with(config.kappa_max, |p| p.input_log_condition(rs));
    let exterior_t: Vec<f64> = config
        .t_grid
        .iter()
        .copied()
        .filter(|t| *t >= 1.0)
        .collect();

    if config.runs(CheckKind::GoldenThompson) {
        c.run("golden_thompson", 1.0, true, || {
            Ok(vec![golden_thompson(base)?])
        });
    }

    if config.runs(CheckKind::Theorem2) {
        let (pair, scale) = norm_guard(&[1.0]);
        c.run("theorem2", scale, true, || {
            let mut v = Vec::new();
            for &t in &config.t_grid {
                v.extend(three_way_compare(&pair, t, &config.norms)?);
            }
            Ok(v)
        });
    }

    if config.runs(CheckKind::Interpolation) {
        for &r in &config.r_grid {
            let (pair, scale) = norm_guard(&[r]);
            c.run("interpolation", scale, true, || {
                let mut v = Vec::new();
                for &t in &config.t_grid {
                    if (0.0..=1.0).contains(&t) {
                        v.extend(interior_interpolation(&pair, t, r, &config.norms)?);
                    }
                    if !(t > 0.0 && t < 1.0) {
                        v.extend(exterior_interpolation(&pair, t, r, &config.norms)?);
                    }
                }
                Ok(v)
            });
        }
    }

    if config.runs(CheckKind::Hiai2019) && !exterior_t.is_empty() {
        let hi = exterior_t.iter().copied().fold(1.0, f64::max);
        for &r in &config.r_grid {
            let (pair, scale) = base.conditioned(&[1.0, hi], &[r], config.kappa_max_logmaj);
            c.run("hiai2019", scale, true, || {
                let mut v = Vec::new();
                for &t in &exterior_t {
                    v.extend(hiai2019_regime(&pair, t, r, &config.norms)?);
                }
                Ok(v)
            });
        }
    }

    if config.runs(CheckKind::Araki) {
        let tol = MajorizationTolerance::for_dim(n);
        for &r in &config.araki_r {
            let measure = |p: &HermitianPair| {
                let right = p.exp_h(r / 2.0).and_then(|a| sandwich(&a, &p.exp_k(r)?));
                log_cond_of(right)
            };
            let (pair, scale) = base.conditioned_with(config.kappa_max_logmaj, measure);
            c.run("araki", scale, true, || {
                let verdict = araki_check(&pair.exp_h(1.0)?, &pair.exp_k(1.0)?, r)?;
                Ok(majorization_results(
                    "araki",
                    &verdict,
                    Relation::Log,
                    tol,
                    CheckContext::new(n).r(r),
                ))
            });
        }
    }

    if config.runs(CheckKind::GtLogmaj) {
        let tol = MajorizationTolerance::for_dim(n);
        for &q in &config.q_grid {
            let measure = |p: &HermitianPair| {
                log_cond_of(p.exp_h(q / 2.0).and_then(|a| sandwich(&a, &p.exp_k(q)?)))
            };
            let (pair, scale) = base.conditioned_with(config.kappa_max_logmaj, measure);
            c.run("gt_logmaj", scale, true, || {
                let verdict = gt_logmaj(&pair, q)?;
                Ok(majorization_results(
                    "gt_logmaj",
                    &verdict,
                    Relation::Log,
                    tol,
                    CheckContext::new(n).q(q),
                ))
            });
        }
        // Ky Fan norms only involve the large eigenvalues, which products of
        // exponentials deliver to full relative accuracy.
        c.run("gt_logmaj", 1.0, true, || {
            let mut v = Vec::new();
            if config.q_grid.len() >= 2 {
                v.extend(kyfan_monotonicity(base, &config.q_grid)?);
            }
            v.push(small_q_limit(base, config.small_q, 1e-4)?);
            Ok(v)
        });
    }

    if config.runs(CheckKind::Theorem5) {
        for &t in &config.theorem5_t {
            let (pair, scale) = base.conditioned(&[t], &[1.0], config.kappa_max_logmaj);
            c.run("theorem5", scale, true, || {
                let tol = MajorizationTolerance::for_dim(n);
                let verdict = theorem5_check(&pair, t)?;
                let mut v = majorization_results(
                    "theorem5",
                    &verdict,
                    Relation::Log,
                    tol,
                    CheckContext::new(n).t(t),
                );
                v.extend(theorem5_compound(&pair, t)?);
                Ok(v)
            });
        }
    }

    if config.runs(CheckKind::Furuta) {
        for &t in &config.furuta_t {
            let p_exp = 1.0 / (t - 1.0);
            let inner_cond = |p: &HermitianPair| {
                let m = p.exp_h(1.0).and_then(|b| {
                    let a = add_psd(&b, &inputs.bumps.0)?;
                    sandwich(&a.sqrt()?, &b.pow(p_exp)?)
                });
                log_cond_of(m)
            };
            let (pair, scale) = base.conditioned_with(config.kappa_max_logmaj, |p| {
                inner_cond(p).max(p.log_condition(&[t], &[1.0]))
            });
            c.run("furuta", scale, true, || {
                let b = pair.exp_h(1.0)?;
                let a = add_psd(&b, &inputs.bumps.0)?;
                let mut generic =
                    furuta_check(a.as_hermitian(), b.as_hermitian(), 0.5, p_exp, p_exp)?;
                generic.check_id = "furuta.generic".into();
                generic.context.t = Some(t);
                let mut v = vec![generic];
                v.extend(furuta_instance(&pair, t)?);
                Ok(v)
            });
        }
    }

    if config.runs(CheckKind::Equality) {
        let sel = NormSelector::Trace;
        let (pair, scale) = norm_guard(&[1.0]);
        c.run("equality", scale, true, || {
            Ok(vec![equality_diagnostic(&pair, 2.0, 1.0, sel)?])
        });
        if let Some(commuting) = &inputs.commuting {
            let (cpair, cscale) =
                commuting.conditioned_with(config.kappa_max, |p| p.input_log_condition(&[1.0]));
            c.run("equality", cscale, true, || {
                Ok(vec![equality_diagnostic(&cpair, 2.0, 1.0, sel)?])
            });
        }
    }

    if config.runs(CheckKind::Derivative) {
        for &r in &config.r_grid {
            let (pair, scale) = norm_guard(&[1.0, r]);
            c.run("derivative", scale, true, || {
                derivative_identities(&pair, r, config.derivative_h)
            });
        }
    }

    if config.runs(CheckKind::LieTrotter) {
        c.run("lie_trotter", 1.0, true, || {
            Ok(vec![lie_trotter_check(base, &config.trotter_m)?])
        });
    }

    if config.runs(CheckKind::Convexity) && !config.convexity_t.is_empty() {
        let (pair, scale) = base.conditioned(&config.convexity_t, &[1.0], config.kappa_max_logmaj);
        c.run("convexity", scale, true, || {
            let x = pair.exp_h(1.0)?;
            let y = pair.exp_k(1.0)?;
            let x2 = add_psd(&x, &inputs.bumps.0)?;
            let y2 = add_psd(&y, &inputs.bumps.1)?;
            let mut v = Vec::new();
            for &t in &config.convexity_t {
                v.extend(convexity_checks(&x, &y, &x2, &y2, t)?);
            }
            Ok(v)
        });
    }

    if config.runs(CheckKind::Conjecture) && !config.conjecture_t.is_empty() {
        let (pair, scale) = norm_guard(&[1.0]);
        c.run("conjecture", scale, false, || {
            config
                .conjecture_t
                .iter()
                .map(|&t| conjecture_fuzz(&pair, t))
                .collect()
        });
    }
    out
}

/// A float key ordered by `total_cmp`, so parameter cells sort numerically.
#[derive(Clone, Copy, Debug)]
struct Key(f64);

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.0.total_cmp(&other.0) == Ordering::Equal
    }
}
impl Eq for Key {}
impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct CellKey {
    check_id: String,
    t: Option<Key>,
    r: Option<Key>,
    q: Option<Key>,
    k: Option<usize>,
    norm: Option<String>,
}

impl CellKey {
    fn of(r: &CheckResult) -> Self {
        Self {
            check_id: r.check_id.clone(),
            t: r.context.t.map(Key),
            r: r.context.r.map(Key),
            q: r.context.q.map(Key),
            k: r.context.k,
            norm: r.context.norm.clone(),
        }
    }
}

/// Counts and gap range over a set of results.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Tally {
    pub count: usize,
    pub holds: usize,
    pub equality: usize,
    pub violated: usize,
    pub not_applicable: usize,
    /// Smallest gap among applicable results.
    pub min_gap: Option<f64>,
    pub max_gap: Option<f64>,
    pub asserted: bool,
}

impl Tally {
    fn add(&mut self, r: &CheckResult) {
        if self.count == 0 {
            self.asserted = r.asserted;
        }
        self.count += 1;
        match r.verdict {
            Verdict::Holds => self.holds += 1,
            Verdict::Equality => self.equality += 1,
            Verdict::Violated => self.violated += 1,
            Verdict::NotApplicable => self.not_applicable += 1,
        }
        if r.verdict != Verdict::NotApplicable && !r.gap.is_nan() {
            self.min_gap = Some(self.min_gap.map_or(r.gap, |g| g.min(r.gap)));
            self.max_gap = Some(self.max_gap.map_or(r.gap, |g| g.max(r.gap)));
        }
    }

    fn merge(&mut self, other: &Tally) {
        if self.count == 0 {
            self.asserted = other.asserted;
        }
        self.count += other.count;
        self.holds += other.holds;
        self.equality += other.equality;
        self.violated += other.violated;
        self.not_applicable += other.not_applicable;
        for (mine, theirs, pick) in [
            (
                &mut self.min_gap,
                other.min_gap,
                f64::min as fn(f64, f64) -> f64,
            ),
            (&mut self.max_gap, other.max_gap, f64::max),
        ] {
            if let Some(g) = theirs {
                *mine = Some(mine.map_or(g, |m| pick(m, g)));
            }
        }
    }
}

/// A pass count over the eligible trials of a statistical property.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Rate {
    pub eligible: usize,
    pub passed: usize,
}

impl Rate {
    pub fn rate(&self) -> Option<f64> {
        (self.eligible > 0).then(|| self.passed as f64 / self.eligible as f64)
    }

    fn merge(&mut self, o: &Rate) {
        self.eligible += o.eligible;
        self.passed += o.passed;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GuardStat {
    pub trials: usize,
    pub rescaled: usize,
    /// Smallest factor applied in any trial.
    pub min_scale: f64,
}

impl Default for GuardStat {
    fn default() -> Self {
        Self {
            trials: 0,
            rescaled: 0,
            min_scale: 1.0,
        }
    }
}

impl GuardStat {
    fn merge(&mut self, o: &GuardStat) {
        self.trials += o.trials;
        self.rescaled += o.rescaled;
        self.min_scale = self.min_scale.min(o.min_scale);
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Statistics {
    /// Non-commuting pairs (commutator >= 0.1) whose trace-norm gap exceeds `1e-6 * scale`.
    pub strict_separation: Rate,
    /// Constructed commuting pairs whose gap is within tolerance.
    pub commuting_equality: Rate,
    /// Non-commuting pairs (commutator >= 0.1) whose trace norm strictly increases along the q grid.
    pub strict_trace_monotonicity: Rate,
    /// Per check family: how often and how far the conditioning guard shrank the pair.
    pub guard: BTreeMap<String, GuardStat>,
}

impl Statistics {
    fn observe(&mut self, r: &CheckResult) {
        let noncommuting = r
            .context
            .commutator
            .is_some_and(|c| c >= NONCOMMUTING_THRESHOLD);
        match r.check_id.as_str() {
            "equality.noncommuting" if noncommuting => {
                self.strict_separation.eligible += 1;
                self.strict_separation.passed += usize::from(r.context.flag == Some(true));
            }
            "equality.commuting" => {
                self.commuting_equality.eligible += 1;
                self.commuting_equality.passed += usize::from(r.verdict != Verdict::Violated);
            }
            "gt_logmaj.trace_strict" if noncommuting => {
                self.strict_trace_monotonicity.eligible += 1;
                self.strict_trace_monotonicity.passed += usize::from(r.context.flag == Some(true));
            }
            _ => {}
        }
    }

    fn merge(&mut self, o: &Statistics) {
        self.strict_separation.merge(&o.strict_separation);
        self.commuting_equality.merge(&o.commuting_equality);
        self.strict_trace_monotonicity
            .merge(&o.strict_trace_monotonicity);
        for (family, g) in &o.guard {
            self.guard.entry(family.clone()).or_default().merge(g);
        }
    }
}

/// A result together with the drawn (unscaled) pair it came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Replay {
    pub result: CheckResult,
    pub h: ComplexMatrix,
    pub k: ComplexMatrix,
}

#[derive(Clone, Debug, Default)]
struct TrialSummary {
    cells: BTreeMap<CellKey, Tally>,
    failures: Vec<Replay>,
    candidates: Vec<Replay>,
    stats: Statistics,
}

impl TrialSummary {
    fn from_results(
        results: Vec<CheckResult>,
        inputs: &TrialInputs,
        seed: Option<u64>,
        trial: Option<usize>,
    ) -> Self {
        let mut s = TrialSummary::default();
        let mut family_scale: BTreeMap<String, f64> = BTreeMap::new();
        for mut r in results {
            r.context.seed = seed;
            r.context.trial = trial;
            let family = r.check_id.split('.').next().unwrap_or_default().to_string();
            let scale = r.context.scale.unwrap_or(1.0);
            let entry = family_scale.entry(family).or_insert(1.0);
            *entry = entry.min(scale);
            s.stats.observe(&r);
            s.cells.entry(CellKey::of(&r)).or_default().add(&r);
            let replay = |r: CheckResult| {
                let source = if r.check_id == "equality.commuting" {
                    inputs.commuting.as_ref().unwrap_or(&inputs.pair)
                } else {
                    &inputs.pair
                };
                Replay {
                    result: r,
                    h: source.h().as_matrix().clone(),
                    k: source.k().as_matrix().clone(),
                }
            };
            if r.is_failure() {
                s.failures.push(replay(r));
            } else if !r.asserted && r.verdict == Verdict::Violated {
                s.candidates.push(replay(r));
            }
        }
        for (family, scale) in family_scale {
            s.stats.guard.insert(
                family,
                GuardStat {
                    trials: 1,
                    rescaled: usize::from(scale < 1.0),
                    min_scale: scale,
                },
            );
        }
        s
    }

    fn merge(&mut self, other: TrialSummary) {
        for (k, v) in other.cells {
            self.cells.entry(k).or_default().merge(&v);
        }
        self.failures.extend(other.failures);
        self.candidates.extend(other.candidates);
        self.stats.merge(&other.stats);
    }
}

/// Aggregate over every cell of one check id.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckAggregate {
    pub check_id: String,
    #[serde(flatten)]
    pub tally: Tally,
}

/// One row of the CSV summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellAggregate {
    pub check_id: String,
    pub t: Option<f64>,
    pub r: Option<f64>,
    pub q: Option<f64>,
    pub k: Option<usize>,
    pub norm: Option<String>,
    #[serde(flatten)]
    pub tally: Tally,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: ConfigEcho,
    pub trials: usize,
    pub seed: u64,
    pub total_checks: usize,
    pub total_violations: usize,
    pub aggregates: Vec<CheckAggregate>,
    pub statistics: Statistics,
    /// Every asserted result with verdict `violated`, with the pair needed to replay it.
    pub failures: Vec<Replay>,
    /// Non-asserted conjecture evaluations with a negative gap.
    pub conjecture_candidates: Vec<Replay>,
    #[serde(skip)]
    pub cells: Vec<CellAggregate>,
}

impl SuiteReport {
    fn build(config: &SuiteConfig, summary: TrialSummary) -> Self {
        let mut by_check: BTreeMap<String, Tally> = BTreeMap::new();
        for (key, tally) in &summary.cells {
            by_check
                .entry(key.check_id.clone())
                .or_default()
                .merge(tally);
        }
        let total_checks = by_check.values().map(|t| t.count).sum();
        let total_violations = by_check
            .values()
            .filter(|t| t.asserted)
            .map(|t| t.violated)
            .sum();
        let cells = summary
            .cells
            .into_iter()
            .map(|(key, tally)| CellAggregate {
                check_id: key.check_id,
                t: key.t.map(|k| k.0),
                r: key.r.map(|k| k.0),
                q: key.q.map(|k| k.0),
                k: key.k,
                norm: key.norm,
                tally,
            })
            .collect();
        Self {
            config: config.into(),
            trials: config.trials,
            seed: config.seed,
            total_checks,
            total_violations,
            aggregates: by_check
                .into_iter()
                .map(|(check_id, tally)| CheckAggregate { check_id, tally })
                .collect(),
            statistics: summary.stats,
            failures: summary.failures,
            conjecture_candidates: summary.candidates,
            cells,
        }
    }

    pub fn passed(&self) -> bool {
        self.total_violations == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per check id and parameter cell.
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut s = String::from(
            "check_id,t,r,q,k,norm,count,holds,equality,violated,not_applicable,min_gap,max_gap,asserted\n",
        );
        for c in &self.cells {
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                c.check_id,
                opt(c.t),
                opt(c.r),
                opt(c.q),
                c.k.map(|k| k.to_string()).unwrap_or_default(),
                c.norm.as_deref().unwrap_or(""),
                c.tally.count,
                c.tally.holds,
                c.tally.equality,
                c.tally.violated,
                c.tally.not_applicable,
                opt(c.tally.min_gap),
                opt(c.tally.max_gap),
                c.tally.asserted,
            ));
        }
        s
    }
}

fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| MatError::InvalidParameter(format!("jobs: {e}")))
}

/// Runs the configured checks over `config.trials` seeded random pairs.
///
/// Trials run in parallel on `config.jobs` workers; results are merged in trial
/// order, so the report does not depend on scheduling.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    config.validate()?;
    let pool = thread_pool(config.jobs)?;
    let summaries: Vec<TrialSummary> = pool.install(|| {
        (0..config.trials)
            .into_par_iter()
            .map(|trial| match draw_trial(config, trial) {
                Ok(inputs) => {
                    let results = run_checks(config, &inputs);
                    TrialSummary::from_results(results, &inputs, Some(config.seed), Some(trial))
                }
                Err(e) => {
                    let mut s = TrialSummary::default();
                    let r = CheckResult::failed("draw", &e, CheckContext::new(config.n));
                    s.cells.entry(CellKey::of(&r)).or_default().add(&r);
                    s
                }
            })
            .collect()
    });
    let mut total = TrialSummary::default();
    for s in summaries {
        total.merge(s);
    }
    Ok(SuiteReport::build(config, total))
}

/// Runs the configured checks once on a given pair, exactly as the suite does for
/// a random trial. Returns the report and the individual results.
pub fn run_pair(
    config: &SuiteConfig,
    pair: HermitianPair,
) -> Result<(SuiteReport, Vec<CheckResult>)> {
    let config = SuiteConfig {
        n: pair.dim(),
        trials: 1,
        ..config.clone()
    };
    config.validate()?;
    let inputs = TrialInputs::for_pair(pair);
    let results = run_checks(&config, &inputs);
    let summary = TrialSummary::from_results(results.clone(), &inputs, None, None);
    Ok((SuiteReport::build(&config, summary), results))
}
