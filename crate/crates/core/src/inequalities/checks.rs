//! The individual inequality and identity checks.
//!
//! Every check evaluates both sides numerically and reports a [`CheckResult`];
//! nothing here decides pass/fail by anything other than the gap and its tolerance.

use crate::error::{MatError, Result};
use crate::linalg::{
    gram_spectrum, mexp, singular_values, ComplexMatrix, HermitianMatrix, PositiveDefiniteMatrix,
};
use crate::majorization::{
    log_majorization_compare, norm_of_singular_values, top_singular_product, MajorizationTolerance,
    MajorizationVerdict, NormSelector, Relation,
};
use crate::means::geometric_mean;

use super::pair::{HermitianPair, MeanCurves};
use super::verdict::{
    majorization_results, norm_tolerance, CheckContext, CheckResult, Regime, RegimeLabel, Verdict,
    NORM_REL_TOL,
};

/// Relative imaginary part tolerated in a trace that should be real.
pub const IMAGINARY_TOL: f64 = 1e-10;
/// Commutator norms below `COMMUTING_TOL * (1 + ||H||_F ||K||_F)` count as commuting.
pub const COMMUTING_TOL: f64 = 1e-9;
/// Gap (relative to scale) beyond which a non-commuting pair counts as strictly separated.
pub const SEPARATION_TOL: f64 = 1e-6;
/// Relative agreement required between compound-matrix and singular-value products.
pub const COMPOUND_TOL: f64 = 1e-9;
/// Lie-Trotter error ratio window for first-order convergence.
pub const TROTTER_RATIO_WINDOW: (f64, f64) = (0.3, 0.7);

fn ctx(pair: &HermitianPair) -> CheckContext {
    CheckContext::new(pair.dim())
}

/// `Re Tr[AB]` and `Im Tr[AB]` without forming the product.
fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> (f64, f64) {
    let n = a.dim();
    let mut acc = crate::linalg::C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    (acc.re, acc.im)
}

/// Smallest eigenvalue of `larger - smaller`: non-negative iff `smaller ⪯ larger`.
pub fn psd_order_gap(smaller: &ComplexMatrix, larger: &ComplexMatrix) -> Result<f64> {
    let d = HermitianMatrix::symmetrize(&(larger - smaller)).eig()?;
    Ok(*d.eigenvalues.last().expect("non-empty"))
}

fn psd_pow(a: &HermitianMatrix, p: f64) -> Result<HermitianMatrix> {
    let d = a.eig()?;
    let top = d.eigenvalues[0].max(0.0);
    let min = *d.eigenvalues.last().expect("non-empty");
    if min < -1e-10 * top.max(f64::MIN_POSITIVE) {
        return Err(MatError::NotPositiveDefinite {
            min_eigenvalue: min,
            threshold: -1e-10 * top,
        });
    }
    let values: Vec<f64> = d.eigenvalues.iter().map(|l| l.max(0.0).powf(p)).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(MatError::Range(format!(
            "A^{p} leaves the double-precision range"
        )));
    }
    Ok(HermitianMatrix::symmetrize(&d.synthesize(&values)))
}

fn operator_norm_psd(a: &ComplexMatrix) -> Result<f64> {
    Ok(HermitianMatrix::symmetrize(a).eig()?.eigenvalues[0].abs())
}

fn psd_order_check(
    id: &str,
    smaller: &ComplexMatrix,
    larger: &ComplexMatrix,
    context: CheckContext,
) -> Result<CheckResult> {
    let gap = psd_order_gap(smaller, larger)?;
    let lhs = operator_norm_psd(smaller)?;
    let rhs = operator_norm_psd(larger)?;
    Ok(CheckResult::with_gap(
        id,
        lhs,
        rhs,
        gap,
        norm_tolerance(lhs, rhs),
        context,
    ))
}

/// `Tr e^{H+K} <= Tr e^H e^K`.
pub fn golden_thompson(pair: &HermitianPair) -> Result<CheckResult> {
    let sum = pair.h().combine(1.0, pair.k(), 1.0)?;
    let lhs: f64 = sum.eig()?.eigenvalues.iter().map(|l| l.exp()).sum();
    let eh = pair.exp_h(1.0)?;
    let ek = pair.exp_k(1.0)?;
    let (rhs, im) = trace_of_product(eh.as_matrix(), ek.as_matrix());
    let mut result = CheckResult::inequality("golden_thompson", lhs, rhs, ctx(pair));
    if im.abs() > IMAGINARY_TOL * rhs.abs() {
        result.verdict = Verdict::Violated;
        result.context.note = Some(format!("imaginary trace residual {im:e}"));
    }
    Ok(result)
}

/// Spectra of the three operator families at weight `t`.
#[derive(Clone, Debug)]
pub struct ThreeWay {
    pub t: f64,
    pub regime: RegimeLabel,
    /// `e^H #_t e^K`
    pub mean: Vec<f64>,
    /// `e^{(1-t)H + tK}`
    pub exp: Vec<f64>,
    /// `e^{(1-t)H/2} e^{tK} e^{(1-t)H/2}`
    pub product: Vec<f64>,
}

pub fn three_way_spectra(pair: &HermitianPair, t: f64) -> Result<ThreeWay> {
    Ok(ThreeWay {
        t,
        regime: RegimeLabel::of(t),
        mean: pair.curves(1.0)?.scaled_mean_spectrum(t)?,
        exp: pair.exp_convex_spectrum(t)?,
        product: pair.symmetric_product_spectrum(t)?,
    })
}

/// The two comparisons `(name, lhs, rhs)` asserted in `regime`, where `a`, `b`, `c`
/// are the values for the mean, the exponential of the convex combination and the
/// symmetric product.
pub fn regime_orderings(regime: Regime, a: f64, b: f64, c: f64) -> [(&'static str, f64, f64); 2] {
    match regime {
        Regime::Interior => [("mean_le_exp", a, b), ("exp_le_product", b, c)],
        Regime::NearExterior => [("exp_le_product", b, c), ("product_le_mean", c, a)],
        Regime::FarExterior => [("exp_le_mean", b, a), ("mean_le_product", a, c)],
    }
}

/// Asserts the regime ordering between `a = |||e^H #_t e^K|||`,
/// `b = |||e^{(1-t)H+tK}|||` and `c = |||e^{(1-t)H/2} e^{tK} e^{(1-t)H/2}|||`:
/// interior `a <= b <= c`, near exterior `b <= c <= a`, far exterior `b <= a <= c`.
/// At regime boundaries every applicable ordering is asserted. For `t < 0` the
/// mean is also evaluated through the switch relation and both paths must agree.
pub fn three_way_compare(
    pair: &HermitianPair,
    t: f64,
    norms: &[NormSelector],
) -> Result<Vec<CheckResult>> {
    let tw = three_way_spectra(pair, t)?;
    let mut out = Vec::new();
    if t < 0.0 {
        out.push(switch_consistency(
            "theorem2.switch_consistency",
            &*pair.curves(1.0)?,
            t,
            ctx(pair).t(t),
        )?);
    }
    for &sel in norms {
        let a = norm_of_singular_values(&tw.mean, sel)?;
        let b = norm_of_singular_values(&tw.exp, sel)?;
        let c = norm_of_singular_values(&tw.product, sel)?;
        let context = ctx(pair).t(t).norm(sel);
        for regime in &tw.regime.0 {
            for (name, lhs, rhs) in regime_orderings(*regime, a, b, c) {
                out.push(CheckResult::inequality(
                    format!("theorem2.{}.{name}", regime.name()),
                    lhs,
                    rhs,
                    context.clone(),
                ));
            }
        }
    }
    Ok(out)
}

/// Compares the spectra of `X #_t Y` and `Y #_{1-t} X` in the norm-wise sense,
/// `max_i |λ_i - λ'_i| / λ_max`. Both evaluations are only backward stable: small
/// eigenvalues of an ill-conditioned mean carry large relative errors in either
/// path, so a per-eigenvalue or rooted-norm comparison would measure rounding.
///
/// The tolerance is `max(1e-9, ε κ(X) κ(Y) (1 + |t|))`, the first-order
/// backward error of forming `X^{-1/2} Y X^{-1/2}` and raising it to the power `t`.
pub fn switch_consistency(
    id: &str,
    curves: &MeanCurves,
    t: f64,
    context: CheckContext,
) -> Result<CheckResult> {
    let kappa = (curves.forward.base_sqrt().condition_number()
        * curves.reverse.base_sqrt().condition_number())
    .powi(2);
    let tol = NORM_REL_TOL.max(f64::EPSILON * kappa * (1.0 + t.abs()));
    let direct = curves.forward.spectrum_at(t)?;
    let switched = curves.reverse.spectrum_at(1.0 - t)?;
    let top = direct[0].max(switched[0]);
    let diff = direct
        .iter()
        .zip(&switched)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(CheckResult::with_gap(
        id,
        direct[0],
        switched[0],
        -diff / top,
        tol,
        context,
    ))
}

fn check_scale(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(MatError::InvalidParameter(format!(
            "scale r = {r} must be positive"
        )));
    }
    Ok(())
}

/// `|||(e^{rH} #_t e^{rK})^{1/r}||| <= |||e^{(1-t)H+tK}|||` for `t in [0, 1]`.
pub fn interior_interpolation(
    pair: &HermitianPair,
    t: f64,
    r: f64,
    norms: &[NormSelector],
) -> Result<Vec<CheckResult>> {
    check_scale(r)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(MatError::Range(format!(
            "interior interpolation needs 0 <= t <= 1, got {t}; use exterior_interpolation"
        )));
    }
    let mean = pair.curves(r)?.scaled_mean_spectrum(t)?;
    let exp = pair.exp_convex_spectrum(t)?;
    norms
        .iter()
        .map(|&sel| {
            Ok(CheckResult::inequality(
                "interpolation.interior",
                norm_of_singular_values(&mean, sel)?,
                norm_of_singular_values(&exp, sel)?,
                ctx(pair).t(t).r(r).norm(sel),
            ))
        })
        .collect()
}

/// `|||e^{(1-t)H+tK}||| <= |||(e^{rH} #_t e^{rK})^{1/r}|||` for `t <= 0` or `t >= 1`.
/// The `t <= 0` branch is evaluated through the switch relation; the direct
/// evaluation is checked against it with [`switch_consistency`].
pub fn exterior_interpolation(
    pair: &HermitianPair,
    t: f64,
    r: f64,
    norms: &[NormSelector],
) -> Result<Vec<CheckResult>> {
    check_scale(r)?;
    if t > 0.0 && t < 1.0 {
        return Err(MatError::Range(format!(
            "exterior interpolation needs t <= 0 or t >= 1, got {t}"
        )));
    }
    let curves = pair.curves(r)?;
    let mean = if t <= 0.0 {
        curves.scaled_mean_spectrum_switched(t)?
    } else {
        curves.scaled_mean_spectrum(t)?
    };
    let exp = pair.exp_convex_spectrum(t)?;
    let mut out = Vec::new();
    if t <= 0.0 {
        out.push(switch_consistency(
            "interpolation.switch_consistency",
            &curves,
            t,
            ctx(pair).t(t).r(r),
        )?);
    }
    for &sel in norms {
        let context = ctx(pair).t(t).r(r).norm(sel);
        let m = norm_of_singular_values(&mean, sel)?;
        out.push(CheckResult::inequality(
            "interpolation.exterior",
            norm_of_singular_values(&exp, sel)?,
            m,
            context,
        ));
    }
    Ok(out)
}

/// Which comparison between the symmetric product and the scaled mean applies for `t >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HiaiBranches {
    /// `r >= max(t/2, t-1)`: product ≺_log scaled mean.
    pub upper: bool,
    /// `r <= min(t/2, t-1)`: scaled mean ≺_log product.
    pub lower: bool,
}

pub fn hiai_branches(t: f64, r: f64) -> HiaiBranches {
    let eps = 1e-12;
    HiaiBranches {
        upper: r >= (t / 2.0).max(t - 1.0) - eps,
        lower: r <= (t / 2.0).min(t - 1.0) + eps,
    }
}

/// Compares `e^{(1-t)H/2} e^{tK} e^{(1-t)H/2}` with `(e^{rH} #_t e^{rK})^{1/r}` for
/// `t >= 1`, in every norm and as log-majorization. Parameters in the dead zone
/// `min(t/2, t-1) < r < max(t/2, t-1)` yield a single `not_applicable` result.
pub fn hiai2019_regime(
    pair: &HermitianPair,
    t: f64,
    r: f64,
    norms: &[NormSelector],
) -> Result<Vec<CheckResult>> {
    check_scale(r)?;
    if t < 1.0 {
        return Err(MatError::Range(format!(
            "hiai2019 comparison needs t >= 1, got {t}"
        )));
    }
    let branches = hiai_branches(t, r);
    let base = ctx(pair).t(t).r(r);
    if !branches.upper && !branches.lower {
        return Ok(vec![CheckResult::not_applicable(
            "hiai2019",
            base.note("dead zone"),
        )]);
    }
    let product = pair.symmetric_product_spectrum(t)?;
    let mean = pair.curves(r)?.scaled_mean_spectrum(t)?;
    let tol = MajorizationTolerance::for_dim(pair.dim());
    let mut out = Vec::new();
    let mut branch = |name: &str, small: &[f64], large: &[f64]| -> Result<()> {
        for &sel in norms {
            out.push(CheckResult::inequality(
                format!("hiai2019.{name}.norm"),
                norm_of_singular_values(small, sel)?,
                norm_of_singular_values(large, sel)?,
                base.clone().norm(sel),
            ));
        }
        let v = log_majorization_compare(small, large, tol)?;
        out.extend(majorization_results(
            &format!("hiai2019.{name}.logmaj"),
            &v,
            Relation::Log,
            tol,
            base.clone(),
        ));
        Ok(())
    };
    if branches.upper {
        branch("upper", &product, &mean)?;
    }
    if branches.lower {
        branch("lower", &mean, &product)?;
    }
    Ok(out)
}

/// `(A^{1/2} B A^{1/2})^r ≺_log A^{r/2} B^r A^{r/2}` for `r >= 1`.
pub fn araki_check(
    a: &PositiveDefiniteMatrix,
    b: &PositiveDefiniteMatrix,
    r: f64,
) -> Result<MajorizationVerdict> {
    if !(r >= 1.0) {
        return Err(MatError::InvalidParameter(format!(
            "Araki exponent r = {r} must be >= 1"
        )));
    }
    if a.dim() != b.dim() {
        return Err(MatError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    // A^{s/2} B^s A^{s/2} = W W* with W = A^{s/2} B^{s/2}
    let sandwich = |s: f64| -> Result<Vec<f64>> {
        gram_spectrum(&(a.pow(s / 2.0)?.as_matrix() * b.pow(s / 2.0)?.as_matrix()))
    };
    let left: Vec<f64> = sandwich(1.0)?.iter().map(|l| l.powf(r)).collect();
    let right = sandwich(r)?;
    log_majorization_compare(&left, &right, MajorizationTolerance::for_dim(a.dim()))
}

/// Spectrum of `(e^{qH/2} e^{qK} e^{qH/2})^{1/q}`.
pub fn trotter_mean_spectrum(pair: &HermitianPair, q: f64) -> Result<Vec<f64>> {
    if !(q > 0.0) {
        return Err(MatError::InvalidParameter(format!(
            "q = {q} must be positive"
        )));
    }
    let w = pair.exp_h(q / 2.0)?.as_matrix() * pair.exp_k(q / 2.0)?.as_matrix();
    if !w.is_finite() {
        return Err(MatError::Range(format!(
            "e^(qH/2) e^(qK) e^(qH/2) overflows at q = {q}"
        )));
    }
    Ok(gram_spectrum(&w)?.iter().map(|l| l.powf(1.0 / q)).collect())
}

/// `e^{H+K} ≺_log (e^{qH/2} e^{qK} e^{qH/2})^{1/q}`.
pub fn gt_logmaj(pair: &HermitianPair, q: f64) -> Result<MajorizationVerdict> {
    let left = pair.exp_convex_spectrum(0.5)?;
    // e^{(H+K)/2} squared
    let left: Vec<f64> = left.iter().map(|l| l * l).collect();
    let right = trotter_mean_spectrum(pair, q)?;
    log_majorization_compare(&left, &right, MajorizationTolerance::for_dim(pair.dim()))
}

/// Ky Fan norms of `(e^{qH/2} e^{qK} e^{qH/2})^{1/q}` are nondecreasing along `q_grid`.
///
/// Also returns one unasserted `gt_logmaj.trace_strict` record whose `flag`
/// says whether the trace norm increased by more than tolerance at every step.
pub fn kyfan_monotonicity(pair: &HermitianPair, q_grid: &[f64]) -> Result<Vec<CheckResult>> {
    if q_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(MatError::InvalidParameter(
            "q grid must be strictly increasing".into(),
        ));
    }
    let spectra: Vec<Vec<f64>> = q_grid
        .iter()
        .map(|&q| trotter_mean_spectrum(pair, q))
        .collect::<Result<_>>()?;
    let n = pair.dim();
    let mut out = Vec::new();
    let mut strict = true;
    for k in 1..=n {
        let sel = NormSelector::KyFan(k);
        for (i, w) in spectra.windows(2).enumerate() {
            let lo = norm_of_singular_values(&w[0], sel)?;
            let hi = norm_of_singular_values(&w[1], sel)?;
            let r = CheckResult::inequality(
                "gt_logmaj.kyfan_monotone",
                lo,
                hi,
                ctx(pair).q(q_grid[i + 1]).norm(sel),
            );
            if k == n && r.verdict != Verdict::Holds {
                strict = false;
            }
            out.push(r);
        }
    }
    let mut flag = CheckResult::inequality(
        "gt_logmaj.trace_strict",
        norm_of_singular_values(&spectra[0], NormSelector::Trace)?,
        norm_of_singular_values(&spectra[spectra.len() - 1], NormSelector::Trace)?,
        ctx(pair).norm(NormSelector::Trace),
    )
    .unasserted();
    flag.context.flag = Some(strict);
    flag.context.commutator = Some(pair.commutator_norm());
    out.push(flag);
    Ok(out)
}

/// `Tr (e^{qH/2} e^{qK} e^{qH/2})^{1/q} -> Tr e^{H+K}` as `q -> 0`, within `rel_tol`.
pub fn small_q_limit(pair: &HermitianPair, q: f64, rel_tol: f64) -> Result<CheckResult> {
    let lhs: f64 = trotter_mean_spectrum(pair, q)?.iter().sum();
    let rhs: f64 = pair.exp_convex_spectrum(0.5)?.iter().map(|l| l * l).sum();
    Ok(CheckResult::identity(
        "gt_logmaj.small_q_limit",
        lhs,
        rhs,
        rel_tol * rhs.abs().max(1.0),
        ctx(pair).q(q),
    ))
}

/// Furuta inequality `(A^r B^p A^r)^{1/q} ⪯ A^{(p+2r)/q}` for `A ⪰ B ⪰ 0`,
/// `r, p >= 0`, `q >= 1` and `(1+2r) q >= p + 2r`. Violated hypotheses give
/// `not_applicable`.
pub fn furuta_check(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    r: f64,
    p: f64,
    q: f64,
) -> Result<CheckResult> {
    if a.dim() != b.dim() {
        return Err(MatError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let context = CheckContext::new(a.dim())
        .r(r)
        .q(q)
        .note(format!("p = {p}"));
    let id = "furuta";
    if !(r >= 0.0 && p >= 0.0 && q >= 1.0) || (1.0 + 2.0 * r) * q < p + 2.0 * r {
        return Ok(CheckResult::not_applicable(
            id,
            context.note("exponent hypotheses fail"),
        ));
    }
    let a_norm = operator_norm_psd(a.as_matrix())?;
    let ab_gap = psd_order_gap(b.as_matrix(), a.as_matrix())?;
    let b_min = *b.eig()?.eigenvalues.last().expect("non-empty");
    if ab_gap < -1e-10 * a_norm || b_min < -1e-10 * a_norm {
        return Ok(CheckResult::not_applicable(
            id,
            context.note("A >= B >= 0 fails"),
        ));
    }
    let ar = psd_pow(a, r)?;
    let bp = psd_pow(b, p)?;
    let inner = HermitianMatrix::symmetrize(&(&(ar.as_matrix() * bp.as_matrix()) * ar.as_matrix()));
    let lhs = psd_pow(&inner, 1.0 / q)?;
    let rhs = psd_pow(a, (p + 2.0 * r) / q)?;
    psd_order_check(id, lhs.as_matrix(), rhs.as_matrix(), context)
}

/// The instantiation used for the `1 <= t <= 2` log-majorization: after shifting
/// `H, K` so that `e^H #_t e^K ⪯ I` (with equality in the top eigenvalue), take
/// `A = e^{-K}`, `B = (e^{K/2} e^{-H} e^{K/2})^{t-1}`, `r = 1/2`, `p = q = 1/(t-1)`.
///
/// Returns the hypothesis `B ⪯ A`, the Furuta verdict, the identity
/// `(A^r B^p A^r)^{1/q} = e^{-(t-1)H}` and the conclusion
/// `e^{(1-t)H/2} e^{tK} e^{(1-t)H/2} ⪯ I`.
pub fn furuta_instance(pair: &HermitianPair, t: f64) -> Result<Vec<CheckResult>> {
    if !(t > 1.0 && t <= 2.0) {
        return Err(MatError::Range(format!(
            "Furuta instantiation needs 1 < t <= 2, got {t}"
        )));
    }
    let shift = pair.mean(t)?.max_eigenvalue().ln();
    let shifted = HermitianPair::new(pair.h().shift(-shift), pair.k().shift(-shift))?;
    let context = ctx(pair).t(t);

    let a = shifted.exp_k(-1.0)?;
    let half_k = shifted.exp_k(0.5)?;
    let inv_h = shifted.exp_h(-1.0)?;
    let core = HermitianMatrix::symmetrize(
        &(&(half_k.as_matrix() * inv_h.as_matrix()) * half_k.as_matrix()),
    );
    let b = PositiveDefiniteMatrix::new(core)?.pow(t - 1.0)?;

    let mut out = vec![psd_order_check(
        "furuta.instance_hypothesis",
        b.as_matrix(),
        a.as_matrix(),
        context.clone(),
    )?];
    let p = 1.0 / (t - 1.0);
    let mut verdict = furuta_check(a.as_hermitian(), b.as_hermitian(), 0.5, p, p)?;
    verdict.check_id = "furuta.instance".into();
    verdict.context.t = Some(t);
    out.push(verdict);

    let ar = a.sqrt()?;
    let inner =
        HermitianMatrix::symmetrize(&(&(ar.as_matrix() * b.pow(p)?.as_matrix()) * ar.as_matrix()));
    let lhs = psd_pow(&inner, 1.0 / p)?;
    let expected = shifted.exp_h(-(t - 1.0))?;
    let err = (lhs.as_matrix() - expected.as_matrix()).frobenius_norm()
        / expected.as_matrix().frobenius_norm().max(1.0);
    out.push(CheckResult::identity(
        "furuta.instance_identity",
        err,
        0.0,
        1e-8,
        context.clone(),
    ));

    let top = shifted.symmetric_product_spectrum(t)?[0];
    out.push(CheckResult::inequality(
        "furuta.instance_conclusion",
        top,
        1.0,
        context,
    ));
    Ok(out)
}

/// `e^{(1-t)H/2} e^{tK} e^{(1-t)H/2} ≺_log e^H #_t e^K` for `1 <= t <= 2`.
pub fn theorem5_check(pair: &HermitianPair, t: f64) -> Result<MajorizationVerdict> {
    if !(1.0..=2.0).contains(&t) {
        return Err(MatError::Range(format!(
            "theorem5_check needs 1 <= t <= 2, got {t}"
        )));
    }
    let product = pair.symmetric_product(t)?;
    let mean = pair.mean(t)?;
    log_majorization_compare(
        product.eigenvalues(),
        mean.eigenvalues(),
        MajorizationTolerance::for_dim(pair.dim()),
    )
}

/// `log s_1(A^{∧k})` against `Σ_{i<=k} log s_i(A)` for every `k`.
pub fn compound_crosscheck(
    id: &str,
    a: &ComplexMatrix,
    singular: &[f64],
    context: CheckContext,
) -> Result<Vec<CheckResult>> {
    let mut out = Vec::with_capacity(a.dim());
    let mut prefix = 0.0;
    for k in 1..=a.dim() {
        prefix += singular[k - 1].ln();
        let via_compound = top_singular_product(a, k)?.ln();
        out.push(CheckResult::identity(
            id,
            via_compound,
            prefix,
            COMPOUND_TOL,
            context.clone().k(k),
        ));
    }
    Ok(out)
}

/// Compound-matrix cross-check of the top-k products on both sides of [`theorem5_check`].
pub fn theorem5_compound(pair: &HermitianPair, t: f64) -> Result<Vec<CheckResult>> {
    let product = pair.symmetric_product(t)?;
    let mean = pair.mean(t)?;
    let mut out = compound_crosscheck(
        "theorem5.compound_product",
        product.as_matrix(),
        product.eigenvalues(),
        ctx(pair).t(t),
    )?;
    out.extend(compound_crosscheck(
        "theorem5.compound_mean",
        mean.as_matrix(),
        mean.eigenvalues(),
        ctx(pair).t(t),
    )?);
    Ok(out)
}

/// Direct cross-check on an arbitrary matrix, singular values from `A*A`.
pub fn compound_singular_crosscheck(a: &ComplexMatrix) -> Result<Vec<CheckResult>> {
    let s = singular_values(a)?;
    compound_crosscheck("compound.top_products", a, &s, CheckContext::new(a.dim()))
}

/// Gap of the interpolation inequality at `(t, r)` in a strictly
/// increasing norm, with the commutator norm attached.
///
/// Commuting pairs must give equality (asserted). Non-commuting pairs are asserted
/// only in the inequality direction; `context.flag` records whether the gap
/// exceeds `SEPARATION_TOL * scale`, for aggregate statistics.
pub fn equality_diagnostic(
    pair: &HermitianPair,
    t: f64,
    r: f64,
    sel: NormSelector,
) -> Result<CheckResult> {
    check_scale(r)?;
    if !sel.strictly_increasing(pair.dim()) {
        return Err(MatError::InvalidParameter(format!(
            "equality diagnostics need a strictly increasing norm, got {sel}"
        )));
    }
    let mean = pair.curves(r)?.scaled_mean_spectrum(t)?;
    let exp = pair.exp_convex_spectrum(t)?;
    let m = norm_of_singular_values(&mean, sel)?;
    let e = norm_of_singular_values(&exp, sel)?;
    let (lower, upper) = if (0.0..=1.0).contains(&t) {
        (m, e)
    } else {
        (e, m)
    };
    let commutator = pair.commutator_norm();
    let h_norm = pair.h().as_matrix().frobenius_norm();
    let k_norm = pair.k().as_matrix().frobenius_norm();
    let commuting = commutator <= COMMUTING_TOL * (1.0 + h_norm * k_norm);
    let scale = lower.abs().max(upper.abs()).max(1.0);
    let context = ctx(pair).t(t).r(r).norm(sel);
    let mut result = if commuting {
        CheckResult::identity(
            "equality.commuting",
            lower,
            upper,
            norm_tolerance(lower, upper),
            context,
        )
    } else {
        CheckResult::inequality("equality.noncommuting", lower, upper, context)
    };
    result.context.commutator = Some(commutator);
    if !commuting {
        result.context.flag = Some(upper - lower > SEPARATION_TOL * scale);
    }
    Ok(result)
}

fn central_difference(f: &dyn Fn(f64) -> Result<f64>, t0: f64, h: f64) -> Result<f64> {
    Ok((f(t0 + h)? - f(t0 - h)?) / (2.0 * h))
}

/// `max(1e-6, 10 h^2 C)` with `C = max(|f(t0)|, |f'''(t0)|)`, the third derivative
/// estimated by a wide-step difference.
fn finite_difference_tolerance(f: &dyn Fn(f64) -> Result<f64>, t0: f64, h: f64) -> Result<f64> {
    let w = 1e-2;
    let third = (f(t0 + 2.0 * w)? - 2.0 * f(t0 + w)? + 2.0 * f(t0 - w)? - f(t0 - 2.0 * w)?)
        / (2.0 * w * w * w);
    let curvature = f(t0)?.abs().max(third.abs());
    Ok((10.0 * h * h * curvature).max(1e-6))
}

fn fd_check(
    id: &str,
    analytic: f64,
    f: &dyn Fn(f64) -> Result<f64>,
    t0: f64,
    h: f64,
    context: CheckContext,
) -> Result<CheckResult> {
    let fd = central_difference(f, t0, h)?;
    let tol = finite_difference_tolerance(f, t0, h)?;
    Ok(CheckResult::identity(id, analytic, fd, tol, context))
}

/// Trace derivative identities at `t = 0` and `t = 2`, each cross-validated by
/// central finite differences with step `h`:
///
/// * `(1/r) Tr[e^H log(e^{rH/2} e^{-rK} e^{rH/2})] >= Tr[e^H (H - K)]`
/// * `Tr[e^{-H/2} e^{2K} e^{-H/2} log(e^{-H/2} e^K e^{-H/2})] <= Tr[e^{-H} e^{2K} (K - H)]`
pub fn derivative_identities(pair: &HermitianPair, r: f64, h: f64) -> Result<Vec<CheckResult>> {
    check_scale(r)?;
    if !(1e-6..=1e-3).contains(&h) {
        return Err(MatError::InvalidParameter(format!(
            "step h = {h} outside [1e-6, 1e-3]"
        )));
    }
    let eh = pair.exp_h(1.0)?;
    let base = ctx(pair).r(r).note(format!("h = {h}"));
    let mut out = Vec::new();

    // t = 0
    let half = pair.exp_h(r / 2.0)?;
    let neg_k = pair.exp_k(-r)?;
    let core =
        HermitianMatrix::symmetrize(&(&(half.as_matrix() * neg_k.as_matrix()) * half.as_matrix()));
    let log_core = PositiveDefiniteMatrix::new(core)?.log()?;
    let lhs = trace_of_product(eh.as_matrix(), log_core.as_matrix()).0 / r;
    let h_minus_k = pair.h().combine(1.0, pair.k(), -1.0)?;
    let rhs = trace_of_product(eh.as_matrix(), h_minus_k.as_matrix()).0;
    out.push(CheckResult::inequality(
        "derivative.at_zero",
        rhs,
        lhs,
        base.clone().t(0.0),
    ));

    let curves = pair.curves(r)?;
    let mean_trace = |t: f64| -> Result<f64> { Ok(curves.scaled_mean_spectrum(t)?.iter().sum()) };
    let exp_trace = |t: f64| -> Result<f64> { Ok(pair.exp_convex_spectrum(t)?.iter().sum()) };
    out.push(fd_check(
        "derivative.at_zero_fd_mean",
        -lhs,
        &mean_trace,
        0.0,
        h,
        base.clone().t(0.0),
    )?);
    out.push(fd_check(
        "derivative.at_zero_fd_exp",
        -rhs,
        &exp_trace,
        0.0,
        h,
        base.clone().t(0.0),
    )?);

    // t = 2
    let inv_half_h = pair.exp_h(-0.5)?;
    let ek = pair.exp_k(1.0)?;
    let e2k = pair.exp_k(2.0)?;
    let sandwich = |mid: &ComplexMatrix| {
        HermitianMatrix::symmetrize(&(&(inv_half_h.as_matrix() * mid) * inv_half_h.as_matrix()))
    };
    let m_log = PositiveDefiniteMatrix::new(sandwich(ek.as_matrix()))?.log()?;
    let outer = sandwich(e2k.as_matrix());
    let lhs2 = trace_of_product(outer.as_matrix(), m_log.as_matrix()).0;
    let inv_h = pair.exp_h(-1.0)?;
    let k_minus_h = pair.k().combine(1.0, pair.h(), -1.0)?;
    let rhs2 = trace_of_product(
        &(inv_h.as_matrix() * e2k.as_matrix()),
        k_minus_h.as_matrix(),
    )
    .0;
    out.push(CheckResult::inequality(
        "derivative.at_two",
        lhs2,
        rhs2,
        base.clone().t(2.0),
    ));

    let unit = pair.curves(1.0)?;
    let mean1_trace = |t: f64| -> Result<f64> { Ok(unit.forward.at(t)?.trace()) };
    let product_trace = |t: f64| -> Result<f64> {
        let a = pair.exp_h(1.0 - t)?;
        let b = pair.exp_k(t)?;
        Ok(trace_of_product(a.as_matrix(), b.as_matrix()).0)
    };
    out.push(fd_check(
        "derivative.at_two_fd_mean",
        lhs2,
        &mean1_trace,
        2.0,
        h,
        base.clone().t(2.0),
    )?);
    out.push(fd_check(
        "derivative.at_two_fd_product",
        rhs2,
        &product_trace,
        2.0,
        h,
        base.t(2.0),
    )?);
    Ok(out)
}

/// Lie-Trotter errors `e(m) = ||(e^{H/m} e^{K/m})^m - e^{H+K}||_F` along `m_list`.
#[derive(Clone, Debug)]
pub struct TrotterErrors {
    pub m: Vec<u64>,
    pub errors: Vec<f64>,
}

pub fn trotter_errors(pair: &HermitianPair, m_list: &[u64]) -> Result<TrotterErrors> {
    if m_list.is_empty() || m_list[0] == 0 || m_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(MatError::InvalidParameter(
            "m list must be ascending positive integers".into(),
        ));
    }
    let target = mexp(&pair.h().combine(1.0, pair.k(), 1.0)?)?;
    let errors = m_list
        .iter()
        .map(|&m| {
            let step =
                pair.exp_h(1.0 / m as f64)?.as_matrix() * pair.exp_k(1.0 / m as f64)?.as_matrix();
            Ok((&step.powi(m) - target.as_matrix()).frobenius_norm())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(TrotterErrors {
        m: m_list.to_vec(),
        errors,
    })
}

/// Errors must decrease along `m_list`, and the last two doubling ratios
/// `e(2m)/e(m)` must fall in the first-order window. Commuting pairs must give
/// errors at round-off level (`1e-10` relative to `||e^{H+K}||_F`).
pub fn lie_trotter_check(pair: &HermitianPair, m_list: &[u64]) -> Result<CheckResult> {
    let te = trotter_errors(pair, m_list)?;
    let target_norm = mexp(&pair.h().combine(1.0, pair.k(), 1.0)?)?
        .as_matrix()
        .frobenius_norm();
    let first = te.errors[0];
    let last = *te.errors.last().expect("non-empty");
    let context = ctx(pair).note(format!("m = {:?}, e(m) = {:?}", te.m, te.errors));
    let floor = 1e-10 * target_norm.max(1.0);
    if te.errors.iter().all(|&e| e <= floor) {
        return Ok(CheckResult::identity(
            "lie_trotter",
            last,
            0.0,
            floor,
            context,
        ));
    }
    let mut margin = f64::INFINITY;
    for w in te.errors.windows(2) {
        margin = margin.min((w[0] - w[1]) / w[0]);
    }
    let (lo, hi) = TROTTER_RATIO_WINDOW;
    let pairs: Vec<(usize, usize)> = (0..te.m.len())
        .flat_map(|i| (i + 1..te.m.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| te.m[j] == 2 * te.m[i])
        .collect();
    for &(i, j) in pairs.iter().rev().take(2) {
        let ratio = te.errors[j] / te.errors[i];
        margin = margin.min(ratio - lo).min(hi - ratio);
    }
    Ok(CheckResult::with_gap(
        "lie_trotter",
        last,
        first,
        margin,
        0.0,
        context,
    ))
}

/// Midpoint concavity (`0 <= t <= 1`) or convexity (`-1 <= t <= 0`, `1 <= t <= 2`)
/// of `(X, Y) -> X #_t Y` in the Loewner order, plus monotonicity for
/// `0 <= t <= 1` when `X ⪯ X'` and `Y ⪯ Y'`.
pub fn convexity_checks(
    x: &PositiveDefiniteMatrix,
    y: &PositiveDefiniteMatrix,
    x2: &PositiveDefiniteMatrix,
    y2: &PositiveDefiniteMatrix,
    t: f64,
) -> Result<Vec<CheckResult>> {
    let n = x.dim();
    for m in [y, x2, y2] {
        if m.dim() != n {
            return Err(MatError::DimensionMismatch {
                expected: n,
                found: m.dim(),
            });
        }
    }
    let context = CheckContext::new(n).t(t);
    let concave = (0.0..=1.0).contains(&t);
    let convex = (-1.0..=0.0).contains(&t) || (1.0..=2.0).contains(&t);
    if !concave && !convex {
        return Ok(vec![CheckResult::not_applicable("convexity", context)]);
    }
    let mid = |a: &PositiveDefiniteMatrix,
               b: &PositiveDefiniteMatrix|
     -> Result<PositiveDefiniteMatrix> {
        PositiveDefiniteMatrix::new(HermitianMatrix::symmetrize(
            &(a.as_matrix() + b.as_matrix()).scale(0.5),
        ))
    };
    let m1 = geometric_mean(x, y, t)?;
    let m2 = geometric_mean(x2, y2, t)?;
    let average = (m1.as_matrix() + m2.as_matrix()).scale(0.5);
    let of_mid = geometric_mean(&mid(x, x2)?, &mid(y, y2)?, t)?;
    let mut out = Vec::new();
    if concave {
        out.push(psd_order_check(
            "convexity.concave",
            &average,
            of_mid.as_matrix(),
            context.clone(),
        )?);
        let x_le = psd_order_gap(x.as_matrix(), x2.as_matrix())? >= 0.0;
        let y_le = psd_order_gap(y.as_matrix(), y2.as_matrix())? >= 0.0;
        if x_le && y_le {
            out.push(psd_order_check(
                "convexity.monotone",
                m1.as_matrix(),
                m2.as_matrix(),
                context.clone(),
            )?);
        }
    }
    if convex {
        out.push(psd_order_check(
            "convexity.convex",
            of_mid.as_matrix(),
            &average,
            context,
        )?);
    }
    Ok(out)
}

/// Records the sign of `Tr[e^{(1-t)H/2} e^{tK} e^{(1-t)H/2}] - Tr[e^H #_t e^K]` for
/// `t >= 2`. Never asserted.
pub fn conjecture_fuzz(pair: &HermitianPair, t: f64) -> Result<CheckResult> {
    if t < 2.0 {
        return Err(MatError::Range(format!(
            "conjecture fuzzing needs t >= 2, got {t}"
        )));
    }
    let lhs: f64 = pair.curves(1.0)?.scaled_mean_spectrum(t)?.iter().sum();
    let rhs: f64 = pair.symmetric_product_spectrum(t)?.iter().sum();
    Ok(CheckResult::inequality("conjecture", lhs, rhs, ctx(pair).t(t)).unasserted())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_hermitian;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn herm(rows: &[&[f64]]) -> HermitianMatrix {
        HermitianMatrix::new(ComplexMatrix::from_real_rows(rows).unwrap()).unwrap()
    }

    fn pauli() -> HermitianPair {
        HermitianPair::new(
            herm(&[&[1.0, 0.0], &[0.0, -1.0]]),
            herm(&[&[0.0, 1.0], &[1.0, 0.0]]),
        )
        .unwrap()
    }

    fn diagonal() -> HermitianPair {
        HermitianPair::new(
            HermitianMatrix::from_real_diagonal(&[0.7, -0.2, 0.1]),
            HermitianMatrix::from_real_diagonal(&[-0.4, 0.5, 1.1]),
        )
        .unwrap()
    }

    fn random_pair(seed: u64, n: usize) -> HermitianPair {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hermitian(n, 1.0, &mut rng);
        let k = random_hermitian(n, 1.0, &mut rng);
        HermitianPair::new(h, k).unwrap()
    }

    #[test]
    fn golden_thompson_pauli_closed_form() {
        // Tr e^{σz+σx} = 2 cosh √2, Tr e^{σz} e^{σx} = 2 cosh² 1
        let r = golden_thompson(&pauli()).unwrap();
        assert!((r.lhs - 4.356_367_113_217_142).abs() <= 1e-10 * r.lhs);
        assert!((r.rhs - 4.762_195_691_083_631).abs() <= 1e-10 * r.rhs);
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn commuting_pair_gives_equalities_everywhere() {
        let pair = diagonal();
        let norms = NormSelector::default_set(3);
        for t in [-2.0, -0.5, 0.0, 0.3, 1.0, 1.5, 2.5] {
            for r in three_way_compare(&pair, t, &norms).unwrap() {
                assert_eq!(r.verdict, Verdict::Equality, "{} at t = {t}", r.check_id);
            }
        }
        let d = equality_diagnostic(&pair, 2.0, 1.0, NormSelector::Trace).unwrap();
        assert_eq!(d.check_id, "equality.commuting");
        assert_eq!(d.verdict, Verdict::Equality);
    }

    #[test]
    fn regime_orderings_pick_the_right_comparisons() {
        let names = |r| regime_orderings(r, 1.0, 2.0, 3.0).map(|(n, _, _)| n);
        assert_eq!(names(Regime::Interior), ["mean_le_exp", "exp_le_product"]);
        assert_eq!(
            names(Regime::NearExterior),
            ["exp_le_product", "product_le_mean"]
        );
        assert_eq!(
            names(Regime::FarExterior),
            ["exp_le_mean", "mean_le_product"]
        );
    }

    #[test]
    fn random_pair_orderings_hold() {
        let pair = random_pair(7, 4);
        let norms = NormSelector::default_set(4);
        for t in [-2.5, -1.0, -0.4, 0.0, 0.6, 1.0, 1.7, 2.0, 2.8] {
            for r in three_way_compare(&pair, t, &norms).unwrap() {
                assert!(!r.is_failure(), "{r:?}");
            }
        }
    }

    #[test]
    fn switch_paths_agree() {
        let pair = random_pair(11, 4);
        for t in [-3.0, -1.0, -0.25] {
            let r = switch_consistency("s", &pair.curves(2.0).unwrap(), t, CheckContext::new(4))
                .unwrap();
            assert_ne!(r.verdict, Verdict::Violated, "{r:?}");
        }
    }

    #[test]
    fn hiai_dead_zone() {
        assert_eq!(
            hiai_branches(3.0, 1.75),
            HiaiBranches {
                upper: false,
                lower: false
            }
        );
        assert!(hiai_branches(3.0, 2.0).upper);
        assert!(hiai_branches(3.0, 1.5).lower);
        // at t = 2 both thresholds meet at r = 1
        assert_eq!(
            hiai_branches(2.0, 1.0),
            HiaiBranches {
                upper: true,
                lower: true
            }
        );
        let rs = hiai2019_regime(&pauli(), 3.0, 1.75, &[NormSelector::Trace]).unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].verdict, Verdict::NotApplicable);
        assert!(hiai2019_regime(&pauli(), 0.5, 1.0, &[NormSelector::Trace]).is_err());
    }

    #[test]
    fn hiai_branches_hold_on_random_pair() {
        let pair = random_pair(5, 3).scaled(0.5);
        let norms = NormSelector::default_set(3);
        for (t, r) in [(1.5, 1.0), (2.0, 1.0), (3.0, 2.0), (3.0, 0.5)] {
            for res in hiai2019_regime(&pair, t, r, &norms).unwrap() {
                assert!(!res.is_failure(), "{res:?}");
            }
        }
    }

    #[test]
    fn furuta_scalar_cases() {
        let a = HermitianMatrix::from_real_diagonal(&[2.0]);
        let b = HermitianMatrix::from_real_diagonal(&[1.0]);
        // (2^{2r} 1^p)^{1/q} = √2 < 2^{(p+2r)/q} = 2^{3/2}
        let r = furuta_check(&a, &b, 0.5, 2.0, 2.0).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(
            (r.gap - (2f64.powf(1.5) - 2f64.sqrt())).abs() < 1e-12,
            "{r:?}"
        );
        // B = A gives equality
        let r = furuta_check(&a, &a, 0.5, 2.0, 2.0).unwrap();
        assert_eq!(r.verdict, Verdict::Equality);
        assert_eq!(
            furuta_check(&b, &a, 0.5, 2.0, 2.0).unwrap().verdict,
            Verdict::NotApplicable
        );
        // (1 + 2r) q >= p + 2r fails
        assert_eq!(
            furuta_check(&a, &b, 0.0, 3.0, 1.0).unwrap().verdict,
            Verdict::NotApplicable
        );
    }

    #[test]
    fn furuta_and_theorem5_on_random_pair() {
        let pair = random_pair(9, 3).scaled(0.5);
        for t in [1.25, 1.5, 2.0] {
            for r in furuta_instance(&pair, t).unwrap() {
                assert!(!r.is_failure(), "{r:?}");
            }
            let v = theorem5_check(&pair, t).unwrap();
            assert!(v.relation.satisfies(Relation::Log), "{v:?}");
            for r in theorem5_compound(&pair, t).unwrap() {
                assert_ne!(r.verdict, Verdict::Violated, "{r:?}");
            }
        }
    }

    #[test]
    fn araki_scalar_equality_and_matrix_case() {
        let a =
            PositiveDefiniteMatrix::new(HermitianMatrix::from_real_diagonal(&[2.0, 0.5])).unwrap();
        let b =
            PositiveDefiniteMatrix::new(HermitianMatrix::from_real_diagonal(&[3.0, 1.5])).unwrap();
        let v = araki_check(&a, &b, 2.0).unwrap();
        assert!(v.relation.satisfies(Relation::Log));
        let pair = random_pair(3, 4).scaled(0.5);
        let v = araki_check(&pair.exp_h(1.0).unwrap(), &pair.exp_k(1.0).unwrap(), 2.0).unwrap();
        assert!(v.relation.satisfies(Relation::Log), "{v:?}");
    }

    #[test]
    fn golden_thompson_means_increase_in_q() {
        let pair = random_pair(13, 3);
        let rs = kyfan_monotonicity(&pair, &[0.25, 0.5, 1.0, 2.0, 4.0]).unwrap();
        assert!(rs.iter().all(|r| !r.is_failure()));
        let strict = rs.last().unwrap();
        assert_eq!(strict.check_id, "gt_logmaj.trace_strict");
        assert_eq!(strict.context.flag, Some(true));
        let lim = small_q_limit(&pair, 1e-3, 1e-4).unwrap();
        assert_eq!(lim.verdict, Verdict::Equality, "{lim:?}");
        assert!(kyfan_monotonicity(&pair, &[1.0, 0.5]).is_err());
    }

    #[test]
    fn lie_trotter_rates() {
        let m = [8, 16, 32, 64, 128, 256];
        let r = lie_trotter_check(&pauli(), &m).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{r:?}");
        let r = lie_trotter_check(&diagonal(), &m).unwrap();
        assert_eq!(r.verdict, Verdict::Equality, "{r:?}");
    }

    #[test]
    fn derivative_identities_on_pauli() {
        for r in derivative_identities(&pauli(), 1.0, 1e-4).unwrap() {
            assert!(!r.is_failure(), "{r:?}");
        }
    }

    #[test]
    fn interpolation_endpoints_are_equalities() {
        let pair = random_pair(17, 3);
        let norms = NormSelector::default_set(3);
        for t in [0.0, 1.0] {
            for r in [0.5, 2.0] {
                for res in interior_interpolation(&pair, t, r, &norms).unwrap() {
                    assert_eq!(res.verdict, Verdict::Equality, "{res:?}");
                }
            }
        }
        assert!(exterior_interpolation(&pair, 0.5, 1.0, &norms).is_err());
    }

    #[test]
    fn compound_matches_singular_products() {
        let pair = random_pair(19, 4);
        let a = pair.plain_product(0.3).unwrap();
        for r in compound_singular_crosscheck(&a).unwrap() {
            assert_eq!(r.verdict, Verdict::Equality, "{r:?}");
        }
    }

    #[test]
    fn psd_order_gap_sign() {
        let small = ComplexMatrix::from_real_diagonal(&[1.0, 2.0]);
        let large = ComplexMatrix::from_real_diagonal(&[1.5, 2.0]);
        assert!(psd_order_gap(&small, &large).unwrap().abs() < 1e-15);
        assert!(psd_order_gap(&large, &small).unwrap() < -0.4);
    }
}
