//! Bundles of checks run together by the command-line harness.
//!
//! Every bundle returns [`LemmaOutcome`]s so that inapplicable certificates
//! travel alongside ordinary margins.

use crate::error::Result;
use crate::frame::{DualPair, Frame};
use crate::inequalities::{
    dual_resolution, resolution_margin, verify_alternate_dual_identity, verify_canonical_identity,
    verify_dual_inequality, verify_family, verify_parseval_identity, verify_scalar_family,
    verify_weighted_dual_inequality, LambdaFamily, PARSEVAL_TOLERANCE,
};
use crate::linalg::{CVector, ComplexMatrix, MarginReport, C64};
use crate::splitting::{check_lemma_part, IndexSubset, LemmaOutcome, SplitPair};

fn checked(reports: impl IntoIterator<Item = MarginReport>) -> Vec<LemmaOutcome> {
    reports.into_iter().map(LemmaOutcome::Checked).collect()
}

/// Parts 1–4 of the splitting lemma, plus parts 5–7 at `(p, q)` when given.
pub fn lemma_suite(sp: &SplitPair, pq: Option<(f64, f64)>, tolerance: f64) -> Result<Vec<LemmaOutcome>> {
    let mut out = Vec::with_capacity(7);
    for part in 1..=4 {
        out.push(check_lemma_part(sp, part, None, None, tolerance)?);
    }
    if let Some((p, q)) = pq {
        for part in 5..=7 {
            out.push(check_lemma_part(sp, part, Some(p), Some(q), tolerance)?);
        }
    }
    Ok(out)
}

pub fn family_suite(sp: &SplitPair, family: LambdaFamily, lambda: f64, tolerance: f64) -> Result<Vec<LemmaOutcome>> {
    Ok(checked(verify_family(sp, family, lambda, tolerance)?.reports))
}

/// Scalar forms of all three families.
pub fn scalar_suite(
    fr: &Frame,
    subset: &IndexSubset,
    f: &CVector,
    lambda: f64,
    tolerance: f64,
) -> Result<Vec<LemmaOutcome>> {
    let mut out = Vec::new();
    for family in LambdaFamily::ALL {
        out.extend(checked(
            verify_scalar_family(fr, subset, f, family, lambda, tolerance)?.reports(),
        ));
    }
    Ok(out)
}

/// Runs on `fr` itself when it is Parseval and on `{S^(−1/2)fᵢ}` otherwise.
pub fn parseval_suite(fr: &Frame, subset: &IndexSubset, f: &CVector, tolerance: f64) -> Result<Vec<LemmaOutcome>> {
    let report = if fr.frame_bounds().is_parseval(PARSEVAL_TOLERANCE) {
        verify_parseval_identity(fr, subset, f, tolerance)?
    } else {
        verify_parseval_identity(&fr.to_parseval()?, subset, f, tolerance)?
    };
    Ok(checked(report.reports()))
}

pub fn general_suite(fr: &Frame, subset: &IndexSubset, f: &CVector, tolerance: f64) -> Result<Vec<LemmaOutcome>> {
    Ok(checked(verify_canonical_identity(fr, subset, f, tolerance)?.reports()))
}

/// The λ-free identity and `3/4` bound for an alternate dual.
pub fn dual_identity_suite(
    pair: &DualPair,
    subset: &IndexSubset,
    f: &CVector,
    tolerance: f64,
) -> Result<Vec<LemmaOutcome>> {
    Ok(checked(
        verify_alternate_dual_identity(pair, subset, f, tolerance)?.reports(),
    ))
}

/// Resolution lemma on the pair's own `U, V`, the dual inequality and its
/// weighted form.
pub fn dual_lambda_suite(
    pair: &DualPair,
    subset: &IndexSubset,
    f: &CVector,
    weights: &[C64],
    lambda: f64,
    tolerance: f64,
) -> Result<Vec<LemmaOutcome>> {
    let (u, v) = dual_resolution(pair, subset)?;
    Ok(checked([
        resolution_margin(&u, &v, lambda, tolerance)?,
        verify_dual_inequality(pair, subset, f, lambda, tolerance)?.report,
        verify_weighted_dual_inequality(pair, weights, f, lambda, tolerance)?.report,
    ]))
}

/// Resolution lemma for an arbitrary square `U` and `V = I − U`.
pub fn resolution_suite(u: &ComplexMatrix, lambda: f64, tolerance: f64) -> Result<Vec<LemmaOutcome>> {
    let v = ComplexMatrix::identity(u.rows()).sub(u)?;
    Ok(checked([resolution_margin(u, &v, lambda, tolerance)?]))
}
