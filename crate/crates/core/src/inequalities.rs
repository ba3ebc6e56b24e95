//! The λ-parametrized inequality families on splittings, their scalar forms
//! over frame coefficients, the classical `3/4` identities, and the
//! alternate-dual inequality chain.
//!
//! The scalar forms rest on the translation
//!
//! ```text
//! ⟨S_J f, f⟩          = Σ_{i∈J} |⟨f, fᵢ⟩|²
//! ⟨S f, f⟩            = Σ_{i∈I} |⟨f, fᵢ⟩|²
//! ⟨S_J S⁻¹ S_J f, f⟩  = Σ_{i∈I} |⟨S⁻¹S_J f, fᵢ⟩|²
//! ```
//!
//! Scalar quantities are computed from analysis coefficients; the operator
//! forms are computed independently and compared.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::{DualPair, Frame};
use crate::linalg::{spectral_norm, CVector, ComplexMatrix, HermitianOperator, MarginReport, RelationId, C64};
use crate::splitting::{
    evaluate_split_relation, split_from_subset, IndexSubset, QuadraticCertificate, SplitPair, SplitRelation,
};

/// Frames whose bounds are within this distance of 1 are treated as Parseval.
pub const PARSEVAL_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaFamily {
    /// `(λ − λ²/4)·S₁ + (1 − λ²/4)·S₂ ≤ S₂ + S₁S⁻¹S₁ = S₁ + S₂S⁻¹S₂ ≤ S`.
    ComplementQuadratic,
    /// `0 ≤ S₁ − S₁S⁻¹S₁ ≤ (λ − 1)·S₂ + (1 − λ/2)²·S`.
    Defect,
    /// `(2λ − λ²/2 − 1)·S₁ + (1 − λ²/2)·S₂ ≤ S₁S⁻¹S₁ + S₂S⁻¹S₂ ≤ S`.
    QuadraticSum,
}

impl LambdaFamily {
    pub const ALL: [LambdaFamily; 3] = [Self::ComplementQuadratic, Self::Defect, Self::QuadraticSum];

    /// `(p, q)` of the λ-dependent side.
    pub fn coefficients(&self, lambda: f64) -> (f64, f64) {
        let l2 = lambda * lambda;
        match self {
            Self::ComplementQuadratic => (lambda - l2 / 4.0, 1.0 - l2 / 4.0),
            Self::Defect => (lambda - 1.0, (1.0 - lambda / 2.0).powi(2)),
            Self::QuadraticSum => (2.0 * lambda - l2 / 2.0 - 1.0, 1.0 - l2 / 2.0),
        }
    }

    /// The certified splitting relation instantiated at `λ`.
    pub fn split_relation(&self, lambda: f64) -> SplitRelation {
        let (p, q) = self.coefficients(lambda);
        match self {
            Self::ComplementQuadratic => SplitRelation::CertifiedLower { p, q },
            Self::Defect => SplitRelation::CertifiedDefect { p, q },
            Self::QuadraticSum => SplitRelation::CertifiedQuadraticSum { p, q },
        }
    }

    /// ϱ, η or τ at `(p, q)`; algebraically `(a − λ/2)²` in every case.
    pub fn certificate(&self, lambda: f64) -> QuadraticCertificate {
        self.split_relation(lambda).certificate().expect("certified relation")
    }
}

pub fn lambda_coefficients(family: LambdaFamily, lambda: f64) -> (f64, f64) {
    family.coefficients(lambda)
}

/// Operator-level check of one λ-family.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub family: LambdaFamily,
    pub lambda: f64,
    pub p: f64,
    pub q: f64,
    pub certificate: QuadraticCertificate,
    pub certificate_nonneg: bool,
    pub reports: Vec<MarginReport>,
}

impl FamilyReport {
    pub fn all_passed(&self) -> bool {
        self.certificate_nonneg && self.reports.iter().all(|r| r.passed)
    }

    pub fn report(&self, relation: RelationId) -> Option<&MarginReport> {
        self.reports.iter().find(|r| r.relation == relation)
    }
}

pub fn verify_family(sp: &SplitPair, family: LambdaFamily, lambda: f64, tolerance: f64) -> Result<FamilyReport> {
    if !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!("λ must be finite, got {lambda}")));
    }
    let (p, q) = family.coefficients(lambda);
    let certificate = family.certificate(lambda);
    let certified = evaluate_split_relation(sp, family.split_relation(lambda), tolerance)?;
    let eval = |rel: SplitRelation| evaluate_split_relation(sp, rel, tolerance);
    let reports = match family {
        LambdaFamily::ComplementQuadratic => vec![
            certified.with_relation(RelationId::ComplementQuadraticLower),
            eval(SplitRelation::SwapIdentity)?.with_relation(RelationId::ComplementQuadraticIdentity),
            eval(SplitRelation::ComplementUpper)?.with_relation(RelationId::ComplementQuadraticUpper),
        ],
        LambdaFamily::Defect => {
            let defect = sp.part1().sub(sp.part1_quadratic()?)?;
            vec![
                MarginReport::inequality(
                    RelationId::DefectNonneg,
                    defect.min_eigenvalue()?,
                    sp.scale(),
                    tolerance,
                ),
                certified.with_relation(RelationId::DefectUpper),
            ]
        }
        LambdaFamily::QuadraticSum => vec![
            certified.with_relation(RelationId::QuadraticSumLower),
            eval(SplitRelation::QuadraticSumUpper)?.with_relation(RelationId::QuadraticSumUpper),
        ],
    };
    Ok(FamilyReport {
        family,
        lambda,
        p,
        q,
        certificate,
        certificate_nonneg: certificate.is_nonneg_on_unit_interval(),
        reports: reports.into_iter().map(|r| r.with_lambda(lambda)).collect(),
    })
}

/// Lower bound, middle identity and upper bound of the complement-quadratic family.
pub fn verify_complement_quadratic(sp: &SplitPair, lambda: f64, tolerance: f64) -> Result<FamilyReport> {
    verify_family(sp, LambdaFamily::ComplementQuadratic, lambda, tolerance)
}

/// Non-negativity and λ-upper bound of `S₁ − S₁S⁻¹S₁`.
pub fn verify_defect_bound(sp: &SplitPair, lambda: f64, tolerance: f64) -> Result<FamilyReport> {
    verify_family(sp, LambdaFamily::Defect, lambda, tolerance)
}

/// Lower and upper bounds of `S₁S⁻¹S₁ + S₂S⁻¹S₂`.
pub fn verify_quadratic_sum(sp: &SplitPair, lambda: f64, tolerance: f64) -> Result<FamilyReport> {
    verify_family(sp, LambdaFamily::QuadraticSum, lambda, tolerance)
}

/// Energies of a vector split along `J` and `J^c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalarBreakdown {
    /// `Σ_{i∈J} |⟨f, fᵢ⟩|²`
    pub sum_j: f64,
    pub sum_jc: f64,
    /// `Σ_{i∈I} |⟨f, fᵢ⟩|²`
    pub sum_total: f64,
    /// `Σ_{i∈I} |⟨S⁻¹S_J f, fᵢ⟩|²`
    pub dual_energy_j: f64,
    pub dual_energy_jc: f64,
}

impl ScalarBreakdown {
    pub fn max_abs_difference(&self, other: &Self) -> f64 {
        [
            self.sum_j - other.sum_j,
            self.sum_jc - other.sum_jc,
            self.sum_total - other.sum_total,
            self.dual_energy_j - other.dual_energy_j,
            self.dual_energy_jc - other.dual_energy_jc,
        ]
        .iter()
        .fold(0.0, |m, d| m.max(d.abs()))
    }

    pub fn scale(&self) -> f64 {
        self.sum_total.max(1.0)
    }
}

fn check_subset(fr: &Frame, subset: &IndexSubset) -> Result<()> {
    if subset.universe() != fr.count() {
        return Err(Error::dims("subset universe", fr.count(), subset.universe()));
    }
    Ok(())
}

fn masked(c: &CVector, subset: &IndexSubset, keep_members: bool) -> CVector {
    CVector::from_fn(c.len(), |i, _| {
        if subset.contains(i) == keep_members {
            c[i]
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

fn energy_over(c: &CVector, members: &[usize]) -> f64 {
    members.iter().map(|&i| c[i].norm_sqr()).sum()
}

/// The five energies from analysis coefficients and vector sums.
pub fn scalar_breakdown(fr: &Frame, subset: &IndexSubset, f: &CVector) -> Result<ScalarBreakdown> {
    check_subset(fr, subset)?;
    let inverse = fr.frame_operator().inverse()?;
    scalar_breakdown_with_inverse(fr, subset, f, &inverse)
}

fn scalar_breakdown_with_inverse(
    fr: &Frame,
    subset: &IndexSubset,
    f: &CVector,
    inverse: &HermitianOperator,
) -> Result<ScalarBreakdown> {
    let c = fr.analysis_coefficients(f)?;
    let complement = subset.complement();
    let dual_energy = |keep: bool| -> Result<f64> {
        let partial = fr.synthesize(&masked(&c, subset, keep))?;
        let pulled = inverse.apply(&partial)?;
        Ok(fr.analysis_coefficients(&pulled)?.norm_squared())
    };
    Ok(ScalarBreakdown {
        sum_j: energy_over(&c, subset.members()),
        sum_jc: energy_over(&c, complement.members()),
        sum_total: c.norm_squared(),
        dual_energy_j: dual_energy(true)?,
        dual_energy_jc: dual_energy(false)?,
    })
}

/// The same five quantities as quadratic forms of `S₁, S₂, S, S₁S⁻¹S₁, S₂S⁻¹S₂`.
pub fn operator_breakdown(sp: &SplitPair, f: &CVector) -> Result<ScalarBreakdown> {
    Ok(ScalarBreakdown {
        sum_j: sp.part1().quadratic_form(f)?,
        sum_jc: sp.part2().quadratic_form(f)?,
        sum_total: sp.total().quadratic_form(f)?,
        dual_energy_j: sp.part1_quadratic()?.quadratic_form(f)?,
        dual_energy_jc: sp.part2_quadratic()?.quadratic_form(f)?,
    })
}

/// One scalar relation `lhs ≤ rhs` (or `lhs = rhs`) with its verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalarCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub report: MarginReport,
}

impl ScalarCheck {
    fn inequality(relation: RelationId, lhs: f64, rhs: f64, scale: f64, tolerance: f64) -> Self {
        Self {
            lhs,
            rhs,
            report: MarginReport::inequality(relation, rhs - lhs, scale, tolerance),
        }
    }

    fn equality(relation: RelationId, lhs: f64, rhs: f64, scale: f64, tolerance: f64) -> Self {
        Self {
            lhs,
            rhs,
            report: MarginReport::equality(relation, lhs - rhs, scale, tolerance),
        }
    }
}

/// Scalar form of a λ-family evaluated on one vector.
#[derive(Clone, Debug, Serialize)]
pub struct ScalarFamilyReport {
    pub family: LambdaFamily,
    pub lambda: f64,
    pub p: f64,
    pub q: f64,
    pub breakdown: ScalarBreakdown,
    pub checks: Vec<ScalarCheck>,
    /// Largest difference between a scalar side and the matching operator
    /// quadratic form.
    pub operator_agreement: MarginReport,
}

impl ScalarFamilyReport {
    pub fn reports(&self) -> Vec<MarginReport> {
        let mut out: Vec<MarginReport> = self.checks.iter().map(|c| c.report.clone()).collect();
        out.push(self.operator_agreement.clone());
        out
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.report.passed) && self.operator_agreement.passed
    }

    pub fn check(&self, relation: RelationId) -> Option<&ScalarCheck> {
        self.checks.iter().find(|c| c.report.relation == relation)
    }
}

/// Evaluates the scalar version of `family` for `f` and cross-checks each
/// side against the operator quadratic forms.
pub fn verify_scalar_family(
    fr: &Frame,
    subset: &IndexSubset,
    f: &CVector,
    family: LambdaFamily,
    lambda: f64,
    tolerance: f64,
) -> Result<ScalarFamilyReport> {
    if !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!("λ must be finite, got {lambda}")));
    }
    let sp = split_from_subset(fr, subset)?;
    let b = scalar_breakdown_with_inverse(fr, subset, f, sp.total_inverse()?)?;
    let (p, q) = family.coefficients(lambda);
    let scale = b.scale();

    let (s, s1, s2) = (sp.total(), sp.part1(), sp.part2());
    let (q1, q2) = (sp.part1_quadratic()?, sp.part2_quadratic()?);
    let form = |op: &HermitianOperator| op.quadratic_form(f);
    let lin = |a: f64, x: &HermitianOperator, c: f64, y: &HermitianOperator| {
        HermitianOperator::linear_combination(&[(a, x), (c, y)])
    };

    // (check, operator lhs, operator rhs)
    let rows: Vec<(ScalarCheck, f64, f64)> = match family {
        LambdaFamily::ComplementQuadratic => {
            let lower = p * b.sum_j + q * b.sum_jc;
            let left = b.sum_jc + b.dual_energy_j;
            let right = b.sum_j + b.dual_energy_jc;
            let op_left = form(&s2.add(q1)?)?;
            vec![
                (
                    ScalarCheck::inequality(RelationId::EnergyComplementLower, lower, left, scale, tolerance),
                    form(&lin(p, s1, q, s2)?)?,
                    op_left,
                ),
                (
                    ScalarCheck::equality(RelationId::EnergyComplementIdentity, left, right, scale, tolerance),
                    op_left,
                    form(&s1.add(q2)?)?,
                ),
                (
                    ScalarCheck::inequality(RelationId::EnergyComplementUpper, left, b.sum_total, scale, tolerance),
                    op_left,
                    form(s)?,
                ),
            ]
        }
        LambdaFamily::Defect => {
            let defect = b.sum_j - b.dual_energy_j;
            let upper = p * b.sum_jc + q * b.sum_total;
            let op_defect = form(&s1.sub(q1)?)?;
            vec![
                (
                    ScalarCheck::inequality(RelationId::EnergyDefectNonneg, 0.0, defect, scale, tolerance),
                    0.0,
                    op_defect,
                ),
                (
                    ScalarCheck::inequality(RelationId::EnergyDefectUpper, defect, upper, scale, tolerance),
                    op_defect,
                    form(&lin(p, s2, q, s)?)?,
                ),
            ]
        }
        LambdaFamily::QuadraticSum => {
            let lower = p * b.sum_j + q * b.sum_jc;
            let middle = b.dual_energy_j + b.dual_energy_jc;
            let op_middle = form(&q1.add(q2)?)?;
            vec![
                (
                    ScalarCheck::inequality(RelationId::EnergyQuadraticSumLower, lower, middle, scale, tolerance),
                    form(&lin(p, s1, q, s2)?)?,
                    op_middle,
                ),
                (
                    ScalarCheck::inequality(
                        RelationId::EnergyQuadraticSumUpper,
                        middle,
                        b.sum_total,
                        scale,
                        tolerance,
                    ),
                    op_middle,
                    form(s)?,
                ),
            ]
        }
    };

    let disagreement = rows
        .iter()
        .map(|(c, ol, or)| (c.lhs - ol).abs().max((c.rhs - or).abs()))
        .fold(0.0, f64::max);
    let checks = rows
        .into_iter()
        .map(|(mut c, _, _)| {
            c.report = c.report.with_lambda(lambda);
            c
        })
        .collect();
    Ok(ScalarFamilyReport {
        family,
        lambda,
        p,
        q,
        breakdown: b,
        checks,
        operator_agreement: MarginReport::equality(RelationId::EnergyOperatorAgreement, disagreement, scale, tolerance)
            .with_lambda(lambda),
    })
}

/// Identity between the `J` and `J^c` sides plus the `3/4` lower bound.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub left: f64,
    pub right: f64,
    pub bound: f64,
    pub identity: MarginReport,
    pub bound_check: MarginReport,
    /// Present when a quantity was computed by two routes.
    pub agreement: Option<MarginReport>,
}

impl IdentityReport {
    pub fn reports(&self) -> Vec<MarginReport> {
        let mut out = vec![self.identity.clone(), self.bound_check.clone()];
        out.extend(self.agreement.clone());
        out
    }

    pub fn all_passed(&self) -> bool {
        self.reports().iter().all(|r| r.passed)
    }
}

/// For a Parseval frame:
/// `Σ_J |⟨f,fᵢ⟩|² + ‖Σ_{J^c}⟨f,fᵢ⟩fᵢ‖² = Σ_{J^c} |⟨f,fᵢ⟩|² + ‖Σ_J⟨f,fᵢ⟩fᵢ‖² ≥ (3/4)‖f‖²`.
pub fn verify_parseval_identity(
    fr: &Frame,
    subset: &IndexSubset,
    f: &CVector,
    tolerance: f64,
) -> Result<IdentityReport> {
    check_subset(fr, subset)?;
    let bounds = fr.frame_bounds();
    if !bounds.is_parseval(PARSEVAL_TOLERANCE) {
        return Err(Error::NotParseval {
            lower: bounds.lower,
            upper: bounds.upper,
        });
    }
    let c = fr.analysis_coefficients(f)?;
    let complement = subset.complement();
    let partial_j = fr.synthesize(&masked(&c, subset, true))?;
    let partial_jc = fr.synthesize(&masked(&c, subset, false))?;
    let left = energy_over(&c, subset.members()) + partial_jc.norm_squared();
    let right = energy_over(&c, complement.members()) + partial_j.norm_squared();
    let norm_sq = f.norm_squared();
    let bound = 0.75 * norm_sq;
    let scale = c.norm_squared().max(norm_sq).max(1.0);
    Ok(IdentityReport {
        left,
        right,
        bound,
        identity: MarginReport::equality(RelationId::ParsevalIdentity, left - right, scale, tolerance),
        bound_check: MarginReport::inequality(RelationId::ParsevalBound, left.min(right) - bound, scale, tolerance),
        agreement: None,
    })
}

/// For any frame with canonical dual `f̃ᵢ = S⁻¹fᵢ`:
/// `Σ_J |⟨f,fᵢ⟩|² + Σ_I |⟨S_{J^c}f, f̃ᵢ⟩|² = Σ_{J^c} |⟨f,fᵢ⟩|² + Σ_I |⟨S_J f, f̃ᵢ⟩|² ≥ (3/4)Σ_I |⟨f,fᵢ⟩|²`.
///
/// `Σ_I |⟨S_J f, f̃ᵢ⟩|²` is also compared with the breakdown's `dual_energy_j`.
pub fn verify_canonical_identity(
    fr: &Frame,
    subset: &IndexSubset,
    f: &CVector,
    tolerance: f64,
) -> Result<IdentityReport> {
    check_subset(fr, subset)?;
    let pair = fr.canonical_dual()?;
    let c = fr.analysis_coefficients(f)?;
    let complement = subset.complement();
    let partial_j = fr.synthesize(&masked(&c, subset, true))?;
    let partial_jc = fr.synthesize(&masked(&c, subset, false))?;
    let energy_j = pair.dual.analysis_coefficients(&partial_j)?.norm_squared();
    let energy_jc = pair.dual.analysis_coefficients(&partial_jc)?.norm_squared();
    let sum_j = energy_over(&c, subset.members());
    let sum_jc = energy_over(&c, complement.members());
    let sum_total = c.norm_squared();
    let left = sum_j + energy_jc;
    let right = sum_jc + energy_j;
    let bound = 0.75 * sum_total;
    let scale = sum_total.max(1.0);

    let b = scalar_breakdown(fr, subset, f)?;
    let disagreement = (energy_j - b.dual_energy_j)
        .abs()
        .max((energy_jc - b.dual_energy_jc).abs());
    Ok(IdentityReport {
        left,
        right,
        bound,
        identity: MarginReport::equality(RelationId::CanonicalIdentity, left - right, scale, tolerance),
        bound_check: MarginReport::inequality(RelationId::CanonicalBound, left.min(right) - bound, scale, tolerance),
        agreement: Some(MarginReport::equality(
            RelationId::CanonicalDualEnergyAgreement,
            disagreement,
            scale,
            tolerance,
        )),
    })
}

/// `U*U + λ(V* + V) ≥ λ(2 − λ)·I` for any `U + V = I`; `U` need not be normal.
pub fn resolution_margin(u: &ComplexMatrix, v: &ComplexMatrix, lambda: f64, tolerance: f64) -> Result<MarginReport> {
    if u.rows() != u.cols() || v.rows() != v.cols() || u.rows() != v.rows() {
        return Err(Error::dims(
            "resolution lemma",
            format!("{}×{}", u.rows(), u.rows()),
            format!("{}×{} and {}×{}", u.rows(), u.cols(), v.rows(), v.cols()),
        ));
    }
    if !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!("λ must be finite, got {lambda}")));
    }
    let n = u.rows();
    let (u, v) = (u.as_inner(), v.as_inner());
    let identity = DMatrix::<C64>::identity(n, n);
    let (nu, nv) = (spectral_norm(u), spectral_norm(v));
    let deviation = spectral_norm(&(u + v - &identity));
    let allowed = tolerance * nu.max(nv).max(1.0);
    if deviation > allowed {
        return Err(Error::NotAResolution { deviation, allowed });
    }
    let l = C64::new(lambda, 0.0);
    let m = u.adjoint() * u + (v.adjoint() + v) * l - identity * C64::new(lambda * (2.0 - lambda), 0.0);
    let governing = nu * nu + 2.0 * lambda.abs() * nv + (lambda * (2.0 - lambda)).abs();
    let op = HermitianOperator::from_product(m, governing)?;
    Ok(
        MarginReport::inequality(RelationId::ResolutionLemma, op.min_eigenvalue()?, governing, tolerance)
            .with_lambda(lambda),
    )
}

/// `U = Σ_{i∈J^c} ⟨·,gᵢ⟩fᵢ` and `V = Σ_{i∈J} ⟨·,gᵢ⟩fᵢ`; `U + V = FG* = I`
/// and neither is normal in general.
pub fn dual_resolution(pair: &DualPair, subset: &IndexSubset) -> Result<(ComplexMatrix, ComplexMatrix)> {
    check_subset(&pair.frame, subset)?;
    let f = pair.frame.synthesis_matrix();
    let g_adj = pair.dual.synthesis_matrix().adjoint();
    let part = |indicator: Vec<f64>| f.matmul(&ComplexMatrix::from_diagonal(&indicator))?.matmul(&g_adj);
    Ok((part(subset.complement().indicator())?, part(subset.indicator())?))
}

/// Coefficient sums for an alternate-dual pair split along `J`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DualSideQuantities {
    /// `Re Σ_{i∈J} ⟨f,gᵢ⟩·conj⟨f,fᵢ⟩`
    pub re_j: f64,
    pub re_jc: f64,
    /// `‖Σ_{i∈J} ⟨f,gᵢ⟩fᵢ‖²`
    pub norm_sq_j: f64,
    pub norm_sq_jc: f64,
    /// `Σ_I |⟨f,fᵢ⟩|²`, used as the tolerance scale.
    pub sum_total: f64,
}

impl DualSideQuantities {
    pub fn max_abs_difference(&self, other: &Self) -> f64 {
        [
            self.re_j - other.re_j,
            self.re_jc - other.re_jc,
            self.norm_sq_j - other.norm_sq_j,
            self.norm_sq_jc - other.norm_sq_jc,
        ]
        .iter()
        .fold(0.0, |m, d| m.max(d.abs()))
    }
}

fn re_pairing(a: &CVector, b: &CVector, members: &[usize]) -> f64 {
    members.iter().map(|&i| (a[i] * b[i].conj()).re).sum()
}

pub fn dual_side_quantities(pair: &DualPair, subset: &IndexSubset, f: &CVector) -> Result<DualSideQuantities> {
    check_subset(&pair.frame, subset)?;
    let a = pair.dual.analysis_coefficients(f)?;
    let b = pair.frame.analysis_coefficients(f)?;
    let complement = subset.complement();
    Ok(DualSideQuantities {
        re_j: re_pairing(&a, &b, subset.members()),
        re_jc: re_pairing(&a, &b, complement.members()),
        norm_sq_j: pair.frame.synthesize(&masked(&a, subset, true))?.norm_squared(),
        norm_sq_jc: pair.frame.synthesize(&masked(&a, subset, false))?.norm_squared(),
        sum_total: b.norm_squared(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DualInequalityReport {
    pub quantities: DualSideQuantities,
    pub lhs: f64,
    pub rhs: f64,
    pub report: MarginReport,
}

fn dual_inequality(q: DualSideQuantities, lambda: f64, relation: RelationId, tolerance: f64) -> DualInequalityReport {
    let lhs = q.re_j + q.norm_sq_jc;
    let rhs = (2.0 * lambda - lambda * lambda) * q.re_j + (1.0 - lambda * lambda) * q.re_jc;
    DualInequalityReport {
        quantities: q,
        lhs,
        rhs,
        report: MarginReport::inequality(relation, lhs - rhs, q.sum_total, tolerance).with_lambda(lambda),
    }
}

/// `Re Σ_J ⟨f,gᵢ⟩conj⟨f,fᵢ⟩ + ‖Σ_{J^c}⟨f,gᵢ⟩fᵢ‖² ≥
/// (2λ − λ²)·Re Σ_J ⟨f,gᵢ⟩conj⟨f,fᵢ⟩ + (1 − λ²)·Re Σ_{J^c} ⟨f,gᵢ⟩conj⟨f,fᵢ⟩`.
pub fn verify_dual_inequality(
    pair: &DualPair,
    subset: &IndexSubset,
    f: &CVector,
    lambda: f64,
    tolerance: f64,
) -> Result<DualInequalityReport> {
    if !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!("λ must be finite, got {lambda}")));
    }
    let q = dual_side_quantities(pair, subset, f)?;
    Ok(dual_inequality(q, lambda, RelationId::DualInequality, tolerance))
}

/// Weighted form with `Uf = Σ_I aᵢ⟨f,gᵢ⟩fᵢ` and `Vf = Σ_I (1 − aᵢ)⟨f,gᵢ⟩fᵢ`,
/// so that `U + V = I`. In the returned quantities the `J` slots hold the
/// `V` side and the `J^c` slots the `U` side; indicator weights of `J^c`
/// reproduce [`verify_dual_inequality`].
pub fn verify_weighted_dual_inequality(
    pair: &DualPair,
    weights: &[C64],
    f: &CVector,
    lambda: f64,
    tolerance: f64,
) -> Result<DualInequalityReport> {
    let m = pair.frame.count();
    if weights.len() != m {
        return Err(Error::dims("weights", m, weights.len()));
    }
    if weights.iter().any(|w| !w.re.is_finite() || !w.im.is_finite()) {
        return Err(Error::NonFinite("weights"));
    }
    if !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!("λ must be finite, got {lambda}")));
    }
    let a = pair.dual.analysis_coefficients(f)?;
    let b = pair.frame.analysis_coefficients(f)?;
    let one = C64::new(1.0, 0.0);
    let u_coeffs = CVector::from_fn(m, |i, _| weights[i] * a[i]);
    let v_coeffs = CVector::from_fn(m, |i, _| (one - weights[i]) * a[i]);
    let all: Vec<usize> = (0..m).collect();
    let q = DualSideQuantities {
        re_j: re_pairing(&v_coeffs, &b, &all),
        re_jc: re_pairing(&u_coeffs, &b, &all),
        norm_sq_j: pair.frame.synthesize(&v_coeffs)?.norm_squared(),
        norm_sq_jc: pair.frame.synthesize(&u_coeffs)?.norm_squared(),
        sum_total: b.norm_squared(),
    };
    Ok(dual_inequality(
        q,
        lambda,
        RelationId::WeightedDualInequality,
        tolerance,
    ))
}

/// `Re Σ_J ⟨f,gᵢ⟩conj⟨f,fᵢ⟩ + ‖Σ_{J^c}⟨f,gᵢ⟩fᵢ‖² =
/// Re Σ_{J^c} ⟨f,gᵢ⟩conj⟨f,fᵢ⟩ + ‖Σ_J⟨f,gᵢ⟩fᵢ‖² ≥ (3/4)‖f‖²`.
pub fn verify_alternate_dual_identity(
    pair: &DualPair,
    subset: &IndexSubset,
    f: &CVector,
    tolerance: f64,
) -> Result<IdentityReport> {
    let q = dual_side_quantities(pair, subset, f)?;
    let left = q.re_j + q.norm_sq_jc;
    let right = q.re_jc + q.norm_sq_j;
    let bound = 0.75 * f.norm_squared();
    let scale = q.sum_total.max(f.norm_squared()).max(1.0);
    Ok(IdentityReport {
        left,
        right,
        bound,
        identity: MarginReport::equality(RelationId::AlternateDualIdentity, left - right, scale, tolerance),
        bound_check: MarginReport::inequality(
            RelationId::AlternateDualBound,
            left.min(right) - bound,
            scale,
            tolerance,
        ),
        agreement: None,
    })
}
