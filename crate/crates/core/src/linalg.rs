//! Dense complex matrices, Hermitian operators and their spectral calculus,
//! and Loewner-order comparison.

use std::fmt;
use std::ops::Index;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};

pub use num_complex::Complex64 as C64;

pub type CVector = DVector<C64>;

pub const PSD_TOLERANCE: f64 = 1e-9;
pub const EIG_TOLERANCE: f64 = 1e-10;
pub const DEFECT_TOLERANCE: f64 = 1e-12;

/// Relative tolerances. Each is multiplied by `max(1, ‖S‖₂)` of the
/// operator that governs the check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub psd: f64,
    pub eig: f64,
    pub defect: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            psd: PSD_TOLERANCE,
            eig: EIG_TOLERANCE,
            defect: DEFECT_TOLERANCE,
        }
    }
}

impl Tolerances {
    pub fn with_psd(psd: f64) -> Self {
        Self { psd, ..Self::default() }
    }
}

/// Largest singular value.
pub(crate) fn spectral_norm(m: &DMatrix<C64>) -> f64 {
    if m.is_empty() || m.iter().all(|z| *z == C64::new(0.0, 0.0)) {
        return 0.0;
    }
    m.singular_values().max()
}

pub(crate) fn all_finite(m: &DMatrix<C64>) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Dense complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    pub fn new(inner: DMatrix<C64>) -> Result<Self> {
        if inner.nrows() == 0 || inner.ncols() == 0 {
            return Err(Error::InvalidArgument("matrix must be non-empty".into()));
        }
        if !all_finite(&inner) {
            return Err(Error::NonFinite("matrix"));
        }
        Ok(Self(inner))
    }

    pub fn from_row_major(rows: usize, cols: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::dims("row-major entries", rows * cols, entries.len()));
        }
        Self::new(DMatrix::from_row_slice(rows, cols, entries))
    }

    pub fn from_real_row_major(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        let entries: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_row_major(rows, cols, &entries)
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let d: Vec<C64> = diag.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self(DMatrix::from_diagonal(&DVector::from_vec(d)))
    }

    pub(crate) fn from_inner(inner: DMatrix<C64>) -> Self {
        Self(inner)
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn as_inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<C64> {
        self.0.transpose().iter().copied().collect()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<Self> {
        if self.cols() != rhs.rows() {
            return Err(Error::dims("matrix product", self.cols(), rhs.rows()));
        }
        Ok(Self(&self.0 * &rhs.0))
    }

    pub fn add(&self, rhs: &ComplexMatrix) -> Result<Self> {
        if self.0.shape() != rhs.0.shape() {
            return Err(Error::dims(
                "matrix sum",
                format!("{:?}", self.0.shape()),
                format!("{:?}", rhs.0.shape()),
            ));
        }
        Ok(Self(&self.0 + &rhs.0))
    }

    pub fn sub(&self, rhs: &ComplexMatrix) -> Result<Self> {
        if self.0.shape() != rhs.0.shape() {
            return Err(Error::dims(
                "matrix difference",
                format!("{:?}", self.0.shape()),
                format!("{:?}", rhs.0.shape()),
            ));
        }
        Ok(Self(&self.0 - &rhs.0))
    }

    pub fn scale(&self, c: C64) -> Self {
        Self(&self.0 * c)
    }

    pub fn norm2(&self) -> f64 {
        spectral_norm(&self.0)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

/// Eigen-decomposition of a Hermitian operator: eigenvalues ascending, each
/// eigenvector's first non-negligible component real and positive.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// `max |λ|`, the spectral norm of the underlying operator.
    pub fn norm(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }

    /// `V·diag(g(λ))·V*`.
    fn synthesize(&self, values: &[f64]) -> DMatrix<C64> {
        let v = self.eigenvectors.as_inner();
        let mut scaled = v.clone();
        for (j, &g) in values.iter().enumerate() {
            scaled.column_mut(j).scale_mut(g);
        }
        scaled * v.adjoint()
    }
}

// Components below this modulus are treated as zero when fixing the phase.
const PHASE_FLOOR: f64 = 1e-8;

fn compute_spectrum(m: &DMatrix<C64>) -> Result<Spectrum> {
    let n = m.nrows();
    let max_iterations = 100 * n.max(10);
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, max_iterations).ok_or(Error::EigenNonConvergence {
        iterations: max_iterations,
    })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    if eigenvalues.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("spectrum"));
    }
    let mut vectors = DMatrix::<C64>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(src);
        let phase = col
            .iter()
            .find(|z| z.norm() > PHASE_FLOOR)
            .map(|z| z.conj() / z.norm())
            .unwrap_or(C64::new(1.0, 0.0));
        vectors.set_column(dst, &(col * phase));
    }
    Ok(Spectrum {
        eigenvalues,
        eigenvectors: ComplexMatrix(vectors),
    })
}

/// Hermitian matrix, stored exactly self-adjoint, with lazily cached spectrum.
#[derive(Clone)]
pub struct HermitianOperator {
    matrix: DMatrix<C64>,
    defect: f64,
    spectrum: OnceLock<std::result::Result<Spectrum, Error>>,
}

impl fmt::Debug for HermitianOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HermitianOperator")
            .field("matrix", &self.matrix)
            .field("defect", &self.defect)
            .finish()
    }
}

impl PartialEq for HermitianOperator {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl HermitianOperator {
    /// Symmetrizes `(H + H*)/2`, rejecting inputs whose defect `‖H − H*‖₂`
    /// exceeds the default defect tolerance times `max(1, ‖H‖₂)`.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_defect_tolerance(m, DEFECT_TOLERANCE)
    }

    pub fn with_defect_tolerance(m: ComplexMatrix, defect_tolerance: f64) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::dims("Hermitian operator (square)", m.rows(), m.cols()));
        }
        Self::symmetrize(m.0, 1.0, defect_tolerance)
    }

    /// Internal constructor for computed products. `governing` is the norm
    /// scale of the inputs that produced `m`.
    pub(crate) fn from_product(m: DMatrix<C64>, governing: f64) -> Result<Self> {
        Self::symmetrize(m, governing, DEFECT_TOLERANCE)
    }

    fn symmetrize(m: DMatrix<C64>, governing: f64, tol: f64) -> Result<Self> {
        if !all_finite(&m) {
            return Err(Error::NonFinite("Hermitian operator"));
        }
        let skew = &m - m.adjoint();
        let defect = spectral_norm(&skew);
        let matrix = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        let op = Self {
            matrix,
            defect,
            spectrum: OnceLock::new(),
        };
        let floor = tol * governing.max(1.0);
        if defect > floor {
            let allowed = tol * governing.max(1.0).max(op.norm2()?);
            if defect > allowed {
                return Err(Error::NotHermitian { defect, allowed });
            }
        }
        Ok(op)
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, 1.0)
    }

    pub fn zeros(n: usize) -> Self {
        Self::scaled_identity(n, 0.0)
    }

    pub fn scaled_identity(n: usize, c: f64) -> Self {
        Self::from_diagonal(&vec![c; n])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self {
            matrix: ComplexMatrix::from_diagonal(diag).0,
            defect: 0.0,
            spectrum: OnceLock::new(),
        }
    }

    /// Build from a matrix already known to be exactly Hermitian.
    pub(crate) fn from_exact(matrix: DMatrix<C64>) -> Self {
        debug_assert!(matrix == matrix.adjoint());
        Self {
            matrix,
            defect: 0.0,
            spectrum: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix(self.matrix.clone())
    }

    pub fn as_inner(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn hermitian_defect(&self) -> f64 {
        self.defect
    }

    pub fn spectrum(&self) -> Result<&Spectrum> {
        self.spectrum
            .get_or_init(|| compute_spectrum(&self.matrix))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.spectrum()?.min())
    }

    pub fn max_eigenvalue(&self) -> Result<f64> {
        Ok(self.spectrum()?.max())
    }

    pub fn norm2(&self) -> Result<f64> {
        Ok(self.spectrum()?.norm())
    }

    /// `max(1, ‖H‖₂)`, the normalization used by every margin check.
    pub fn scale(&self) -> Result<f64> {
        Ok(self.norm2()?.max(1.0))
    }

    fn check_same_dim(&self, other: &Self, context: &'static str) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::dims(context, self.dim(), other.dim()));
        }
        Ok(())
    }

    // Sums, differences and real multiples of exactly Hermitian matrices are
    // exactly Hermitian, so no re-symmetrization is needed.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other, "operator sum")?;
        Ok(Self::from_exact(&self.matrix + &other.matrix))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other, "operator difference")?;
        Ok(Self::from_exact(&self.matrix - &other.matrix))
    }

    pub fn scale_by(&self, c: f64) -> Self {
        Self::from_exact(&self.matrix * C64::new(c, 0.0))
    }

    /// `Σ cₖ·Hₖ`.
    pub fn linear_combination(terms: &[(f64, &HermitianOperator)]) -> Result<Self> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty linear combination".into()))?;
        let mut acc = DMatrix::<C64>::zeros(first.dim(), first.dim());
        for (c, op) in terms {
            first.check_same_dim(op, "linear combination")?;
            acc += &op.matrix * C64::new(*c, 0.0);
        }
        Ok(Self::from_exact(acc))
    }

    pub fn apply(&self, f: &CVector) -> Result<CVector> {
        if f.len() != self.dim() {
            return Err(Error::dims("operator application", self.dim(), f.len()));
        }
        Ok(&self.matrix * f)
    }

    /// `⟨Hf, f⟩`, real for Hermitian `H`.
    pub fn quadratic_form(&self, f: &CVector) -> Result<f64> {
        Ok(self.apply(f)?.dotc(f).re)
    }

    /// `‖self − other‖₂`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.sub(other)?.norm2()
    }

    pub fn inverse(&self) -> Result<Self> {
        spectral_apply(self, |x| if x != 0.0 { 1.0 / x } else { f64::NAN })
    }

    pub fn sqrt(&self) -> Result<Self> {
        spectral_apply(self, f64::sqrt)
    }

    pub fn inv_sqrt(&self) -> Result<Self> {
        spectral_apply(self, |x| if x > 0.0 { 1.0 / x.sqrt() } else { f64::NAN })
    }
}

pub fn eig_hermitian(h: &HermitianOperator) -> Result<Spectrum> {
    h.spectrum().cloned()
}

/// `Σₖ g(λₖ)·vₖvₖ*`.
pub fn spectral_apply(h: &HermitianOperator, g: impl Fn(f64) -> f64) -> Result<HermitianOperator> {
    let spectrum = h.spectrum()?;
    let mut values = Vec::with_capacity(spectrum.eigenvalues.len());
    for &lambda in &spectrum.eigenvalues {
        let y = g(lambda);
        if !y.is_finite() {
            return Err(Error::Domain { eigenvalue: lambda });
        }
        values.push(y);
    }
    let governing = values.iter().fold(0.0_f64, |acc, y| acc.max(y.abs()));
    HermitianOperator::from_product(spectrum.synthesize(&values), governing)
}

/// `P·X·P`, symmetrized.
pub fn conjugate(p: &HermitianOperator, x: &HermitianOperator) -> Result<HermitianOperator> {
    p.check_same_dim(x, "conjugation")?;
    let product = &p.matrix * &x.matrix * &p.matrix;
    let governing = p.norm2()?.powi(2) * x.norm2()?;
    HermitianOperator::from_product(product, governing)
}

/// Which relation a margin belongs to. Serialized as snake_case tags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum RelationId {
    Loewner,
    // Master splitting lemma.
    SplitQuadraticNonneg,
    SplitComplementUpper,
    SplitQuadraticSumUpper,
    SplitSwapIdentity,
    SplitCertifiedLower,
    SplitCertifiedDefect,
    SplitCertifiedQuadraticSum,
    // λ-families on operators.
    ComplementQuadraticLower,
    ComplementQuadraticIdentity,
    ComplementQuadraticUpper,
    DefectNonneg,
    DefectUpper,
    QuadraticSumLower,
    QuadraticSumUpper,
    // Scalar forms through analysis coefficients.
    EnergyComplementLower,
    EnergyComplementIdentity,
    EnergyComplementUpper,
    EnergyDefectNonneg,
    EnergyDefectUpper,
    EnergyQuadraticSumLower,
    EnergyQuadraticSumUpper,
    EnergyOperatorAgreement,
    // Classical identities.
    ParsevalIdentity,
    ParsevalBound,
    CanonicalIdentity,
    CanonicalBound,
    CanonicalDualEnergyAgreement,
    // Alternate-dual chain.
    AlternateDualIdentity,
    AlternateDualBound,
    ResolutionLemma,
    DualInequality,
    WeightedDualInequality,
}

impl RelationId {
    pub fn as_str(&self) -> &'static str {
        match self {
            RelationId::Loewner => "loewner",
            RelationId::SplitQuadraticNonneg => "split_quadratic_nonneg",
            RelationId::SplitComplementUpper => "split_complement_upper",
            RelationId::SplitQuadraticSumUpper => "split_quadratic_sum_upper",
            RelationId::SplitSwapIdentity => "split_swap_identity",
            RelationId::SplitCertifiedLower => "split_certified_lower",
            RelationId::SplitCertifiedDefect => "split_certified_defect",
            RelationId::SplitCertifiedQuadraticSum => "split_certified_quadratic_sum",
            RelationId::ComplementQuadraticLower => "complement_quadratic_lower",
            RelationId::ComplementQuadraticIdentity => "complement_quadratic_identity",
            RelationId::ComplementQuadraticUpper => "complement_quadratic_upper",
            RelationId::DefectNonneg => "defect_nonneg",
            RelationId::DefectUpper => "defect_upper",
            RelationId::QuadraticSumLower => "quadratic_sum_lower",
            RelationId::QuadraticSumUpper => "quadratic_sum_upper",
            RelationId::EnergyComplementLower => "energy_complement_lower",
            RelationId::EnergyComplementIdentity => "energy_complement_identity",
            RelationId::EnergyComplementUpper => "energy_complement_upper",
            RelationId::EnergyDefectNonneg => "energy_defect_nonneg",
            RelationId::EnergyDefectUpper => "energy_defect_upper",
            RelationId::EnergyQuadraticSumLower => "energy_quadratic_sum_lower",
            RelationId::EnergyQuadraticSumUpper => "energy_quadratic_sum_upper",
            RelationId::EnergyOperatorAgreement => "energy_operator_agreement",
            RelationId::ParsevalIdentity => "parseval_identity",
            RelationId::ParsevalBound => "parseval_bound",
            RelationId::CanonicalIdentity => "canonical_identity",
            RelationId::CanonicalBound => "canonical_bound",
            RelationId::CanonicalDualEnergyAgreement => "canonical_dual_energy_agreement",
            RelationId::AlternateDualIdentity => "alternate_dual_identity",
            RelationId::AlternateDualBound => "alternate_dual_bound",
            RelationId::ResolutionLemma => "resolution_lemma",
            RelationId::DualInequality => "dual_inequality",
            RelationId::WeightedDualInequality => "weighted_dual_inequality",
        }
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportKind {
    /// `margin = λ_min(rhs − lhs)` (or `rhs − lhs` for scalars).
    Inequality,
    /// `margin = −deviation`, so the pass rule is shared with inequalities.
    Equality,
}

/// Outcome of one checked relation. `passed ⇔ margin ≥ −tolerance·scale`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarginReport {
    pub relation: RelationId,
    pub kind: ReportKind,
    pub margin: f64,
    pub scale: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub lambda: Option<f64>,
}

impl MarginReport {
    pub fn inequality(relation: RelationId, margin: f64, scale: f64, tolerance: f64) -> Self {
        let scale = scale.max(1.0);
        Self {
            relation,
            kind: ReportKind::Inequality,
            margin,
            scale,
            tolerance,
            passed: margin >= -tolerance * scale,
            lambda: None,
        }
    }

    pub fn equality(relation: RelationId, deviation: f64, scale: f64, tolerance: f64) -> Self {
        Self {
            kind: ReportKind::Equality,
            ..Self::inequality(relation, -deviation.abs(), scale, tolerance)
        }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = Some(lambda);
        self
    }

    pub fn with_relation(mut self, relation: RelationId) -> Self {
        self.relation = relation;
        self
    }

    /// Absolute deviation for equality reports; `max(0, −margin)` otherwise.
    pub fn deviation(&self) -> f64 {
        (-self.margin).max(0.0)
    }

    pub fn normalized_margin(&self) -> f64 {
        self.margin / self.scale
    }
}

/// `U ≤ V` checked as `λ_min(V − U) ≥ −tolerance·scale`.
pub fn loewner_leq(u: &HermitianOperator, v: &HermitianOperator, scale: f64, tolerance: f64) -> Result<MarginReport> {
    if !(scale >= 1.0) || !scale.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "scale must be finite and ≥ 1, got {scale}"
        )));
    }
    let diff = v.sub(u)?;
    Ok(MarginReport::inequality(
        RelationId::Loewner,
        diff.min_eigenvalue()?,
        scale,
        tolerance,
    ))
}

/// Equality `U = V` reported through the deviation `‖U − V‖₂`.
pub fn operator_equality(
    u: &HermitianOperator,
    v: &HermitianOperator,
    scale: f64,
    tolerance: f64,
) -> Result<MarginReport> {
    Ok(MarginReport::equality(
        RelationId::Loewner,
        u.distance(v)?,
        scale,
        tolerance,
    ))
}
