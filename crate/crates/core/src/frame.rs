//! Finite frames in ℂ^d, their frame operators and dual frames.
//!
//! Inner products are linear in the first argument: `⟨x, y⟩ = Σ xₖ·conj(yₖ)`,
//! so the analysis coefficients of `f` are `F*·f` for the synthesis matrix `F`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{all_finite, spectral_norm, CVector, ComplexMatrix, HermitianOperator, C64};
use crate::rng;

/// Frames whose lower bound falls below this fraction of the upper bound
/// are rejected.
pub const SINGULARITY_FLOOR: f64 = 1e-8;

/// Reconstruction tolerance for dual pairs, relative to `max(1, ‖F‖₂‖G‖₂)`.
pub const DUAL_TOLERANCE: f64 = 1e-9;

/// `m ≥ d` vectors spanning ℂ^d, stored as the columns of the synthesis matrix.
#[derive(Clone, Debug)]
pub struct Frame {
    synthesis: DMatrix<C64>,
    operator: HermitianOperator,
    label: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

impl FrameBounds {
    pub fn ratio(&self) -> f64 {
        self.upper / self.lower
    }

    pub fn is_tight(&self, tol: f64) -> bool {
        (self.upper - self.lower).abs() <= tol * self.upper.max(1.0)
    }

    pub fn is_parseval(&self, tol: f64) -> bool {
        (self.lower - 1.0).abs() <= tol && (self.upper - 1.0).abs() <= tol
    }
}

impl Frame {
    /// From `m` vectors of length `d`.
    pub fn new(vectors: &[Vec<C64>], label: Option<String>) -> Result<Self> {
        let count = vectors.len();
        let dim = vectors.first().map(Vec::len).unwrap_or(0);
        if count == 0 || dim == 0 {
            return Err(Error::InvalidFrame(
                "a frame needs at least one non-empty vector".into(),
            ));
        }
        if let Some((k, v)) = vectors.iter().enumerate().find(|(_, v)| v.len() != dim) {
            return Err(Error::InvalidFrame(format!(
                "vector {k} has length {}, expected {dim}",
                v.len()
            )));
        }
        let synthesis = DMatrix::from_fn(dim, count, |i, j| vectors[j][i]);
        Self::from_synthesis_inner(synthesis, label)
    }

    /// From a `d×m` synthesis matrix whose columns are the frame vectors.
    pub fn from_synthesis(f: ComplexMatrix, label: Option<String>) -> Result<Self> {
        Self::from_synthesis_inner(f.into_inner(), label)
    }

    pub(crate) fn from_synthesis_inner(synthesis: DMatrix<C64>, label: Option<String>) -> Result<Self> {
        let (dim, count) = synthesis.shape();
        if dim == 0 || count == 0 {
            return Err(Error::InvalidFrame("empty synthesis matrix".into()));
        }
        if !all_finite(&synthesis) {
            return Err(Error::NonFinite("frame vectors"));
        }
        if count < dim {
            return Err(Error::InvalidFrame(format!(
                "{count} vectors cannot span a space of dimension {dim}"
            )));
        }
        let norm = spectral_norm(&synthesis);
        let operator = HermitianOperator::from_product(&synthesis * synthesis.adjoint(), norm * norm)?;
        let spectrum = operator.spectrum()?;
        let floor = SINGULARITY_FLOOR * spectrum.max();
        if !(spectrum.min() > floor) {
            return Err(Error::NotAFrame {
                lower: spectrum.min(),
                floor,
            });
        }
        Ok(Self {
            synthesis,
            operator,
            label,
        })
    }

    pub fn dim(&self) -> usize {
        self.synthesis.nrows()
    }

    pub fn count(&self) -> usize {
        self.synthesis.ncols()
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn vector(&self, k: usize) -> CVector {
        self.synthesis.column(k).into_owned()
    }

    pub fn vectors(&self) -> Vec<Vec<C64>> {
        (0..self.count())
            .map(|k| self.synthesis.column(k).iter().copied().collect())
            .collect()
    }

    pub fn synthesis_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_inner(self.synthesis.clone())
    }

    pub(crate) fn synthesis(&self) -> &DMatrix<C64> {
        &self.synthesis
    }

    fn check_vector(&self, f: &CVector) -> Result<()> {
        if f.len() != self.dim() {
            return Err(Error::dims("frame vector", self.dim(), f.len()));
        }
        Ok(())
    }

    /// `(⟨f, f_i⟩)_i = F*·f`.
    pub fn analysis_coefficients(&self, f: &CVector) -> Result<CVector> {
        self.check_vector(f)?;
        Ok(self.synthesis.ad_mul(f))
    }

    /// `Σ cᵢ·fᵢ = F·c`.
    pub fn synthesize(&self, coefficients: &CVector) -> Result<CVector> {
        if coefficients.len() != self.count() {
            return Err(Error::dims("synthesis coefficients", self.count(), coefficients.len()));
        }
        Ok(&self.synthesis * coefficients)
    }

    /// `S = F·F*`.
    pub fn frame_operator(&self) -> &HermitianOperator {
        &self.operator
    }

    pub fn frame_bounds(&self) -> FrameBounds {
        // The spectrum was computed and validated at construction.
        let s = self.operator.spectrum().expect("frame spectrum cached at construction");
        FrameBounds {
            lower: s.min(),
            upper: s.max(),
        }
    }

    /// `‖S − I‖₂`.
    pub fn parseval_deviation(&self) -> Result<f64> {
        self.operator.distance(&HermitianOperator::identity(self.dim()))
    }

    pub fn canonical_dual(&self) -> Result<DualPair> {
        let inv = self.operator.inverse()?;
        let dual = Frame::from_synthesis_inner(inv.as_inner() * &self.synthesis, self.derived_label("canonical_dual"))?;
        DualPair::new(self.clone(), dual, DualKind::Canonical)
    }

    /// `{S^(−1/2)·fᵢ}`, a Parseval frame.
    pub fn to_parseval(&self) -> Result<Frame> {
        let root = self.operator.inv_sqrt()?;
        let label = match &self.label {
            Some(l) if l.starts_with("parseval(") => Some(l.clone()),
            _ => self.derived_label("parseval"),
        };
        Frame::from_synthesis_inner(root.as_inner() * &self.synthesis, label)
    }

    /// `G = S^(−1)F + W·(I_m − F*S^(−1)F)` with `W` a seeded complex-Gaussian
    /// `d×m` matrix scaled by `perturbation`. Every such `G` satisfies `F·G* = I`.
    pub fn random_alternate_dual(&self, seed: u64, perturbation: f64) -> Result<DualPair> {
        if !perturbation.is_finite() || perturbation < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "perturbation must be finite and non-negative, got {perturbation}"
            )));
        }
        let inv = self.operator.inverse()?;
        let canonical = inv.as_inner() * &self.synthesis;
        let mut g = canonical.clone();
        if perturbation > 0.0 {
            let m = self.count();
            let w = rng::gaussian_matrix(&mut rng::stream(seed, rng::streams::DUAL), self.dim(), m)
                * C64::new(perturbation, 0.0);
            let projector = DMatrix::<C64>::identity(m, m) - self.synthesis.adjoint() * &canonical;
            g += w * projector;
        }
        let dual = Frame::from_synthesis_inner(g, self.derived_label("alternate_dual"))?;
        DualPair::new(self.clone(), dual, DualKind::Alternate)
    }

    fn derived_label(&self, prefix: &str) -> Option<String> {
        Some(format!("{prefix}({})", self.label.as_deref().unwrap_or("frame")))
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: FrameJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        raw.into_frame()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&FrameJson::from_frame(self)).expect("frame JSON is always serializable")
    }
}

/// `{"dim", "count", "label", "vectors": [[[re, im], ...], ...]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameJson {
    dim: usize,
    count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    vectors: Vec<Vec<[f64; 2]>>,
}

impl FrameJson {
    fn from_frame(fr: &Frame) -> Self {
        Self {
            dim: fr.dim(),
            count: fr.count(),
            label: fr.label.clone(),
            vectors: fr
                .vectors()
                .into_iter()
                .map(|v| v.into_iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }

    fn into_frame(self) -> Result<Frame> {
        if self.vectors.len() != self.count {
            return Err(Error::Parse(format!(
                "\"count\" is {} but {} vectors are listed",
                self.count,
                self.vectors.len()
            )));
        }
        let mut vectors = Vec::with_capacity(self.count);
        for (k, v) in self.vectors.iter().enumerate() {
            if v.len() != self.dim {
                return Err(Error::Parse(format!(
                    "vector {k} has {} entries but \"dim\" is {}",
                    v.len(),
                    self.dim
                )));
            }
            if let Some(i) = v.iter().position(|p| !p[0].is_finite() || !p[1].is_finite()) {
                return Err(Error::Parse(format!("vector {k}, entry {i} is not finite")));
            }
            vectors.push(v.iter().map(|p| C64::new(p[0], p[1])).collect());
        }
        Frame::new(&vectors, self.label)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DualKind {
    Canonical,
    Alternate,
}

/// A frame together with a dual: `Σ⟨f, gᵢ⟩fᵢ = f = Σ⟨f, fᵢ⟩gᵢ`.
#[derive(Clone, Debug)]
pub struct DualPair {
    pub frame: Frame,
    pub dual: Frame,
    pub kind: DualKind,
}

impl DualPair {
    pub fn new(frame: Frame, dual: Frame, kind: DualKind) -> Result<Self> {
        if frame.dim() != dual.dim() || frame.count() != dual.count() {
            return Err(Error::dims(
                "dual pair",
                format!("{}×{}", frame.dim(), frame.count()),
                format!("{}×{}", dual.dim(), dual.count()),
            ));
        }
        let deviation = reconstruction_deviation(&frame, &dual);
        let allowed = DUAL_TOLERANCE * (spectral_norm(frame.synthesis()) * spectral_norm(dual.synthesis())).max(1.0);
        if !(deviation <= allowed) {
            return Err(Error::NotADual { deviation, allowed });
        }
        Ok(Self { frame, dual, kind })
    }

    /// `‖F·G* − I‖₂`.
    pub fn reconstruction_deviation(&self) -> f64 {
        reconstruction_deviation(&self.frame, &self.dual)
    }
}

fn reconstruction_deviation(frame: &Frame, dual: &Frame) -> f64 {
    let d = frame.dim();
    spectral_norm(&(frame.synthesis() * dual.synthesis().adjoint() - DMatrix::<C64>::identity(d, d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{self, GenConfig};
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn real_frame(vectors: &[&[f64]]) -> Frame {
        let v: Vec<Vec<C64>> = vectors.iter().map(|v| v.iter().map(|&x| c(x)).collect()).collect();
        Frame::new(&v, None).unwrap()
    }

    fn vec_of(xs: &[C64]) -> CVector {
        CVector::from_column_slice(xs)
    }

    fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
        (a - b).iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    #[test]
    fn synthesis_matrix_examples() {
        let onb = gen::named_frame("onb2").unwrap();
        assert_eq!(onb.synthesis_matrix().as_inner(), &DMatrix::<C64>::identity(2, 2));

        let double = gen::named_frame("double_onb2").unwrap();
        let expected = ComplexMatrix::from_real_row_major(2, 4, &[1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0]).unwrap();
        assert_eq!(double.synthesis_matrix(), expected);

        let mb = gen::named_frame("mb3").unwrap();
        let k = (2.0_f64 / 3.0).sqrt();
        let h = 3.0_f64.sqrt() / 2.0;
        let expected = ComplexMatrix::from_real_row_major(2, 3, &[0.0, -k * h, k * h, k, -k * 0.5, -k * 0.5]).unwrap();
        assert!(max_abs_diff(mb.synthesis_matrix().as_inner(), expected.as_inner()) < 1e-15);
    }

    #[test]
    fn analysis_coefficient_examples() {
        let onb = gen::named_frame("onb2").unwrap();
        let e1 = vec_of(&[c(1.0), c(0.0)]);
        assert_eq!(onb.analysis_coefficients(&e1).unwrap(), vec_of(&[c(1.0), c(0.0)]));

        let mb = gen::named_frame("mb3").unwrap();
        let coeffs = mb.analysis_coefficients(&e1).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let expected = vec_of(&[c(0.0), c(-r), c(r)]);
        assert!((coeffs - expected).norm() < 1e-15);

        let double = gen::named_frame("double_onb2").unwrap();
        let ones = vec_of(&[c(1.0), c(1.0)]);
        assert_eq!(double.analysis_coefficients(&ones).unwrap(), vec_of(&[c(1.0); 4]));

        assert!(matches!(
            double.analysis_coefficients(&vec_of(&[c(1.0)])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_second_argument() {
        let fr = Frame::new(&[vec![C64::new(0.0, 1.0)]], None).unwrap();
        // ⟨1, i⟩ = 1·conj(i) = −i
        let coeffs = fr.analysis_coefficients(&vec_of(&[c(1.0)])).unwrap();
        assert_eq!(coeffs[0], C64::new(0.0, -1.0));
    }

    #[test]
    fn frame_operator_examples() {
        let onb = gen::named_frame("onb2").unwrap();
        assert_eq!(onb.frame_operator(), &HermitianOperator::identity(2));
        let double = gen::named_frame("double_onb2").unwrap();
        assert_eq!(double.frame_operator(), &HermitianOperator::scaled_identity(2, 2.0));
        let mb = gen::named_frame("mb3").unwrap();
        assert!(mb.parseval_deviation().unwrap() < 1e-15);
    }

    #[test]
    fn frame_bounds_examples() {
        let b = gen::named_frame("onb2").unwrap().frame_bounds();
        assert_eq!((b.lower, b.upper), (1.0, 1.0));
        let b = gen::named_frame("double_onb2").unwrap().frame_bounds();
        assert_eq!((b.lower, b.upper), (2.0, 2.0));
        let b = real_frame(&[&[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]).frame_bounds();
        assert!((b.lower - 1.0).abs() < 1e-15 && (b.upper - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_spanning_and_malformed_families() {
        assert!(matches!(
            Frame::new(&[vec![c(1.0), c(0.0)], vec![c(2.0), c(0.0)]], None),
            Err(Error::NotAFrame { .. })
        ));
        assert!(matches!(
            Frame::new(&[vec![c(1.0), c(0.0)]], None),
            Err(Error::InvalidFrame(_))
        ));
        assert!(matches!(
            Frame::new(&[vec![c(1.0), c(0.0)], vec![c(1.0)]], None),
            Err(Error::InvalidFrame(_))
        ));
        assert!(matches!(
            Frame::new(&[vec![c(f64::INFINITY)]], None),
            Err(Error::NonFinite(_))
        ));
        assert!(Frame::new(&[], None).is_err());
    }

    #[test]
    fn canonical_dual_examples() {
        let onb = gen::named_frame("onb2").unwrap();
        let pair = onb.canonical_dual().unwrap();
        assert!(max_abs_diff(pair.dual.synthesis(), onb.synthesis()) < 1e-15);
        assert_eq!(pair.kind, DualKind::Canonical);

        let double = gen::named_frame("double_onb2").unwrap();
        let pair = double.canonical_dual().unwrap();
        assert!(max_abs_diff(pair.dual.synthesis(), &(double.synthesis() * c(0.5))) < 1e-15);

        let weighted = gen::named_frame("weighted_onb").unwrap();
        let pair = weighted.canonical_dual().unwrap();
        let expected = real_frame(&[&[0.5, 0.0], &[0.5, 0.0], &[0.0, 1.0]]);
        assert!(max_abs_diff(pair.dual.synthesis(), expected.synthesis()) < 1e-15);
    }

    #[test]
    fn to_parseval_examples() {
        let onb = gen::named_frame("onb2").unwrap();
        assert!(max_abs_diff(onb.to_parseval().unwrap().synthesis(), onb.synthesis()) < 1e-15);

        let double = gen::named_frame("double_onb2").unwrap();
        let p = double.to_parseval().unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!(max_abs_diff(p.synthesis(), &(double.synthesis() * c(r))) < 1e-15);
        assert_eq!(p.label(), Some("parseval(double_onb2)"));
    }

    #[test]
    fn alternate_dual_examples() {
        let double = gen::named_frame("double_onb2").unwrap();
        let canonical = double.canonical_dual().unwrap();
        let zero = double.random_alternate_dual(17, 0.0).unwrap();
        assert_eq!(zero.dual.synthesis(), canonical.dual.synthesis());

        let onb = gen::named_frame("onb2").unwrap();
        for seed in 0..5 {
            let pair = onb.random_alternate_dual(seed, 3.0).unwrap();
            assert!(max_abs_diff(pair.dual.synthesis(), onb.synthesis()) < 1e-14);
        }

        for seed in 0..5 {
            let pair = double.random_alternate_dual(seed, 1.0).unwrap();
            assert!(pair.reconstruction_deviation() <= DUAL_TOLERANCE);
            assert!(max_abs_diff(pair.dual.synthesis(), canonical.dual.synthesis()) > 1e-3);
        }

        assert!(double.random_alternate_dual(1, -1.0).is_err());
        assert!(double.random_alternate_dual(1, f64::NAN).is_err());
    }

    #[test]
    fn dual_pair_rejects_non_duals() {
        let double = gen::named_frame("double_onb2").unwrap();
        assert!(matches!(
            DualPair::new(double.clone(), double.clone(), DualKind::Alternate),
            Err(Error::NotADual { .. })
        ));
    }

    #[test]
    fn json_round_trip_and_rejections() {
        let mb = gen::named_frame("mb3").unwrap();
        let text = mb.to_json_string();
        let back = Frame::from_json_str(&text).unwrap();
        assert_eq!(back.to_json_string(), text);
        assert_eq!(back.synthesis(), mb.synthesis());

        let ok = r#"{"dim": 1, "count": 1, "vectors": [[[0.0, 2.0]]]}"#;
        let fr = Frame::from_json_str(ok).unwrap();
        assert_eq!(fr.vector(0)[0], C64::new(0.0, 2.0));
        assert_eq!(fr.label(), None);

        for bad in [
            r#"{"dim": 2, "count": 1, "vectors": [[[1, 0]]]}"#,
            r#"{"dim": 1, "count": 2, "vectors": [[[1, 0]]]}"#,
            r#"{"dim": 1, "count": 1, "vectors": [[[1e999, 0]]]}"#,
            r#"{"dim": 1, "count": 1, "vectors": [[[NaN, 0]]]}"#,
            r#"{"dim": 1, "count": 1, "vectors": [[[1, 0, 2]]]}"#,
            r#"{"dim": 1, "count": 1}"#,
            "not json",
        ] {
            assert!(Frame::from_json_str(bad).is_err(), "{bad}");
        }
    }

    fn cfg(seed: u64, d: usize, m: usize) -> GenConfig {
        GenConfig::new(d, m, seed).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn energy_between_frame_bounds(seed in any::<u64>(), d in 2usize..7, extra in 0usize..6) {
            let fr = gen::random_frame(&cfg(seed, d, d + extra)).unwrap();
            let b = fr.frame_bounds();
            let f = gen::random_unit_vector(d, seed ^ 1);
            let energy = fr.analysis_coefficients(&f).unwrap().norm_squared();
            let tol = 1e-9 * b.upper.max(1.0);
            prop_assert!(b.lower - tol <= energy && energy <= b.upper + tol);
            let quad = fr.frame_operator().quadratic_form(&f).unwrap();
            prop_assert!((quad - energy).abs() <= tol);
        }

        #[test]
        fn parseval_construction(seed in any::<u64>(), d in 2usize..7, extra in 0usize..6) {
            let fr = gen::random_frame(&cfg(seed, d, d + extra)).unwrap();
            let p = fr.to_parseval().unwrap();
            prop_assert!(p.frame_bounds().is_parseval(1e-9));
            let pp = p.to_parseval().unwrap();
            prop_assert!(max_abs_diff(pp.synthesis(), p.synthesis()) <= 1e-9);
            let dual = p.canonical_dual().unwrap();
            prop_assert!(max_abs_diff(dual.dual.synthesis(), p.synthesis()) <= 1e-9);
        }

        #[test]
        fn duals_reconstruct(seed in any::<u64>(), d in 2usize..6, extra in 0usize..6, pert in 0.0f64..3.0) {
            let fr = gen::random_frame(&cfg(seed, d, d + extra)).unwrap();
            let pair = fr.random_alternate_dual(seed ^ 7, pert).unwrap();
            let f = gen::random_unit_vector(d, seed ^ 3);
            let a = pair.frame.synthesize(&pair.dual.analysis_coefficients(&f).unwrap()).unwrap();
            let b = pair.dual.synthesize(&pair.frame.analysis_coefficients(&f).unwrap()).unwrap();
            let scale = spectral_norm(fr.synthesis()) * spectral_norm(pair.dual.synthesis());
            prop_assert!((a - &f).norm() <= 1e-9 * scale.max(1.0));
            prop_assert!((b - &f).norm() <= 1e-9 * scale.max(1.0));
            let gf = pair.dual.synthesis() * fr.synthesis().adjoint();
            prop_assert!(spectral_norm(&(gf - DMatrix::<C64>::identity(d, d))) <= 1e-9 * scale.max(1.0));
        }
    }
}
