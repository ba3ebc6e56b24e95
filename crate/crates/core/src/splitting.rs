//! Splittings `S = S₁ + S₂` of a positive definite operator into positive
//! semidefinite parts, the residual operators `U = S^(−1/2)S₁S^(−1/2)` and
//! `V = S^(−1/2)S₂S^(−1/2)`, and the relations they satisfy.
//!
//! Conjugating by `S^(−1/2)` turns each relation into a scalar polynomial
//! inequality in `U` (with `V = I − U` and `0 ≤ U ≤ I`). The three certified
//! relations hold whenever their quadratic certificate is non-negative on
//! `[0, 1]`.

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::{Frame, SINGULARITY_FLOOR};
use crate::linalg::{
    conjugate, loewner_leq, spectral_norm, HermitianOperator, MarginReport, RelationId, PSD_TOLERANCE,
};

/// Sorted set `J ⊂ {0, …, m−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexSubset {
    universe: usize,
    members: Vec<usize>,
}

impl IndexSubset {
    pub fn new(universe: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        if universe == 0 {
            return Err(Error::InvalidSubset("universe must be positive".into()));
        }
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&bad) = members.iter().find(|&&i| i >= universe) {
            return Err(Error::InvalidSubset(format!("index {bad} is outside [0, {universe})")));
        }
        Ok(Self { universe, members })
    }

    pub fn empty(universe: usize) -> Result<Self> {
        Self::new(universe, [])
    }

    pub fn full(universe: usize) -> Result<Self> {
        Self::new(universe, 0..universe)
    }

    /// Parses `0,2-4` style lists. `none` (or an empty string) is the empty
    /// set and `all` the full index set.
    pub fn parse(spec: &str, universe: usize) -> Result<Self> {
        let spec = spec.trim();
        match spec {
            "" | "none" => return Self::empty(universe),
            "all" => return Self::full(universe),
            _ => {}
        }
        let mut members = Vec::new();
        for token in spec.split(',') {
            let token = token.trim();
            let parse = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidSubset(format!("`{token}` is not an index or range")))
            };
            match token.split_once('-') {
                Some((lo, hi)) => {
                    let (lo, hi) = (parse(lo)?, parse(hi)?);
                    if lo > hi {
                        return Err(Error::InvalidSubset(format!("range `{token}` is decreasing")));
                    }
                    members.extend(lo..=hi);
                }
                None => members.push(parse(token)?),
            }
        }
        Self::new(universe, members)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn complement(&self) -> Self {
        Self {
            universe: self.universe,
            members: (0..self.universe).filter(|&i| !self.contains(i)).collect(),
        }
    }

    /// `1` on members, `0` elsewhere.
    pub fn indicator(&self) -> Vec<f64> {
        (0..self.universe)
            .map(|i| if self.contains(i) { 1.0 } else { 0.0 })
            .collect()
    }
}

impl fmt::Display for IndexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.members.is_empty() {
            return f.write_str("none");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.members.len() {
            let start = self.members[i];
            let mut end = start;
            while i + 1 < self.members.len() && self.members[i + 1] == end + 1 {
                i += 1;
                end += 1;
            }
            parts.push(if start == end {
                start.to_string()
            } else {
                format!("{start}-{end}")
            });
            i += 1;
        }
        f.write_str(&parts.join(","))
    }
}

/// `S_J = Σ_{i∈J} fᵢfᵢ*`.
pub fn partial_frame_operator(fr: &Frame, subset: &IndexSubset) -> Result<HermitianOperator> {
    if subset.universe() != fr.count() {
        return Err(Error::dims("subset universe", fr.count(), subset.universe()));
    }
    if subset.is_empty() {
        return Ok(HermitianOperator::zeros(fr.dim()));
    }
    let cols = fr.synthesis().select_columns(subset.members());
    let n = spectral_norm(&cols);
    HermitianOperator::from_product(&cols * cols.adjoint(), n * n)
}

#[derive(Clone, Debug)]
struct Derived {
    inverse: HermitianOperator,
    inv_sqrt: HermitianOperator,
    quad1: HermitianOperator,
    quad2: HermitianOperator,
}

/// `S = S₁ + S₂` with `S` positive definite and `S₁, S₂` positive semidefinite.
#[derive(Clone, Debug)]
pub struct SplitPair {
    total: HermitianOperator,
    part1: HermitianOperator,
    part2: HermitianOperator,
    derived: OnceLock<std::result::Result<Derived, Error>>,
}

impl SplitPair {
    pub fn new(total: HermitianOperator, part1: HermitianOperator, part2: HermitianOperator) -> Result<Self> {
        Self::with_tolerance(total, part1, part2, PSD_TOLERANCE)
    }

    pub fn with_tolerance(
        total: HermitianOperator,
        part1: HermitianOperator,
        part2: HermitianOperator,
        tolerance: f64,
    ) -> Result<Self> {
        if total.dim() != part1.dim() || total.dim() != part2.dim() {
            return Err(Error::dims(
                "splitting",
                total.dim(),
                format!("{} and {}", part1.dim(), part2.dim()),
            ));
        }
        let spectrum = total.spectrum()?;
        let floor = SINGULARITY_FLOOR * spectrum.max();
        if !(spectrum.min() > floor) {
            return Err(Error::InvalidSplit(format!(
                "total operator is not positive definite: λ_min = {:e}, floor = {floor:e}",
                spectrum.min()
            )));
        }
        let scale = spectrum.norm().max(1.0);
        let mismatch = total.distance(&part1.add(&part2)?)?;
        if mismatch > tolerance * scale {
            return Err(Error::InvalidSplit(format!("‖S − (S₁ + S₂)‖ = {mismatch:e}")));
        }
        for (name, part) in [("S₁", &part1), ("S₂", &part2)] {
            let low = part.min_eigenvalue()?;
            if low < -tolerance * scale {
                return Err(Error::InvalidSplit(format!("{name} has negative eigenvalue {low:e}")));
            }
        }
        Ok(Self {
            total,
            part1,
            part2,
            derived: OnceLock::new(),
        })
    }

    /// Sets `S = S₁ + S₂`.
    pub fn from_parts(part1: HermitianOperator, part2: HermitianOperator) -> Result<Self> {
        let total = part1.add(&part2)?;
        Self::new(total, part1, part2)
    }

    pub fn total(&self) -> &HermitianOperator {
        &self.total
    }

    pub fn part1(&self) -> &HermitianOperator {
        &self.part1
    }

    pub fn part2(&self) -> &HermitianOperator {
        &self.part2
    }

    pub fn dim(&self) -> usize {
        self.total.dim()
    }

    /// `max(1, ‖S‖₂)`.
    pub fn scale(&self) -> f64 {
        self.total.spectrum().map(|s| s.norm().max(1.0)).unwrap_or(1.0)
    }

    /// The same splitting with the parts exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            total: self.total.clone(),
            part1: self.part2.clone(),
            part2: self.part1.clone(),
            derived: OnceLock::new(),
        }
    }

    fn derived(&self) -> Result<&Derived> {
        self.derived
            .get_or_init(|| {
                let inverse = self.total.inverse()?;
                let inv_sqrt = self.total.inv_sqrt()?;
                let quad1 = conjugate(&self.part1, &inverse)?;
                let quad2 = conjugate(&self.part2, &inverse)?;
                Ok(Derived {
                    inverse,
                    inv_sqrt,
                    quad1,
                    quad2,
                })
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// `S^(−1)`.
    pub fn total_inverse(&self) -> Result<&HermitianOperator> {
        Ok(&self.derived()?.inverse)
    }

    /// `S^(−1/2)`.
    pub fn total_inv_sqrt(&self) -> Result<&HermitianOperator> {
        Ok(&self.derived()?.inv_sqrt)
    }

    /// `S₁S^(−1)S₁`.
    pub fn part1_quadratic(&self) -> Result<&HermitianOperator> {
        Ok(&self.derived()?.quad1)
    }

    /// `S₂S^(−1)S₂`.
    pub fn part2_quadratic(&self) -> Result<&HermitianOperator> {
        Ok(&self.derived()?.quad2)
    }
}

/// `(S, S_J, S_{J^c})`.
pub fn split_from_subset(fr: &Frame, subset: &IndexSubset) -> Result<SplitPair> {
    let part1 = partial_frame_operator(fr, subset)?;
    let part2 = partial_frame_operator(fr, &subset.complement())?;
    SplitPair::new(fr.frame_operator().clone(), part1, part2)
}

/// `U = S^(−1/2)S₁S^(−1/2)`, `V = S^(−1/2)S₂S^(−1/2)`; `U + V = I`.
#[derive(Clone, Debug)]
pub struct ResidualPair {
    pub u: HermitianOperator,
    pub v: HermitianOperator,
}

impl ResidualPair {
    pub fn new(u: HermitianOperator, v: HermitianOperator, tolerance: f64) -> Result<Self> {
        let identity = HermitianOperator::identity(u.dim());
        let deviation = u.add(&v)?.distance(&identity)?;
        if deviation > tolerance {
            return Err(Error::NotAResolution {
                deviation,
                allowed: tolerance,
            });
        }
        for (name, op) in [("U", &u), ("V", &v)] {
            let s = op.spectrum()?;
            if s.min() < -tolerance || s.max() > 1.0 + tolerance {
                return Err(Error::InvalidSplit(format!(
                    "spectrum of {name} leaves [0, 1]: [{:e}, {:e}]",
                    s.min(),
                    s.max()
                )));
            }
        }
        Ok(Self { u, v })
    }
}

pub fn residuals(sp: &SplitPair) -> Result<ResidualPair> {
    residuals_with_tolerance(sp, PSD_TOLERANCE)
}

pub fn residuals_with_tolerance(sp: &SplitPair, tolerance: f64) -> Result<ResidualPair> {
    let root = sp.total_inv_sqrt()?;
    let u = conjugate(root, sp.part1())?;
    let v = conjugate(root, sp.part2())?;
    ResidualPair::new(u, v, tolerance)
}

/// Non-negativity on `[0, 1]` is decided with this slack.
pub const CERTIFICATE_SLACK: f64 = 1e-12;

/// `a ↦ c2·a² + c1·a + c0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadraticCertificate {
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl QuadraticCertificate {
    pub fn new(c2: f64, c1: f64, c0: f64) -> Self {
        Self { c2, c1, c0 }
    }

    /// Certificate for `p·S₁ + q·S₂ ≤ S₂ + S₁S^(−1)S₁`:
    /// `a² + a(q − p − 1) + (1 − q)`.
    pub fn rho(p: f64, q: f64) -> Self {
        Self::new(1.0, q - p - 1.0, 1.0 - q)
    }

    /// Certificate for `S₁ − S₁S^(−1)S₁ ≤ p·S₂ + q·S`:
    /// `a² − a(1 + p) + (q + p)`.
    pub fn eta(p: f64, q: f64) -> Self {
        Self::new(1.0, -(1.0 + p), q + p)
    }

    /// Certificate for `p·S₁ + q·S₂ ≤ S₁S^(−1)S₁ + S₂S^(−1)S₂`:
    /// `a² + a((q − p)/2 − 1) + (1 − q)/2`.
    pub fn tau(p: f64, q: f64) -> Self {
        Self::new(1.0, (q - p) / 2.0 - 1.0, (1.0 - q) / 2.0)
    }

    pub fn eval(&self, a: f64) -> f64 {
        (self.c2 * a + self.c1) * a + self.c0
    }

    /// Exact minimum over `[0, 1]` from the endpoints and, for a convex
    /// quadratic, the vertex when it lies inside.
    pub fn min_on_unit_interval(&self) -> f64 {
        let mut m = self.eval(0.0).min(self.eval(1.0));
        if self.c2 > 0.0 {
            let vertex = -self.c1 / (2.0 * self.c2);
            if vertex > 0.0 && vertex < 1.0 {
                m = m.min(self.c0 - self.c1 * self.c1 / (4.0 * self.c2));
            }
        }
        m
    }

    pub fn is_nonneg_on_unit_interval(&self) -> bool {
        self.min_on_unit_interval() >= -CERTIFICATE_SLACK
    }

    /// Apply to an operator: `c2·U² + c1·U + c0·I`.
    pub fn apply(&self, u: &HermitianOperator) -> Result<HermitianOperator> {
        crate::linalg::spectral_apply(u, |a| self.eval(a))
    }
}

pub fn certificate_nonneg(q: &QuadraticCertificate) -> bool {
    q.is_nonneg_on_unit_interval()
}

/// The seven relations satisfied by every splitting.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SplitRelation {
    /// `0 ≤ SᵢS^(−1)Sᵢ` for both parts.
    QuadraticNonneg,
    /// `S₂ + S₁S^(−1)S₁ ≤ S`.
    ComplementUpper,
    /// `S₁S^(−1)S₁ + S₂S^(−1)S₂ ≤ S`.
    QuadraticSumUpper,
    /// `S₂ + S₁S^(−1)S₁ = S₁ + S₂S^(−1)S₂`.
    SwapIdentity,
    /// `p·S₁ + q·S₂ ≤ S₂ + S₁S^(−1)S₁`, certified by ϱ.
    CertifiedLower { p: f64, q: f64 },
    /// `S₁ − S₁S^(−1)S₁ ≤ p·S₂ + q·S`, certified by η.
    CertifiedDefect { p: f64, q: f64 },
    /// `p·S₁ + q·S₂ ≤ S₁S^(−1)S₁ + S₂S^(−1)S₂`, certified by τ.
    CertifiedQuadraticSum { p: f64, q: f64 },
}

impl SplitRelation {
    /// Parts are numbered 1 to 7 in the order of the variants; `p` and `q`
    /// must be given exactly for parts 5–7.
    pub fn from_part(part: u8, p: Option<f64>, q: Option<f64>) -> Result<Self> {
        let pq = || match (p, q) {
            (Some(p), Some(q)) if p.is_finite() && q.is_finite() => Ok((p, q)),
            _ => Err(Error::InvalidArgument(format!("part {part} requires finite p and q"))),
        };
        if (1..=4).contains(&part) && (p.is_some() || q.is_some()) {
            return Err(Error::InvalidArgument(format!("part {part} takes no p, q")));
        }
        Ok(match part {
            1 => Self::QuadraticNonneg,
            2 => Self::ComplementUpper,
            3 => Self::QuadraticSumUpper,
            4 => Self::SwapIdentity,
            5 => {
                let (p, q) = pq()?;
                Self::CertifiedLower { p, q }
            }
            6 => {
                let (p, q) = pq()?;
                Self::CertifiedDefect { p, q }
            }
            7 => {
                let (p, q) = pq()?;
                Self::CertifiedQuadraticSum { p, q }
            }
            _ => return Err(Error::InvalidArgument(format!("part must lie in 1..=7, got {part}"))),
        })
    }

    pub fn part(&self) -> u8 {
        match self {
            Self::QuadraticNonneg => 1,
            Self::ComplementUpper => 2,
            Self::QuadraticSumUpper => 3,
            Self::SwapIdentity => 4,
            Self::CertifiedLower { .. } => 5,
            Self::CertifiedDefect { .. } => 6,
            Self::CertifiedQuadraticSum { .. } => 7,
        }
    }

    pub fn relation_id(&self) -> RelationId {
        match self {
            Self::QuadraticNonneg => RelationId::SplitQuadraticNonneg,
            Self::ComplementUpper => RelationId::SplitComplementUpper,
            Self::QuadraticSumUpper => RelationId::SplitQuadraticSumUpper,
            Self::SwapIdentity => RelationId::SplitSwapIdentity,
            Self::CertifiedLower { .. } => RelationId::SplitCertifiedLower,
            Self::CertifiedDefect { .. } => RelationId::SplitCertifiedDefect,
            Self::CertifiedQuadraticSum { .. } => RelationId::SplitCertifiedQuadraticSum,
        }
    }

    pub fn certificate(&self) -> Option<QuadraticCertificate> {
        match *self {
            Self::CertifiedLower { p, q } => Some(QuadraticCertificate::rho(p, q)),
            Self::CertifiedDefect { p, q } => Some(QuadraticCertificate::eta(p, q)),
            Self::CertifiedQuadraticSum { p, q } => Some(QuadraticCertificate::tau(p, q)),
            _ => None,
        }
    }

    /// `(lhs, rhs)` of the Loewner relation `lhs ≤ rhs`, or of the identity
    /// `lhs = rhs` for [`SplitRelation::SwapIdentity`].
    pub fn sides(&self, sp: &SplitPair) -> Result<(HermitianOperator, HermitianOperator)> {
        let (s, s1, s2) = (sp.total(), sp.part1(), sp.part2());
        let (q1, q2) = (sp.part1_quadratic()?, sp.part2_quadratic()?);
        Ok(match *self {
            Self::QuadraticNonneg => return Err(Error::InvalidArgument("relation has two separate sides".into())),
            Self::ComplementUpper => (s2.add(q1)?, s.clone()),
            Self::QuadraticSumUpper => (q1.add(q2)?, s.clone()),
            Self::SwapIdentity => (s2.add(q1)?, s1.add(q2)?),
            Self::CertifiedLower { p, q } => (HermitianOperator::linear_combination(&[(p, s1), (q, s2)])?, s2.add(q1)?),
            Self::CertifiedDefect { p, q } => (s1.sub(q1)?, HermitianOperator::linear_combination(&[(p, s2), (q, s)])?),
            Self::CertifiedQuadraticSum { p, q } => {
                (HermitianOperator::linear_combination(&[(p, s1), (q, s2)])?, q1.add(q2)?)
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum LemmaOutcome {
    Checked(MarginReport),
    /// The certificate is negative somewhere on `[0, 1]`; nothing is claimed.
    Inapplicable {
        relation: RelationId,
        certificate: QuadraticCertificate,
        certificate_min: f64,
    },
}

impl LemmaOutcome {
    pub fn report(&self) -> Option<&MarginReport> {
        match self {
            Self::Checked(r) => Some(r),
            Self::Inapplicable { .. } => None,
        }
    }

    pub fn is_violation(&self) -> bool {
        matches!(self, Self::Checked(r) if !r.passed)
    }
}

/// Checks one relation; certified relations whose certificate fails are
/// reported as inapplicable.
pub fn check_split_relation(sp: &SplitPair, relation: SplitRelation, tolerance: f64) -> Result<LemmaOutcome> {
    if let Some(certificate) = relation.certificate() {
        if !certificate.is_nonneg_on_unit_interval() {
            return Ok(LemmaOutcome::Inapplicable {
                relation: relation.relation_id(),
                certificate,
                certificate_min: certificate.min_on_unit_interval(),
            });
        }
    }
    evaluate_split_relation(sp, relation, tolerance).map(LemmaOutcome::Checked)
}

/// Evaluates the margin regardless of the certificate.
pub fn evaluate_split_relation(sp: &SplitPair, relation: SplitRelation, tolerance: f64) -> Result<MarginReport> {
    let scale = sp.scale();
    let id = relation.relation_id();
    let report = match relation {
        SplitRelation::QuadraticNonneg => {
            let m1 = sp.part1_quadratic()?.min_eigenvalue()?;
            let m2 = sp.part2_quadratic()?.min_eigenvalue()?;
            MarginReport::inequality(id, m1.min(m2), scale, tolerance)
        }
        SplitRelation::SwapIdentity => {
            let (lhs, rhs) = relation.sides(sp)?;
            MarginReport::equality(id, lhs.distance(&rhs)?, scale, tolerance)
        }
        _ => {
            let (lhs, rhs) = relation.sides(sp)?;
            loewner_leq(&lhs, &rhs, scale, tolerance)?.with_relation(id)
        }
    };
    Ok(report)
}

/// Convenience wrapper taking the part number.
pub fn check_lemma_part(
    sp: &SplitPair,
    part: u8,
    p: Option<f64>,
    q: Option<f64>,
    tolerance: f64,
) -> Result<LemmaOutcome> {
    check_split_relation(sp, SplitRelation::from_part(part, p, q)?, tolerance)
}
