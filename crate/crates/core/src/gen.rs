//! Deterministic generators for frames, splittings, subsets and test vectors.
//!
//! All randomness comes from [`crate::rng`] keyed by explicit seeds; the same
//! arguments always produce the same bits.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::linalg::{CVector, ComplexMatrix, HermitianOperator, C64};
use crate::rng::{self, streams};
use crate::splitting::{IndexSubset, SplitPair};

pub const DEFAULT_CONDITION_CAP: f64 = 1e4;
pub const MAX_ATTEMPTS: usize = 100;
pub const MAX_DIM: usize = 64;

pub const NAMED_FRAMES: [&str; 4] = ["onb2", "double_onb2", "mb3", "weighted_onb"];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenConfig {
    pub dim: usize,
    pub count: usize,
    pub seed: u64,
    /// Largest accepted ratio `B/A` of the frame bounds.
    pub condition_cap: f64,
}

impl GenConfig {
    pub fn new(dim: usize, count: usize, seed: u64) -> Result<Self> {
        Self::with_condition_cap(dim, count, seed, DEFAULT_CONDITION_CAP)
    }

    pub fn with_condition_cap(dim: usize, count: usize, seed: u64, condition_cap: f64) -> Result<Self> {
        if !(2..=MAX_DIM).contains(&dim) {
            return Err(Error::InvalidArgument(format!(
                "dim must lie in [2, {MAX_DIM}], got {dim}"
            )));
        }
        if count < dim {
            return Err(Error::InvalidArgument(format!(
                "count {count} is smaller than dim {dim}"
            )));
        }
        if !(condition_cap >= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "condition cap must be ≥ 1, got {condition_cap}"
            )));
        }
        Ok(Self {
            dim,
            count,
            seed,
            condition_cap,
        })
    }
}

/// Complex-Gaussian frame, redrawn from the next stream until `B/A` is
/// within the condition cap.
pub fn random_frame(cfg: &GenConfig) -> Result<Frame> {
    let label = format!("random({},{},{})", cfg.dim, cfg.count, cfg.seed);
    for attempt in 0..MAX_ATTEMPTS as u64 {
        let mut rng = rng::stream(cfg.seed, streams::FRAME + attempt);
        let f = rng::gaussian_matrix(&mut rng, cfg.dim, cfg.count);
        match Frame::from_synthesis_inner(f, Some(label.clone())) {
            Ok(fr) if fr.frame_bounds().ratio() <= cfg.condition_cap => return Ok(fr),
            Ok(_) | Err(Error::NotAFrame { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Generation {
        attempts: MAX_ATTEMPTS,
        cap: cfg.condition_cap,
    })
}

pub fn random_parseval(cfg: &GenConfig) -> Result<Frame> {
    random_frame(cfg)?.to_parseval()
}

pub fn named_frame(name: &str) -> Result<Frame> {
    let c = |re: f64| C64::new(re, 0.0);
    let vectors: Vec<Vec<C64>> = match name {
        "onb2" => vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(1.0)]],
        "double_onb2" => vec![
            vec![c(1.0), c(0.0)],
            vec![c(0.0), c(1.0)],
            vec![c(1.0), c(0.0)],
            vec![c(0.0), c(1.0)],
        ],
        "mb3" => {
            let k = (2.0_f64 / 3.0).sqrt();
            let h = 3.0_f64.sqrt() / 2.0;
            vec![
                vec![c(0.0), c(k)],
                vec![c(-k * h), c(-k * 0.5)],
                vec![c(k * h), c(-k * 0.5)],
            ]
        }
        "weighted_onb" => vec![vec![c(1.0), c(0.0)], vec![c(1.0), c(0.0)], vec![c(0.0), c(1.0)]],
        _ => {
            return Err(Error::UnknownFrame {
                name: name.to_string(),
                catalogue: NAMED_FRAMES.join(", "),
            })
        }
    };
    Frame::new(&vectors, Some(name.to_string()))
}

/// Each index kept independently with probability 1/2.
pub fn random_subset(m: usize, seed: u64) -> Result<IndexSubset> {
    if m == 0 {
        return Err(Error::InvalidArgument("subset universe must be positive".into()));
    }
    let mut rng = rng::stream(seed, streams::SUBSET);
    let members: Vec<usize> = (0..m).filter(|_| rng.random::<bool>()).collect();
    IndexSubset::new(m, members)
}

pub fn random_unit_vector(dim: usize, seed: u64) -> CVector {
    assert!(dim > 0, "vector dimension must be positive");
    for attempt in 0.. {
        let mut rng = rng::stream(seed, streams::VECTOR + attempt);
        let v = CVector::from_fn(dim, |_, _| rng::complex_gaussian(&mut rng));
        let norm = v.norm();
        if norm > 0.0 {
            return v.unscale(norm);
        }
    }
    unreachable!()
}

/// Bounded complex weights with real and imaginary parts in `[-2, 2)`.
pub fn random_weights(m: usize, seed: u64) -> Vec<C64> {
    let mut rng = rng::stream(seed, streams::SCALAR);
    (0..m)
        .map(|_| C64::new(rng::uniform(&mut rng, -2.0, 2.0), rng::uniform(&mut rng, -2.0, 2.0)))
        .collect()
}

/// Square complex-Gaussian matrix; almost surely non-normal.
pub fn random_square(dim: usize, seed: u64) -> ComplexMatrix {
    ComplexMatrix::from_inner(rng::gaussian_matrix(&mut rng::stream(seed, streams::MATRIX), dim, dim))
}

pub fn random_in_range(seed: u64, lo: f64, hi: f64) -> f64 {
    rng::uniform(&mut rng::stream(seed, streams::SCALAR + 1), lo, hi)
}

/// `S₁ = G₁G₁*`, `S₂ = G₂G₂*` with Gaussian factors of random rank, and
/// `S = S₁ + S₂`. Draws whose sum is numerically singular are redrawn.
pub fn random_split_pair(dim: usize, seed: u64) -> Result<SplitPair> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    for attempt in 0..MAX_ATTEMPTS as u64 {
        let mut rng = rng::stream(seed, streams::SPLIT + attempt);
        let rank1 = rng.random_range(1..=dim);
        let rank2 = rng.random_range(dim.saturating_sub(rank1).max(1)..=dim);
        let s1 = gram(rng::gaussian_matrix(&mut rng, dim, rank1))?;
        let s2 = gram(rng::gaussian_matrix(&mut rng, dim, rank2))?;
        match SplitPair::from_parts(s1, s2) {
            Ok(sp) => return Ok(sp),
            Err(Error::InvalidSplit(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Generation {
        attempts: MAX_ATTEMPTS,
        cap: f64::INFINITY,
    })
}

fn gram(g: DMatrix<C64>) -> Result<HermitianOperator> {
    let n = crate::linalg::spectral_norm(&g);
    HermitianOperator::from_product(&g * g.adjoint(), n * n)
}
