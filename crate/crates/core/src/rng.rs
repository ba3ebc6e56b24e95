//! Counter-based random streams.
//!
//! Every draw is a pure function of `(seed, stream, position)`: a ChaCha
//! keystream keyed by the seed, with the stream id selecting an independent
//! nonce. Generators never share state, so results do not depend on call
//! order or thread scheduling.

use nalgebra::DMatrix;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::linalg::C64;

/// Stream ids, one per consumer. The low 32 bits are free for attempt or
/// sub-stream counters.
pub mod streams {
    pub const FRAME: u64 = 1 << 32;
    pub const SUBSET: u64 = 2 << 32;
    pub const VECTOR: u64 = 3 << 32;
    pub const DUAL: u64 = 4 << 32;
    pub const SPLIT: u64 = 5 << 32;
    pub const MATRIX: u64 = 6 << 32;
    pub const DERIVE: u64 = 7 << 32;
    pub const SCALAR: u64 = 8 << 32;
}

pub fn stream(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Seed for the `index`-th child of `seed`, read directly from keystream
/// position `index`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut rng = stream(seed, streams::DERIVE);
    rng.set_word_pos(u128::from(index) * 2);
    rng.next_u64()
}

/// Standard complex Gaussian `(x + iy)/√2` with `E|z|² = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let x: f64 = rng.sample(StandardNormal);
    let y: f64 = rng.sample(StandardNormal);
    C64::new(x, y) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix of independent standard complex Gaussians, filled column by column.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(rows, cols);
    for j in 0..cols {
        for i in 0..rows {
            m[(i, j)] = complex_gaussian(rng);
        }
    }
    m
}

pub fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = gaussian_matrix(&mut stream(9, streams::FRAME), 3, 2);
        let b = gaussian_matrix(&mut stream(9, streams::FRAME), 3, 2);
        let c = gaussian_matrix(&mut stream(9, streams::VECTOR), 3, 2);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn derived_seeds_depend_only_on_index() {
        let forward: Vec<u64> = (0..5).map(|i| derive_seed(3, i)).collect();
        let backward: Vec<u64> = (0..5).rev().map(|i| derive_seed(3, i)).collect();
        assert_eq!(forward, backward.into_iter().rev().collect::<Vec<_>>());
        assert_ne!(forward[0], forward[1]);
    }

    #[test]
    fn complex_gaussian_has_unit_second_moment() {
        let mut rng = stream(1, streams::SCALAR);
        let n = 20_000;
        let energy: f64 = (0..n).map(|_| complex_gaussian(&mut rng).norm_sqr()).sum::<f64>() / n as f64;
        assert!((energy - 1.0).abs() < 0.05, "{energy}");
    }
}
