//! Volume-fraction estimation for implicit solids.
//!
//! Grid sampling evaluates the solid predicate at cell centers of a uniform
//! `n^3` grid; Monte-Carlo sampling draws points from a counter-based stream
//! so that every sample index yields the same point regardless of batching.

use super::ImplicitLattice;
use crate::Box3;
use nalgebra::Point3;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Sampling strategy for [`solid_fraction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampler {
    /// Cell-center samples on an `n x n x n` grid.
    Grid { n: usize },
    /// `n` quasi-independent points from a seeded counter stream.
    MonteCarlo { n: usize, seed: u64 },
}

/// Deterministic counter-based point stream: sample `i` reads ChaCha8 words
/// `6i .. 6i+6` (two 32-bit words per f64), independent of call order.
pub(crate) struct PointStream {
    rng: ChaCha8Rng,
}

impl PointStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// The `i`-th point of the stream, uniform in `domain`.
    pub fn point(&mut self, i: u64, domain: &Box3) -> Point3<f64> {
        self.rng.set_word_pos((i as u128) * 6);
        let ext = domain.extent();
        let mut coord = [0.0; 3];
        for (k, c) in coord.iter_mut().enumerate() {
            let hi = self.rng.next_u32() as u64;
            let lo = self.rng.next_u32() as u64;
            // 53-bit mantissa from 64 bits: uniform in [0, 1).
            let u = (((hi << 32) | lo) >> 11) as f64 / (1u64 << 53) as f64;
            *c = domain.min[k] + u * ext[k];
        }
        Point3::new(coord[0], coord[1], coord[2])
    }
}

/// Fraction of `domain` occupied by the lattice solid, in `[0, 1]`.
pub fn solid_fraction(lattice: &ImplicitLattice, domain: &Box3, sampler: Sampler) -> f64 {
    match sampler {
        Sampler::Grid { n } => {
            assert!(n > 0, "grid sampler needs at least one sample per axis");
            let ext = domain.extent();
            let mut hits = 0usize;
            for k in 0..n {
                let z = domain.min.z + (k as f64 + 0.5) / n as f64 * ext[2];
                for j in 0..n {
                    let y = domain.min.y + (j as f64 + 0.5) / n as f64 * ext[1];
                    for i in 0..n {
                        let x = domain.min.x + (i as f64 + 0.5) / n as f64 * ext[0];
                        if lattice.is_solid(&Point3::new(x, y, z)) {
                            hits += 1;
                        }
                    }
                }
            }
            hits as f64 / (n * n * n) as f64
        }
        Sampler::MonteCarlo { n, seed } => {
            assert!(n > 0, "Monte-Carlo sampler needs at least one sample");
            let mut stream = PointStream::new(seed);
            let mut hits = 0usize;
            for i in 0..n as u64 {
                if lattice.is_solid(&stream.point(i, domain)) {
                    hits += 1;
                }
            }
            hits as f64 / n as f64
        }
    }
}
