//! Offset-to-density calibration.
//!
//! The level offset `C` controls how much material a lattice encloses, but
//! designers specify relative density. [`calibrate_offset`] inverts the
//! density map for a single target by bisection; [`DensityCalibration`]
//! tabulates the map once and inverts it by piecewise-linear interpolation,
//! which is what the graded-lattice profile uses.

use super::sampling::{solid_fraction, Sampler};
use super::{FieldKind, GeometryError, ImplicitLattice, Topology};
use crate::Box3;
use nalgebra::{Point3, Vector3};
use std::io::Write;

/// Find the offset whose relative density matches `target_rd` to within
/// `rd_tol`, measured with `sampler` over one periodic cell.
///
/// The density must be strictly monotone in the offset across `bracket`
/// (true for both network and sheet topologies); otherwise
/// [`GeometryError::NonMonotoneBracket`] is returned.
pub fn calibrate_offset(
    kind: FieldKind,
    topology: Topology,
    cell: Vector3<f64>,
    target_rd: f64,
    bracket: (f64, f64),
    sampler: Sampler,
    rd_tol: f64,
) -> Result<f64, GeometryError> {
    assert!(
        target_rd > 0.0 && target_rd < 1.0,
        "target relative density must lie in (0, 1)"
    );
    assert!(rd_tol > 0.0, "density tolerance must be positive");
    let domain = Box3::new(
        Point3::origin(),
        Point3::new(cell.x, cell.y, cell.z),
    );
    let rd_of = |c: f64| {
        let lat = ImplicitLattice::new(kind, topology, cell, c);
        solid_fraction(&lat, &domain, sampler)
    };

    let (mut lo, mut hi) = bracket;
    assert!(lo < hi, "bracket must be ordered");
    let rd_lo = rd_of(lo);
    let rd_hi = rd_of(hi);
    if (rd_lo - target_rd) * (rd_hi - target_rd) > 0.0 {
        return Err(GeometryError::NonMonotoneBracket {
            lo,
            hi,
            target: target_rd,
            rd_lo,
            rd_hi,
        });
    }
    // Sign of d(RD)/dC: network densities fall as C rises, sheet rises.
    let decreasing = rd_lo > rd_hi;

    let mut best = (0.5 * (lo + hi), f64::INFINITY);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        let rd = rd_of(mid);
        let err = (rd - target_rd).abs();
        if err < best.1 {
            best = (mid, err);
        }
        if err <= rd_tol || hi - lo < 1e-12 {
            return Ok(best.0);
        }
        let overshoot = if decreasing {
            rd < target_rd
        } else {
            rd > target_rd
        };
        if overshoot {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(best.0)
}

/// Tabulated offset -> density map for one lattice family, invertible in both
/// directions by piecewise-linear interpolation.
#[derive(Debug, Clone)]
pub struct DensityCalibration {
    /// Offsets in strictly ascending order.
    offsets: Vec<f64>,
    /// Relative density at each offset; strictly monotone.
    densities: Vec<f64>,
}

impl DensityCalibration {
    /// Sample the density map at the given offsets (ascending) and build the
    /// interpolation table. Panics if the measured densities are not strictly
    /// monotone, which would make the inverse ambiguous.
    pub fn build(
        kind: FieldKind,
        topology: Topology,
        cell: Vector3<f64>,
        offsets: &[f64],
        sampler: Sampler,
    ) -> Self {
        assert!(offsets.len() >= 2, "need at least two table points");
        assert!(
            offsets.windows(2).all(|w| w[0] < w[1]),
            "offsets must be strictly ascending"
        );
        let domain = Box3::new(
            Point3::origin(),
            Point3::new(cell.x, cell.y, cell.z),
        );
        let densities: Vec<f64> = offsets
            .iter()
            .map(|&c| {
                let lat = ImplicitLattice::new(kind, topology, cell, c);
                solid_fraction(&lat, &domain, sampler)
            })
            .collect();
        let increasing = densities.windows(2).all(|w| w[0] < w[1]);
        let decreasing = densities.windows(2).all(|w| w[0] > w[1]);
        assert!(
            increasing || decreasing,
            "density table is not strictly monotone"
        );
        Self {
            offsets: offsets.to_vec(),
            densities,
        }
    }

    /// Standard network-Gyroid table: 26 offsets spanning `[-1.25, 1.25]`,
    /// densities measured on a `64^3` cell-center grid.
    pub fn gyroid_network(cell_size: f64) -> Self {
        let offsets: Vec<f64> = (0..26).map(|i| -1.25 + 0.1 * i as f64).collect();
        Self::build(
            FieldKind::Gyroid,
            Topology::Network,
            Vector3::new(cell_size, cell_size, cell_size),
            &offsets,
            Sampler::Grid { n: 64 },
        )
    }

    /// Reconstruct a table from stored `(offset, density)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Self {
        let offsets: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let densities: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        assert!(
            offsets.windows(2).all(|w| w[0] < w[1]),
            "offsets must be strictly ascending"
        );
        let increasing = densities.windows(2).all(|w| w[0] < w[1]);
        let decreasing = densities.windows(2).all(|w| w[0] > w[1]);
        assert!(
            increasing || decreasing,
            "density table is not strictly monotone"
        );
        Self { offsets, densities }
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.offsets
            .iter()
            .copied()
            .zip(self.densities.iter().copied())
    }

    fn rd_range(&self) -> (f64, f64) {
        let first = *self.densities.first().unwrap();
        let last = *self.densities.last().unwrap();
        (first.min(last), first.max(last))
    }

    /// Offset producing relative density `rd`, by inverse interpolation.
    pub fn offset_for_rd(&self, rd: f64) -> Result<f64, GeometryError> {
        let (min, max) = self.rd_range();
        if rd < min || rd > max {
            return Err(GeometryError::CalibrationRangeExceeded {
                requested: rd,
                min,
                max,
            });
        }
        for i in 0..self.densities.len() - 1 {
            let (d0, d1) = (self.densities[i], self.densities[i + 1]);
            let inside = if d0 <= d1 {
                (d0..=d1).contains(&rd)
            } else {
                (d1..=d0).contains(&rd)
            };
            if inside {
                let t = (rd - d0) / (d1 - d0);
                return Ok(self.offsets[i] + t * (self.offsets[i + 1] - self.offsets[i]));
            }
        }
        unreachable!("rd inside the table range must fall in some segment");
    }

    /// Relative density at `offset`, clamped to the table's end segments.
    pub fn rd_for_offset(&self, offset: f64) -> f64 {
        let n = self.offsets.len();
        if offset <= self.offsets[0] {
            return self.densities[0];
        }
        if offset >= self.offsets[n - 1] {
            return self.densities[n - 1];
        }
        let i = self.offsets.partition_point(|&c| c <= offset) - 1;
        let t = (offset - self.offsets[i]) / (self.offsets[i + 1] - self.offsets[i]);
        self.densities[i] + t * (self.densities[i + 1] - self.densities[i])
    }

    /// Write the table as CSV rows under the header `C,RD`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "C,RD")?;
        for (c, rd) in self.pairs() {
            writeln!(w, "{c},{rd}")?;
        }
        Ok(())
    }
}
