//! Implicit TPMS lattice geometry.
//!
//! A lattice is an implicit scalar field `phi` (periodic in x, y, z) together
//! with a level offset `C` and a topology that turns the field into a solid
//! predicate. The network form occupies one of the two domains the surface
//! divides space into (`phi >= C`); the sheet form is the slab `|phi| <= C`
//! between two offset surfaces.

mod calibration;
mod sampling;
mod stl;
mod surface;

pub use calibration::{calibrate_offset, DensityCalibration};
pub use sampling::{solid_fraction, Sampler};
pub use stl::{read_stl, write_stl, StlMode};
pub use surface::{extract_surface, TriMesh};

use nalgebra::{Point3, Vector3};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeometryError {
    /// The bisection bracket endpoints do not straddle the target density.
    #[error("density bracket [{lo}, {hi}] does not straddle target RD {target} (achieved {rd_lo} / {rd_hi})")]
    NonMonotoneBracket {
        lo: f64,
        hi: f64,
        target: f64,
        rd_lo: f64,
        rd_hi: f64,
    },
    /// A requested relative density falls outside the calibration table.
    #[error("relative density {requested} outside calibration range [{min}, {max}]")]
    CalibrationRangeExceeded {
        requested: f64,
        min: f64,
        max: f64,
    },
    /// Isosurface extraction found no sign change anywhere in the domain.
    #[error("no isosurface: the field does not change sign in the domain")]
    EmptySurface,
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid STL data: {0}")]
    InvalidStl(String),
}

/// Implicit field family. Only the Gyroid is implemented; the enum is the
/// extension seam for further TPMS families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Gyroid,
}

/// Which of the field's level-set domains counts as solid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    /// Solid where `phi >= C`.
    Network,
    /// Solid where `|phi| <= C` (requires `C >= 0`).
    Sheet,
}

/// Level offset: either a constant or a z-graded profile driven by a density
/// calibration table.
#[derive(Debug, Clone)]
pub enum OffsetProfile {
    Constant(f64),
    GradedZ(GradedOffset),
}

/// Endpoints of a linear relative-density ramp along z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityRamp {
    /// Relative density at `z_bottom`.
    pub rd_bottom: f64,
    /// Relative density at `z_top`.
    pub rd_top: f64,
    pub z_bottom: f64,
    pub z_top: f64,
}

/// Linear relative-density ramp along z, inverted through a calibration table
/// to a per-height offset. The density profile is clamped to its endpoints
/// outside `[z_bottom, z_top]`.
#[derive(Debug, Clone)]
pub struct GradedOffset {
    calibration: DensityCalibration,
    ramp: DensityRamp,
}

impl GradedOffset {
    fn rd_at(&self, z: f64) -> f64 {
        let r = &self.ramp;
        let t = ((z - r.z_bottom) / (r.z_top - r.z_bottom)).clamp(0.0, 1.0);
        r.rd_bottom + (r.rd_top - r.rd_bottom) * t
    }

    fn offset_at(&self, z: f64) -> f64 {
        // Construction guarantees both endpoint densities sit inside the table.
        self.calibration
            .offset_for_rd(self.rd_at(z))
            .expect("graded endpoints validated against calibration range")
    }
}

/// An evaluatable TPMS lattice: periodic cell sizes per axis (mm), a level
/// offset and a solid topology.
#[derive(Debug, Clone)]
pub struct ImplicitLattice {
    kind: FieldKind,
    topology: Topology,
    cell: Vector3<f64>,
    offset: OffsetProfile,
}

impl ImplicitLattice {
    pub fn new(kind: FieldKind, topology: Topology, cell: Vector3<f64>, offset: f64) -> Self {
        assert!(
            cell.x > 0.0 && cell.y > 0.0 && cell.z > 0.0,
            "cell sizes must be positive"
        );
        if topology == Topology::Sheet {
            assert!(offset >= 0.0, "sheet topology requires C >= 0");
        }
        Self {
            kind,
            topology,
            cell,
            offset: OffsetProfile::Constant(offset),
        }
    }

    /// Cubic network Gyroid with cell edge `cell_size` and constant offset.
    pub fn gyroid_network(cell_size: f64, offset: f64) -> Self {
        Self::new(
            FieldKind::Gyroid,
            Topology::Network,
            Vector3::new(cell_size, cell_size, cell_size),
            offset,
        )
    }

    /// Lattice whose offset follows a linear density ramp in z.
    ///
    /// `ramp.rd_top` applies at `ramp.z_top`, `ramp.rd_bottom` at
    /// `ramp.z_bottom`; the profile is clamped outside that range. Fails with
    /// `CalibrationRangeExceeded` when either endpoint density is not covered
    /// by the table.
    pub fn graded_z(
        kind: FieldKind,
        topology: Topology,
        cell: Vector3<f64>,
        ramp: DensityRamp,
        calibration: DensityCalibration,
    ) -> Result<Self, GeometryError> {
        assert!(
            (0.0..1.0).contains(&ramp.rd_top) && ramp.rd_top > 0.0,
            "rd_top must lie in (0, 1)"
        );
        assert!(
            (0.0..1.0).contains(&ramp.rd_bottom) && ramp.rd_bottom > 0.0,
            "rd_bottom must lie in (0, 1)"
        );
        assert!(ramp.z_top > ramp.z_bottom, "z range must be nonempty");
        for rd in [ramp.rd_top, ramp.rd_bottom] {
            calibration.offset_for_rd(rd)?;
        }
        Ok(Self {
            kind,
            topology,
            cell,
            offset: OffsetProfile::GradedZ(GradedOffset { calibration, ramp }),
        })
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn cell(&self) -> Vector3<f64> {
        self.cell
    }

    /// Level offset at a point (constant lattices ignore the position).
    pub fn offset_at(&self, p: &Point3<f64>) -> f64 {
        match &self.offset {
            OffsetProfile::Constant(c) => *c,
            OffsetProfile::GradedZ(g) => g.offset_at(p.z),
        }
    }

    /// Field value `phi` at a point. For the Gyroid this is
    /// `sin X cos Y + sin Y cos Z + sin Z cos X` with `X = 2*pi*x / L_x` etc.
    pub fn eval_field(&self, p: &Point3<f64>) -> f64 {
        match self.kind {
            FieldKind::Gyroid => {
                let x = std::f64::consts::TAU * p.x / self.cell.x;
                let y = std::f64::consts::TAU * p.y / self.cell.y;
                let z = std::f64::consts::TAU * p.z / self.cell.z;
                x.sin() * y.cos() + y.sin() * z.cos() + z.sin() * x.cos()
            }
        }
    }

    /// Analytic gradient of `phi` (mm^-1), including the `2*pi/L` chain factors.
    pub fn eval_gradient(&self, p: &Point3<f64>) -> Vector3<f64> {
        match self.kind {
            FieldKind::Gyroid => {
                let kx = std::f64::consts::TAU / self.cell.x;
                let ky = std::f64::consts::TAU / self.cell.y;
                let kz = std::f64::consts::TAU / self.cell.z;
                let (x, y, z) = (kx * p.x, ky * p.y, kz * p.z);
                Vector3::new(
                    kx * (x.cos() * y.cos() - z.sin() * x.sin()),
                    ky * (y.cos() * z.cos() - x.sin() * y.sin()),
                    kz * (z.cos() * x.cos() - y.sin() * z.sin()),
                )
            }
        }
    }

    /// Signed solid scalar: `s >= 0` exactly on the solid region, `s = 0` on
    /// the boundary surface. Network: `phi - C`; sheet: `C - |phi|`.
    pub fn solid_scalar(&self, p: &Point3<f64>) -> f64 {
        let phi = self.eval_field(p);
        let c = self.offset_at(p);
        match self.topology {
            Topology::Network => phi - c,
            Topology::Sheet => c - phi.abs(),
        }
    }

    /// Gradient of the solid scalar with respect to the field only (the
    /// graded offset's slow z-variation is ignored, as the projection step
    /// treats `C` as locally constant).
    pub fn solid_scalar_gradient(&self, p: &Point3<f64>) -> Vector3<f64> {
        let g = self.eval_gradient(p);
        match self.topology {
            Topology::Network => g,
            Topology::Sheet => {
                if self.eval_field(p) >= 0.0 {
                    -g
                } else {
                    g
                }
            }
        }
    }

    pub fn is_solid(&self, p: &Point3<f64>) -> bool {
        self.solid_scalar(p) >= 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_points(n: usize, span: f64, seed: u64) -> Vec<Point3<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                Point3::new(
                    rng.gen_range(-span..span),
                    rng.gen_range(-span..span),
                    rng.gen_range(-span..span),
                )
            })
            .collect()
    }

    #[test]
    fn field_vanishes_at_origin() {
        let lat = ImplicitLattice::gyroid_network(5.0, 0.0);
        assert_eq!(lat.eval_field(&Point3::origin()), 0.0);
    }

    #[test]
    fn field_is_one_at_quarter_period() {
        let lat = ImplicitLattice::gyroid_network(5.0, 0.0);
        assert_eq!(lat.eval_field(&Point3::new(1.25, 0.0, 0.0)), 1.0);
    }

    #[test]
    fn field_is_periodic_in_each_axis() {
        let lat = ImplicitLattice::gyroid_network(5.0, 0.1);
        for p in random_points(1000, 12.0, 7) {
            let base = lat.eval_field(&p);
            for shift in [
                Vector3::new(5.0, 0.0, 0.0),
                Vector3::new(0.0, 5.0, 0.0),
                Vector3::new(0.0, 0.0, 5.0),
            ] {
                let shifted = lat.eval_field(&(p + shift));
                // field magnitude is bounded by 1.5, so 1e-12 relative to that scale
                assert_abs_diff_eq!(shifted, base, epsilon = 1.5e-12);
            }
        }
    }

    #[test]
    fn gradient_at_origin_is_symmetric() {
        let lat = ImplicitLattice::gyroid_network(5.0, 0.0);
        let g = lat.eval_gradient(&Point3::origin());
        let expect = std::f64::consts::TAU / 5.0;
        assert_abs_diff_eq!(g.x, expect, epsilon = 1e-15);
        assert_abs_diff_eq!(g.y, expect, epsilon = 1e-15);
        assert_abs_diff_eq!(g.z, expect, epsilon = 1e-15);
    }

    #[test]
    fn gradient_matches_central_differences() {
        let lat = ImplicitLattice::gyroid_network(5.0, 0.0);
        let h = 1e-5;
        for p in random_points(100, 8.0, 11) {
            let g = lat.eval_gradient(&p);
            for axis in 0..3 {
                let mut lo = p;
                let mut hi = p;
                lo[axis] -= h;
                hi[axis] += h;
                let fd = (lat.eval_field(&hi) - lat.eval_field(&lo)) / (2.0 * h);
                assert!(
                    (g[axis] - fd).abs() < 1e-6,
                    "axis {axis} at {p:?}: analytic {} vs fd {fd}",
                    g[axis]
                );
            }
        }
    }

    #[test]
    fn gradient_ignores_constant_offset() {
        let a = ImplicitLattice::gyroid_network(5.0, 0.0);
        let b = ImplicitLattice::gyroid_network(5.0, 0.7);
        for p in random_points(50, 6.0, 3) {
            assert_eq!(a.eval_gradient(&p), b.eval_gradient(&p));
        }
    }

    #[test]
    fn sheet_scalar_is_symmetric_in_field_sign() {
        let lat = ImplicitLattice::new(
            FieldKind::Gyroid,
            Topology::Sheet,
            Vector3::new(5.0, 5.0, 5.0),
            0.4,
        );
        // phi is antisymmetric under point reflection through the origin for
        // the Gyroid, so the sheet predicate must agree at p and -p.
        for p in random_points(200, 6.0, 5) {
            let q = Point3::new(-p.x, -p.y, -p.z);
            assert_eq!(lat.is_solid(&p), lat.is_solid(&q));
        }
    }

    fn graded(rd_bottom: f64, rd_top: f64, z_top: f64) -> ImplicitLattice {
        let calibration = DensityCalibration::gyroid_network(5.0);
        ImplicitLattice::graded_z(
            FieldKind::Gyroid,
            Topology::Network,
            Vector3::new(5.0, 5.0, 5.0),
            DensityRamp {
                rd_bottom,
                rd_top,
                z_bottom: 0.0,
                z_top,
            },
            calibration,
        )
        .unwrap()
    }

    #[test]
    fn degenerate_grading_equals_the_uniform_lattice() {
        let graded = graded(0.45, 0.45, 10.0);
        let c = DensityCalibration::gyroid_network(5.0)
            .offset_for_rd(0.45)
            .unwrap();
        let uniform = ImplicitLattice::gyroid_network(5.0, c);
        for p in random_points(1000, 10.0, 11) {
            assert_eq!(graded.is_solid(&p), uniform.is_solid(&p));
            assert_eq!(graded.offset_at(&p), uniform.offset_at(&p));
        }
    }

    #[test]
    fn graded_slabs_densify_toward_the_bottom() {
        use crate::geometry::sampling::{solid_fraction, Sampler};
        use crate::Box3;
        // Two cells tall, density ramp 0.55 (bottom) -> 0.35 (top).
        let lat = graded(0.55, 0.35, 10.0);
        let slab_rd: Vec<f64> = (0..4)
            .map(|s| {
                let region = Box3::new(
                    Point3::new(0.0, 0.0, 2.5 * s as f64),
                    Point3::new(10.0, 10.0, 2.5 * (s + 1) as f64),
                );
                solid_fraction(&lat, &region, Sampler::Grid { n: 64 })
            })
            .collect();
        for pair in slab_rd.windows(2) {
            assert!(pair[0] > pair[1], "slab densities not decreasing: {slab_rd:?}");
        }
    }

    #[test]
    fn graded_cube_hits_the_average_density() {
        use crate::geometry::sampling::{solid_fraction, Sampler};
        use crate::Box3;
        let lat = graded(0.55, 0.35, 10.0);
        let region = Box3::cube(10.0);
        let rd = solid_fraction(&lat, &region, Sampler::Grid { n: 96 });
        assert_abs_diff_eq!(rd, 0.45, epsilon = 0.01);
    }

    #[test]
    fn grading_outside_the_table_is_rejected() {
        let calibration = DensityCalibration::gyroid_network(5.0);
        let result = ImplicitLattice::graded_z(
            FieldKind::Gyroid,
            Topology::Network,
            Vector3::new(5.0, 5.0, 5.0),
            DensityRamp {
                rd_bottom: 0.9999,
                rd_top: 0.35,
                z_bottom: 0.0,
                z_top: 10.0,
            },
            calibration,
        );
        assert!(matches!(
            result,
            Err(GeometryError::CalibrationRangeExceeded { .. })
        ));
    }
}
