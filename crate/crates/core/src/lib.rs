//! Lattice-structure toolkit: triply periodic minimal surface (TPMS) geometry,
//! voxel hexahedral meshing with a minimum scaled-Jacobian bound, small-strain
//! compression solves, and grid-convergence analytics.
//!
//! The crate is organized around four subsystems:
//!
//! - [`geometry`]: implicit TPMS fields, density calibration, graded offsets,
//!   isosurface extraction and STL export.
//! - [`mesh`]: voxel hex meshing from an implicit field, surface conforming
//!   under a scaled-Jacobian floor, quality reporting and VTK export.
//! - [`fem`]: hex8 linear elasticity, sparse assembly, a diagonally
//!   preconditioned conjugate-gradient solve, and the uniaxial compression
//!   pipeline that yields an effective Young's modulus.
//! - [`convergence`]: relative error, observed order, Richardson asymptotes,
//!   grid convergence indices and Gibson-Ashby power-law fits.
//!
//! Units are mm / N / MPa throughout.

pub mod convergence;
pub mod fem;
pub mod geometry;
pub mod mesh;

use nalgebra::Point3;

/// Axis-aligned box in mm, used for design domains and sampling regions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Box3 {
    pub min: Point3<f64>,
    pub max: Point3<f64>,
}

impl Box3 {
    pub fn new(min: Point3<f64>, max: Point3<f64>) -> Self {
        assert!(
            min.x < max.x && min.y < max.y && min.z < max.z,
            "box must have positive extent on every axis"
        );
        Self { min, max }
    }

    /// Cube with one corner at the origin.
    pub fn cube(edge: f64) -> Self {
        Self::new(Point3::origin(), Point3::new(edge, edge, edge))
    }

    pub fn extent(&self) -> [f64; 3] {
        [
            self.max.x - self.min.x,
            self.max.y - self.min.y,
            self.max.z - self.min.z,
        ]
    }

    pub fn volume(&self) -> f64 {
        let [dx, dy, dz] = self.extent();
        dx * dy * dz
    }

    /// Nominal cross-sectional area normal to z.
    pub fn cross_section_xy(&self) -> f64 {
        let [dx, dy, _] = self.extent();
        dx * dy
    }

    pub fn contains(&self, p: &Point3<f64>) -> bool {
        p.x >= self.min.x
            && p.x <= self.max.x
            && p.y >= self.min.y
            && p.y <= self.max.y
            && p.z >= self.min.z
            && p.z <= self.max.z
    }
}
