//! Element volume, mesh density, and quality reporting.

use super::build::HexMesh;
use super::jacobian::scaled_jacobian;
use nalgebra::{Matrix3, Point3};

/// Corner signs (ξ, η, ζ) in standard hexahedron ordering.
const SIGNS: [[f64; 3]; 8] = [
    [-1.0, -1.0, -1.0],
    [1.0, -1.0, -1.0],
    [1.0, 1.0, -1.0],
    [-1.0, 1.0, -1.0],
    [-1.0, -1.0, 1.0],
    [1.0, -1.0, 1.0],
    [1.0, 1.0, 1.0],
    [-1.0, 1.0, 1.0],
];

/// Abscissa of the two-point Gauss rule (weights are 1).
const GAUSS: f64 = 0.577_350_269_189_625_8;

/// Jacobian matrix of the trilinear map at a parametric point.
pub(super) fn jacobian_at(corners: &[Point3<f64>; 8], xi: f64, eta: f64, zeta: f64) -> Matrix3<f64> {
    let mut j = Matrix3::zeros();
    for (corner, s) in corners.iter().zip(SIGNS.iter()) {
        // dN/dξ etc. for N = (1 + ξξ_i)(1 + ηη_i)(1 + ζζ_i)/8.
        let dn = [
            s[0] * (1.0 + eta * s[1]) * (1.0 + zeta * s[2]) / 8.0,
            (1.0 + xi * s[0]) * s[1] * (1.0 + zeta * s[2]) / 8.0,
            (1.0 + xi * s[0]) * (1.0 + eta * s[1]) * s[2] / 8.0,
        ];
        for a in 0..3 {
            for b in 0..3 {
                j[(a, b)] += corner[a] * dn[b];
            }
        }
    }
    j
}

/// Volume of a trilinear hexahedron by 2x2x2 Gauss integration of det J.
///
/// The rule is exact for the trilinear map, so voxel cubes return h^3 to
/// round-off and sheared elements their exact algebraic volume.
pub fn hex_volume(corners: &[Point3<f64>; 8]) -> f64 {
    let mut volume = 0.0;
    for &xi in &[-GAUSS, GAUSS] {
        for &eta in &[-GAUSS, GAUSS] {
            for &zeta in &[-GAUSS, GAUSS] {
                volume += jacobian_at(corners, xi, eta, zeta).determinant();
            }
        }
    }
    volume
}

/// Ratio of total element volume to the design-domain volume.
pub fn mesh_relative_density(mesh: &HexMesh) -> f64 {
    let solid: f64 = (0..mesh.element_count())
        .map(|e| hex_volume(&mesh.element_corners(e)))
        .sum();
    solid / mesh.domain.volume()
}

/// Summary statistics of a hexahedral mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshQualityReport {
    pub element_count: usize,
    /// Element count divided by the number of unit cells (fractional).
    pub elements_per_cell: f64,
    /// Minimum scaled Jacobian over all elements.
    pub min_scaled_jacobian: f64,
    /// Scaled-Jacobian histogram: 10 equal bins over [0, 1].
    pub histogram: [usize; 10],
    /// Mesh relative density over the design domain.
    pub relative_density: f64,
}

/// Compute the quality report for a mesh of `n_cells`^3 unit cells.
///
/// # Panics
/// If `n_cells` is zero or the mesh contains a degenerate element.
pub fn quality_report(mesh: &HexMesh, n_cells: usize) -> MeshQualityReport {
    assert!(n_cells >= 1, "cell count must be at least 1");
    let mut min_sj = f64::INFINITY;
    let mut histogram = [0usize; 10];
    for e in 0..mesh.element_count() {
        let sj = scaled_jacobian(&mesh.element_corners(e))
            .expect("degenerate element in quality report");
        min_sj = min_sj.min(sj);
        let bin = ((sj * 10.0).floor() as isize).clamp(0, 9) as usize;
        histogram[bin] += 1;
    }
    MeshQualityReport {
        element_count: mesh.element_count(),
        elements_per_cell: mesh.element_count() as f64 / (n_cells as f64).powi(3),
        min_scaled_jacobian: min_sj,
        histogram,
        relative_density: mesh_relative_density(mesh),
    }
}
