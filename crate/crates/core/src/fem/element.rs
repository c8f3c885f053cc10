//! Trilinear hexahedral element: stiffness and centroid strain recovery.

use super::material::MaterialSpec;
use super::FemError;
use nalgebra::{Matrix3, Point3, SMatrix, Vector3, Vector6};

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

/// Parametric derivatives of the eight shape functions
/// N_i = (1 + ξξ_i)(1 + ηη_i)(1 + ζζ_i) / 8.
fn shape_derivatives(xi: f64, eta: f64, zeta: f64) -> [[f64; 3]; 8] {
    std::array::from_fn(|i| {
        let s = SIGNS[i];
        [
            s[0] * (1.0 + eta * s[1]) * (1.0 + zeta * s[2]) / 8.0,
            (1.0 + xi * s[0]) * s[1] * (1.0 + zeta * s[2]) / 8.0,
            (1.0 + xi * s[0]) * (1.0 + eta * s[1]) * s[2] / 8.0,
        ]
    })
}

/// Strain-displacement matrix and Jacobian determinant at one parametric
/// point. Voigt order (xx, yy, zz, xy, yz, zx), engineering shears.
fn b_matrix(
    local: &[Vector3<f64>; 8],
    xi: f64,
    eta: f64,
    zeta: f64,
) -> Option<(SMatrix<f64, 6, 24>, f64)> {
    let dn = shape_derivatives(xi, eta, zeta);
    let mut jac = Matrix3::zeros();
    for (corner, d) in local.iter().zip(dn.iter()) {
        for a in 0..3 {
            for b in 0..3 {
                jac[(a, b)] += corner[a] * d[b];
            }
        }
    }
    let det = jac.determinant();
    if det <= 1e-12 {
        return None;
    }
    let inv = jac.try_inverse()?;
    let mut b = SMatrix::<f64, 6, 24>::zeros();
    for (i, d) in dn.iter().enumerate() {
        // Spatial gradient of N_i: J^{-T} * parametric gradient.
        let gx = inv[(0, 0)] * d[0] + inv[(1, 0)] * d[1] + inv[(2, 0)] * d[2];
        let gy = inv[(0, 1)] * d[0] + inv[(1, 1)] * d[1] + inv[(2, 1)] * d[2];
        let gz = inv[(0, 2)] * d[0] + inv[(1, 2)] * d[1] + inv[(2, 2)] * d[2];
        let c = 3 * i;
        b[(0, c)] = gx;
        b[(1, c + 1)] = gy;
        b[(2, c + 2)] = gz;
        b[(3, c)] = gy;
        b[(3, c + 1)] = gx;
        b[(4, c + 1)] = gz;
        b[(4, c + 2)] = gy;
        b[(5, c)] = gz;
        b[(5, c + 2)] = gx;
    }
    Some((b, det))
}

/// Shift corners into an element-local frame anchored at corner 0.
///
/// Stiffness is translation invariant; working with corner differences keeps
/// the computation well conditioned and makes the result a function of the
/// element's shape alone.
fn local_frame(corners: &[Point3<f64>; 8]) -> [Vector3<f64>; 8] {
    std::array::from_fn(|i| corners[i] - corners[0])
}

/// Element stiffness matrix (N/mm) by full 2x2x2 Gauss quadrature.
///
/// Gauss points are visited in a fixed order (ξ fastest); the returned
/// matrix is explicitly symmetrized.
pub fn hex8_stiffness(
    corners: &[Point3<f64>; 8],
    material: &MaterialSpec,
) -> Result<SMatrix<f64, 24, 24>, FemError> {
    let local = local_frame(corners);
    let d = material.elasticity_matrix();
    let mut k = SMatrix::<f64, 24, 24>::zeros();
    let mut gauss = 0;
    for &zeta in &[-GAUSS, GAUSS] {
        for &eta in &[-GAUSS, GAUSS] {
            for &xi in &[-GAUSS, GAUSS] {
                let (b, det) = b_matrix(&local, xi, eta, zeta)
                    .ok_or(FemError::NonPositiveJacobian { gauss })?;
                k += b.transpose() * d * b * det;
                gauss += 1;
            }
        }
    }
    Ok((k + k.transpose()) / 2.0)
}

/// Strain (Voigt, engineering shears) at the element centroid given nodal
/// displacements in node-interleaved x,y,z order.
pub fn element_strain(
    corners: &[Point3<f64>; 8],
    u: &[f64; 24],
) -> Result<Vector6<f64>, FemError> {
    let local = local_frame(corners);
    let (b, _) = b_matrix(&local, 0.0, 0.0, 0.0)
        .ok_or(FemError::NonPositiveJacobian { gauss: 0 })?;
    Ok(b * SMatrix::<f64, 24, 1>::from_column_slice(u))
}

/// Stress (MPa, Voigt) from strain through the isotropic elasticity matrix.
pub fn stress_from_strain(material: &MaterialSpec, strain: &Vector6<f64>) -> Vector6<f64> {
    material.elasticity_matrix() * strain
}

/// Von Mises equivalent of a Voigt stress vector.
pub fn von_mises(stress: &Vector6<f64>) -> f64 {
    let (sx, sy, sz) = (stress[0], stress[1], stress[2]);
    let (txy, tyz, tzx) = (stress[3], stress[4], stress[5]);
    (0.5 * ((sx - sy).powi(2) + (sy - sz).powi(2) + (sz - sx).powi(2))
        + 3.0 * (txy * txy + tyz * tyz + tzx * tzx))
        .sqrt()
}
