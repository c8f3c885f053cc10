//! Corner scaled-Jacobian quality metric for hexahedra.
//!
//! At each corner the three incident edge vectors are assembled into a
//! Jacobian whose determinant, normalized by the edge lengths and by the
//! corner's orientation sign, measures local distortion: 1 for a cube corner,
//! 0 for a locally flat corner, negative for local inversion.

use super::MeshError;
use nalgebra::{Matrix3, Point3};

/// Reference-coordinate signs (xi, eta, zeta) of the eight corners in VTK
/// hexahedron order (bottom quad counterclockwise, then top quad).
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

/// For each corner, the corner reached by following the edge along each of
/// the three reference axes.
const NEIGHBOR: [[usize; 3]; 8] = [
    [1, 3, 4],
    [0, 2, 5],
    [3, 1, 6],
    [2, 0, 7],
    [5, 7, 0],
    [4, 6, 1],
    [7, 5, 2],
    [6, 4, 3],
];

const MIN_EDGE: f64 = 1e-12;

/// Scaled Jacobian at each of the eight corners.
///
/// For corner `k` with incident edge vectors `u`, `v`, `w` (ordered by
/// reference axis) the value is `sigma_k * det[u v w] / (|u| |v| |w|)` where
/// `sigma_k = -xi_k * eta_k * zeta_k` compensates the corner's handedness;
/// an ideal cube scores 1 at every corner. Fails with
/// [`MeshError::ZeroEdge`] when any incident edge is shorter than 1e-12.
pub fn corner_scaled_jacobians(corners: &[Point3<f64>; 8]) -> Result<[f64; 8], MeshError> {
    let mut sj = [0.0; 8];
    for k in 0..8 {
        let u = corners[NEIGHBOR[k][0]] - corners[k];
        let v = corners[NEIGHBOR[k][1]] - corners[k];
        let w = corners[NEIGHBOR[k][2]] - corners[k];
        let (lu, lv, lw) = (u.norm(), v.norm(), w.norm());
        let shortest = lu.min(lv).min(lw);
        if shortest < MIN_EDGE {
            return Err(MeshError::ZeroEdge { length: shortest });
        }
        let sigma = -SIGNS[k][0] * SIGNS[k][1] * SIGNS[k][2];
        let det = Matrix3::from_columns(&[u, v, w]).determinant();
        sj[k] = sigma * det / (lu * lv * lw);
    }
    Ok(sj)
}

/// Scaled Jacobian of a hexahedron: the minimum over its eight corners.
pub fn scaled_jacobian(corners: &[Point3<f64>; 8]) -> Result<f64, MeshError> {
    Ok(corner_scaled_jacobians(corners)?
        .into_iter()
        .fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::Vector3;

    fn unit_cube() -> [Point3<f64>; 8] {
        [
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(0.0, 0.0, 1.0),
            Point3::new(1.0, 0.0, 1.0),
            Point3::new(1.0, 1.0, 1.0),
            Point3::new(0.0, 1.0, 1.0),
        ]
    }

    #[test]
    fn cube_scores_one_at_every_corner() {
        let sj = corner_scaled_jacobians(&unit_cube()).unwrap();
        for v in sj {
            assert_abs_diff_eq!(v, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn sheared_top_face_gives_known_minimum() {
        let mut c = unit_cube();
        for p in &mut c[4..] {
            p.x += 0.5;
        }
        let min = scaled_jacobian(&c).unwrap();
        assert_abs_diff_eq!(min, 0.8944271909999159, epsilon = 1e-15);
    }

    #[test]
    fn metric_is_scale_invariant() {
        let mut c = unit_cube();
        for p in &mut c[4..] {
            p.x += 0.5;
        }
        let base = corner_scaled_jacobians(&c).unwrap();
        let scaled: [Point3<f64>; 8] =
            std::array::from_fn(|i| Point3::from(c[i].coords * 37.5));
        let big = corner_scaled_jacobians(&scaled).unwrap();
        for k in 0..8 {
            assert_abs_diff_eq!(big[k], base[k], epsilon = 1e-12);
        }
    }

    #[test]
    fn metric_is_rotation_invariant() {
        let mut c = unit_cube();
        c[6] += Vector3::new(-0.2, 0.1, 0.3);
        let base = corner_scaled_jacobians(&c).unwrap();
        let rot = nalgebra::Rotation3::from_euler_angles(0.3, -1.1, 0.7);
        let rotated: [Point3<f64>; 8] = std::array::from_fn(|i| rot * c[i]);
        let after = corner_scaled_jacobians(&rotated).unwrap();
        for k in 0..8 {
            assert_abs_diff_eq!(after[k], base[k], epsilon = 1e-12);
        }
    }

    #[test]
    fn inverted_element_scores_negative() {
        let mut c = unit_cube();
        // Swap the bottom and top quads to invert the element.
        c.swap(0, 4);
        c.swap(1, 5);
        c.swap(2, 6);
        c.swap(3, 7);
        let min = scaled_jacobian(&c).unwrap();
        assert!(min < 0.0, "min SJ {min}");
    }

    #[test]
    fn collapsed_edge_is_reported() {
        let mut c = unit_cube();
        c[1] = c[0];
        let err = scaled_jacobian(&c).unwrap_err();
        assert!(matches!(err, MeshError::ZeroEdge { .. }));
    }

    #[test]
    fn flattened_corner_scores_zero() {
        let mut c = unit_cube();
        // Pull corner 6 into the plane of corners 2, 5, 7: its three edges
        // become coplanar.
        c[6] = Point3::new(1.0, 1.0, 0.0) + (c[5] - c[2]) + (c[7] - c[2]);
        let sj = corner_scaled_jacobians(&c).unwrap();
        assert_abs_diff_eq!(sj[6], 0.0, epsilon = 1e-15);
    }
}
