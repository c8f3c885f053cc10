//! Frictionless-platen compression boundary conditions.
//!
//! Only u_z is prescribed on the two loading faces (the platens are ideal
//! and frictionless); lateral rigid-body motion is removed by a 3-2-1 lock
//! on two bottom-face nodes. Constraints are imposed by elimination, which
//! keeps the reduced operator symmetric positive definite and the reaction
//! audit exact.

use super::FemError;
use crate::mesh::HexMesh;

/// Uniaxial compression parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompressionSetup {
    /// Prescribed downward displacement of the top face (mm, magnitude).
    pub delta: f64,
    /// Distance tolerance for assigning nodes to the platen planes (mm).
    pub face_tol: f64,
}

impl CompressionSetup {
    /// # Panics
    /// If `delta` is negative (zero is allowed and yields the zero solution).
    pub fn new(delta: f64) -> Self {
        assert!(delta >= 0.0, "compression displacement must be >= 0");
        Self {
            delta,
            face_tol: 1e-6,
        }
    }
}

/// Prescribed-DOF description of the constrained system.
#[derive(Debug, Clone)]
pub struct BoundaryConditions {
    /// Per-DOF flag: true when the DOF carries a prescribed value.
    pub fixed: Vec<bool>,
    /// Prescribed value per DOF (zero on free DOFs).
    pub values: Vec<f64>,
    /// Node ids on the moving (top) platen.
    pub top_nodes: Vec<u32>,
    /// Node ids on the support (bottom) platen.
    pub bottom_nodes: Vec<u32>,
    /// Bottom node with u_x = u_y = 0.
    pub lock_a: u32,
    /// Bottom node with u_y = 0.
    pub lock_b: u32,
}

/// Detect the platen faces and build the constraint set: u_z = 0 on the
/// bottom face, u_z = -delta on the top face, plus the in-plane lock
/// (node A: u_x = u_y = 0; node B at max x: u_y = 0).
pub fn apply_compression_bcs(
    mesh: &HexMesh,
    setup: &CompressionSetup,
) -> Result<BoundaryConditions, FemError> {
    let z_bottom = mesh.domain.min.z;
    let z_top = mesh.domain.max.z;
    let mut bottom_nodes = Vec::new();
    let mut top_nodes = Vec::new();
    for (n, p) in mesh.nodes.iter().enumerate() {
        if (p.z - z_bottom).abs() <= setup.face_tol {
            bottom_nodes.push(n as u32);
        }
        if (p.z - z_top).abs() <= setup.face_tol {
            top_nodes.push(n as u32);
        }
    }
    if bottom_nodes.is_empty() {
        return Err(FemError::NoBottomFace);
    }
    if top_nodes.is_empty() {
        return Err(FemError::NoTopFace);
    }

    // Node A: lexicographically smallest (x, y) on the bottom face.
    let lock_a = *bottom_nodes
        .iter()
        .min_by(|&&a, &&b| {
            let (pa, pb) = (&mesh.nodes[a as usize], &mesh.nodes[b as usize]);
            pa.x.total_cmp(&pb.x).then(pa.y.total_cmp(&pb.y))
        })
        .expect("bottom face checked nonempty");
    // Node B: largest x, then smallest y. Preferring A's y row keeps the
    // lock compatible with exact uniform-strain fields on full platens.
    let lock_b = *bottom_nodes
        .iter()
        .max_by(|&&a, &&b| {
            let (pa, pb) = (&mesh.nodes[a as usize], &mesh.nodes[b as usize]);
            pa.x.total_cmp(&pb.x).then(pb.y.total_cmp(&pa.y))
        })
        .expect("bottom face checked nonempty");
    if lock_a == lock_b {
        return Err(FemError::UnconstrainedRigidBody);
    }

    let dofs = 3 * mesh.node_count();
    let mut fixed = vec![false; dofs];
    let mut values = vec![0.0; dofs];
    for &n in &bottom_nodes {
        fixed[3 * n as usize + 2] = true;
    }
    for &n in &top_nodes {
        fixed[3 * n as usize + 2] = true;
        values[3 * n as usize + 2] = -setup.delta;
    }
    fixed[3 * lock_a as usize] = true;
    fixed[3 * lock_a as usize + 1] = true;
    fixed[3 * lock_b as usize + 1] = true;

    Ok(BoundaryConditions {
        fixed,
        values,
        top_nodes,
        bottom_nodes,
        lock_a,
        lock_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{assemble, MaterialSpec};
    use crate::mesh::{build_voxel_mesh, OccupancyGrid, VoxelGridSpec};
    use crate::Box3;

    fn block_mesh(n: usize) -> HexMesh {
        let spec = VoxelGridSpec::with_defaults(Box3::cube(n as f64), 1.0).unwrap();
        let mut grid = OccupancyGrid::empty(spec.dims);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    grid.set(i, j, k, true);
                }
            }
        }
        build_voxel_mesh(&spec, &grid).unwrap()
    }

    #[test]
    fn faces_and_locks_are_detected() {
        let mesh = block_mesh(2);
        let bc = apply_compression_bcs(&mesh, &CompressionSetup::new(0.1)).unwrap();
        assert_eq!(bc.bottom_nodes.len(), 9);
        assert_eq!(bc.top_nodes.len(), 9);
        let a = &mesh.nodes[bc.lock_a as usize];
        let b = &mesh.nodes[bc.lock_b as usize];
        assert_eq!((a.x, a.y, a.z), (0.0, 0.0, 0.0));
        assert_eq!((b.x, b.y, b.z), (2.0, 0.0, 0.0));
        // 9 + 9 z constraints, 2 on A, 1 on B.
        assert_eq!(bc.fixed.iter().filter(|&&f| f).count(), 21);
        for &n in &bc.top_nodes {
            assert_eq!(bc.values[3 * n as usize + 2], -0.1);
        }
    }

    #[test]
    fn constrained_block_has_no_zero_energy_modes() {
        let mesh = block_mesh(2);
        let k = assemble(&mesh, &MaterialSpec::ti6al4v()).unwrap();
        let bc = apply_compression_bcs(&mesh, &CompressionSetup::new(0.1)).unwrap();
        let dense = k.to_dense();
        let free: Vec<usize> = (0..k.dofs()).filter(|&i| !bc.fixed[i]).collect();
        let reduced = nalgebra::DMatrix::from_fn(free.len(), free.len(), |i, j| {
            dense[(free[i], free[j])]
        });
        let eig = reduced.symmetric_eigen();
        let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(min > 0.0, "smallest reduced eigenvalue {min}");
    }

    #[test]
    fn missing_top_face_is_an_error() {
        // One occupied layer of a two-layer domain never reaches the top.
        let spec = VoxelGridSpec::with_defaults(Box3::cube(2.0), 1.0).unwrap();
        let mut grid = OccupancyGrid::empty(spec.dims);
        for i in 0..2 {
            for j in 0..2 {
                grid.set(i, j, 0, true);
            }
        }
        let mesh = build_voxel_mesh(&spec, &grid).unwrap();
        assert!(matches!(
            apply_compression_bcs(&mesh, &CompressionSetup::new(0.1)),
            Err(FemError::NoTopFace)
        ));
    }

    #[test]
    fn degenerate_bottom_contact_is_an_error() {
        let mut mesh = block_mesh(1);
        // Lift all bottom nodes except one clear of the platen plane.
        let mut first = true;
        for p in mesh.nodes.iter_mut() {
            if p.z == 0.0 {
                if first {
                    first = false;
                } else {
                    p.z = 0.2;
                }
            }
        }
        assert!(matches!(
            apply_compression_bcs(&mesh, &CompressionSetup::new(0.1)),
            Err(FemError::UnconstrainedRigidBody)
        ));
    }
}
