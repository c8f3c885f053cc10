//! Global stiffness assembly.

use super::element::hex8_stiffness;
use super::material::MaterialSpec;
use super::sparse::BlockCsr3;
use super::FemError;
use crate::mesh::HexMesh;
use nalgebra::Matrix3;
use std::collections::HashMap;

/// Assemble the global stiffness matrix (3 DOFs per node).
///
/// Accumulation follows ascending element id, then the element's local
/// (row, column) corner order, so repeated runs are bit-identical. Element
/// matrices are memoized by element shape (corner offsets from corner 0):
/// voxel meshes repeat a handful of cube shapes thousands of times, and the
/// memo returns the exact matrix the direct computation would.
pub fn assemble(mesh: &HexMesh, material: &MaterialSpec) -> Result<BlockCsr3, FemError> {
    assemble_impl(mesh, material, true)
}

fn assemble_impl(
    mesh: &HexMesh,
    material: &MaterialSpec,
    memoize: bool,
) -> Result<BlockCsr3, FemError> {
    // Sparsity pattern: nodes couple when they share an element.
    let mut neighbors: Vec<Vec<u32>> = vec![Vec::new(); mesh.node_count()];
    for conn in &mesh.elements {
        for &a in conn {
            for &b in conn {
                neighbors[a as usize].push(b);
            }
        }
    }
    for cols in &mut neighbors {
        cols.sort_unstable();
        cols.dedup();
    }
    let mut k = BlockCsr3::from_pattern(&neighbors);

    // Shape key: bit patterns of the 7 corner offsets from corner 0.
    let mut memo: HashMap<[u64; 21], Box<nalgebra::SMatrix<f64, 24, 24>>> = HashMap::new();
    for (e, conn) in mesh.elements.iter().enumerate() {
        let corners = mesh.element_corners(e);
        let wrap = |source| FemError::InvalidElement {
            element: e,
            source: Box::new(source),
        };
        let ke = if memoize {
            let mut key = [0u64; 21];
            for i in 1..8 {
                let offset = corners[i] - corners[0];
                for a in 0..3 {
                    key[3 * (i - 1) + a] = offset[a].to_bits();
                }
            }
            match memo.get(&key) {
                Some(cached) => cached.clone(),
                None => {
                    let fresh = Box::new(hex8_stiffness(&corners, material).map_err(wrap)?);
                    memo.insert(key, fresh.clone());
                    fresh
                }
            }
        } else {
            Box::new(hex8_stiffness(&corners, material).map_err(wrap)?)
        };
        for (row, &global_row) in conn.iter().enumerate() {
            for (col, &global_col) in conn.iter().enumerate() {
                let block =
                    Matrix3::from_fn(|a, b| ke[(3 * row + a, 3 * col + b)]);
                k.add_block(global_row as usize, global_col, &block);
            }
        }
    }
    Ok(k)
}
