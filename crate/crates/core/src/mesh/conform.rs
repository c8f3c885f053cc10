//! Surface conforming of voxel meshes.
//!
//! Boundary (skin) nodes of the voxel mesh are pulled onto the implicit
//! surface `s = 0` by Newton projection. Every candidate move is vetted
//! against a minimum scaled Jacobian for all incident elements and backed
//! off along a fixed step ladder until the floor holds; elements are never
//! modified or removed. Nodes on domain faces are special: faces exposed at
//! the domain boundary are platen/wall caps that must stay planar, so such
//! nodes move only within their plane(s), and nodes whose entire exposure
//! is caps do not move at all.

use super::build::{HexMesh, FACE_CORNERS};
use super::jacobian::scaled_jacobian;
use crate::geometry::ImplicitLattice;
use nalgebra::Point3;
use std::collections::HashMap;

/// Damping ladder: fractions of the Newton step tried in order; the first
/// fraction that keeps all incident elements above the quality floor wins,
/// and 0 (no move) always succeeds.
const LADDER: [f64; 5] = [1.0, 0.75, 0.5, 0.25, 0.1];

/// Newton iteration cap and surface-distance convergence threshold.
const MAX_NEWTON: usize = 20;
const SURFACE_TOL: f64 = 1e-9;

/// Default sweep cap for the outer relaxation, and the per-sweep motion
/// threshold below which further sweeps are pointless.
pub const DEFAULT_MAX_PASSES: usize = 3;
const MOVE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConformStats {
    /// Nodes that ended up displaced from their voxel position.
    pub moved_nodes: usize,
    /// Relaxation sweeps executed.
    pub passes: usize,
    /// Largest node displacement in the final sweep.
    pub max_move_last_pass: f64,
}

/// Project the mesh skin onto the lattice surface while keeping every
/// element's minimum scaled Jacobian at or above `mj_target`.
///
/// Runs up to `max_passes` sweeps over the boundary nodes in node-index
/// order; later sweeps recover nodes initially blocked by their neighbors'
/// Jacobian budgets. `mj_target = 1` admits no deformation at all (the
/// voxel mesh is already optimal), so the mesh is returned untouched.
pub fn conform_to_surface(
    mut mesh: HexMesh,
    lattice: &ImplicitLattice,
    mj_target: f64,
    max_passes: usize,
) -> (HexMesh, ConformStats) {
    assert!(
        mj_target > 0.0 && mj_target <= 1.0,
        "scaled-Jacobian floor must lie in (0, 1]"
    );
    if mj_target >= 1.0 || max_passes == 0 {
        let stats = ConformStats {
            moved_nodes: 0,
            passes: 0,
            max_move_last_pass: 0.0,
        };
        return (mesh, stats);
    }

    // Projectable nodes: incident to an exposed element face that is not a
    // domain cap. A cap face has all four corners pinned to one common
    // domain plane; its exposure comes from the design-domain cut, not from
    // the lattice surface, so it must not attract its nodes.
    let mut face_count: HashMap<[u32; 4], u8> = HashMap::new();
    for conn in &mesh.elements {
        for fc in &FACE_CORNERS {
            let mut key = [conn[fc[0]], conn[fc[1]], conn[fc[2]], conn[fc[3]]];
            key.sort_unstable();
            *face_count.entry(key).or_insert(0) += 1;
        }
    }
    let mut projectable = vec![false; mesh.node_count()];
    for (key, count) in &face_count {
        if *count != 1 {
            continue;
        }
        let common_walls = key
            .iter()
            .fold(u8::MAX, |acc, &n| acc & mesh.wall_mask[n as usize]);
        if common_walls == 0 {
            for &n in key {
                projectable[n as usize] = true;
            }
        }
    }

    // Node -> incident elements, needed for the quality veto.
    let mut incident: Vec<Vec<u32>> = vec![Vec::new(); mesh.node_count()];
    for (e, conn) in mesh.elements.iter().enumerate() {
        for &n in conn {
            incident[n as usize].push(e as u32);
        }
    }

    // Axes frozen per node: motion normal to a domain face would unseat the
    // platen/wall caps, so those components are masked out of the projection.
    let frozen: Vec<[bool; 3]> = mesh
        .wall_mask
        .iter()
        .map(|&mask| {
            [
                mask & 0b0000_0011 != 0,
                mask & 0b0000_1100 != 0,
                mask & 0b0011_0000 != 0,
            ]
        })
        .collect();

    let original: Vec<Point3<f64>> = mesh.nodes.clone();
    let mut passes = 0;
    let mut max_move = 0.0f64;
    for _ in 0..max_passes {
        passes += 1;
        max_move = 0.0;
        for n in 0..mesh.node_count() {
            if !projectable[n] {
                continue;
            }
            let start = mesh.nodes[n];
            let mut target = newton_project(lattice, start, &frozen[n]);
            // Numerical safety: never leave the design domain.
            for axis in 0..3 {
                target[axis] = target[axis]
                    .max(mesh.domain.min[axis])
                    .min(mesh.domain.max[axis]);
            }
            let full_step = target - start;
            if !full_step.iter().all(|v| v.is_finite()) || full_step.norm() == 0.0 {
                continue;
            }
            for &t in &LADDER {
                let candidate = start + full_step * t;
                mesh.nodes[n] = candidate;
                let ok = incident[n].iter().all(|&e| {
                    matches!(
                        scaled_jacobian(&mesh.element_corners(e as usize)),
                        Ok(sj) if sj >= mj_target
                    )
                });
                if ok {
                    max_move = max_move.max(full_step.norm() * t);
                    break;
                }
                mesh.nodes[n] = start;
            }
        }
        if max_move <= MOVE_TOL {
            break;
        }
    }

    let moved_nodes = mesh
        .nodes
        .iter()
        .zip(&original)
        .filter(|(a, b)| a != b)
        .count();
    let stats = ConformStats {
        moved_nodes,
        passes,
        max_move_last_pass: max_move,
    };
    (mesh, stats)
}

/// Newton root find for `s(x) = 0`, restricted to the axes not frozen by
/// domain-face constraints.
fn newton_project(
    lattice: &ImplicitLattice,
    start: Point3<f64>,
    frozen: &[bool; 3],
) -> Point3<f64> {
    let mut x = start;
    for _ in 0..MAX_NEWTON {
        let s = lattice.solid_scalar(&x);
        if s.abs() < SURFACE_TOL {
            break;
        }
        let mut g = lattice.solid_scalar_gradient(&x);
        for axis in 0..3 {
            if frozen[axis] {
                g[axis] = 0.0;
            }
        }
        let g2 = g.norm_squared();
        if g2 < 1e-20 {
            break;
        }
        x -= g * (s / g2);
    }
    x
}
