//! Watertight isosurface extraction by marching tetrahedra.
//!
//! The domain is sampled on a uniform grid, padded with one layer of
//! strongly-void sentinel samples so that solid material touching the domain
//! boundary is capped. Each grid cell is split into six tetrahedra sharing
//! the cell's main diagonal; the split is translation invariant, so the
//! diagonals of shared faces agree between neighboring cells and the
//! resulting triangle soup is closed. Triangle winding follows the STL
//! convention: normals point out of the solid.

use super::{GeometryError, ImplicitLattice};
use crate::Box3;
use nalgebra::Point3;
use std::collections::HashMap;

/// Sentinel sample for the padding layer: decisively void, so caps land
/// within a clamped interpolation step of the boundary.
const PAD_VALUE: f64 = -1e9;

/// Interpolation clamp keeping crossing points away from grid nodes, which
/// would otherwise produce zero-area triangles after vertex deduplication.
const T_CLAMP: f64 = 1e-3;

/// Indexed triangle surface.
#[derive(Debug, Clone, Default)]
pub struct TriMesh {
    pub vertices: Vec<Point3<f64>>,
    pub triangles: Vec<[u32; 3]>,
}

impl TriMesh {
    /// Enclosed volume by the divergence theorem; positive when triangle
    /// normals point outward and the surface is closed.
    pub fn volume(&self) -> f64 {
        let mut six_v = 0.0;
        for t in &self.triangles {
            let a = self.vertices[t[0] as usize].coords;
            let b = self.vertices[t[1] as usize].coords;
            let c = self.vertices[t[2] as usize].coords;
            six_v += a.dot(&b.cross(&c));
        }
        six_v / 6.0
    }

    /// Total surface area.
    pub fn area(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let a = self.vertices[t[0] as usize];
                let b = self.vertices[t[1] as usize];
                let c = self.vertices[t[2] as usize];
                0.5 * (b - a).cross(&(c - a)).norm()
            })
            .sum()
    }

    /// True when every directed edge is matched by its reverse exactly as
    /// often as it occurs, i.e. the surface is closed and consistently
    /// oriented.
    pub fn is_closed(&self) -> bool {
        let mut count: HashMap<(u32, u32), i64> = HashMap::new();
        for t in &self.triangles {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                if a < b {
                    *count.entry((a, b)).or_insert(0) += 1;
                } else {
                    *count.entry((b, a)).or_insert(0) -= 1;
                }
            }
        }
        count.values().all(|&c| c == 0)
    }
}

/// Corner offsets of a cell, bit-coded `i = dx + 2*dy + 4*dz`.
const CORNER: [[usize; 3]; 8] = [
    [0, 0, 0],
    [1, 0, 0],
    [0, 1, 0],
    [1, 1, 0],
    [0, 0, 1],
    [1, 0, 1],
    [0, 1, 1],
    [1, 1, 1],
];

/// Six positively oriented tetrahedra sharing the 0-7 cell diagonal.
const TETS: [[usize; 4]; 6] = [
    [0, 1, 3, 7],
    [0, 3, 2, 7],
    [0, 2, 6, 7],
    [0, 6, 4, 7],
    [0, 4, 5, 7],
    [0, 5, 1, 7],
];

/// Crossed-edge sequences per inside-mask (bit i set when tet vertex i is
/// solid). One or two triangles; edges are vertex-index pairs within the tet.
/// Winding yields outward normals for positively oriented tetrahedra.
fn tet_case(mask: u8) -> &'static [[(usize, usize); 3]] {
    const E01: (usize, usize) = (0, 1);
    const E02: (usize, usize) = (0, 2);
    const E03: (usize, usize) = (0, 3);
    const E12: (usize, usize) = (1, 2);
    const E13: (usize, usize) = (1, 3);
    const E23: (usize, usize) = (2, 3);
    match mask {
        0x1 => &[[E01, E02, E03]],
        0x2 => &[[E01, E13, E12]],
        0x4 => &[[E23, E02, E12]],
        0x8 => &[[E23, E13, E03]],
        0xE => &[[E03, E02, E01]],
        0xD => &[[E12, E13, E01]],
        0xB => &[[E12, E02, E23]],
        0x7 => &[[E03, E13, E23]],
        0x3 => &[[E02, E03, E13], [E02, E13, E12]],
        0x5 => &[[E03, E01, E12], [E03, E12, E23]],
        0x9 => &[[E01, E02, E23], [E01, E23, E13]],
        0x6 => &[[E01, E13, E23], [E01, E23, E02]],
        0xA => &[[E12, E01, E03], [E12, E03, E23]],
        0xC => &[[E02, E12, E13], [E02, E13, E03]],
        _ => &[],
    }
}

/// Extract the boundary surface of the lattice solid restricted to `domain`,
/// capped at the domain faces, using `cells` grid cells per axis.
///
/// Returns [`GeometryError::EmptySurface`] when the domain contains no solid
/// material at all.
pub fn extract_surface(
    lattice: &ImplicitLattice,
    domain: &Box3,
    cells: [usize; 3],
) -> Result<TriMesh, GeometryError> {
    assert!(
        cells.iter().all(|&n| n >= 1),
        "need at least one cell per axis"
    );
    let ext = domain.extent();
    let step = [
        ext[0] / cells[0] as f64,
        ext[1] / cells[1] as f64,
        ext[2] / cells[2] as f64,
    ];
    // Padded sample counts: real samples cells+1, plus one layer each side.
    let ns = [cells[0] + 3, cells[1] + 3, cells[2] + 3];
    let coord = |axis: usize, idx: usize| -> f64 {
        domain.min[axis] + (idx as f64 - 1.0) * step[axis]
    };
    let node_id = |i: usize, j: usize, k: usize| -> usize { i + ns[0] * (j + ns[1] * k) };

    let mut samples = vec![PAD_VALUE; ns[0] * ns[1] * ns[2]];
    for k in 1..ns[2] - 1 {
        let z = coord(2, k);
        for j in 1..ns[1] - 1 {
            let y = coord(1, j);
            for i in 1..ns[0] - 1 {
                let x = coord(0, i);
                samples[node_id(i, j, k)] = lattice.solid_scalar(&Point3::new(x, y, z));
            }
        }
    }

    let mut mesh = TriMesh::default();
    let mut edge_vertex: HashMap<(usize, usize), u32> = HashMap::new();
    let position = |id: usize| -> Point3<f64> {
        let i = id % ns[0];
        let j = (id / ns[0]) % ns[1];
        let k = id / (ns[0] * ns[1]);
        Point3::new(coord(0, i), coord(1, j), coord(2, k))
    };

    for k in 0..ns[2] - 1 {
        for j in 0..ns[1] - 1 {
            for i in 0..ns[0] - 1 {
                let ids: [usize; 8] = std::array::from_fn(|c| {
                    node_id(i + CORNER[c][0], j + CORNER[c][1], k + CORNER[c][2])
                });
                for tet in &TETS {
                    let tid: [usize; 4] = std::array::from_fn(|v| ids[tet[v]]);
                    let ts: [f64; 4] = std::array::from_fn(|v| samples[tid[v]]);
                    let mut mask = 0u8;
                    for (v, &s) in ts.iter().enumerate() {
                        if s >= 0.0 {
                            mask |= 1 << v;
                        }
                    }
                    for tri in tet_case(mask) {
                        let mut vid = [0u32; 3];
                        for (slot, &(a, b)) in tri.iter().enumerate() {
                            let key = (tid[a].min(tid[b]), tid[a].max(tid[b]));
                            vid[slot] = *edge_vertex.entry(key).or_insert_with(|| {
                                let (pa, pb) = (position(key.0), position(key.1));
                                let (sa, sb) = (samples[key.0], samples[key.1]);
                                let t = (sa / (sa - sb)).clamp(T_CLAMP, 1.0 - T_CLAMP);
                                let idx = mesh.vertices.len() as u32;
                                mesh.vertices.push(pa + (pb - pa) * t);
                                idx
                            });
                        }
                        mesh.triangles.push(vid);
                    }
                }
            }
        }
    }

    if mesh.triangles.is_empty() {
        return Err(GeometryError::EmptySurface);
    }
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ImplicitLattice;

    fn cell_domain() -> Box3 {
        Box3::cube(5.0)
    }

    #[test]
    fn half_density_surface_encloses_half_the_cell() {
        let lat = ImplicitLattice::gyroid_network(5.0, 0.0);
        let mesh = extract_surface(&lat, &cell_domain(), [64, 64, 64]).unwrap();
        let rd = mesh.volume() / cell_domain().volume();
        assert!((rd - 0.5).abs() < 0.005, "enclosed fraction {rd}");
    }

    #[test]
    fn surfaces_are_closed_across_offsets() {
        for c in [-0.3, 0.0, 0.3] {
            let lat = ImplicitLattice::gyroid_network(5.0, c);
            let mesh = extract_surface(&lat, &cell_domain(), [24, 24, 24]).unwrap();
            assert!(mesh.is_closed(), "open surface at offset {c}");
            assert!(mesh.volume() > 0.0);
        }
    }

    #[test]
    fn fully_solid_domain_reduces_to_a_box() {
        let lat = ImplicitLattice::gyroid_network(5.0, -1.6);
        let mesh = extract_surface(&lat, &cell_domain(), [8, 8, 8]).unwrap();
        assert!(mesh.is_closed());
        let rd = mesh.volume() / cell_domain().volume();
        assert!((rd - 1.0).abs() < 0.01, "enclosed fraction {rd}");
    }

    #[test]
    fn empty_domain_is_an_error() {
        let lat = ImplicitLattice::gyroid_network(5.0, 1.6);
        let err = extract_surface(&lat, &cell_domain(), [16, 16, 16]).unwrap_err();
        assert!(matches!(err, GeometryError::EmptySurface));
    }

    #[test]
    fn vertices_stay_within_a_clamp_step_of_the_domain() {
        let lat = ImplicitLattice::gyroid_network(5.0, 0.2);
        let mesh = extract_surface(&lat, &cell_domain(), [20, 20, 20]).unwrap();
        let h = 5.0 / 20.0;
        let slack = 1e-3 * h + 1e-12;
        for v in &mesh.vertices {
            for axis in 0..3 {
                assert!(v[axis] > -slack && v[axis] < 5.0 + slack, "vertex {v:?}");
            }
        }
    }

    #[test]
    fn no_degenerate_triangles() {
        let lat = ImplicitLattice::gyroid_network(5.0, 0.0);
        let mesh = extract_surface(&lat, &cell_domain(), [16, 16, 16]).unwrap();
        for t in &mesh.triangles {
            let a = mesh.vertices[t[0] as usize];
            let b = mesh.vertices[t[1] as usize];
            let c = mesh.vertices[t[2] as usize];
            let area = 0.5 * (b - a).cross(&(c - a)).norm();
            assert!(area > 1e-12, "triangle area {area}");
        }
    }

    #[test]
    fn extraction_is_deterministic() {
        let lat = ImplicitLattice::gyroid_network(5.0, 0.1);
        let a = extract_surface(&lat, &cell_domain(), [12, 12, 12]).unwrap();
        let b = extract_surface(&lat, &cell_domain(), [12, 12, 12]).unwrap();
        assert_eq!(a.vertices, b.vertices);
        assert_eq!(a.triangles, b.triangles);
    }
}
