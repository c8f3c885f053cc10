//! Mesh instantiation from an occupancy grid.

use super::classify::{OccupancyGrid, VoxelGridSpec};
use super::{Face, MeshError};
use nalgebra::Point3;
use std::collections::HashMap;

/// Corner offsets in VTK hexahedron order: bottom quad counterclockwise,
/// then the top quad.
const CORNER: [[usize; 3]; 8] = [
    [0, 0, 0],
    [1, 0, 0],
    [1, 1, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 0, 1],
    [1, 1, 1],
    [0, 1, 1],
];

/// Corners of each local cell face (used for skin detection).
pub(super) const FACE_CORNERS: [[usize; 4]; 6] = [
    [0, 3, 7, 4], // -x
    [1, 2, 6, 5], // +x
    [0, 1, 5, 4], // -y
    [3, 2, 6, 7], // +y
    [0, 1, 2, 3], // -z
    [4, 5, 6, 7], // +z
];

/// Hexahedral mesh on (initially) a uniform voxel lattice.
///
/// Node ids ascend in (z, y, x)-lexicographic scan order of the node
/// lattice; element ids ascend in the same scan order of occupied cells.
/// Both orders are deterministic functions of the occupancy grid.
#[derive(Debug, Clone)]
pub struct HexMesh {
    pub nodes: Vec<Point3<f64>>,
    /// Per-node integer lattice coordinates at build time.
    pub node_lattice: Vec<[u32; 3]>,
    /// True for nodes on the mesh skin: incident to at least one element
    /// face not shared by two elements.
    pub boundary: Vec<bool>,
    /// Per-node design-domain face mask (see [`Face::bit`]); identifies
    /// nodes whose coordinates are pinned to domain planes.
    pub wall_mask: Vec<u8>,
    pub elements: Vec<[u32; 8]>,
    /// Per-element cell coordinates in the voxel grid.
    pub element_cells: Vec<[u32; 3]>,
    /// Voxel grid the mesh was built on.
    pub grid_dims: [usize; 3],
    pub h: f64,
    pub domain: crate::Box3,
}

impl HexMesh {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn element_count(&self) -> usize {
        self.elements.len()
    }

    pub fn element_corners(&self, e: usize) -> [Point3<f64>; 8] {
        std::array::from_fn(|c| self.nodes[self.elements[e][c] as usize])
    }

    pub fn node_on_face(&self, node: usize, face: Face) -> bool {
        self.wall_mask[node] & face.bit() != 0
    }

    /// Ids of all nodes on a domain face, ascending.
    pub fn nodes_on_face(&self, face: Face) -> Vec<u32> {
        (0..self.node_count() as u32)
            .filter(|&n| self.node_on_face(n as usize, face))
            .collect()
    }

    /// Recompute skin flags from current connectivity (used after component
    /// filtering).
    pub(super) fn recompute_boundary(&mut self) {
        let mut face_count: HashMap<[u32; 4], u8> = HashMap::new();
        for conn in &self.elements {
            for fc in &FACE_CORNERS {
                let mut key = [conn[fc[0]], conn[fc[1]], conn[fc[2]], conn[fc[3]]];
                key.sort_unstable();
                *face_count.entry(key).or_insert(0) += 1;
            }
        }
        self.boundary = vec![false; self.node_count()];
        for (key, count) in &face_count {
            if *count == 1 {
                for &n in key {
                    self.boundary[n as usize] = true;
                }
            }
        }
    }
}

/// Instantiate nodes and elements for the occupied cells of `grid`.
///
/// Nodes shared between neighboring cells are emitted once (integer-lattice
/// deduplication, no floating-point welding). Fails with
/// [`MeshError::EmptyMesh`] when no cell is occupied.
pub fn build_voxel_mesh(spec: &VoxelGridSpec, grid: &OccupancyGrid) -> Result<HexMesh, MeshError> {
    assert_eq!(spec.dims, grid.dims(), "spec and occupancy dims disagree");
    let [nx, ny, nz] = spec.dims;
    let nodes_per_axis = [nx + 1, ny + 1, nz + 1];
    let lattice_id =
        |i: usize, j: usize, k: usize| i + nodes_per_axis[0] * (j + nodes_per_axis[1] * k);

    // First pass: mark used lattice nodes.
    let mut used = vec![false; nodes_per_axis.iter().product()];
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                if grid.get(i, j, k) {
                    for c in &CORNER {
                        used[lattice_id(i + c[0], j + c[1], k + c[2])] = true;
                    }
                }
            }
        }
    }

    // Second pass: assign ids in scan order and place coordinates.
    let mut node_id = vec![u32::MAX; used.len()];
    let mut nodes = Vec::new();
    let mut node_lattice = Vec::new();
    let mut wall_mask = Vec::new();
    for k in 0..=nz {
        for j in 0..=ny {
            for i in 0..=nx {
                if !used[lattice_id(i, j, k)] {
                    continue;
                }
                node_id[lattice_id(i, j, k)] = nodes.len() as u32;
                nodes.push(Point3::new(
                    spec.domain.min.x + i as f64 * spec.h,
                    spec.domain.min.y + j as f64 * spec.h,
                    spec.domain.min.z + k as f64 * spec.h,
                ));
                node_lattice.push([i as u32, j as u32, k as u32]);
                let mut mask = 0u8;
                if i == 0 {
                    mask |= Face::XMin.bit();
                }
                if i == nx {
                    mask |= Face::XMax.bit();
                }
                if j == 0 {
                    mask |= Face::YMin.bit();
                }
                if j == ny {
                    mask |= Face::YMax.bit();
                }
                if k == 0 {
                    mask |= Face::ZMin.bit();
                }
                if k == nz {
                    mask |= Face::ZMax.bit();
                }
                wall_mask.push(mask);
            }
        }
    }

    let mut elements = Vec::new();
    let mut element_cells = Vec::new();
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                if !grid.get(i, j, k) {
                    continue;
                }
                let conn: [u32; 8] = std::array::from_fn(|c| {
                    node_id[lattice_id(i + CORNER[c][0], j + CORNER[c][1], k + CORNER[c][2])]
                });
                elements.push(conn);
                element_cells.push([i as u32, j as u32, k as u32]);
            }
        }
    }

    if elements.is_empty() {
        return Err(MeshError::EmptyMesh);
    }
    let mut mesh = HexMesh {
        boundary: Vec::new(),
        nodes,
        node_lattice,
        wall_mask,
        elements,
        element_cells,
        grid_dims: spec.dims,
        h: spec.h,
        domain: spec.domain,
    };
    mesh.recompute_boundary();
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Box3;

    fn two_cell_column() -> (VoxelGridSpec, OccupancyGrid) {
        let spec = VoxelGridSpec::with_defaults(Box3::cube(2.0), 1.0).unwrap();
        let mut grid = OccupancyGrid::empty(spec.dims);
        grid.set(0, 0, 0, true);
        grid.set(0, 0, 1, true);
        (spec, grid)
    }

    #[test]
    fn single_cell_yields_unit_hex() {
        let spec = VoxelGridSpec::with_defaults(Box3::cube(1.0), 1.0).unwrap();
        let mut grid = OccupancyGrid::empty(spec.dims);
        grid.set(0, 0, 0, true);
        let mesh = build_voxel_mesh(&spec, &grid).unwrap();
        assert_eq!(mesh.node_count(), 8);
        assert_eq!(mesh.element_count(), 1);
        // Every node of the only cell is on the skin and on three walls.
        assert!(mesh.boundary.iter().all(|&b| b));
        for &mask in &mesh.wall_mask {
            assert_eq!(mask.count_ones(), 3);
        }
    }

    #[test]
    fn stacked_cells_share_their_interface_nodes() {
        let (spec, grid) = two_cell_column();
        let mesh = build_voxel_mesh(&spec, &grid).unwrap();
        assert_eq!(mesh.element_count(), 2);
        assert_eq!(mesh.node_count(), 12);
        // Top corners of the lower element are the bottom corners of the upper.
        let lower = mesh.elements[0];
        let upper = mesh.elements[1];
        assert_eq!(&lower[4..], &upper[..4]);
    }

    #[test]
    fn full_grid_has_interior_nodes_off_the_skin() {
        let spec = VoxelGridSpec::with_defaults(Box3::cube(10.0), 1.0).unwrap();
        let mut grid = OccupancyGrid::empty(spec.dims);
        for i in 0..10 {
            for j in 0..10 {
                for k in 0..10 {
                    grid.set(i, j, k, true);
                }
            }
        }
        let mesh = build_voxel_mesh(&spec, &grid).unwrap();
        assert_eq!(mesh.node_count(), 11 * 11 * 11);
        assert_eq!(mesh.element_count(), 1000);
        let interior = mesh.boundary.iter().filter(|&&b| !b).count();
        assert_eq!(interior, 9 * 9 * 9);
    }

    #[test]
    fn wall_masks_match_lattice_positions() {
        let (spec, grid) = two_cell_column();
        let mesh = build_voxel_mesh(&spec, &grid).unwrap();
        for (n, lat) in mesh.node_lattice.iter().enumerate() {
            assert_eq!(mesh.node_on_face(n, Face::XMin), lat[0] == 0);
            assert_eq!(mesh.node_on_face(n, Face::XMax), lat[0] == 2);
            assert_eq!(mesh.node_on_face(n, Face::ZMin), lat[2] == 0);
            assert_eq!(mesh.node_on_face(n, Face::ZMax), lat[2] == 2);
        }
        // The column occupies x in [0, 1] of a domain reaching 2, so no node
        // can sit on the x-max face.
        assert!(mesh.nodes_on_face(Face::XMax).is_empty());
        assert_eq!(mesh.nodes_on_face(Face::ZMin).len(), 4);
        assert_eq!(mesh.nodes_on_face(Face::ZMax).len(), 4);
    }

    #[test]
    fn node_ids_ascend_in_scan_order() {
        let (spec, grid) = two_cell_column();
        let mesh = build_voxel_mesh(&spec, &grid).unwrap();
        let keys: Vec<[u32; 3]> = mesh
            .node_lattice
            .iter()
            .map(|l| [l[2], l[1], l[0]])
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn empty_grid_is_an_error() {
        let spec = VoxelGridSpec::with_defaults(Box3::cube(1.0), 0.5).unwrap();
        let grid = OccupancyGrid::empty(spec.dims);
        assert!(matches!(
            build_voxel_mesh(&spec, &grid),
            Err(MeshError::EmptyMesh)
        ));
    }
}
