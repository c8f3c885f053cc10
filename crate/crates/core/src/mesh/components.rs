//! Connected-component filtering of hexahedral meshes.
//!
//! Voxel classification of a thin or low-density solid can leave elements
//! that are face-disconnected from the load path. Such debris carries no
//! stress but can make the stiffness system singular, so it is dropped
//! before analysis. Connectivity is through shared element faces only.

use super::build::{HexMesh, FACE_CORNERS};
use super::{Face, MeshError};
use std::collections::HashMap;

/// Which components survive filtering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentFilter {
    /// Keep every component with at least one node on the bottom face and
    /// one on the top face; error if there is none.
    SpanningZ,
    /// Keep only the component with the most elements (ties broken by
    /// lowest element id).
    Largest,
}

/// Union-find over element ids.
struct Dsu {
    parent: Vec<u32>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = x;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Attach the higher root to the lower so roots stay the smallest
            // element id of their component (deterministic tie-breaking).
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// Apply `filter` and return the surviving mesh with densely renumbered
/// nodes and elements (original relative order preserved).
pub fn filter_components(mesh: &HexMesh, filter: ComponentFilter) -> Result<HexMesh, MeshError> {
    let n_elems = mesh.element_count();
    let mut dsu = Dsu::new(n_elems);
    let mut face_owner: HashMap<[u32; 4], u32> = HashMap::new();
    for (e, conn) in mesh.elements.iter().enumerate() {
        for fc in &FACE_CORNERS {
            let mut key = [conn[fc[0]], conn[fc[1]], conn[fc[2]], conn[fc[3]]];
            key.sort_unstable();
            match face_owner.entry(key) {
                std::collections::hash_map::Entry::Occupied(other) => {
                    dsu.union(*other.get(), e as u32);
                }
                std::collections::hash_map::Entry::Vacant(slot) => {
                    slot.insert(e as u32);
                }
            }
        }
    }

    // Per component root: element count, touches bottom, touches top.
    let mut stats: HashMap<u32, (usize, bool, bool)> = HashMap::new();
    for (e, conn) in mesh.elements.iter().enumerate() {
        let root = dsu.find(e as u32);
        let entry = stats.entry(root).or_insert((0, false, false));
        entry.0 += 1;
        for &n in conn {
            entry.1 |= mesh.node_on_face(n as usize, Face::ZMin);
            entry.2 |= mesh.node_on_face(n as usize, Face::ZMax);
        }
    }

    let kept_root = |root: u32, stats: &HashMap<u32, (usize, bool, bool)>| match filter {
        ComponentFilter::SpanningZ => {
            let s = stats[&root];
            s.1 && s.2
        }
        ComponentFilter::Largest => {
            let best = stats
                .iter()
                .map(|(&r, &(count, _, _))| (count, std::cmp::Reverse(r)))
                .max()
                .map(|(_, std::cmp::Reverse(r))| r)
                .expect("mesh has at least one element");
            root == best
        }
    };

    let keep: Vec<bool> = (0..n_elems as u32)
        .map(|e| kept_root(dsu.find(e), &stats))
        .collect();
    if !keep.iter().any(|&k| k) {
        return Err(MeshError::NoSpanningComponent);
    }
    if keep.iter().all(|&k| k) {
        return Ok(mesh.clone());
    }

    // Dense renumbering in original node-id order.
    let mut used = vec![false; mesh.node_count()];
    for (e, conn) in mesh.elements.iter().enumerate() {
        if keep[e] {
            for &n in conn {
                used[n as usize] = true;
            }
        }
    }
    let mut new_id = vec![u32::MAX; mesh.node_count()];
    let mut nodes = Vec::new();
    let mut node_lattice = Vec::new();
    let mut wall_mask = Vec::new();
    for n in 0..mesh.node_count() {
        if used[n] {
            new_id[n] = nodes.len() as u32;
            nodes.push(mesh.nodes[n]);
            node_lattice.push(mesh.node_lattice[n]);
            wall_mask.push(mesh.wall_mask[n]);
        }
    }
    let mut elements = Vec::new();
    let mut element_cells = Vec::new();
    for (e, conn) in mesh.elements.iter().enumerate() {
        if keep[e] {
            elements.push(std::array::from_fn(|c| new_id[conn[c] as usize]));
            element_cells.push(mesh.element_cells[e]);
        }
    }

    let mut out = HexMesh {
        nodes,
        node_lattice,
        boundary: Vec::new(),
        wall_mask,
        elements,
        element_cells,
        grid_dims: mesh.grid_dims,
        h: mesh.h,
        domain: mesh.domain,
    };
    out.recompute_boundary();
    Ok(out)
}
