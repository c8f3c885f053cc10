//! Voxel hexahedral meshing of implicit solids.
//!
//! The pipeline is: classify grid cells against the solid ([`classify_voxels`]),
//! instantiate nodes and elements ([`build_voxel_mesh`]), optionally drop
//! face-disconnected debris ([`filter_components`]), then optionally snap
//! boundary nodes onto the implicit surface under an element-quality floor
//! ([`conform_to_surface`]). Quality is measured by the corner scaled
//! Jacobian throughout.

mod build;
mod classify;
mod components;
mod conform;
mod jacobian;
mod quality;
mod vtk;

pub use build::{build_voxel_mesh, HexMesh};
pub use classify::{classify_voxels, ClassifyRule, OccupancyGrid, VoxelGridSpec};
pub use components::{filter_components, ComponentFilter};
pub use conform::{conform_to_surface, ConformStats, DEFAULT_MAX_PASSES};
pub use jacobian::{corner_scaled_jacobians, scaled_jacobian};
pub use quality::{hex_volume, mesh_relative_density, quality_report, MeshQualityReport};
pub use vtk::{write_vtk, VtkFields};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeshError {
    /// The domain extent along an axis is not an integer multiple of the
    /// element size.
    #[error("domain extent {extent} on axis {axis} is not divisible by element size {h}")]
    DomainNotDivisible { axis: usize, extent: f64, h: f64 },
    /// A hexahedron has an edge shorter than 1e-12, so its scaled Jacobian
    /// is undefined.
    #[error("hexahedron has a degenerate edge of length {length:.3e}")]
    ZeroEdge { length: f64 },
    /// Classification produced no occupied cells.
    #[error("no occupied voxels: the solid does not intersect the grid")]
    EmptyMesh,
    /// No connected component of the mesh reaches both z faces.
    #[error("no connected component spans the domain from bottom to top")]
    NoSpanningComponent,
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

/// A face of the axis-aligned meshing domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Face {
    XMin,
    XMax,
    YMin,
    YMax,
    ZMin,
    ZMax,
}

impl Face {
    /// Bit used for this face in per-node boundary masks.
    pub fn bit(self) -> u8 {
        match self {
            Face::XMin => 1 << 0,
            Face::XMax => 1 << 1,
            Face::YMin => 1 << 2,
            Face::YMax => 1 << 3,
            Face::ZMin => 1 << 4,
            Face::ZMax => 1 << 5,
        }
    }

    /// The axis this face is normal to.
    pub fn axis(self) -> usize {
        match self {
            Face::XMin | Face::XMax => 0,
            Face::YMin | Face::YMax => 1,
            Face::ZMin | Face::ZMax => 2,
        }
    }
}
