//! Legacy-ASCII VTK export of hex meshes with attached fields.

use super::build::HexMesh;
use super::MeshError;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

/// Optional nodal and element fields to embed in the VTK file. Vector fields
/// are interleaved `x y z` per node (length `3 * node_count`).
#[derive(Debug, Default)]
pub struct VtkFields<'a> {
    pub point_scalars: Vec<(&'a str, &'a [f64])>,
    pub point_vectors: Vec<(&'a str, &'a [f64])>,
    pub cell_scalars: Vec<(&'a str, &'a [f64])>,
}

/// Write the mesh (cell type 12, hexahedron) and fields to `path`.
pub fn write_vtk(
    mesh: &HexMesh,
    path: impl AsRef<Path>,
    fields: &VtkFields,
) -> Result<(), MeshError> {
    let io_err = |e: std::io::Error| MeshError::Io {
        context: format!("write {}", path.as_ref().display()),
        source: e,
    };
    let file = File::create(path.as_ref()).map_err(io_err)?;
    let mut w = BufWriter::new(file);
    write_body(mesh, &mut w, fields).map_err(io_err)
}

fn write_body<W: Write>(mesh: &HexMesh, w: &mut W, fields: &VtkFields) -> std::io::Result<()> {
    let n = mesh.node_count();
    let m = mesh.element_count();
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "lattice hex mesh")?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET UNSTRUCTURED_GRID")?;
    writeln!(w, "POINTS {n} double")?;
    for p in &mesh.nodes {
        writeln!(w, "{} {} {}", p.x, p.y, p.z)?;
    }
    writeln!(w, "CELLS {m} {}", 9 * m)?;
    for conn in &mesh.elements {
        write!(w, "8")?;
        for id in conn {
            write!(w, " {id}")?;
        }
        writeln!(w)?;
    }
    writeln!(w, "CELL_TYPES {m}")?;
    for _ in 0..m {
        writeln!(w, "12")?;
    }

    if !fields.point_scalars.is_empty() || !fields.point_vectors.is_empty() {
        writeln!(w, "POINT_DATA {n}")?;
        for (name, data) in &fields.point_scalars {
            assert_eq!(data.len(), n, "point scalar {name} has wrong length");
            writeln!(w, "SCALARS {name} double 1")?;
            writeln!(w, "LOOKUP_TABLE default")?;
            for v in *data {
                writeln!(w, "{v}")?;
            }
        }
        for (name, data) in &fields.point_vectors {
            assert_eq!(data.len(), 3 * n, "point vector {name} has wrong length");
            writeln!(w, "VECTORS {name} double")?;
            for v in data.chunks_exact(3) {
                writeln!(w, "{} {} {}", v[0], v[1], v[2])?;
            }
        }
    }
    if !fields.cell_scalars.is_empty() {
        writeln!(w, "CELL_DATA {m}")?;
        for (name, data) in &fields.cell_scalars {
            assert_eq!(data.len(), m, "cell scalar {name} has wrong length");
            writeln!(w, "SCALARS {name} double 1")?;
            writeln!(w, "LOOKUP_TABLE default")?;
            for v in *data {
                writeln!(w, "{v}")?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_voxel_mesh, OccupancyGrid, VoxelGridSpec};
    use crate::Box3;

    fn tiny_mesh() -> HexMesh {
        let spec = VoxelGridSpec::with_defaults(Box3::cube(1.0), 1.0).unwrap();
        let mut grid = OccupancyGrid::empty(spec.dims);
        grid.set(0, 0, 0, true);
        build_voxel_mesh(&spec, &grid).unwrap()
    }

    /// A second mesh with irrational-looking coordinates to make the
    /// round-trip check meaningful.
    fn shifted_mesh() -> HexMesh {
        let mut mesh = tiny_mesh();
        for (n, p) in mesh.nodes.iter_mut().enumerate() {
            p.x += 0.123_456_789 * (n as f64 + 1.0);
            p.z -= 1.0 / 3.0;
        }
        mesh
    }

    #[test]
    fn file_structure_matches_legacy_format() {
        let mesh = tiny_mesh();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.vtk");
        let sj = vec![1.0];
        let disp = vec![0.0; 24];
        let fields = VtkFields {
            point_vectors: vec![("displacement", &disp)],
            cell_scalars: vec![("min_scaled_jacobian", &sj)],
            ..Default::default()
        };
        write_vtk(&mesh, &path, &fields).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# vtk DataFile Version 3.0");
        assert_eq!(lines[2], "ASCII");
        assert_eq!(lines[3], "DATASET UNSTRUCTURED_GRID");
        assert_eq!(lines[4], "POINTS 8 double");
        assert!(text.contains("CELLS 1 9"));
        assert!(text.contains("8 0 1 3 2 4 5 7 6"));
        assert!(text.contains("CELL_TYPES 1\n12"));
        assert!(text.contains("POINT_DATA 8"));
        assert!(text.contains("VECTORS displacement double"));
        assert!(text.contains("CELL_DATA 1"));
        assert!(text.contains("SCALARS min_scaled_jacobian double 1"));
    }

    #[test]
    fn round_trip_through_independent_reader() {
        let mesh = shifted_mesh();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rt.vtk");
        write_vtk(&mesh, &path, &VtkFields::default()).unwrap();

        let vtk = vtkio::Vtk::import(&path).unwrap();
        let vtkio::model::DataSet::UnstructuredGrid { pieces, .. } = vtk.data else {
            panic!("reader saw a different dataset type");
        };
        let vtkio::model::Piece::Inline(piece) = &pieces[0] else {
            panic!("expected inline piece");
        };
        let points: Vec<f64> = piece.points.clone().cast_into().unwrap();
        assert_eq!(points.len(), 3 * mesh.node_count());
        for (n, p) in mesh.nodes.iter().enumerate() {
            for axis in 0..3 {
                assert!(
                    (points[3 * n + axis] - p[axis]).abs() < 1e-6,
                    "node {n} axis {axis} came back as {}",
                    points[3 * n + axis]
                );
            }
        }
        assert_eq!(piece.cells.types.len(), mesh.element_count());
        assert!(piece
            .cells
            .types
            .iter()
            .all(|t| *t == vtkio::model::CellType::Hexahedron));
    }

    #[test]
    fn writes_without_fields() {
        let mesh = tiny_mesh();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bare.vtk");
        write_vtk(&mesh, &path, &VtkFields::default()).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(!text.contains("POINT_DATA"));
        assert!(!text.contains("CELL_DATA"));
    }
}
