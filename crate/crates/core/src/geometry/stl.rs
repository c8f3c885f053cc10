//! STL import/export for triangle surfaces.
//!
//! Both the 50-byte-record binary layout and the ASCII dialect are supported.
//! Vertices are written in 32-bit precision as the format requires; the
//! reader deduplicates vertices by exact bit pattern so a written-then-read
//! surface keeps its connectivity (and thus closedness).

use super::surface::TriMesh;
use super::GeometryError;
use nalgebra::{Point3, Vector3};
use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

/// On-disk STL flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StlMode {
    Binary,
    Ascii,
}

fn io_err(context: &str, source: std::io::Error) -> GeometryError {
    GeometryError::Io {
        context: context.to_string(),
        source,
    }
}

fn facet_normal(a: &Point3<f64>, b: &Point3<f64>, c: &Point3<f64>) -> Vector3<f64> {
    let n = (b - a).cross(&(c - a));
    let len = n.norm();
    if len > 0.0 {
        n / len
    } else {
        Vector3::zeros()
    }
}

/// Write `mesh` to `path` in the requested STL flavor. `name` labels the
/// solid in ASCII output (and the binary header comment).
pub fn write_stl(
    mesh: &TriMesh,
    path: impl AsRef<Path>,
    mode: StlMode,
    name: &str,
) -> Result<(), GeometryError> {
    let file = File::create(path.as_ref())
        .map_err(|e| io_err(&format!("create {}", path.as_ref().display()), e))?;
    let mut w = BufWriter::new(file);
    match mode {
        StlMode::Binary => write_binary(mesh, &mut w, name),
        StlMode::Ascii => write_ascii(mesh, &mut w, name),
    }
    .map_err(|e| io_err(&format!("write {}", path.as_ref().display()), e))
}

fn write_binary<W: Write>(mesh: &TriMesh, w: &mut W, name: &str) -> std::io::Result<()> {
    let mut header = [0u8; 80];
    let label = name.as_bytes();
    let n = label.len().min(80);
    header[..n].copy_from_slice(&label[..n]);
    w.write_all(&header)?;
    w.write_all(&(mesh.triangles.len() as u32).to_le_bytes())?;
    for t in &mesh.triangles {
        let a = mesh.vertices[t[0] as usize];
        let b = mesh.vertices[t[1] as usize];
        let c = mesh.vertices[t[2] as usize];
        let n = facet_normal(&a, &b, &c);
        for v in [n.x, n.y, n.z] {
            w.write_all(&(v as f32).to_le_bytes())?;
        }
        for p in [a, b, c] {
            for v in [p.x, p.y, p.z] {
                w.write_all(&(v as f32).to_le_bytes())?;
            }
        }
        w.write_all(&0u16.to_le_bytes())?;
    }
    Ok(())
}

fn write_ascii<W: Write>(mesh: &TriMesh, w: &mut W, name: &str) -> std::io::Result<()> {
    writeln!(w, "solid {name}")?;
    for t in &mesh.triangles {
        let a = mesh.vertices[t[0] as usize];
        let b = mesh.vertices[t[1] as usize];
        let c = mesh.vertices[t[2] as usize];
        let n = facet_normal(&a, &b, &c);
        // f32 payloads need 9 significant digits to round-trip exactly.
        writeln!(
            w,
            "  facet normal {:.9e} {:.9e} {:.9e}",
            n.x as f32, n.y as f32, n.z as f32
        )?;
        writeln!(w, "    outer loop")?;
        for p in [a, b, c] {
            writeln!(
                w,
                "      vertex {:.9e} {:.9e} {:.9e}",
                p.x as f32, p.y as f32, p.z as f32
            )?;
        }
        writeln!(w, "    endloop")?;
        writeln!(w, "  endfacet")?;
    }
    writeln!(w, "endsolid {name}")?;
    Ok(())
}

/// Read either STL flavor, deduplicating bit-identical vertices.
pub fn read_stl(path: impl AsRef<Path>) -> Result<TriMesh, GeometryError> {
    let mut file = File::open(path.as_ref())
        .map_err(|e| io_err(&format!("open {}", path.as_ref().display()), e))?;
    let mut bytes = Vec::new();
    file.read_to_end(&mut bytes)
        .map_err(|e| io_err(&format!("read {}", path.as_ref().display()), e))?;
    // ASCII files start with "solid" AND parse as text containing facets;
    // binary files may also start with "solid", so sniff the body too.
    let looks_ascii = bytes.starts_with(b"solid")
        && std::str::from_utf8(&bytes)
            .map(|s| s.contains("facet"))
            .unwrap_or(false);
    if looks_ascii {
        read_ascii(&bytes)
    } else {
        read_binary(&bytes)
    }
}

struct VertexDedup {
    mesh: TriMesh,
    seen: HashMap<[u32; 3], u32>,
}

impl VertexDedup {
    fn new() -> Self {
        Self {
            mesh: TriMesh::default(),
            seen: HashMap::new(),
        }
    }

    fn push_triangle(&mut self, corners: [[f32; 3]; 3]) {
        let mut ids = [0u32; 3];
        for (slot, c) in corners.iter().enumerate() {
            let key = [c[0].to_bits(), c[1].to_bits(), c[2].to_bits()];
            ids[slot] = *self.seen.entry(key).or_insert_with(|| {
                let id = self.mesh.vertices.len() as u32;
                self.mesh
                    .vertices
                    .push(Point3::new(c[0] as f64, c[1] as f64, c[2] as f64));
                id
            });
        }
        self.mesh.triangles.push(ids);
    }
}

fn read_binary(bytes: &[u8]) -> Result<TriMesh, GeometryError> {
    if bytes.len() < 84 {
        return Err(GeometryError::InvalidStl(format!(
            "binary STL needs at least 84 bytes, got {}",
            bytes.len()
        )));
    }
    let count = u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize;
    let expected = 84 + 50 * count;
    if bytes.len() < expected {
        return Err(GeometryError::InvalidStl(format!(
            "binary STL truncated: {} triangles need {expected} bytes, got {}",
            count,
            bytes.len()
        )));
    }
    let mut dedup = VertexDedup::new();
    for i in 0..count {
        let rec = &bytes[84 + 50 * i..84 + 50 * (i + 1)];
        let f = |off: usize| f32::from_le_bytes(rec[off..off + 4].try_into().unwrap());
        // Skip the stored normal (offsets 0..12); it is recomputed on write.
        let corners: [[f32; 3]; 3] =
            std::array::from_fn(|v| std::array::from_fn(|k| f(12 + 12 * v + 4 * k)));
        dedup.push_triangle(corners);
    }
    Ok(dedup.mesh)
}

fn read_ascii(bytes: &[u8]) -> Result<TriMesh, GeometryError> {
    let reader = BufReader::new(bytes);
    let mut dedup = VertexDedup::new();
    let mut pending: Vec<[f32; 3]> = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| io_err("read ascii stl", e))?;
        let mut words = line.split_whitespace();
        match words.next() {
            Some("vertex") => {
                let mut c = [0f32; 3];
                for slot in &mut c {
                    let w = words.next().ok_or_else(|| {
                        GeometryError::InvalidStl(format!(
                            "line {}: vertex needs three coordinates",
                            lineno + 1
                        ))
                    })?;
                    *slot = w.parse::<f32>().map_err(|_| {
                        GeometryError::InvalidStl(format!(
                            "line {}: bad coordinate {w:?}",
                            lineno + 1
                        ))
                    })?;
                }
                pending.push(c);
            }
            Some("endloop") => {
                if pending.len() != 3 {
                    return Err(GeometryError::InvalidStl(format!(
                        "line {}: loop has {} vertices, expected 3",
                        lineno + 1,
                        pending.len()
                    )));
                }
                dedup.push_triangle([pending[0], pending[1], pending[2]]);
                pending.clear();
            }
            _ => {}
        }
    }
    Ok(dedup.mesh)
}
