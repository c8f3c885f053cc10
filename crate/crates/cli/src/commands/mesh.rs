//! `mesh`: build one mesh, export it as VTK with the per-element scaled
//! Jacobian attached, and write a one-row quality CSV.

use super::{announce, check_point, ensure_out_dir, point_slug};
use crate::config::StudyConfig;
use crate::csvio::{write_csv_file, MESH_HEADER};
use crate::pipeline::{build_lattice, mesh_point};
use anyhow::{Context, Result};
use tpms_core::mesh::{scaled_jacobian, write_vtk, VtkFields};

pub fn run(config: &StudyConfig, h: Option<f64>, mj: Option<f64>) -> Result<()> {
    let out = ensure_out_dir(config)?;
    let hash = config.hash();
    let h = h.unwrap_or(config.element_sizes_mm[0]);
    let mj = mj.unwrap_or(config.min_scaled_jacobians[0]);
    check_point(config, h, mj)?;

    let lattice = build_lattice(config)?;
    let (mesh, report) = mesh_point(config, &lattice, h, mj)?;

    let sj: Vec<f64> = (0..mesh.element_count())
        .map(|e| scaled_jacobian(&mesh.element_corners(e)).map_err(anyhow::Error::from))
        .collect::<Result<_>>()
        .context("evaluate element quality")?;
    let vtk_path = out.join(format!("mesh_{}.vtk", point_slug(h, mj)));
    write_vtk(
        &mesh,
        &vtk_path,
        &VtkFields {
            cell_scalars: vec![("scaled_jacobian", &sj)],
            ..Default::default()
        },
    )
    .with_context(|| format!("write {}", vtk_path.display()))?;
    announce(&vtk_path);

    let csv_path = out.join(format!("mesh_{}.csv", point_slug(h, mj)));
    let row = format!(
        "{h},{mj},{},{},{},{}",
        report.element_count,
        report.elements_per_cell,
        report.min_scaled_jacobian,
        report.relative_density
    );
    write_csv_file(&csv_path, &hash, MESH_HEADER, [row])?;
    announce(&csv_path);
    Ok(())
}
