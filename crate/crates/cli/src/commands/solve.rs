//! `solve`: mesh one `(h, MJ)` point, run the compression analysis, and
//! export the result row plus a VTK with displacement and stress fields.

use super::{announce, check_point, ensure_out_dir, point_slug};
use crate::config::StudyConfig;
use crate::csvio::{write_csv_file, SweepRow, SOLVE_HEADER};
use crate::pipeline::{build_lattice, mesh_point, solve_point};
use anyhow::{Context, Result};
use tpms_core::fem::element_von_mises;
use tpms_core::mesh::{write_vtk, VtkFields};

pub fn run(config: &StudyConfig, h: Option<f64>, mj: Option<f64>) -> Result<()> {
    let out = ensure_out_dir(config)?;
    let hash = config.hash();
    let h = h.unwrap_or(config.element_sizes_mm[0]);
    let mj = mj.unwrap_or(config.min_scaled_jacobians[0]);
    check_point(config, h, mj)?;

    let lattice = build_lattice(config)?;
    let (mesh, report) = mesh_point(config, &lattice, h, mj)?;
    let result = solve_point(config, &mesh)
        .with_context(|| format!("solve stage failed at (h={h}, MJ={mj})"))?;

    let row = SweepRow {
        h,
        mj,
        elements: report.element_count,
        rd_mesh: report.relative_density,
        force_n: result.force,
        sigma_mpa: result.sigma_e,
        e_eff_mpa: result.e_eff,
        iters: result.iterations,
        residual: result.residual,
    };
    let csv_path = out.join(format!("solve_{}.csv", point_slug(h, mj)));
    write_csv_file(&csv_path, &hash, SOLVE_HEADER, [row.to_row()])?;
    announce(&csv_path);

    let von_mises = element_von_mises(&mesh, &config.material.to_spec(), &result.displacement)
        .context("evaluate element stresses")?;
    let vtk_path = out.join(format!("solve_{}.vtk", point_slug(h, mj)));
    write_vtk(
        &mesh,
        &vtk_path,
        &VtkFields {
            point_vectors: vec![("displacement_mm", &result.displacement)],
            cell_scalars: vec![("von_mises_MPa", &von_mises)],
            ..Default::default()
        },
    )
    .with_context(|| format!("write {}", vtk_path.display()))?;
    announce(&vtk_path);
    Ok(())
}
