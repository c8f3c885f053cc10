//! Shared pipeline stages: lattice construction, meshing, solving, and the
//! (h, MJ) sweep with its optional thread fan-out.
//!
//! Every stage failure is wrapped with the stage name and, where it applies,
//! the `(h, MJ)` pair, so a failing sweep names the exact job that broke.

use crate::config::{CalibrationConfig, DensityTarget, StudyConfig};
use crate::csvio::SweepRow;
use anyhow::{anyhow, Context, Result};
use nalgebra::Vector3;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use tpms_core::geometry::{
    calibrate_offset, DensityCalibration, ImplicitLattice, Sampler, Topology,
};
use tpms_core::geometry::DensityRamp;
use tpms_core::mesh::{
    build_voxel_mesh, classify_voxels, conform_to_surface, filter_components, quality_report,
    ComponentFilter, HexMesh, MeshQualityReport, VoxelGridSpec, DEFAULT_MAX_PASSES,
};
use tpms_core::fem::{run_compression, CgOptions, CompressionResult, CompressionSetup};

/// Density calibration table for the configured field family and topology.
///
/// The network table is the precomputed standard; sheet tables are sampled on
/// demand over the sheet's admissible offset range (strictly positive).
pub fn calibration_table(config: &StudyConfig) -> DensityCalibration {
    let l0 = config.lattice.cell_size_mm;
    match Topology::from(config.lattice.topology) {
        Topology::Network => DensityCalibration::gyroid_network(l0),
        Topology::Sheet => {
            let offsets: Vec<f64> = (1..=26).map(|i| 0.05 * i as f64).collect();
            DensityCalibration::build(
                config.lattice.kind.into(),
                Topology::Sheet,
                Vector3::new(l0, l0, l0),
                &offsets,
                Sampler::Grid { n: 64 },
            )
        }
    }
}

/// Level offset achieving `rd`, by table inversion or seeded Monte-Carlo
/// bisection depending on the configured calibration method.
pub fn offset_for(config: &StudyConfig, table: &DensityCalibration, rd: f64) -> Result<f64> {
    match config.calibration {
        CalibrationConfig::Table => Ok(table.offset_for_rd(rd)?),
        CalibrationConfig::MonteCarlo { samples, rd_tol } => {
            let topology = Topology::from(config.lattice.topology);
            let bracket = match topology {
                Topology::Network => (-1.45, 1.45),
                Topology::Sheet => (0.0, 1.45),
            };
            let l0 = config.lattice.cell_size_mm;
            Ok(calibrate_offset(
                config.lattice.kind.into(),
                topology,
                Vector3::new(l0, l0, l0),
                rd,
                bracket,
                Sampler::MonteCarlo {
                    n: samples,
                    seed: config.seed,
                },
                rd_tol,
            )?)
        }
    }
}

/// Build the configured lattice (uniform or graded).
pub fn build_lattice(config: &StudyConfig) -> Result<ImplicitLattice> {
    let l0 = config.lattice.cell_size_mm;
    let cell = Vector3::new(l0, l0, l0);
    let kind = config.lattice.kind.into();
    let topology = Topology::from(config.lattice.topology);
    let table = calibration_table(config);
    match config.density_target() {
        DensityTarget::Uniform(rd) => {
            let offset = offset_for(config, &table, rd)
                .with_context(|| format!("calibrate offset for RD {rd}"))?;
            Ok(ImplicitLattice::new(kind, topology, cell, offset))
        }
        DensityTarget::Graded { rd_bottom, rd_top } => {
            let ramp = DensityRamp {
                rd_bottom,
                rd_top,
                z_bottom: 0.0,
                z_top: config.edge_mm(),
            };
            Ok(ImplicitLattice::graded_z(kind, topology, cell, ramp, table)
                .context("build graded lattice")?)
        }
    }
}

/// Classify, build, spanning-filter and (below MJ = 1) conform one mesh.
pub fn mesh_point(
    config: &StudyConfig,
    lattice: &ImplicitLattice,
    h: f64,
    mj: f64,
) -> Result<(HexMesh, MeshQualityReport)> {
    let stage = |what: &str| format!("{what} stage failed at (h={h}, MJ={mj})");
    let spec =
        VoxelGridSpec::with_defaults(config.domain(), h).with_context(|| stage("classify"))?;
    let grid = classify_voxels(lattice, &spec);
    let mesh = build_voxel_mesh(&spec, &grid).with_context(|| stage("build"))?;
    let mesh =
        filter_components(&mesh, ComponentFilter::SpanningZ).with_context(|| stage("filter"))?;
    let mesh = if mj < 1.0 {
        conform_to_surface(mesh, lattice, mj, DEFAULT_MAX_PASSES).0
    } else {
        mesh
    };
    let report = quality_report(&mesh, config.cells_per_axis);
    Ok((mesh, report))
}

/// Run the compression analysis on a prepared mesh.
pub fn solve_point(config: &StudyConfig, mesh: &HexMesh) -> Result<CompressionResult> {
    let material = config.material.to_spec();
    let setup = CompressionSetup::new(config.displacement_mm);
    let opts = CgOptions {
        rel_tol: config.solver.rel_tol,
        max_iter: config.solver.max_iterations,
    };
    Ok(run_compression(mesh, &material, &setup, &opts)?)
}

/// Mesh and solve one sweep point.
fn run_point(
    config: &StudyConfig,
    lattice: &ImplicitLattice,
    h: f64,
    mj: f64,
) -> Result<SweepRow> {
    let (mesh, report) = mesh_point(config, lattice, h, mj)?;
    let result =
        solve_point(config, &mesh).with_context(|| format!("solve stage failed at (h={h}, MJ={mj})"))?;
    Ok(SweepRow {
        h,
        mj,
        elements: report.element_count,
        rd_mesh: report.relative_density,
        force_n: result.force,
        sigma_mpa: result.sigma_e,
        e_eff_mpa: result.e_eff,
        iters: result.iterations,
        residual: result.residual,
    })
}

/// Solve every `(h, MJ)` pair of the study, `jobs` at a time.
///
/// Rows come back in the configuration's `(h, MJ)` order regardless of the
/// job count, so sweep output is deterministic.
pub fn sweep_rows(config: &StudyConfig, jobs: usize) -> Result<Vec<SweepRow>> {
    let lattice = build_lattice(config)?;
    let points: Vec<(f64, f64)> = config
        .element_sizes_mm
        .iter()
        .flat_map(|&h| config.min_scaled_jacobians.iter().map(move |&mj| (h, mj)))
        .collect();
    let workers = jobs.max(1).min(points.len());
    if workers <= 1 {
        return points
            .iter()
            .map(|&(h, mj)| run_point(config, &lattice, h, mj))
            .collect();
    }

    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<SweepRow>>>> =
        Mutex::new((0..points.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= points.len() {
                    break;
                }
                let (h, mj) = points[i];
                let row = run_point(config, &lattice, h, mj);
                results.lock().expect("poisoned results")[i] = Some(row);
            });
        }
    });
    let collected = results.into_inner().expect("poisoned results");
    collected
        .into_iter()
        .enumerate()
        .map(|(i, slot)| slot.unwrap_or_else(|| Err(anyhow!("job {i} vanished"))))
        .collect()
}
