//! `report`: end-to-end convergence report. Takes sweep results (given
//! explicitly, found in the output directory, or computed on the spot),
//! groups them into one grid series per MJ value, and emits a GCI report
//! row and a plotted series for each.

use super::{announce, ensure_out_dir, gci_row};
use crate::config::StudyConfig;
use crate::csvio::{read_sweep_csv, write_csv_file, SweepRow, GCI_HEADER, SOLVE_HEADER};
use crate::pipeline::sweep_rows;
use crate::svg::{line_plot, Series};
use anyhow::{Context, Result};
use std::path::Path;
use tpms_core::convergence::{gci_report, GciConvention, MeshStudy};

pub fn run(
    config: &StudyConfig,
    results: Option<&Path>,
    convention: GciConvention,
    jobs: usize,
) -> Result<()> {
    let out = ensure_out_dir(config)?;
    let hash = config.hash();
    let rows: Vec<SweepRow> = match results {
        Some(path) => read_sweep_csv(path)?,
        None => {
            let sweep_path = out.join("sweep.csv");
            if sweep_path.exists() {
                read_sweep_csv(&sweep_path)?
            } else {
                let rows = sweep_rows(config, jobs)?;
                write_csv_file(
                    &sweep_path,
                    &hash,
                    SOLVE_HEADER,
                    rows.iter().map(SweepRow::to_row),
                )?;
                announce(&sweep_path);
                rows
            }
        }
    };

    // One series per MJ value, in order of first appearance.
    let mut mj_values: Vec<f64> = Vec::new();
    for row in &rows {
        if !mj_values.contains(&row.mj) {
            mj_values.push(row.mj);
        }
    }

    let mut report_rows = Vec::new();
    let mut series = Vec::new();
    for &mj in &mj_values {
        let points: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.mj == mj)
            .map(|r| (r.h, r.e_eff_mpa))
            .collect();
        series.push(Series {
            label: format!("MJ={mj}"),
            points: points.clone(),
        });
        // The GCI takes exactly three grids; longer series use the finest three.
        let entries = if points.len() > 3 {
            points[points.len() - 3..].to_vec()
        } else {
            points
        };
        let study = MeshStudy::new(format!("mj{mj}"), entries)
            .with_context(|| format!("grid series MJ={mj}"))?;
        let report = gci_report(&study, None, convention)
            .with_context(|| format!("GCI analysis of series MJ={mj}"))?;
        report_rows.push(gci_row(&report));
    }

    let csv_path = out.join("report.csv");
    write_csv_file(&csv_path, &hash, GCI_HEADER, report_rows)?;
    announce(&csv_path);

    let svg_path = out.join("report.svg");
    let plot = line_plot(
        "Effective modulus vs element size",
        "h (mm)",
        "E_eff (MPa)",
        &series,
        true,
    );
    std::fs::write(&svg_path, plot)
        .with_context(|| format!("write {}", svg_path.display()))?;
    announce(&svg_path);
    Ok(())
}
