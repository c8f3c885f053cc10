//! `gci`: Richardson/GCI analysis of a three-grid study CSV (`h,f`).

use super::{announce, ensure_out_dir, gci_row};
use crate::config::StudyConfig;
use crate::csvio::{read_study_csv, write_csv_file, GCI_HEADER};
use crate::svg::{line_plot, Series};
use anyhow::{Context, Result};
use std::path::Path;
use tpms_core::convergence::{gci_report, GciConvention, MeshStudy};

pub fn run(
    config: &StudyConfig,
    study_path: &Path,
    convention: GciConvention,
    f_s: Option<f64>,
) -> Result<()> {
    let out = ensure_out_dir(config)?;
    let entries = read_study_csv(study_path)?;
    let label = study_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "study".to_string());

    let study = MeshStudy::new(label.clone(), entries.clone())
        .with_context(|| format!("grid study {}", study_path.display()))?;
    let report = gci_report(&study, f_s, convention)
        .with_context(|| format!("GCI analysis of {}", study_path.display()))?;

    let csv_path = out.join("gci.csv");
    write_csv_file(&csv_path, &config.hash(), GCI_HEADER, [gci_row(&report)])?;
    announce(&csv_path);

    let svg_path = out.join("gci.svg");
    let plot = line_plot(
        "Grid convergence",
        "h (mm)",
        "f",
        &[Series {
            label,
            points: entries,
        }],
        true,
    );
    std::fs::write(&svg_path, plot)
        .with_context(|| format!("write {}", svg_path.display()))?;
    announce(&svg_path);
    Ok(())
}
