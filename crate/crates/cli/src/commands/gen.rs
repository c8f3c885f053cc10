//! `gen`: calibrate the level offset, export the lattice surface as STL and
//! the offset/density calibration table as CSV.

use super::{announce, ensure_out_dir};
use crate::config::{StlFormat, StudyConfig};
use crate::pipeline::{build_lattice, calibration_table};
use anyhow::{Context, Result};
use std::fs::File;
use std::io::{BufWriter, Write};
use tpms_core::geometry::{extract_surface, write_stl, StlMode};

pub fn run(config: &StudyConfig) -> Result<()> {
    let out = ensure_out_dir(config)?;
    let hash = config.hash();

    // Calibration happens first so an out-of-range density target fails
    // before anything is written.
    let lattice = build_lattice(config)?;

    let table = calibration_table(config);
    let cal_path = out.join("calibration.csv");
    let file = File::create(&cal_path)
        .with_context(|| format!("create {}", cal_path.display()))?;
    let mut w = BufWriter::new(file);
    (|| -> std::io::Result<()> {
        writeln!(w, "# config-sha256: {hash}")?;
        table.write_csv(&mut w)?;
        w.flush()
    })()
    .with_context(|| format!("write {}", cal_path.display()))?;
    announce(&cal_path);

    let res = config.surface_resolution;
    let surface = extract_surface(&lattice, &config.domain(), [res, res, res])
        .context("extract lattice surface")?;
    let stl_path = out.join("lattice.stl");
    let mode = match config.stl_format {
        StlFormat::Binary => StlMode::Binary,
        StlFormat::Ascii => StlMode::Ascii,
    };
    write_stl(&surface, &stl_path, mode, "tpms_lattice")
        .with_context(|| format!("write {}", stl_path.display()))?;
    announce(&stl_path);
    Ok(())
}
