//! `sweep`: solve every `(h, MJ)` pair of the study into one CSV.

use super::{announce, ensure_out_dir};
use crate::config::StudyConfig;
use crate::csvio::{write_csv_file, SweepRow, SOLVE_HEADER};
use crate::pipeline::sweep_rows;
use anyhow::Result;

pub fn run(config: &StudyConfig, jobs: usize) -> Result<()> {
    let out = ensure_out_dir(config)?;
    let rows = sweep_rows(config, jobs)?;
    let path = out.join("sweep.csv");
    write_csv_file(
        &path,
        &config.hash(),
        SOLVE_HEADER,
        rows.iter().map(SweepRow::to_row),
    )?;
    announce(&path);
    Ok(())
}
