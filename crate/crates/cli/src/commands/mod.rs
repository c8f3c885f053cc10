//! One module per subcommand, plus the small shared helpers.

pub mod fit;
pub mod gci;
pub mod gen;
pub mod mesh;
pub mod report;
pub mod solve;
pub mod sweep;

use crate::config::StudyConfig;
use anyhow::{ensure, Context, Result};
use std::path::{Path, PathBuf};
use tpms_core::convergence::GciReport;

/// Create the configured output directory (if needed) and return it.
pub(crate) fn ensure_out_dir(config: &StudyConfig) -> Result<PathBuf> {
    let dir = config.output_dir.clone();
    std::fs::create_dir_all(&dir)
        .with_context(|| format!("create output directory {}", dir.display()))?;
    Ok(dir)
}

/// Report a finished output file on stdout.
pub(crate) fn announce(path: &Path) {
    println!("wrote {}", path.display());
}

/// File-name fragment for an `(h, MJ)` pair, e.g. `h0.25_mj0.3`.
pub(crate) fn point_slug(h: f64, mj: f64) -> String {
    format!("h{h}_mj{mj}")
}

/// Validate a single mesh/solve point that may come from the command line
/// rather than the config lists.
pub(crate) fn check_point(config: &StudyConfig, h: f64, mj: f64) -> Result<()> {
    ensure!(h.is_finite() && h > 0.0, "element size {h} mm must be positive");
    let edge = config.edge_mm();
    let n = (edge / h).round();
    ensure!(
        n >= 1.0 && (n * h - edge).abs() <= 1e-9 * edge,
        "element size {h} mm does not divide the domain edge {edge} mm"
    );
    ensure!(
        mj > 0.0 && mj <= 1.0,
        "scaled-Jacobian floor {mj} must lie in (0, 1]"
    );
    Ok(())
}

/// Serialize a GCI report in [`crate::csvio::GCI_HEADER`] column order.
pub(crate) fn gci_row(r: &GciReport) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        r.label, r.convention, r.p, r.f_asym, r.gci12, r.gci23, r.r_a
    )
}
