//! Observed order, Richardson extrapolation and grid convergence indices.
//!
//! Grid indexing follows the verification literature: within a triple,
//! subscript 1 is the finest grid and 3 the coarsest, while [`MeshStudy`]
//! stores entries coarse-first. The two GCI denominator conventions differ
//! only in the reference value of the relative error: `Paper` normalizes
//! both pairs by the finest-of-three solution f1 (which makes the
//! asymptotic-range ratio identically 1 when p comes from the same triple),
//! `Roache` normalizes each pair by its own fine member (under which the
//! ratio reduces to f1/f2).

use std::fmt;

use super::{ConvergenceError, MeshStudy};

/// Recommended factor of safety for a two-grid GCI.
pub const FS_TWO_GRID: f64 = 3.0;
/// Recommended factor of safety for three or more grids.
pub const FS_THREE_GRID: f64 = 1.25;

/// Denominator convention for the relative error inside the GCI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GciConvention {
    /// Both pairs are normalized by the finest-of-three value f1.
    Paper,
    /// Each pair is normalized by its own fine member.
    Roache,
}

impl fmt::Display for GciConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GciConvention::Paper => "paper",
            GciConvention::Roache => "roache",
        })
    }
}

/// Full grid-convergence summary of one three-grid study.
#[derive(Debug, Clone)]
pub struct GciReport {
    pub label: String,
    pub convention: GciConvention,
    /// Constant refinement ratio of the triple.
    pub r: f64,
    /// Observed order of convergence.
    pub p: f64,
    /// Richardson asymptotic (zero-spacing) solution.
    pub f_asym: f64,
    /// Fine-pair grid convergence index, percent.
    pub gci12: f64,
    /// Coarse-pair grid convergence index, percent.
    pub gci23: f64,
    /// Asymptotic-range ratio gci23 / (r^p gci12).
    pub r_a: f64,
    /// Factor of safety used.
    pub f_s: f64,
}

/// Relative deviation of the coarse result from the fine one, percent.
pub fn relative_error(f_fine: f64, f_coarse: f64) -> Result<f64, ConvergenceError> {
    if f_fine == 0.0 {
        return Err(ConvergenceError::ZeroReference);
    }
    Ok((f_coarse - f_fine).abs() / f_fine.abs() * 100.0)
}

/// Observed order of convergence of a monotone grid triple (f1 finest) at
/// constant refinement ratio r: p = ln((f3-f2)/(f2-f1)) / ln(r).
pub fn observed_order(f1: f64, f2: f64, f3: f64, r: f64) -> Result<f64, ConvergenceError> {
    assert!(r > 1.0, "refinement ratio must exceed 1");
    let d32 = f3 - f2;
    let d21 = f2 - f1;
    if d32 == 0.0 || d21 == 0.0 {
        return Err(ConvergenceError::ZeroDifference);
    }
    if d32.signum() != d21.signum() {
        return Err(ConvergenceError::NonMonotoneTriple);
    }
    Ok((d32 / d21).ln() / r.ln())
}

/// Richardson extrapolation of the fine pair to zero spacing:
/// f_asym = f1 + (f1 - f2) / (r^p - 1).
pub fn richardson(f1: f64, f2: f64, r: f64, p: f64) -> Result<f64, ConvergenceError> {
    assert!(r > 1.0, "refinement ratio must exceed 1");
    let gain = r.powf(p) - 1.0;
    if gain.abs() < 1e-12 {
        return Err(ConvergenceError::DegenerateOrder);
    }
    Ok(f1 + (f1 - f2) / gain)
}

/// Grid convergence index of one pair, percent:
/// GCI = F_s * (|f_coarse - f_fine| / |f_ref|) / (r^p - 1) * 100.
pub fn gci_pair(
    f_fine: f64,
    f_coarse: f64,
    f_ref: f64,
    r: f64,
    p: f64,
    f_s: f64,
) -> Result<f64, ConvergenceError> {
    if f_ref == 0.0 {
        return Err(ConvergenceError::ZeroReference);
    }
    let gain = r.powf(p) - 1.0;
    if gain < 1e-12 {
        return Err(ConvergenceError::DegenerateOrder);
    }
    let eps = (f_coarse - f_fine).abs() / f_ref.abs();
    Ok(f_s * eps / gain * 100.0)
}

/// Asymptotic-range ratio R_a = gci23 / (r^p * gci12); values near 1
/// indicate the triple sits in the asymptotic convergence range.
pub fn asymptotic_ratio(
    gci12: f64,
    gci23: f64,
    r: f64,
    p: f64,
) -> Result<f64, ConvergenceError> {
    if gci12 <= 0.0 {
        return Err(ConvergenceError::ZeroGci);
    }
    Ok(gci23 / (r.powf(p) * gci12))
}

/// Compose the full report for a three-grid study.
///
/// `f_s` defaults to [`FS_THREE_GRID`] when `None`.
pub fn gci_report(
    study: &MeshStudy,
    f_s: Option<f64>,
    convention: GciConvention,
) -> Result<GciReport, ConvergenceError> {
    let entries = study.entries();
    if entries.len() != 3 {
        return Err(ConvergenceError::WrongGridCount {
            got: entries.len(),
        });
    }
    let r = study.refinement_ratio()?;
    // Entries are coarse-first; the literature indexes fine-first.
    let (f3, f2, f1) = (entries[0].1, entries[1].1, entries[2].1);
    let p = observed_order(f1, f2, f3, r)?;
    let f_asym = richardson(f1, f2, r, p)?;
    let f_s = f_s.unwrap_or(FS_THREE_GRID);
    let (ref12, ref23) = match convention {
        GciConvention::Paper => (f1, f1),
        GciConvention::Roache => (f1, f2),
    };
    let gci12 = gci_pair(f1, f2, ref12, r, p, f_s)?;
    let gci23 = gci_pair(f2, f3, ref23, r, p, f_s)?;
    let r_a = asymptotic_ratio(gci12, gci23, r, p)?;
    Ok(GciReport {
        label: study.label().to_string(),
        convention,
        r,
        p,
        f_asym,
        gci12,
        gci23,
        r_a,
        f_s,
    })
}
