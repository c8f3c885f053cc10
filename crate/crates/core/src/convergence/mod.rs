//! Solution-verification analytics for mesh refinement studies.
//!
//! Covers the standard grid-convergence workflow: pairwise relative error,
//! observed order of convergence from a constant-ratio grid triple,
//! Richardson extrapolation to the zero-spacing asymptote, grid convergence
//! indices (GCI) under two denominator conventions, the asymptotic-range
//! check, and Gibson-Ashby power-law fits of effective stiffness against
//! relative density.
//!
//! Everything here is a pure function over plain numbers; the unit of the
//! sampled quantity is irrelevant as long as it is consistent.

mod fit;
mod gci;
mod study;

pub use fit::{fit_gibson_ashby, GibsonAshbyFit};
pub use gci::{
    asymptotic_ratio, gci_pair, gci_report, observed_order, relative_error, richardson,
    GciConvention, GciReport, FS_THREE_GRID, FS_TWO_GRID,
};
pub use study::MeshStudy;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConvergenceError {
    /// A relative quantity was requested against a zero reference value.
    #[error("reference value is zero; relative measure undefined")]
    ZeroReference,

    /// Successive differences change sign: the series is oscillatory and
    /// the observed-order formula (hence GCI) does not apply.
    #[error("grid triple is not monotone; GCI theory does not apply")]
    NonMonotoneTriple,

    /// Two grids produced identical values; the order is indeterminate.
    #[error("zero difference between successive grids; order indeterminate")]
    ZeroDifference,

    /// r^p is too close to 1 for extrapolation to be meaningful.
    #[error("refinement gain r^p is degenerate (too close to 1)")]
    DegenerateOrder,

    /// The fine-pair GCI vanished, so the asymptotic ratio is undefined.
    #[error("fine-pair GCI is zero; asymptotic ratio undefined")]
    ZeroGci,

    /// Power-law fits require strictly positive coordinates.
    #[error("point {index} has a non-positive coordinate; log-log fit undefined")]
    NonPositivePoint { index: usize },

    /// Fewer than two distinct abscissae: no line can be fitted.
    #[error("fit needs at least two distinct positive abscissae")]
    DegenerateFit,

    /// GCI evaluation works on exactly three grids.
    #[error("GCI report needs exactly 3 grids, got {got}")]
    WrongGridCount { got: usize },

    /// The refinement ratio differs between consecutive grid pairs.
    #[error("refinement ratio is not constant: {first:.9} vs {second:.9}")]
    InconsistentRatio { first: f64, second: f64 },

    /// Study spacings must be positive and strictly decreasing.
    #[error("study h values must be positive and strictly decreasing")]
    UnorderedStudy,
}
