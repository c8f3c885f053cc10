//! Small-strain linear-elastic compression analysis on hexahedral meshes.
//!
//! The chain is: isoparametric trilinear elements with full 2x2x2 Gauss
//! quadrature ([`hex8_stiffness`]), deterministic assembly into a 3x3-block
//! sparse matrix ([`assemble`]), frictionless-platen compression boundary
//! conditions imposed by elimination ([`apply_compression_bcs`]), a
//! Jacobi-preconditioned conjugate-gradient solve ([`solve_displacements`]),
//! and reaction-force postprocessing into an effective Young's modulus
//! ([`run_compression`]). Units are mm / N / MPa throughout.

mod assemble;
mod bc;
mod compression;
mod element;
mod material;
mod solve;
mod sparse;

pub use assemble::assemble;
pub use bc::{apply_compression_bcs, BoundaryConditions, CompressionSetup};
pub use compression::{element_von_mises, run_compression, CompressionResult};
pub use element::{element_strain, hex8_stiffness, stress_from_strain, von_mises};
pub use material::MaterialSpec;
pub use solve::{solve_displacements, CgOptions, CgSolution};
pub use sparse::BlockCsr3;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FemError {
    /// The isoparametric map is degenerate or inverted at a quadrature point.
    #[error("non-positive Jacobian determinant at Gauss point {gauss}")]
    NonPositiveJacobian { gauss: usize },

    /// An element failed stiffness computation during assembly.
    #[error("element {element} is invalid: {source}")]
    InvalidElement {
        element: usize,
        source: Box<FemError>,
    },

    /// No node lies on the loading plane within tolerance.
    #[error("no nodes found on the top loading face")]
    NoTopFace,

    /// No node lies on the support plane within tolerance.
    #[error("no nodes found on the bottom support face")]
    NoBottomFace,

    /// The in-plane rigid-body lock could not find two distinct nodes.
    #[error("rigid-body lock nodes coincide; mesh bottom face is degenerate")]
    UnconstrainedRigidBody,

    /// The iterative solver ran out of budget.
    #[error("CG failed to converge: relative residual {residual:.3e} after {iterations} iterations")]
    NoConvergence { iterations: usize, residual: f64 },
}
