//! Uniaxial compression pipeline: assemble, constrain, solve, react.
//!
//! The effective stress convention is force over the *nominal* domain
//! cross-section (not the solid area), so the effective modulus folds in the
//! porosity of the lattice: E_eff = sigma_e / (delta / H).

use super::{
    apply_compression_bcs, assemble, element_strain, solve_displacements, stress_from_strain,
    von_mises, CgOptions, CompressionSetup, FemError, MaterialSpec,
};
use crate::mesh::HexMesh;

/// Reactions and derived effective properties of one compression solve.
#[derive(Debug, Clone)]
pub struct CompressionResult {
    /// Total platen reaction (N), positive in compression.
    pub force: f64,
    /// Nominal cross-sectional area normal to the load (mm^2).
    pub area: f64,
    /// Effective stress force/area (MPa).
    pub sigma_e: f64,
    /// Effective Young's modulus sigma_e / (delta/H) (MPa).
    pub e_eff: f64,
    /// CG iterations spent.
    pub iterations: usize,
    /// Final relative residual of the solve.
    pub residual: f64,
    /// |F_top + F_bottom| / |F_top|: equilibrium audit of the reactions.
    pub balance: f64,
    /// Full displacement vector (mm), node-interleaved x,y,z.
    pub displacement: Vec<f64>,
}

/// Largest acceptable relative mismatch between top and bottom reactions.
const BALANCE_TOL: f64 = 1e-6;

/// Run the full linear compression analysis on a mesh.
///
/// Reactions are recovered by applying the *unconstrained* stiffness to the
/// converged displacements, so the top and bottom totals must cancel; their
/// mismatch is reported as `balance`. The reaction imbalance is proportional
/// to the leftover solver residual, so if the audit misses `BALANCE_TOL` the
/// solve is warm-started at a tighter tolerance (at most twice) before the
/// result is accepted.
pub fn run_compression(
    mesh: &HexMesh,
    material: &MaterialSpec,
    setup: &CompressionSetup,
    opts: &CgOptions,
) -> Result<CompressionResult, FemError> {
    let k = assemble(mesh, material)?;
    let bc = apply_compression_bcs(mesh, setup)?;

    // Linear ramp initial guess: the exact z-profile of the homogeneous
    // solution, which leaves the solver only the heterogeneity to resolve.
    let h_total = mesh.domain.extent()[2];
    let z0 = mesh.domain.min.z;
    let mut warm = vec![0.0; k.dofs()];
    for (n, p) in mesh.nodes.iter().enumerate() {
        warm[3 * n + 2] = -setup.delta * (p.z - z0) / h_total;
    }

    let mut opts_eff = *opts;
    let mut total_iterations = 0;
    let mut attempt = 0;
    let (sol, f_top, balance) = loop {
        let sol = solve_displacements(&k, &bc, &opts_eff, Some(&warm))?;
        total_iterations += sol.iterations;
        let mut f = vec![0.0; k.dofs()];
        k.matvec(&sol.u, &mut f);
        let f_top: f64 = bc
            .top_nodes
            .iter()
            .map(|&n| f[3 * n as usize + 2])
            .sum();
        let f_bottom: f64 = bc
            .bottom_nodes
            .iter()
            .map(|&n| f[3 * n as usize + 2])
            .sum();
        let balance = if f_top.abs() > 0.0 {
            (f_top + f_bottom).abs() / f_top.abs()
        } else {
            (f_top + f_bottom).abs()
        };
        attempt += 1;
        if balance <= BALANCE_TOL || attempt >= 3 || opts_eff.rel_tol <= 1e-14 {
            break (sol, f_top, balance);
        }
        opts_eff.rel_tol = (opts_eff.rel_tol * 1e-3).max(1e-14);
        warm = sol.u;
    };
    let force = -f_top;

    let area = mesh.domain.cross_section_xy();
    let sigma_e = force / area;
    let strain = setup.delta / h_total;
    let e_eff = if strain > 0.0 { sigma_e / strain } else { 0.0 };

    Ok(CompressionResult {
        force,
        area,
        sigma_e,
        e_eff,
        iterations: total_iterations,
        residual: sol.residual,
        balance,
        displacement: sol.u,
    })
}

/// Centroid von Mises stress (MPa) per element for a displacement field.
pub fn element_von_mises(
    mesh: &HexMesh,
    material: &MaterialSpec,
    u: &[f64],
) -> Result<Vec<f64>, FemError> {
    assert_eq!(u.len(), 3 * mesh.node_count(), "displacement size mismatch");
    mesh.elements
        .iter()
        .enumerate()
        .map(|(e, conn)| {
            let corners = conn.map(|n| mesh.nodes[n as usize]);
            let mut ue = [0.0; 24];
            for (c, &n) in conn.iter().enumerate() {
                for axis in 0..3 {
                    ue[3 * c + axis] = u[3 * n as usize + axis];
                }
            }
            let strain =
                element_strain(&corners, &ue).map_err(|source| FemError::InvalidElement {
                    element: e,
                    source: Box::new(source),
                })?;
            Ok(von_mises(&stress_from_strain(material, &strain)))
        })
        .collect()
}
