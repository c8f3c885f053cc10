//! Isotropic material description.

use nalgebra::Matrix6;

/// Linear-elastic material constants, mm / N / MPa unit system.
///
/// Yield stress and tangent modulus describe the bilinear hardening law of
/// the source data sheet; they are carried for reporting but play no role in
/// the linear solves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialSpec {
    /// Young's modulus of the solid (MPa).
    pub e_s: f64,
    /// Poisson's ratio.
    pub nu: f64,
    /// Mass density (kg/m^3, informational).
    pub rho_s: f64,
    /// Yield stress (MPa, carried, unused).
    pub sigma_y: f64,
    /// Tangent modulus (MPa, carried, unused).
    pub e_t: f64,
}

impl MaterialSpec {
    /// # Panics
    /// If `e_s <= 0` or `nu` is outside `(-1, 0.5)`.
    pub fn new(e_s: f64, nu: f64, rho_s: f64, sigma_y: f64, e_t: f64) -> Self {
        assert!(e_s > 0.0, "Young's modulus must be positive");
        assert!(
            nu > -1.0 && nu < 0.5,
            "Poisson's ratio must lie in (-1, 0.5)"
        );
        Self {
            e_s,
            nu,
            rho_s,
            sigma_y,
            e_t,
        }
    }

    /// Ti-6Al-4V as commonly used for additively manufactured lattices.
    pub fn ti6al4v() -> Self {
        Self::new(121_000.0, 0.34, 4_400.0, 896.0, 1_850.0)
    }

    /// Isotropic elasticity matrix in Voigt order
    /// (xx, yy, zz, xy, yz, zx) with engineering shear strains.
    pub fn elasticity_matrix(&self) -> Matrix6<f64> {
        let e = self.e_s;
        let nu = self.nu;
        let c = e / ((1.0 + nu) * (1.0 - 2.0 * nu));
        let diag = c * (1.0 - nu);
        let off = c * nu;
        let shear = c * (1.0 - 2.0 * nu) / 2.0;
        let mut d = Matrix6::zeros();
        for i in 0..3 {
            for j in 0..3 {
                d[(i, j)] = if i == j { diag } else { off };
            }
            d[(i + 3, i + 3)] = shear;
        }
        d
    }
}
