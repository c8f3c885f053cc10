//! Declarative study configuration.
//!
//! A study is described by a single JSON file; every field is optional and
//! falls back to the desk-scale defaults (a 2x2x2-cell Gyroid network at
//! relative density 0.45, L0 = 5 mm, 0.5 % nominal compression, element
//! sizes {0.5, 0.25, 0.125} mm and scaled-Jacobian floors {1.0, 0.3}).
//! Physical quantities carry their unit in the key name (`cell_size_mm`).
//!
//! The canonical serialization of the effective configuration (with the
//! output directory blanked, so the hash names the study rather than its
//! location) is hashed with SHA-256; every CSV the tool writes records that
//! hash in a leading comment line.

use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use tpms_core::fem::MaterialSpec;
use tpms_core::geometry::{FieldKind, Topology};
use tpms_core::Box3;

/// Implicit field family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum KindConfig {
    #[default]
    Gyroid,
}

impl From<KindConfig> for FieldKind {
    fn from(k: KindConfig) -> Self {
        match k {
            KindConfig::Gyroid => FieldKind::Gyroid,
        }
    }
}

/// Solid topology of the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TopologyConfig {
    #[default]
    Network,
    Sheet,
}

impl From<TopologyConfig> for Topology {
    fn from(t: TopologyConfig) -> Self {
        match t {
            TopologyConfig::Network => Topology::Network,
            TopologyConfig::Sheet => Topology::Sheet,
        }
    }
}

/// Linear density grading along z (bottom face to top face).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradedConfig {
    pub rd_bottom: f64,
    pub rd_top: f64,
}

/// Lattice geometry: field family, topology, unit-cell size and density
/// target. Exactly one of `relative_density` and `graded` may be given;
/// omitting both selects the uniform default of 0.45.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LatticeConfig {
    pub kind: KindConfig,
    pub topology: TopologyConfig,
    pub cell_size_mm: f64,
    pub relative_density: Option<f64>,
    pub graded: Option<GradedConfig>,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        Self {
            kind: KindConfig::Gyroid,
            topology: TopologyConfig::Network,
            cell_size_mm: 5.0,
            relative_density: None,
            graded: None,
        }
    }
}

/// Density specification after resolving the one-of rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityTarget {
    Uniform(f64),
    Graded { rd_bottom: f64, rd_top: f64 },
}

/// Isotropic material constants (defaults: Ti-6Al-4V).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MaterialConfig {
    pub youngs_modulus_mpa: f64,
    pub poisson_ratio: f64,
    pub density_kg_m3: f64,
    pub yield_strength_mpa: f64,
    pub tangent_modulus_mpa: f64,
}

impl Default for MaterialConfig {
    fn default() -> Self {
        let m = MaterialSpec::ti6al4v();
        Self {
            youngs_modulus_mpa: m.e_s,
            poisson_ratio: m.nu,
            density_kg_m3: m.rho_s,
            yield_strength_mpa: m.sigma_y,
            tangent_modulus_mpa: m.e_t,
        }
    }
}

impl MaterialConfig {
    pub fn to_spec(self) -> MaterialSpec {
        MaterialSpec {
            e_s: self.youngs_modulus_mpa,
            nu: self.poisson_ratio,
            rho_s: self.density_kg_m3,
            sigma_y: self.yield_strength_mpa,
            e_t: self.tangent_modulus_mpa,
        }
    }
}

/// Iterative solver controls.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub rel_tol: f64,
    pub max_iterations: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            max_iterations: None,
        }
    }
}

/// How level offsets are calibrated against density targets.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Default)]
#[serde(deny_unknown_fields, tag = "method", rename_all = "snake_case")]
pub enum CalibrationConfig {
    /// Invert the precomputed offset/density table (fast, deterministic).
    #[default]
    Table,
    /// Bisect against a seeded Monte-Carlo density estimate.
    MonteCarlo { samples: usize, rd_tol: f64 },
}

/// On-disk STL flavor for `gen`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum StlFormat {
    #[default]
    Binary,
    Ascii,
}

/// The complete study description. See the crate README for the JSON schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StudyConfig {
    pub lattice: LatticeConfig,
    /// Unit cells per axis (the domain is a cube of edge `n * L0`).
    pub cells_per_axis: usize,
    /// Element-size sweep, coarse to fine.
    pub element_sizes_mm: Vec<f64>,
    /// Scaled-Jacobian floors to sweep (1.0 = plain voxel mesh).
    pub min_scaled_jacobians: Vec<f64>,
    pub material: MaterialConfig,
    /// Prescribed platen displacement.
    pub displacement_mm: f64,
    pub solver: SolverConfig,
    /// Marching cells per axis for surface extraction (`gen`).
    pub surface_resolution: usize,
    pub stl_format: StlFormat,
    pub calibration: CalibrationConfig,
    pub output_dir: PathBuf,
    /// Seed for stochastic samplers (Monte-Carlo calibration).
    pub seed: u64,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            lattice: LatticeConfig::default(),
            cells_per_axis: 2,
            element_sizes_mm: vec![0.5, 0.25, 0.125],
            min_scaled_jacobians: vec![1.0, 0.3],
            material: MaterialConfig::default(),
            displacement_mm: 0.05,
            solver: SolverConfig::default(),
            surface_resolution: 64,
            stl_format: StlFormat::Binary,
            calibration: CalibrationConfig::Table,
            output_dir: PathBuf::from("out"),
            seed: 0,
        }
    }
}

impl StudyConfig {
    /// Parse `path` (or take the defaults when `None`) and validate.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let config: Self = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("read config {}", p.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("parse config {}", p.display()))?
            }
            None => Self::default(),
        };
        config.validate()?;
        Ok(config)
    }

    /// Check every invariant the pipeline relies on.
    pub fn validate(&self) -> Result<()> {
        let l0 = self.lattice.cell_size_mm;
        ensure!(
            l0.is_finite() && l0 > 0.0,
            "lattice.cell_size_mm must be positive (got {l0})"
        );
        ensure!(self.cells_per_axis >= 1, "cells_per_axis must be at least 1");
        ensure!(
            !self.element_sizes_mm.is_empty(),
            "element_sizes_mm must list at least one element size"
        );
        let edge = self.edge_mm();
        for &h in &self.element_sizes_mm {
            ensure!(
                h.is_finite() && h > 0.0,
                "element size {h} mm must be positive"
            );
            let n = (edge / h).round();
            ensure!(
                n >= 1.0 && (n * h - edge).abs() <= 1e-9 * edge,
                "element size {h} mm does not divide the domain edge {edge} mm"
            );
        }
        ensure!(
            !self.min_scaled_jacobians.is_empty(),
            "min_scaled_jacobians must list at least one value"
        );
        for &mj in &self.min_scaled_jacobians {
            ensure!(
                mj > 0.0 && mj <= 1.0,
                "scaled-Jacobian floor {mj} must lie in (0, 1]"
            );
        }
        match (self.lattice.relative_density, self.lattice.graded) {
            (Some(_), Some(_)) => {
                bail!("specify exactly one of lattice.relative_density and lattice.graded")
            }
            (Some(rd), None) => ensure!(
                rd > 0.0 && rd < 1.0,
                "relative_density {rd} must lie in (0, 1)"
            ),
            (None, Some(g)) => {
                for rd in [g.rd_bottom, g.rd_top] {
                    ensure!(
                        rd > 0.0 && rd < 1.0,
                        "graded density {rd} must lie in (0, 1)"
                    );
                }
            }
            (None, None) => {}
        }
        ensure!(
            self.displacement_mm >= 0.0 && self.displacement_mm.is_finite(),
            "displacement_mm must be non-negative"
        );
        ensure!(
            self.solver.rel_tol > 0.0,
            "solver.rel_tol must be positive"
        );
        ensure!(
            self.surface_resolution >= 1,
            "surface_resolution must be at least 1"
        );
        if let CalibrationConfig::MonteCarlo { samples, rd_tol } = self.calibration {
            ensure!(samples >= 1, "calibration.samples must be at least 1");
            ensure!(rd_tol > 0.0, "calibration.rd_tol must be positive");
        }
        let m = self.material;
        ensure!(
            m.youngs_modulus_mpa > 0.0,
            "material.youngs_modulus_mpa must be positive"
        );
        ensure!(
            m.poisson_ratio > -1.0 && m.poisson_ratio < 0.5,
            "material.poisson_ratio must lie in (-1, 0.5)"
        );
        Ok(())
    }

    /// Domain edge length `n * L0` in mm.
    pub fn edge_mm(&self) -> f64 {
        self.cells_per_axis as f64 * self.lattice.cell_size_mm
    }

    /// The cubic design domain with its minimum corner at the origin.
    pub fn domain(&self) -> Box3 {
        Box3::cube(self.edge_mm())
    }

    /// Density target after resolving the one-of rule (default 0.45 uniform).
    pub fn density_target(&self) -> DensityTarget {
        match (self.lattice.relative_density, self.lattice.graded) {
            (Some(rd), _) => DensityTarget::Uniform(rd),
            (None, Some(g)) => DensityTarget::Graded {
                rd_bottom: g.rd_bottom,
                rd_top: g.rd_top,
            },
            (None, None) => DensityTarget::Uniform(0.45),
        }
    }

    /// SHA-256 of the canonical JSON serialization with the output directory
    /// blanked, as a lowercase hex string.
    pub fn hash(&self) -> String {
        let mut for_hash = self.clone();
        for_hash.output_dir = PathBuf::new();
        let json = serde_json::to_string(&for_hash).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        let mut hex = String::with_capacity(64);
        for byte in digest {
            use std::fmt::Write;
            write!(hex, "{byte:02x}").expect("hex formatting");
        }
        hex
    }
}
