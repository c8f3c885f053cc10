//! Voxel classification of an implicit solid.
//!
//! The domain is divided into cubic cells of edge `h`; each cell is tested
//! against the solid on an `n^3` subsample stencil (corners included).
//! Subsample positions live on a single global lattice of pitch `h/(n-1)`
//! shared by neighboring cells, so classification decisions reuse identical
//! samples and the result is independent of cell visit order.

use super::MeshError;
use crate::geometry::ImplicitLattice;
use crate::Box3;
use nalgebra::Point3;

/// Rule deciding whether a cell is kept as solid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClassifyRule {
    /// Keep the cell when any subsample is solid.
    Intersect,
    /// Keep the cell when the cell centroid is solid.
    Centroid,
    /// Keep the cell when at least `theta` of the subsamples are solid.
    Fraction { theta: f64 },
}

/// Uniform cubic voxel grid over a box domain, together with the
/// classification policy.
#[derive(Debug, Clone)]
pub struct VoxelGridSpec {
    pub domain: Box3,
    /// Element edge length.
    pub h: f64,
    /// Classification rule.
    pub rule: ClassifyRule,
    /// Subsamples per axis per cell (>= 2; 3 resolves thin walls at the
    /// usual h-to-cell ratios at negligible cost).
    pub subsamples: usize,
    /// Cell counts per axis.
    pub dims: [usize; 3],
}

impl VoxelGridSpec {
    /// Fails with [`MeshError::DomainNotDivisible`] when any domain extent is
    /// not an integer multiple of `h` (to within a 1e-9 relative tolerance).
    pub fn new(
        domain: Box3,
        h: f64,
        rule: ClassifyRule,
        subsamples: usize,
    ) -> Result<Self, MeshError> {
        assert!(h > 0.0, "element size must be positive");
        assert!(subsamples >= 2, "need at least corner subsamples");
        if let ClassifyRule::Fraction { theta } = rule {
            assert!(
                theta > 0.0 && theta <= 1.0,
                "fraction threshold must lie in (0, 1]"
            );
        }
        let ext = domain.extent();
        let mut dims = [0usize; 3];
        for axis in 0..3 {
            let n = (ext[axis] / h).round();
            if n < 1.0 || (n * h - ext[axis]).abs() > 1e-9 * ext[axis] {
                return Err(MeshError::DomainNotDivisible {
                    axis,
                    extent: ext[axis],
                    h,
                });
            }
            dims[axis] = n as usize;
        }
        Ok(Self {
            domain,
            h,
            rule,
            subsamples,
            dims,
        })
    }

    /// The default policy: intersect rule on a 3x3x3 stencil.
    pub fn with_defaults(domain: Box3, h: f64) -> Result<Self, MeshError> {
        Self::new(domain, h, ClassifyRule::Intersect, 3)
    }

    pub fn cell_count(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }
}

/// Boolean cell grid. Cells are stored k-fastest: index
/// `k + nz * (j + ny * i)`, matching the raw export layout.
#[derive(Debug, Clone)]
pub struct OccupancyGrid {
    dims: [usize; 3],
    data: Vec<u8>,
}

impl OccupancyGrid {
    pub fn empty(dims: [usize; 3]) -> Self {
        Self {
            dims,
            data: vec![0; dims[0] * dims[1] * dims[2]],
        }
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        debug_assert!(i < self.dims[0] && j < self.dims[1] && k < self.dims[2]);
        k + self.dims[2] * (j + self.dims[1] * i)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> bool {
        self.data[self.index(i, j, k)] != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, occupied: bool) {
        let idx = self.index(i, j, k);
        self.data[idx] = occupied as u8;
    }

    pub fn count_occupied(&self) -> usize {
        self.data.iter().filter(|&&v| v != 0).count()
    }

    /// Raw 0/1 bytes in storage order (k-fastest).
    pub fn raw(&self) -> &[u8] {
        &self.data
    }

    /// Write the grid as a raw u8 volume for debugging: one ASCII header
    /// line `occupancy <nx> <ny> <nz> <h> <x0> <y0> <z0>` followed by the
    /// `nx*ny*nz` occupancy bytes in storage order (k-fastest).
    pub fn write_raw<W: std::io::Write>(
        &self,
        mut w: W,
        h: f64,
        origin: Point3<f64>,
    ) -> std::io::Result<()> {
        writeln!(
            w,
            "occupancy {} {} {} {} {} {} {}",
            self.dims[0], self.dims[1], self.dims[2], h, origin.x, origin.y, origin.z
        )?;
        w.write_all(&self.data)
    }
}

/// Classify every cell of `spec` against the lattice solid.
pub fn classify_voxels(lattice: &ImplicitLattice, spec: &VoxelGridSpec) -> OccupancyGrid {
    let mut grid = OccupancyGrid::empty(spec.dims);
    if spec.rule == ClassifyRule::Centroid {
        for i in 0..spec.dims[0] {
            for j in 0..spec.dims[1] {
                for k in 0..spec.dims[2] {
                    let center = Point3::new(
                        spec.domain.min.x + (i as f64 + 0.5) * spec.h,
                        spec.domain.min.y + (j as f64 + 0.5) * spec.h,
                        spec.domain.min.z + (k as f64 + 0.5) * spec.h,
                    );
                    grid.set(i, j, k, lattice.is_solid(&center));
                }
            }
        }
        return grid;
    }

    // Global subsample lattice: cell (i,j,k) reads samples m*i .. m*i + m
    // per axis (m = subsamples - 1), sharing stencil faces with neighbors.
    let m = spec.subsamples - 1;
    let pitch = spec.h / m as f64;
    let ns = [
        m * spec.dims[0] + 1,
        m * spec.dims[1] + 1,
        m * spec.dims[2] + 1,
    ];
    let mut solid = vec![0u8; ns[0] * ns[1] * ns[2]];
    let sample_id = |i: usize, j: usize, k: usize| i + ns[0] * (j + ns[1] * k);
    for k in 0..ns[2] {
        let z = spec.domain.min.z + k as f64 * pitch;
        for j in 0..ns[1] {
            let y = spec.domain.min.y + j as f64 * pitch;
            for i in 0..ns[0] {
                let x = spec.domain.min.x + i as f64 * pitch;
                solid[sample_id(i, j, k)] = lattice.is_solid(&Point3::new(x, y, z)) as u8;
            }
        }
    }

    let total = spec.subsamples.pow(3);
    for i in 0..spec.dims[0] {
        for j in 0..spec.dims[1] {
            for k in 0..spec.dims[2] {
                let mut hits = 0usize;
                for dk in 0..=m {
                    for dj in 0..=m {
                        for di in 0..=m {
                            hits +=
                                solid[sample_id(m * i + di, m * j + dj, m * k + dk)] as usize;
                        }
                    }
                }
                let occupied = match spec.rule {
                    ClassifyRule::Intersect => hits > 0,
                    ClassifyRule::Fraction { theta } => hits as f64 / total as f64 >= theta,
                    ClassifyRule::Centroid => unreachable!(),
                };
                grid.set(i, j, k, occupied);
            }
        }
    }
    grid
}
