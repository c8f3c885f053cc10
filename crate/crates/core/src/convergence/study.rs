//! Ordered refinement series.

use super::ConvergenceError;

/// A labeled series of (h, f) samples ordered coarse to fine: h strictly
/// decreasing. The finest grid is the last entry.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshStudy {
    label: String,
    entries: Vec<(f64, f64)>,
}

impl MeshStudy {
    /// Validates positivity and strict coarse-to-fine ordering of `entries`
    /// (pairs of element size h and sampled scalar f).
    pub fn new(
        label: impl Into<String>,
        entries: Vec<(f64, f64)>,
    ) -> Result<Self, ConvergenceError> {
        if entries.is_empty() {
            return Err(ConvergenceError::UnorderedStudy);
        }
        for (i, &(h, _)) in entries.iter().enumerate() {
            if h.is_nan() || h <= 0.0 {
                return Err(ConvergenceError::UnorderedStudy);
            }
            if i > 0 && h >= entries[i - 1].0 {
                return Err(ConvergenceError::UnorderedStudy);
            }
        }
        Ok(Self {
            label: label.into(),
            entries,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Samples in coarse-to-fine order.
    pub fn entries(&self) -> &[(f64, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The common ratio h_coarse / h_fine between consecutive grids.
    ///
    /// Fails with [`ConvergenceError::InconsistentRatio`] when the pairwise
    /// ratios disagree by more than 1e-9 relative.
    pub fn refinement_ratio(&self) -> Result<f64, ConvergenceError> {
        if self.entries.len() < 2 {
            return Err(ConvergenceError::WrongGridCount {
                got: self.entries.len(),
            });
        }
        let first = self.entries[0].0 / self.entries[1].0;
        for pair in self.entries.windows(2).skip(1) {
            let r = pair[0].0 / pair[1].0;
            if (r - first).abs() > 1e-9 * first {
                return Err(ConvergenceError::InconsistentRatio { first, second: r });
            }
        }
        Ok(first)
    }
}
