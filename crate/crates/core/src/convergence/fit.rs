//! Gibson-Ashby power-law fitting.
//!
//! Cellular-solid stiffness scales as E/E_s = C1 * RD^m; the fit is an
//! ordinary least-squares line in log-log space, which is both the standard
//! presentation and exact on noiseless power-law data.

use super::ConvergenceError;

/// Result of a log-log least-squares fit of E/E_s against relative density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GibsonAshbyFit {
    /// Prefactor C1 = exp(intercept).
    pub c1: f64,
    /// Power-law exponent (slope in log-log space).
    pub m: f64,
    /// Coefficient of determination of the log-log regression.
    pub r_squared: f64,
}

/// Fit E/E_s = C1 * RD^m to `points` of (relative density, stiffness ratio).
pub fn fit_gibson_ashby(points: &[(f64, f64)]) -> Result<GibsonAshbyFit, ConvergenceError> {
    if points.len() < 2 {
        return Err(ConvergenceError::DegenerateFit);
    }
    for (index, &(rd, ratio)) in points.iter().enumerate() {
        if rd.is_nan() || ratio.is_nan() || rd <= 0.0 || ratio <= 0.0 {
            return Err(ConvergenceError::NonPositivePoint { index });
        }
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|&(rd, _)| rd.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, e)| e.ln()).collect();
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    if sxx == 0.0 {
        return Err(ConvergenceError::DegenerateFit);
    }
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - x_mean) * (y - y_mean))
        .sum();
    let m = sxy / sxx;
    let intercept = y_mean - m * x_mean;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (intercept + m * x)).powi(2))
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - y_mean).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    Ok(GibsonAshbyFit {
        c1: intercept.exp(),
        m,
        r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn power_law_points(c1: f64, m: f64, rds: &[f64]) -> Vec<(f64, f64)> {
        rds.iter().map(|&rd| (rd, c1 * rd.powf(m))).collect()
    }

    #[test]
    fn noiseless_power_laws_are_recovered_exactly() {
        for &(c1, m) in &[(1.11, 1.96), (1.06, 2.24)] {
            let points = power_law_points(c1, m, &[0.1, 0.2, 0.3, 0.45]);
            let fit = fit_gibson_ashby(&points).unwrap();
            approx::assert_relative_eq!(fit.c1, c1, max_relative = 1e-12);
            approx::assert_relative_eq!(fit.m, m, max_relative = 1e-12);
            assert!((fit.r_squared - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn fit_is_invariant_under_point_reordering() {
        let points = vec![(0.2, 0.051), (0.45, 0.21), (0.1, 0.012), (0.3, 0.105)];
        let mut shuffled = points.clone();
        shuffled.reverse();
        shuffled.swap(1, 2);
        let a = fit_gibson_ashby(&points).unwrap();
        let b = fit_gibson_ashby(&shuffled).unwrap();
        approx::assert_relative_eq!(a.c1, b.c1, max_relative = 1e-12);
        approx::assert_relative_eq!(a.m, b.m, max_relative = 1e-12);
        approx::assert_abs_diff_eq!(a.r_squared, b.r_squared, epsilon = 1e-12);
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        assert_eq!(
            fit_gibson_ashby(&[(0.2, 0.05)]),
            Err(ConvergenceError::DegenerateFit)
        );
        assert_eq!(
            fit_gibson_ashby(&[(0.2, 0.05), (0.3, -0.1)]),
            Err(ConvergenceError::NonPositivePoint { index: 1 })
        );
        assert_eq!(
            fit_gibson_ashby(&[(0.2, 0.05), (0.0, 0.1)]),
            Err(ConvergenceError::NonPositivePoint { index: 1 })
        );
        assert_eq!(
            fit_gibson_ashby(&[(0.2, 0.05), (0.2, 0.06)]),
            Err(ConvergenceError::DegenerateFit)
        );
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            /// Exact data is recovered regardless of the generating
            /// parameters or sampling sites.
            #[test]
            fn exact_power_law_recovery(
                c1 in 0.2f64..3.0,
                m in 0.5f64..3.5,
                rd0 in 0.05f64..0.2,
                step in 1.2f64..2.0,
            ) {
                let rds: Vec<f64> = (0..4).map(|i| rd0 * step.powi(i)).collect();
                let points = power_law_points(c1, m, &rds);
                let fit = fit_gibson_ashby(&points).unwrap();
                prop_assert!((fit.c1 - c1).abs() <= 1e-10 * c1);
                prop_assert!((fit.m - m).abs() <= 1e-10 * m);
                prop_assert!((fit.r_squared - 1.0).abs() <= 1e-10);
            }
        }
    }
}
