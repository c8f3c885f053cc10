//! `fit`: Gibson-Ashby power-law fit of relative stiffness against relative
//! density (`rd,e_ratio` CSV).

use super::{announce, ensure_out_dir};
use crate::config::StudyConfig;
use crate::csvio::{read_numeric_csv, write_csv_file, FIT_HEADER, FIT_INPUT_HEADER};
use crate::svg::{line_plot, Series};
use anyhow::{anyhow, Context, Result};
use std::path::Path;
use tpms_core::convergence::{fit_gibson_ashby, ConvergenceError};

pub fn run(config: &StudyConfig, results_path: &Path) -> Result<()> {
    let out = ensure_out_dir(config)?;
    let parsed = read_numeric_csv(results_path, &FIT_INPUT_HEADER)?;
    let points: Vec<(f64, f64)> = parsed.rows.iter().map(|r| (r[0], r[1])).collect();

    let fit = fit_gibson_ashby(&points).map_err(|e| match e {
        ConvergenceError::NonPositivePoint { index } => anyhow!(
            "{} line {}: {e}",
            results_path.display(),
            parsed.lines[index]
        ),
        other => anyhow!(other).context(format!("fit {}", results_path.display())),
    })?;

    let csv_path = out.join("fit.csv");
    write_csv_file(
        &csv_path,
        &config.hash(),
        FIT_HEADER,
        [format!("{},{},{}", fit.c1, fit.m, fit.r_squared)],
    )?;
    announce(&csv_path);

    let mut data = points;
    data.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("validated by the fit"));
    let (rd_lo, rd_hi) = (data[0].0, data[data.len() - 1].0);
    let curve: Vec<(f64, f64)> = (0..=63)
        .map(|i| {
            let rd = rd_lo + (rd_hi - rd_lo) * i as f64 / 63.0;
            (rd, fit.c1 * rd.powf(fit.m))
        })
        .collect();
    let svg_path = out.join("fit.svg");
    let plot = line_plot(
        "Gibson-Ashby fit",
        "relative density",
        "E/E_s",
        &[
            Series {
                label: "data".to_string(),
                points: data,
            },
            Series {
                label: format!("fit {:.3} RD^{:.3}", fit.c1, fit.m),
                points: curve,
            },
        ],
        false,
    );
    std::fs::write(&svg_path, plot)
        .with_context(|| format!("write {}", svg_path.display()))?;
    announce(&svg_path);
    Ok(())
}
