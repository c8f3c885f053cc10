//! CSV reading and writing.
//!
//! Every CSV the tool writes starts with a comment line
//! `# config-sha256: <hex>` recording the effective configuration hash,
//! followed by a header row. Numbers are written with Rust's shortest
//! round-trip float formatting, so repeated runs of the same study produce
//! bit-identical files. Readers skip `#` comment lines, so the tool's own
//! outputs can be fed back in.

use anyhow::{bail, Context, Result};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

/// Header of solve and sweep result rows.
pub const SOLVE_HEADER: &str = "h,MJ,elements,RD_mesh,F_N,sigma_MPa,Eeff_MPa,iters,residual";
/// Header of GCI report rows.
pub const GCI_HEADER: &str = "label,convention,p,f_asym,gci12_pct,gci23_pct,Ra";
/// Header of mesh quality rows.
pub const MESH_HEADER: &str = "h,MJ,elements,elements_per_cell,min_SJ,RD_mesh";
/// Header of Gibson-Ashby fit output.
pub const FIT_HEADER: &str = "C1,m,R2";
/// Expected header of grid-study inputs to `gci`.
pub const STUDY_HEADER: [&str; 2] = ["h", "f"];
/// Expected header of density/stiffness inputs to `fit`.
pub const FIT_INPUT_HEADER: [&str; 2] = ["rd", "e_ratio"];

/// One solved sweep point, in the order of [`SOLVE_HEADER`].
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub h: f64,
    pub mj: f64,
    pub elements: usize,
    pub rd_mesh: f64,
    pub force_n: f64,
    pub sigma_mpa: f64,
    pub e_eff_mpa: f64,
    pub iters: usize,
    pub residual: f64,
}

impl SweepRow {
    pub fn to_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{:e}",
            self.h,
            self.mj,
            self.elements,
            self.rd_mesh,
            self.force_n,
            self.sigma_mpa,
            self.e_eff_mpa,
            self.iters,
            self.residual
        )
    }
}

/// Write a provenance comment, a header and the data rows to `path`.
pub fn write_csv_file<I>(path: &Path, config_hash: &str, header: &str, rows: I) -> Result<()>
where
    I: IntoIterator,
    I::Item: AsRef<str>,
{
    let file =
        File::create(path).with_context(|| format!("create {}", path.display()))?;
    let mut w = BufWriter::new(file);
    (|| -> std::io::Result<()> {
        writeln!(w, "# config-sha256: {config_hash}")?;
        writeln!(w, "{header}")?;
        for row in rows {
            writeln!(w, "{}", row.as_ref())?;
        }
        w.flush()
    })()
    .with_context(|| format!("write {}", path.display()))
}

/// A parsed all-numeric CSV: one `Vec<f64>` per record plus the 1-based
/// file line each record came from (for error reporting).
#[derive(Debug, Clone)]
pub struct NumericCsv {
    pub rows: Vec<Vec<f64>>,
    pub lines: Vec<u64>,
}

/// Read a CSV whose header must match `expected` exactly; `#` lines are
/// skipped. Every field must parse as `f64`.
pub fn read_numeric_csv(path: &Path, expected: &[&str]) -> Result<NumericCsv> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("open {}", path.display()))?;
    let headers = rdr
        .headers()
        .with_context(|| format!("read header of {}", path.display()))?
        .clone();
    let got: Vec<&str> = headers.iter().collect();
    if got != expected {
        bail!(
            "{}: expected header `{}`, found `{}`",
            path.display(),
            expected.join(","),
            got.join(",")
        );
    }
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    for record in rdr.records() {
        let record = record.with_context(|| format!("read {}", path.display()))?;
        let line = record.position().map_or(0, |p| p.line());
        let mut row = Vec::with_capacity(record.len());
        for (i, field) in record.iter().enumerate() {
            let value: f64 = field.parse().with_context(|| {
                format!(
                    "{} line {line}: column `{}` value `{field}` is not a number",
                    path.display(),
                    expected.get(i).copied().unwrap_or("?")
                )
            })?;
            row.push(value);
        }
        if row.len() != expected.len() {
            bail!(
                "{} line {line}: expected {} fields, found {}",
                path.display(),
                expected.len(),
                row.len()
            );
        }
        rows.push(row);
        lines.push(line);
    }
    if rows.is_empty() {
        bail!("{}: no data rows", path.display());
    }
    Ok(NumericCsv { rows, lines })
}

/// Read a two-column grid study (`h,f`).
pub fn read_study_csv(path: &Path) -> Result<Vec<(f64, f64)>> {
    let parsed = read_numeric_csv(path, &STUDY_HEADER)?;
    Ok(parsed.rows.iter().map(|r| (r[0], r[1])).collect())
}

/// Read a full sweep results file.
pub fn read_sweep_csv(path: &Path) -> Result<Vec<SweepRow>> {
    let expected: Vec<&str> = SOLVE_HEADER.split(',').collect();
    let parsed = read_numeric_csv(path, &expected)?;
    Ok(parsed
        .rows
        .iter()
        .map(|r| SweepRow {
            h: r[0],
            mj: r[1],
            elements: r[2] as usize,
            rd_mesh: r[3],
            force_n: r[4],
            sigma_mpa: r[5],
            e_eff_mpa: r[6],
            iters: r[7] as usize,
            residual: r[8],
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn round_trips_sweep_rows_through_disk() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("sweep.csv");
        let rows = vec![
            SweepRow {
                h: 0.5,
                mj: 1.0,
                elements: 1234,
                rd_mesh: 0.472,
                force_n: 812.5,
                sigma_mpa: 8.125,
                e_eff_mpa: 1625.0,
                iters: 321,
                residual: 9.5e-9,
            },
            SweepRow {
                h: 0.25,
                mj: 0.3,
                elements: 9000,
                rd_mesh: 0.455,
                force_n: 700.0,
                sigma_mpa: 7.0,
                e_eff_mpa: 1400.0,
                iters: 654,
                residual: 3.25e-9,
            },
        ];
        write_csv_file(
            &path,
            "deadbeef",
            SOLVE_HEADER,
            rows.iter().map(SweepRow::to_row),
        )
        .unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("# config-sha256: deadbeef\n"));
        assert_eq!(text.lines().nth(1).unwrap(), SOLVE_HEADER);
        let back = read_sweep_csv(&path).unwrap();
        assert_eq!(back, rows);
    }

    #[test]
    fn header_mismatch_is_reported() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "a,b\n1,2\n").unwrap();
        let err = read_study_csv(&path).unwrap_err().to_string();
        assert!(err.contains("expected header `h,f`"), "{err}");
    }

    #[test]
    fn non_numeric_field_names_line_and_column() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "# note\nh,f\n0.5,42.0\n0.25,oops\n").unwrap();
        let err = format!("{:#}", read_study_csv(&path).unwrap_err());
        assert!(err.contains("line 4"), "{err}");
        assert!(err.contains("column `f`"), "{err}");
    }

    #[test]
    fn empty_file_is_an_error() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        std::fs::write(&path, "h,f\n").unwrap();
        let err = read_study_csv(&path).unwrap_err().to_string();
        assert!(err.contains("no data rows"), "{err}");
    }
}
