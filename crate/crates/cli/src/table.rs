//! Deterministic CSV output and input.
//!
//! Floats are written in scientific notation with 17 significant digits, which
//! is enough for every `f64` to survive a write/read round trip bit for bit.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};

pub const SWEEP_COLUMNS: [&str; 5] = ["n_eq", "width", "cs_numeric", "cs_lowdim", "cs_3d"];
pub const DISPERSION_COLUMNS: [&str; 2] = ["k", "omega"];
pub const SIMULATE_COLUMNS: [&str; 5] = ["t", "mass", "mode_re", "mode_im", "peak_z"];
pub const WIDTH_COLUMNS: [&str; 4] = ["n_eq", "width", "residual", "iterations"];
pub const SOUND_COLUMNS: [&str; 4] = ["n_eq", "width", "cs_density_formula", "cs_width_formula"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
}

impl Cell {
    fn render(self) -> String {
        match self {
            Cell::Float(x) => format_float(x),
            Cell::Int(i) => i.to_string(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as u64)
    }
}

pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// Writes `bytes` to a sibling temp file and renames it over `path`, so a
/// failed run never leaves a half-written output behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| CliError::usage(format!("--out: {} is not a file path", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);

    let result = (|| {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(bytes)?;
        file.sync_all()?;
        fs::rename(&tmp, path)
    })();
    result.map_err(|e| {
        let _ = fs::remove_file(&tmp);
        CliError::io(path, e)
    })
}

/// Serialises `rows` under `schema`.
pub fn csv_bytes(schema: &[&str], rows: &[Vec<Cell>]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let wrap = |e| CliError::Csv {
        path: PathBuf::from("<memory>"),
        source: e,
    };
    w.write_record(schema).map_err(wrap)?;
    for (i, row) in rows.iter().enumerate() {
        if row.len() != schema.len() {
            return Err(CliError::usage(format!(
                "row {i} has {} cells but the schema has {} columns",
                row.len(),
                schema.len()
            )));
        }
        w.write_record(row.iter().map(|c| c.render()))
            .map_err(wrap)?;
    }
    w.into_inner()
        .map_err(|e| CliError::io("<memory>", e.into_error()))
}

pub fn write_csv(rows: &[Vec<Cell>], schema: &[&str], path: &Path) -> Result<()> {
    write_atomic(path, &csv_bytes(schema, rows)?)
}

/// A numeric CSV file held in memory.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

pub fn read_csv(path: &Path) -> Result<Table> {
    let wrap = |e| CliError::Csv {
        path: path.to_path_buf(),
        source: e,
    };
    let mut r = csv::Reader::from_path(path).map_err(wrap)?;
    let header: Vec<String> = r
        .headers()
        .map_err(wrap)?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(wrap)?;
        let row = rec
            .iter()
            .zip(&header)
            .map(|(s, col)| {
                s.trim().parse::<f64>().map_err(|_| {
                    CliError::usage(format!(
                        "{}: row {}, column {col}: not a number: {s:?}",
                        path.display(),
                        i + 1
                    ))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(Table { header, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn header_only_and_single_row() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        write_csv(&[], &SWEEP_COLUMNS, &path).unwrap();
        assert_eq!(
            fs::read_to_string(&path).unwrap(),
            "n_eq,width,cs_numeric,cs_lowdim,cs_3d\n"
        );

        let row: Vec<Cell> = [40.0, 3.0, 2.98, 3.1, 2.9]
            .into_iter()
            .map(Cell::from)
            .collect();
        write_csv(&[row], &SWEEP_COLUMNS, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.ends_with('\n') && !text.contains('\r'));
        assert!(text.contains("4.0000000000000000e1,3.0000000000000000e0"));
    }

    #[test]
    fn mismatched_row_rejected() {
        let row = vec![Cell::Float(1.0)];
        assert!(csv_bytes(&DISPERSION_COLUMNS, &[row]).is_err());
    }

    #[test]
    fn no_temp_files_left_behind() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_csv(&[vec![Cell::Int(3), Cell::Float(0.5)]], &["a", "b"], &path).unwrap();
        let names: Vec<_> = fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        assert_eq!(names, vec![std::ffi::OsString::from("out.csv")]);

        let missing = dir.path().join("no_such_dir").join("x.csv");
        let err = write_csv(&[], &["a"], &missing).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(values in prop::collection::vec(
            prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO, 0..60)
        ) {
            let rows: Vec<Vec<Cell>> = values.chunks_exact(3)
                .map(|c| c.iter().copied().map(Cell::from).collect())
                .collect();
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("rt.csv");
            write_csv(&rows, &["a", "b", "c"], &path).unwrap();
            let table = read_csv(&path).unwrap();
            prop_assert_eq!(table.rows.len(), rows.len());
            for (got, want) in table.rows.iter().zip(&rows) {
                for (g, w) in got.iter().zip(want) {
                    let Cell::Float(w) = *w else { unreachable!() };
                    prop_assert_eq!(g.to_bits(), w.to_bits());
                }
            }
        }
    }
}
