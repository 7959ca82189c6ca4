//! CSV log format.
//!
//! Columns: `t`, then `y_ref, y_true, y_meas, u, e, f_est` for each loop
//! (suffixed `_1`, `_2`, … when there is more than one loop), then
//! `w_000 …` holding the full spatial profile for distributed plants.
//! Values use 17 significant digits, so reading a file back reproduces
//! every value exactly. Rows end with LF.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::sim::series::{LoopTrace, TimeSeries};
use crate::{MfcError, Result};

const LOOP_COLUMNS: [&str; 6] = ["y_ref", "y_true", "y_meas", "u", "e", "f_est"];

fn io_err(path: &Path, e: impl std::fmt::Display) -> MfcError {
    MfcError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

pub fn csv_header(ts: &TimeSeries) -> Vec<String> {
    let mut cols = vec!["t".to_string()];
    let many = ts.loops.len() > 1;
    for j in 0..ts.loops.len() {
        for c in LOOP_COLUMNS {
            cols.push(if many { format!("{c}_{}", j + 1) } else { c.to_string() });
        }
    }
    if let Some(first) = ts.field.as_ref().and_then(|f| f.first()) {
        cols.extend((0..first.len()).map(|i| format!("w_{i:03}")));
    }
    cols
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes the series as CSV into any sink.
pub fn write_csv<W: Write>(ts: &TimeSeries, sink: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink);
    w.write_record(csv_header(ts))?;
    let mut row = Vec::new();
    for k in 0..ts.len() {
        row.clear();
        row.push(fmt(ts.t[k]));
        for lp in &ts.loops {
            for col in [&lp.y_ref, &lp.y_true, &lp.y_meas, &lp.u, &lp.e, &lp.f_est] {
                row.push(fmt(col[k]));
            }
        }
        if let Some(field) = &ts.field {
            row.extend(field[k].iter().map(|v| fmt(*v)));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(ts: &TimeSeries, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    write_csv(ts, std::io::BufWriter::new(file)).map_err(|e| io_err(path, e))
}

/// Parses a log written by [`emit_csv`]. The horizon is taken from the last
/// row, and the divergence flag is not recorded in the file.
pub fn read_csv(path: &Path) -> Result<TimeSeries> {
    let mut r = csv::Reader::from_path(path).map_err(|e| io_err(path, e))?;
    let header: Vec<String> = r
        .headers()
        .map_err(|e| io_err(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    if header.first().map(String::as_str) != Some("t") {
        return Err(io_err(path, "first column must be `t`"));
    }
    let loop_cols = header.iter().filter(|h| !h.starts_with("w_") && *h != "t").count();
    if loop_cols == 0 || loop_cols % LOOP_COLUMNS.len() != 0 {
        return Err(io_err(path, format!("unexpected column set {header:?}")));
    }
    let n_loops = loop_cols / LOOP_COLUMNS.len();
    let expected = TimeSeries {
        name: String::new(),
        horizon: 0.0,
        t: vec![],
        loops: vec![LoopTrace::default(); n_loops],
        field: None,
        diverged: false,
    };
    let want = csv_header(&expected);
    if header[..want.len()] != want[..] {
        return Err(io_err(path, format!("unexpected column set {header:?}")));
    }
    let n_field = header.len() - want.len();

    let mut ts = TimeSeries {
        name: path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
        field: (n_field > 0).then(Vec::new),
        ..expected
    };
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| io_err(path, e))?;
        let vals = rec
            .iter()
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| io_err(path, format!("row {}: {e}", line + 2)))?;
        if vals.len() != header.len() {
            return Err(io_err(path, format!("row {} has {} fields", line + 2, vals.len())));
        }
        ts.t.push(vals[0]);
        for (j, lp) in ts.loops.iter_mut().enumerate() {
            let b = 1 + j * LOOP_COLUMNS.len();
            let cols = [
                &mut lp.y_ref,
                &mut lp.y_true,
                &mut lp.y_meas,
                &mut lp.u,
                &mut lp.e,
                &mut lp.f_est,
            ];
            for (c, col) in cols.into_iter().enumerate() {
                col.push(vals[b + c]);
            }
        }
        if let Some(f) = ts.field.as_mut() {
            f.push(vals[want.len()..].to_vec());
        }
    }
    if ts.t.is_empty() {
        return Err(io_err(path, "no data rows"));
    }
    ts.horizon = ts.t[ts.t.len() - 1];
    Ok(ts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(loops: usize, rows: usize, field: bool) -> TimeSeries {
        let mk = |j: usize| LoopTrace {
            y_ref: (0..rows).map(|k| k as f64 + j as f64).collect(),
            y_true: (0..rows).map(|k| 0.1 * k as f64).collect(),
            y_meas: (0..rows).map(|k| 1.0 / 3.0 + k as f64).collect(),
            u: (0..rows).map(|k| -(k as f64).exp()).collect(),
            e: vec![1e-300; rows],
            f_est: vec![std::f64::consts::PI; rows],
        };
        TimeSeries {
            name: "s".into(),
            horizon: (rows - 1) as f64 * 0.01,
            t: (0..rows).map(|k| k as f64 * 0.01).collect(),
            loops: (0..loops).map(mk).collect(),
            field: field.then(|| (0..rows).map(|k| vec![0.5, k as f64, 0.25]).collect()),
            diverged: false,
        }
    }

    #[test]
    fn three_rows_give_four_lines() {
        let mut buf = Vec::new();
        write_csv(&sample(1, 3, false), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(!text.contains('\r'));
        assert_eq!(text.lines().next().unwrap(), "t,y_ref,y_true,y_meas,u,e,f_est");
    }

    #[test]
    fn mimo_columns_are_suffixed() {
        let h = csv_header(&sample(2, 2, false));
        assert_eq!(h[1], "y_ref_1");
        assert_eq!(h[12], "f_est_2");
        assert!(h.contains(&"e_2".to_string()));
        let h = csv_header(&sample(1, 2, true));
        assert_eq!(&h[7..], &["w_000", "w_001", "w_002"]);
    }

    #[test]
    fn read_back_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let ts = sample(1, 5, true);
        let p = dir.path().join("s.csv");
        emit_csv(&ts, &p).unwrap();
        assert_eq!(read_csv(&p).unwrap(), ts);
    }

    #[test]
    fn values_keep_enough_digits() {
        let s = fmt(1.0 / 3.0);
        let mantissa: String = s.split('e').next().unwrap().chars().filter(char::is_ascii_digit).collect();
        assert!(mantissa.len() >= 12);
    }

    #[test]
    fn io_errors_name_the_path() {
        let err = emit_csv(&sample(1, 2, false), Path::new("/nonexistent-dir/x.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/x.csv"));
        let err = read_csv(Path::new("/nonexistent-dir/y.csv")).unwrap_err();
        assert!(err.to_string().contains("y.csv"));
    }

    #[test]
    fn malformed_files_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.csv");
        std::fs::write(&p, "t,y_ref\n0,1\n").unwrap();
        assert!(read_csv(&p).is_err());
        std::fs::write(&p, "t,y_ref,y_true,y_meas,u,e,f_est\n").unwrap();
        assert!(read_csv(&p).is_err());
    }
}
