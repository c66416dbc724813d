use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{DistanceMatrix, PointSet};

const SYMMETRY_RTOL: f64 = 1e-9;
const DIAGONAL_ATOL: f64 = 1e-12;

/// Comma-separated records with 1-based line numbers.
fn records(text: &str, has_header: bool, origin: &Path) -> Result<Vec<(usize, Vec<String>)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse {
            path: origin.to_path_buf(),
            line: e.position().map_or(0, |p| p.line() as usize),
            msg: e.to_string(),
        })?;
        let line = rec.position().map_or(out.len() + 1, |p| p.line() as usize);
        if rec.iter().all(str::is_empty) {
            continue;
        }
        out.push((line, rec.iter().map(str::to_owned).collect()));
    }
    if out.is_empty() {
        return Err(Error::Parse { path: origin.to_path_buf(), line: 1, msg: "no data rows".into() });
    }
    Ok(out)
}

fn parse_cell(cell: &str, line: usize, col: usize, origin: &Path) -> Result<f64> {
    cell.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Parse {
            path: origin.to_path_buf(),
            line,
            msg: format!("column {} holds {cell:?}, expected a finite number", col + 1),
        })
}

/// Parses a points table held in memory. `origin` only labels error messages.
pub fn parse_points_csv(
    text: &str,
    has_header: bool,
    label_column: Option<usize>,
    origin: &Path,
) -> Result<(PointSet<f64>, Option<Vec<String>>)> {
    let rows = records(text, has_header, origin)?;
    let width = rows[0].1.len();
    if let Some(c) = label_column {
        if c >= width {
            return Err(Error::Parse {
                path: origin.to_path_buf(),
                line: rows[0].0,
                msg: format!("label column {} beyond row width {width}", c + 1),
            });
        }
    }
    let mut features = Vec::with_capacity(rows.len());
    let mut labels = label_column.map(|_| Vec::with_capacity(rows.len()));
    for (line, cells) in &rows {
        if cells.len() != width {
            return Err(Error::Parse {
                path: origin.to_path_buf(),
                line: *line,
                msg: format!("row has {} fields, expected {width}", cells.len()),
            });
        }
        let mut row = Vec::with_capacity(width);
        for (col, cell) in cells.iter().enumerate() {
            if Some(col) == label_column {
                labels.as_mut().expect("label column requested").push(cell.clone());
            } else {
                row.push(parse_cell(cell, *line, col, origin)?);
            }
        }
        features.push(row);
    }
    let ps = PointSet::from_rows(&features).map_err(|e| Error::Parse {
        path: origin.to_path_buf(),
        line: rows[0].0,
        msg: e.to_string(),
    })?;
    Ok((ps, labels))
}

/// Reads objects as rows of numeric features, optionally with one label column.
///
/// Labels are returned as opaque strings and never enter the clustering.
pub fn read_points_csv(
    path: impl AsRef<Path>,
    has_header: bool,
    label_column: Option<usize>,
) -> Result<(PointSet<f64>, Option<Vec<String>>)> {
    let path = path.as_ref();
    parse_points_csv(&super::read_file(path)?, has_header, label_column, path)
}

/// Parses a square distance matrix, tolerating small asymmetry and diagonal noise.
///
/// Mirrored entries within `1e-9` relative are averaged; diagonal entries within `1e-12`
/// of zero are zeroed. Anything else, or a negative entry, is rejected with its indices.
pub fn parse_distance_csv(text: &str, has_header: bool, origin: &Path) -> Result<DistanceMatrix<f64>> {
    let rows = records(text, has_header, origin)?;
    let n = rows.len();
    let mut d = vec![0.0; n * n];
    for (i, (line, cells)) in rows.iter().enumerate() {
        if cells.len() != n {
            return Err(Error::Parse {
                path: origin.to_path_buf(),
                line: *line,
                msg: format!("row has {} fields, matrix has {n} rows", cells.len()),
            });
        }
        for (j, cell) in cells.iter().enumerate() {
            d[i * n + j] = parse_cell(cell, *line, j, origin)?;
        }
    }
    let invalid = |row, col, msg: String| Error::InvalidInput { row, col, msg };
    for i in 0..n {
        for j in 0..n {
            if d[i * n + j] < 0.0 {
                return Err(invalid(i, j, format!("negative distance {}", d[i * n + j])));
            }
        }
    }
    for i in 0..n {
        let v = d[i * n + i];
        if v > DIAGONAL_ATOL {
            return Err(invalid(i, i, format!("diagonal entry {v} is not zero")));
        }
        d[i * n + i] = 0.0;
        for j in i + 1..n {
            let (a, b) = (d[i * n + j], d[j * n + i]);
            if (a - b).abs() > SYMMETRY_RTOL * a.max(b) {
                return Err(invalid(i, j, format!("asymmetric: ({i},{j}) = {a} but ({j},{i}) = {b}")));
            }
            let m = if a == b { a } else { 0.5 * (a + b) };
            d[i * n + j] = m;
            d[j * n + i] = m;
        }
    }
    DistanceMatrix::from_flat(n, d)
}

pub fn read_distance_csv(path: impl AsRef<Path>, has_header: bool) -> Result<DistanceMatrix<f64>> {
    let path = path.as_ref();
    parse_distance_csv(&super::read_file(path)?, has_header, path)
}

/// Writes points (and optional trailing labels) in the layout [`read_points_csv`] accepts.
pub fn write_points_csv(path: impl AsRef<Path>, ps: &PointSet<f64>, labels: Option<&[String]>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    let mut header: Vec<String> = (0..ps.m()).map(|c| format!("x{c}")).collect();
    if labels.is_some() {
        header.push("label".into());
    }
    out.push_str(&header.join(","));
    out.push('\n');
    for (i, row) in ps.rows().enumerate() {
        let mut cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        if let Some(l) = labels {
            cells.push(l[i].clone());
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    super::write_file(path, &out)
}
