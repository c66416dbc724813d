use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dynamics::ClusteringResult;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sweep::{Plateau, SweepCurve, SweepSample};

const CURVE_HEADER: &str = "t\tk_raw\tk_filtered\tconverged";

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes `t, alpha, k, centers, labels, class_sizes, iters` as one JSON document.
pub fn write_result_json<S: Scalar>(result: &ClusteringResult<S>, path: impl AsRef<Path>) -> Result<()> {
    super::write_file(path.as_ref(), &to_json(result)?)
}

pub fn read_result_json<S: Scalar>(path: impl AsRef<Path>) -> Result<ClusteringResult<S>> {
    Ok(serde_json::from_str(&super::read_file(path.as_ref())?)?)
}

/// One row per sample: threshold, raw and filtered class counts, `1`/`0` convergence flag.
pub fn write_curve_tsv<S: Scalar>(curve: &SweepCurve<S>, path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::with_capacity(32 * (curve.samples.len() + 1));
    out.push_str(CURVE_HEADER);
    out.push('\n');
    for s in &curve.samples {
        out.push_str(&format!("{}\t{}\t{}\t{}\n", s.t, s.k_raw, s.k_filtered, u8::from(s.converged)));
    }
    super::write_file(path.as_ref(), &out)
}

pub fn read_curve_tsv(path: impl AsRef<Path>) -> Result<Vec<SweepSample<f64>>> {
    let path = path.as_ref();
    let text = super::read_file(path)?;
    let bad = |line: usize, msg: String| Error::Parse { path: path.to_path_buf(), line, msg };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CURVE_HEADER => {}
        _ => return Err(bad(1, format!("expected header {CURVE_HEADER:?}"))),
    }
    lines
        .map(|(i, line)| {
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != 4 {
                return Err(bad(i + 1, format!("expected 4 fields, got {}", f.len())));
            }
            let num = |s: &str| s.parse::<usize>().map_err(|e| bad(i + 1, e.to_string()));
            Ok(SweepSample {
                t: f[0].parse().map_err(|e: std::num::ParseFloatError| bad(i + 1, e.to_string()))?,
                k_raw: num(f[1])?,
                k_filtered: num(f[2])?,
                converged: match f[3] {
                    "1" => true,
                    "0" => false,
                    other => return Err(bad(i + 1, format!("converged flag {other:?}"))),
                },
            })
        })
        .collect()
}

/// Width-ranked plateau listing together with the settings that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlateauReport<S> {
    pub alpha: S,
    pub min_class_size: usize,
    pub use_filtered: bool,
    pub t_min: S,
    pub t_max: S,
    pub samples: usize,
    pub plateaus: Vec<Plateau<S>>,
}

pub fn write_plateau_report<S: Scalar>(report: &PlateauReport<S>, path: impl AsRef<Path>) -> Result<()> {
    super::write_file(path.as_ref(), &to_json(report)?)
}

pub fn read_plateau_report<S: Scalar>(path: impl AsRef<Path>) -> Result<PlateauReport<S>> {
    Ok(serde_json::from_str(&super::read_file(path.as_ref())?)?)
}
