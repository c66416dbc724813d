//! Threshold sweeps, the `K(t)` curve and plateau detection.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{cluster_at_threshold, DynamicsConfig};
use crate::error::{Error, Result};
use crate::model::DistanceMatrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridMode {
    /// Evenly spaced thresholds, endpoints included.
    Uniform,
    /// Midpoints between consecutive distinct pairwise distances, thinned to `steps`.
    DistanceQuantile,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid<S> {
    pub t_values: Vec<S>,
    pub mode: GridMode,
    pub steps: usize,
    pub t_min: S,
    pub t_max: S,
}

/// Default upper end of a sweep: just past the largest distance, so the last sample is a single class.
pub fn auto_t_max<S: Scalar>(dm: &DistanceMatrix<S>) -> S {
    let max = dm.max_distance();
    if max > S::zero() {
        S::lit(1.01) * max
    } else {
        S::one()
    }
}

/// Builds the threshold axis. `t_max = None` resolves to [`auto_t_max`].
pub fn make_grid<S: Scalar>(
    dm: &DistanceMatrix<S>,
    mode: GridMode,
    steps: usize,
    t_min: S,
    t_max: Option<S>,
) -> Result<SweepGrid<S>> {
    let t_max = t_max.unwrap_or_else(|| auto_t_max(dm));
    if steps < 2 {
        return Err(Error::param(format!("a sweep needs at least 2 steps, got {steps}")));
    }
    if !(t_min >= S::zero()) || !(t_min < t_max) || !t_max.is_finite() {
        return Err(Error::param(format!("degenerate threshold range [{t_min}, {t_max}]")));
    }
    let t_values = match mode {
        GridMode::Uniform => {
            let span = t_max - t_min;
            let last = S::lit((steps - 1) as f64);
            let mut v: Vec<S> = (0..steps).map(|i| t_min + span * S::lit(i as f64) / last).collect();
            v[steps - 1] = t_max;
            v
        }
        GridMode::DistanceQuantile => quantile_values(dm, steps, t_min, t_max),
    };
    Ok(SweepGrid { t_values, mode, steps, t_min, t_max })
}

fn quantile_values<S: Scalar>(dm: &DistanceMatrix<S>, steps: usize, t_min: S, t_max: S) -> Vec<S> {
    let n = dm.n();
    let mut dist: Vec<S> = (0..n).flat_map(|i| dm.row(i)[i + 1..].to_vec()).collect();
    dist.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    dist.dedup();
    let two = S::lit(2.0);
    let mut candidates = vec![t_min];
    candidates.extend(
        dist.windows(2)
            .map(|p| (p[0] + p[1]) / two)
            .filter(|&m| m > t_min && m < t_max),
    );
    candidates.push(t_max);
    candidates.dedup();
    if candidates.len() <= steps {
        return candidates;
    }
    let last = candidates.len() - 1;
    let mut out: Vec<S> = (0..steps)
        .map(|i| candidates[((i * last) as f64 / (steps - 1) as f64).round() as usize])
        .collect();
    out.dedup();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSample<S> {
    pub t: S,
    pub k_raw: usize,
    /// Classes with at least `min_class_size` members.
    pub k_filtered: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCurve<S> {
    pub samples: Vec<SweepSample<S>>,
    pub min_class_size: usize,
    pub alpha: S,
}

impl<S: Scalar> SweepCurve<S> {
    pub fn k_values(&self, use_filtered: bool) -> Vec<usize> {
        self.samples
            .iter()
            .map(|s| if use_filtered { s.k_filtered } else { s.k_raw })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plateau<S> {
    pub k: usize,
    pub t_start: S,
    pub t_end: S,
    pub width: S,
    pub sample_count: usize,
}

/// Evaluates `K(t)` at every grid point.
///
/// Grid points run in parallel; a threshold whose dynamics fail to terminate is flagged
/// rather than aborting the sweep.
pub fn sweep<S: Scalar>(
    dm: &DistanceMatrix<S>,
    grid: &SweepGrid<S>,
    cfg: &DynamicsConfig<S>,
    min_class_size: usize,
) -> Result<SweepCurve<S>> {
    cfg.validate()?;
    if min_class_size == 0 {
        return Err(Error::param("min_class_size must be at least 1"));
    }
    let samples = grid
        .t_values
        .par_iter()
        .map(|&t| match cluster_at_threshold(dm, t, cfg) {
            Ok(r) => Ok(SweepSample {
                t,
                k_raw: r.k,
                k_filtered: r.class_sizes.iter().filter(|&&s| s >= min_class_size).count(),
                converged: true,
            }),
            Err(Error::NonConvergence { .. }) => Ok(SweepSample { t, k_raw: 0, k_filtered: 0, converged: false }),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepCurve { samples, min_class_size, alpha: cfg.alpha })
}

/// Maximal runs of converged samples sharing one class count.
///
/// Sorted by width (threshold units) descending, then smaller `k`, then earlier start.
pub fn detect_plateaus<S: Scalar>(curve: &SweepCurve<S>, use_filtered: bool) -> Vec<Plateau<S>> {
    let mut out = Vec::new();
    let mut run: Option<Plateau<S>> = None;
    for s in &curve.samples {
        let k = if use_filtered { s.k_filtered } else { s.k_raw };
        match run.as_mut() {
            Some(p) if s.converged && p.k == k => {
                p.t_end = s.t;
                p.sample_count += 1;
            }
            _ => {
                out.extend(run.take());
                if s.converged {
                    run = Some(Plateau { k, t_start: s.t, t_end: s.t, width: S::zero(), sample_count: 1 });
                }
            }
        }
    }
    out.extend(run);
    for p in &mut out {
        p.width = p.t_end - p.t_start;
    }
    out.sort_by(|a, b| {
        b.width
            .partial_cmp(&a.width)
            .unwrap_or(Ordering::Equal)
            .then(a.k.cmp(&b.k))
            .then(a.t_start.partial_cmp(&b.t_start).unwrap_or(Ordering::Equal))
    });
    out
}
