use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::PointSet;

const CENTER_ATTEMPTS: usize = 100_000;

/// Isotropic Gaussian clusters around well-separated random centers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlobSpec {
    pub clusters: usize,
    pub points_per_cluster: usize,
    /// Per-axis standard deviation.
    pub sigma: f64,
    pub dim: usize,
    /// Centers are drawn uniformly from `[-center_box, center_box]^dim`.
    pub center_box: f64,
    pub seed: u64,
    pub min_center_separation: f64,
}

impl Default for BlobSpec {
    fn default() -> Self {
        Self {
            clusters: 5,
            points_per_cluster: 10,
            sigma: 1.0,
            dim: 2,
            center_box: 30.0,
            seed: 1,
            min_center_separation: 10.0,
        }
    }
}

impl BlobSpec {
    pub fn validate(&self) -> Result<()> {
        if self.clusters == 0 || self.points_per_cluster == 0 || self.dim == 0 {
            return Err(Error::param("clusters, points_per_cluster and dim must all be >= 1"));
        }
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return Err(Error::param(format!("sigma must be positive, got {}", self.sigma)));
        }
        if !(self.center_box >= 0.0) || !self.center_box.is_finite() {
            return Err(Error::param(format!("center_box must be >= 0, got {}", self.center_box)));
        }
        if !(self.min_center_separation >= 0.0) || !self.min_center_separation.is_finite() {
            return Err(Error::param(format!(
                "min_center_separation must be >= 0, got {}",
                self.min_center_separation
            )));
        }
        Ok(())
    }
}

/// Generates blob data and the generating cluster of every point.
///
/// The stream is ChaCha8 seeded with `seed` (via `seed_from_u64`); centers come from
/// uniform draws with rejection, offsets from the ziggurat standard normal scaled by
/// `sigma`. Points are emitted cluster by cluster.
pub fn gen_blobs(spec: &BlobSpec) -> Result<(PointSet<f64>, Vec<usize>)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let b = spec.center_box;
    let sep2 = spec.min_center_separation * spec.min_center_separation;
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(spec.clusters);
    let mut attempts = 0;
    while centers.len() < spec.clusters {
        if attempts == CENTER_ATTEMPTS {
            return Err(Error::Generation(format!(
                "placed {} of {} centers {} apart inside a box of half-width {b} after {CENTER_ATTEMPTS} draws",
                centers.len(),
                spec.clusters,
                spec.min_center_separation
            )));
        }
        attempts += 1;
        let c: Vec<f64> = (0..spec.dim).map(|_| rng.random_range(-b..=b)).collect();
        let clear = centers
            .iter()
            .all(|o| o.iter().zip(&c).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() >= sep2);
        if clear {
            centers.push(c);
        }
    }
    let n = spec.clusters * spec.points_per_cluster;
    let mut data = Vec::with_capacity(n * spec.dim);
    let mut labels = Vec::with_capacity(n);
    for (label, c) in centers.iter().enumerate() {
        for _ in 0..spec.points_per_cluster {
            for &x in c {
                let z: f64 = rng.sample(StandardNormal);
                data.push(x + spec.sigma * z);
            }
            labels.push(label);
        }
    }
    Ok((PointSet::from_flat(n, spec.dim, data)?, labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_sized_configurations() {
        let five = BlobSpec { clusters: 5, points_per_cluster: 10, dim: 2, ..BlobSpec::default() };
        let (ps, labels) = gen_blobs(&five).unwrap();
        assert_eq!((ps.n(), ps.m()), (50, 2));
        for c in 0..5 {
            assert_eq!(labels.iter().filter(|&&l| l == c).count(), 10);
        }

        let ten = BlobSpec { clusters: 10, points_per_cluster: 10, dim: 2, center_box: 50.0, ..BlobSpec::default() };
        assert_eq!(gen_blobs(&ten).unwrap().0.n(), 100);
    }

    #[test]
    fn seeded_output_is_reproducible() {
        let spec = BlobSpec { seed: 99, dim: 3, ..BlobSpec::default() };
        assert_eq!(gen_blobs(&spec).unwrap(), gen_blobs(&spec).unwrap());
        let other = BlobSpec { seed: 100, ..spec.clone() };
        assert_ne!(gen_blobs(&spec).unwrap().0, gen_blobs(&other).unwrap().0);
    }

    #[test]
    fn seeded_stream_is_pinned() {
        // guards the generator algorithm: a change here changes every generated dataset
        let spec = BlobSpec { clusters: 1, points_per_cluster: 1, dim: 2, seed: 7, ..BlobSpec::default() };
        let (ps, _) = gen_blobs(&spec).unwrap();
        assert_eq!(ps.row(0), &[-19.6425211600198, -19.560859175329902]);
    }

    #[test]
    fn centers_respect_separation() {
        let spec = BlobSpec { clusters: 6, points_per_cluster: 200, sigma: 0.01, min_center_separation: 12.0, ..BlobSpec::default() };
        let (ps, labels) = gen_blobs(&spec).unwrap();
        let mut means = [[0.0f64; 2]; 6];
        for (row, &l) in ps.rows().zip(&labels) {
            means[l][0] += row[0] / 200.0;
            means[l][1] += row[1] / 200.0;
        }
        for a in 0..6 {
            for b in a + 1..6 {
                let d = ((means[a][0] - means[b][0]).powi(2) + (means[a][1] - means[b][1]).powi(2)).sqrt();
                assert!(d > 11.9, "centers {a} and {b} only {d} apart");
            }
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(matches!(gen_blobs(&BlobSpec { sigma: 0.0, ..BlobSpec::default() }), Err(Error::Parameter(_))));
        assert!(matches!(gen_blobs(&BlobSpec { clusters: 0, ..BlobSpec::default() }), Err(Error::Parameter(_))));
        let crowded = BlobSpec { clusters: 50, center_box: 5.0, min_center_separation: 8.0, ..BlobSpec::default() };
        assert!(matches!(gen_blobs(&crowded), Err(Error::Generation(_))));
    }
}
