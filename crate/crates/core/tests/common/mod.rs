//! Test-only helpers, including a deliberately naive reference clusterer.

#![allow(dead_code)]

use neuroclust::io::{gen_blobs, BlobSpec};
use neuroclust::{distances_from_points, DistanceMatrix64, PointSet64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TIE_RTOL: f64 = 1e-9;

/// Dense, unoptimised transcription of the method on a plain `Vec<Vec<f64>>`.
///
/// Weights, initial activities, synchronous transfer over active neurons, elimination of
/// negative neurons, the stalled-group survivor rule, then nearest-center labels.
pub fn naive_cluster(d: &[Vec<f64>], t: f64, alpha: f64, eps: f64) -> (Vec<usize>, Vec<usize>) {
    let n = d.len();
    let mut w = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            w[i][j] = if i == j {
                1.0
            } else if t > 0.0 && d[i][j] <= t {
                t * t / (d[i][j] * d[i][j] + t * t)
            } else {
                0.0
            };
        }
    }
    let s0: Vec<f64> = (0..n).map(|i| (0..n).map(|j| w[i][j]).sum()).collect();
    let mut s = s0.clone();
    let mut active = vec![true; n];

    let coupled = |active: &[bool], i: usize, j: usize| i != j && active[i] && active[j] && w[i][j] > 0.0;
    loop {
        let any = (0..n).any(|i| (0..n).any(|j| coupled(&active, i, j)));
        if !any {
            break;
        }
        let mut next = vec![0.0; n];
        for i in 0..n {
            if active[i] {
                let mut sum = 0.0;
                for j in 0..n {
                    if j != i && active[j] && w[i][j] > 0.0 {
                        sum += w[i][j] * (s[i] - s[j]);
                    }
                }
                next[i] = s[i] + alpha * sum;
            }
        }
        let mut biggest = 0.0f64;
        let mut clipped = false;
        for i in 0..n {
            if active[i] {
                biggest = biggest.max((next[i] - s[i]).abs());
                if next[i] < 0.0 {
                    next[i] = 0.0;
                    active[i] = false;
                    clipped = true;
                }
            }
        }
        s = next;
        if !clipped && biggest <= eps {
            // union-find over coupled active neurons
            let mut parent: Vec<usize> = (0..n).collect();
            fn find(p: &mut [usize], x: usize) -> usize {
                let mut r = x;
                while p[r] != r {
                    r = p[r];
                }
                p[x] = r;
                r
            }
            for i in 0..n {
                for j in 0..n {
                    if coupled(&active, i, j) {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        parent[a] = b;
                    }
                }
            }
            let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
            let mut keep = vec![usize::MAX; n];
            for i in 0..n {
                if !active[i] {
                    continue;
                }
                let r = roots[i];
                let better = keep[r] == usize::MAX || {
                    let b = keep[r];
                    let tied = |x: f64, y: f64| (x - y).abs() <= TIE_RTOL * x.abs().max(y.abs());
                    if !tied(s[i], s[b]) {
                        s[i] > s[b]
                    } else if !tied(s0[i], s0[b]) {
                        s0[i] > s0[b]
                    } else {
                        i < b
                    }
                };
                if better {
                    keep[r] = i;
                }
            }
            for i in 0..n {
                if active[i] && keep[roots[i]] != i {
                    active[i] = false;
                    s[i] = 0.0;
                }
            }
        }
    }
    let centers: Vec<usize> = (0..n).filter(|&i| active[i]).collect();
    let labels = (0..n)
        .map(|j| {
            if let Some(p) = centers.iter().position(|&c| c == j) {
                return p;
            }
            let mut best = 0;
            for p in 0..centers.len() {
                if d[j][centers[p]] < d[j][centers[best]] {
                    best = p;
                }
            }
            best
        })
        .collect();
    (centers, labels)
}

pub fn to_rows(dm: &DistanceMatrix64) -> Vec<Vec<f64>> {
    (0..dm.n()).map(|i| dm.row(i).to_vec()).collect()
}

/// Random small instance: Gaussian blobs with random cluster count, size, width and seed.
pub fn random_blobs(rng: &mut ChaCha8Rng, max_n: usize) -> (PointSet64, DistanceMatrix64) {
    loop {
        let clusters = rng.random_range(1..=4);
        let per = rng.random_range(1..=(max_n / clusters).max(1));
        if clusters * per < 2 {
            continue;
        }
        let spec = BlobSpec {
            clusters,
            points_per_cluster: per,
            sigma: rng.random_range(0.2..2.0),
            dim: rng.random_range(1..=3),
            center_box: 10.0,
            seed: rng.random(),
            min_center_separation: 0.0,
        };
        let (ps, _) = gen_blobs(&spec).expect("valid blob spec");
        let dm = distances_from_points(&ps).expect("finite points");
        return (ps, dm);
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// True when two labelings induce the same partition.
pub fn same_partition(a: &[usize], b: &[usize]) -> bool {
    use std::collections::HashMap;
    if a.len() != b.len() {
        return false;
    }
    let (mut ab, mut ba) = (HashMap::new(), HashMap::new());
    a.iter().zip(b).all(|(&x, &y)| *ab.entry(x).or_insert(y) == y && *ba.entry(y).or_insert(x) == x)
}
