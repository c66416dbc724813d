//! Point sets, the dense distance matrix, and threshold-gated interaction weights.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `n` objects described by `m` real features, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet<S> {
    data: Vec<S>,
    n: usize,
    m: usize,
}

impl<S: Scalar> PointSet<S> {
    /// Builds a point set from rows, rejecting ragged rows and non-finite values.
    pub fn from_rows(rows: &[Vec<S>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::param("point set needs at least one row"));
        }
        let m = rows[0].len();
        if m == 0 {
            return Err(Error::param("points need at least one feature"));
        }
        let mut data = Vec::with_capacity(n * m);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidInput {
                    row: i,
                    col: row.len().min(m),
                    msg: format!("row has {} features, expected {m}", row.len()),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_flat(n, m, data)
    }

    pub fn from_flat(n: usize, m: usize, data: Vec<S>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::param(format!("point set must be non-empty, got {n}x{m}")));
        }
        if data.len() != n * m {
            return Err(Error::param(format!(
                "flat buffer has {} values, expected {n}x{m}",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput {
                row: pos / m,
                col: pos % m,
                msg: "feature value is not finite".into(),
            });
        }
        Ok(Self { data, n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.m..(i + 1) * self.m]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[S]> {
        self.data.chunks_exact(self.m)
    }
}

/// Dense, exactly symmetric `n × n` matrix of nonnegative distances with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix<S> {
    d: Vec<S>,
    n: usize,
}

impl<S: Scalar> DistanceMatrix<S> {
    /// Wraps a row-major buffer after checking every matrix invariant.
    pub fn from_flat(n: usize, d: Vec<S>) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("distance matrix must have at least one object"));
        }
        if d.len() != n * n {
            return Err(Error::param(format!(
                "distance buffer has {} values, expected {n}x{n}",
                d.len()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                let v = d[i * n + j];
                if !v.is_finite() || v < S::zero() {
                    return Err(Error::InvalidInput {
                        row: i,
                        col: j,
                        msg: format!("distance {v} is not finite and nonnegative"),
                    });
                }
                if i == j && v != S::zero() {
                    return Err(Error::InvalidInput { row: i, col: j, msg: format!("diagonal entry {v} is not zero") });
                }
                if j > i && v != d[j * n + i] {
                    return Err(Error::InvalidInput {
                        row: i,
                        col: j,
                        msg: format!("asymmetric entries {v} and {}", d[j * n + i]),
                    });
                }
            }
        }
        Ok(Self { d, n })
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Result<Self> {
        let n = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::InvalidInput {
                row: i,
                col: r.len().min(n),
                msg: format!("row has {} entries, matrix is {n}x{n}", r.len()),
            });
        }
        Self::from_flat(n, rows.concat())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> S {
        self.d[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.d[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[S] {
        &self.d
    }

    /// Largest entry; zero for a single object.
    pub fn max_distance(&self) -> S {
        self.d.iter().copied().fold(S::zero(), S::max)
    }

    /// Smallest off-diagonal entry, `None` when `n == 1`.
    pub fn min_off_diagonal(&self) -> Option<S> {
        let n = self.n;
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .reduce(S::min)
    }

    /// Every entry multiplied by `c > 0`.
    pub fn scaled(&self, c: S) -> Result<Self> {
        if !(c > S::zero()) || !c.is_finite() {
            return Err(Error::param(format!("scale factor must be positive and finite, got {c}")));
        }
        let d: Vec<S> = self.d.iter().map(|&v| v * c).collect();
        Self::from_flat(self.n, d)
    }
}

/// Connection strengths for one interaction threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionWeights<S> {
    w: Vec<S>,
    n: usize,
    t: S,
}

impl<S: Scalar> InteractionWeights<S> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn threshold(&self) -> S {
        self.t
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> S {
        self.w[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.w[i * self.n..(i + 1) * self.n]
    }
}

/// Euclidean distances between all pairs of points.
///
/// Each unordered pair is computed once and mirrored, so the result is bit-exactly symmetric.
pub fn distances_from_points<S: Scalar>(ps: &PointSet<S>) -> Result<DistanceMatrix<S>> {
    let n = ps.n();
    let mut d = vec![S::zero(); n * n];
    for i in 0..n {
        let xi = ps.row(i);
        for j in i + 1..n {
            let sq = xi
                .iter()
                .zip(ps.row(j))
                .fold(S::zero(), |acc, (&a, &b)| acc + (a - b) * (a - b));
            let v = sq.sqrt();
            if !v.is_finite() {
                return Err(Error::InvalidInput {
                    row: i,
                    col: j,
                    msg: "distance overflowed".into(),
                });
            }
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    Ok(DistanceMatrix { d, n })
}

/// Weights `t² / (d² + t²)` for pairs with `d ≤ t`, zero beyond the threshold.
///
/// The diagonal is always 1, and `t = 0` couples nothing. The value is evaluated as
/// `1 / (1 + (d/t)²)` so it depends only on the ratio `d/t`.
pub fn build_weights<S: Scalar>(dm: &DistanceMatrix<S>, t: S) -> Result<InteractionWeights<S>> {
    if t.is_nan() || t < S::zero() {
        return Err(Error::param(format!("interaction threshold must be >= 0, got {t}")));
    }
    let n = dm.n();
    let mut w = vec![S::zero(); n * n];
    for i in 0..n {
        w[i * n + i] = S::one();
        if t == S::zero() {
            continue;
        }
        for j in i + 1..n {
            let d = dm.get(i, j);
            if d <= t {
                let r = d / t;
                let v = S::one() / (S::one() + r * r);
                w[i * n + j] = v;
                w[j * n + i] = v;
            }
        }
    }
    Ok(InteractionWeights { w, n, t })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dm(rows: &[&[f64]]) -> DistanceMatrix<f64> {
        DistanceMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn euclidean_examples() {
        let ps = PointSet::from_rows(&[vec![0.0], vec![3.0]]).unwrap();
        let d = distances_from_points(&ps).unwrap();
        assert_eq!(d.as_slice(), &[0.0, 3.0, 3.0, 0.0]);

        let one = PointSet::from_rows(&[vec![1.5, -2.0]]).unwrap();
        assert_eq!(distances_from_points(&one).unwrap().as_slice(), &[0.0]);

        let tri = PointSet::from_rows(&[vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(distances_from_points(&tri).unwrap().get(0, 1), 5.0);
    }

    #[test]
    fn non_finite_feature_is_located() {
        let err = PointSet::from_rows(&[vec![0.0, 1.0], vec![2.0, f64::NAN]]).unwrap_err();
        match err {
            Error::InvalidInput { row, col, .. } => assert_eq!((row, col), (1, 1)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(PointSet::from_rows(&[vec![0.0, 1.0], vec![2.0]]).is_err());
        assert!(PointSet::<f64>::from_rows(&[]).is_err());
    }

    #[test]
    fn distance_matrix_invariants_enforced() {
        assert!(DistanceMatrix::from_rows(&[vec![0.0, 3.0], vec![2.0, 0.0]]).is_err());
        assert!(DistanceMatrix::from_rows(&[vec![1.0]]).is_err());
        assert!(DistanceMatrix::from_rows(&[vec![0.0, -1.0], vec![-1.0, 0.0]]).is_err());
        assert!(DistanceMatrix::from_rows(&[vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn weight_examples() {
        let d = dm(&[&[0.0, 0.0, 2.0], &[0.0, 0.0, 1.0], &[2.0, 1.0, 0.0]]);
        let w = build_weights(&d, 1.0).unwrap();
        assert_eq!(w.get(0, 1), 1.0);
        assert_eq!(w.get(1, 2), 0.5);
        assert_eq!(w.get(0, 2), 0.0);
        for i in 0..3 {
            assert_eq!(w.get(i, i), 1.0);
        }

        let w0 = build_weights(&d, 0.0).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(w0.get(i, j), if i == j { 1.0 } else { 0.0 });
            }
        }
        assert!(build_weights(&d, -0.1).is_err());
        assert!(build_weights(&d, f64::NAN).is_err());
    }

    #[test]
    fn boundary_distance_uses_interacting_branch() {
        for t in [1e-6, 0.3, 7.0, 1e9] {
            let d = dm(&[&[0.0, t], &[t, 0.0]]);
            assert_eq!(build_weights(&d, t).unwrap().get(0, 1), 0.5);
        }
    }

    #[test]
    fn works_in_single_precision() {
        let ps = PointSet::<f32>::from_rows(&[vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
        let d = distances_from_points(&ps).unwrap();
        let w = build_weights(&d, 5.0f32).unwrap();
        assert_eq!(w.get(0, 1), 0.5f32);
    }

    fn random_matrix() -> impl Strategy<Value = DistanceMatrix<f64>> {
        (1usize..9, 1usize..4)
            .prop_flat_map(|(n, m)| prop::collection::vec(-50.0f64..50.0, n * m).prop_map(move |v| (n, m, v)))
            .prop_map(|(n, m, v)| distances_from_points(&PointSet::from_flat(n, m, v).unwrap()).unwrap())
    }

    proptest! {
        #[test]
        fn weights_satisfy_invariants(d in random_matrix(), t in 0.0f64..120.0) {
            let w = build_weights(&d, t).unwrap();
            let n = d.n();
            for i in 0..n {
                prop_assert_eq!(w.get(i, i), 1.0);
                for j in 0..n {
                    prop_assert_eq!(w.get(i, j), w.get(j, i));
                    if i != j {
                        let v = w.get(i, j);
                        if d.get(i, j) > t || t == 0.0 {
                            prop_assert_eq!(v, 0.0);
                        } else {
                            prop_assert!((0.5..=1.0).contains(&v));
                        }
                    }
                }
            }
        }

        #[test]
        fn weights_are_scale_invariant(d in random_matrix(), t in 0.01f64..120.0, c in prop::sample::select(vec![1e-3, 0.37, 2.5, 1e3])) {
            let w = build_weights(&d, t).unwrap();
            let ws = build_weights(&d.scaled(c).unwrap(), t * c).unwrap();
            let n = d.n();
            for i in 0..n {
                for j in 0..n {
                    let (a, b) = (w.get(i, j), ws.get(i, j));
                    if a == 0.0 || b == 0.0 {
                        // ratio exactly at the boundary may round either way
                        let r = d.get(i, j) / t;
                        prop_assert!(a == b || (r - 1.0).abs() < 1e-12);
                    } else {
                        prop_assert!((a - b).abs() <= 1e-12 * a.abs());
                    }
                }
            }
        }

        #[test]
        fn weights_nondecreasing_in_threshold(d in random_matrix(), t1 in 0.0f64..100.0, dt in 0.0f64..50.0) {
            let lo = build_weights(&d, t1).unwrap();
            let hi = build_weights(&d, t1 + dt).unwrap();
            for i in 0..d.n() {
                for j in 0..d.n() {
                    if i != j && d.get(i, j) > 0.0 {
                        prop_assert!(hi.get(i, j) >= lo.get(i, j));
                    }
                }
            }
        }

        #[test]
        fn distances_are_bit_symmetric(d in random_matrix()) {
            for i in 0..d.n() {
                prop_assert_eq!(d.get(i, i), 0.0);
                for j in 0..d.n() {
                    prop_assert_eq!(d.get(i, j).to_bits(), d.get(j, i).to_bits());
                }
            }
        }
    }
}
