use std::path::Path;

use crate::model::PointSet;

const IRIS_CSV: &str = include_str!("../../assets/iris.csv");

/// Fisher's iris measurements: 150 flowers, four features (cm), three species of 50.
pub fn load_iris() -> (PointSet<f64>, Vec<String>) {
    let (ps, labels) = super::parse_points_csv(IRIS_CSV, true, Some(4), Path::new("assets/iris.csv"))
        .expect("embedded iris table is well formed");
    (ps, labels.expect("iris carries species labels"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn shape_and_labels() {
        let (ps, labels) = load_iris();
        assert_eq!(ps.n(), 150);
        assert_eq!(ps.m(), 4);
        let mut counts = BTreeMap::new();
        for l in &labels {
            *counts.entry(l.as_str()).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 3);
        assert!(counts.values().all(|&c| c == 50));
    }

    #[test]
    fn first_and_last_records() {
        let (ps, labels) = load_iris();
        assert_eq!(ps.row(0), &[5.1, 3.5, 1.4, 0.2]);
        assert_eq!(labels[0], "setosa");
        assert_eq!(ps.row(149), &[5.9, 3.0, 5.1, 1.8]);
        assert_eq!(labels[149], "virginica");
    }
}
