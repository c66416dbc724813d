//! Data ingestion, synthetic and embedded datasets, and result emission.

mod blobs;
mod csv_input;
mod iris;
mod output;
mod svg;

pub use blobs::{gen_blobs, BlobSpec};
pub use csv_input::{parse_distance_csv, parse_points_csv, read_distance_csv, read_points_csv, write_points_csv};
pub use iris::load_iris;
pub use output::{
    read_curve_tsv, read_plateau_report, read_result_json, write_curve_tsv, write_plateau_report,
    write_result_json, PlateauReport,
};
pub use svg::{curve_svg, render_curve_svg};

use std::path::Path;

use crate::error::{Error, Result};

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub(crate) fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}
