//! Clustering from pairwise distances alone.
//!
//! Every object carries a neuron. For an interaction threshold `t`, neurons closer
//! than `t` are coupled with weight `t² / (d² + t²)`; a lateral-inhibition transfer
//! process then lets high-activity neurons drain their neighbours until only
//! mutually non-interacting neurons remain. Those survivors are the class centers,
//! and every object joins its nearest center. Sweeping `t` gives the `K(t)` curve,
//! whose long plateaus indicate the class counts genuinely present in the data.
//!
//! The numerical core is generic over [`Scalar`] (`f32` / `f64`). The `*64` and
//! `*32` aliases below name the concrete instantiations; ingestion and the
//! embedded datasets produce `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod io;
pub mod model;
pub mod scalar;
pub mod sweep;

pub use dynamics::{
    assign_to_centers, cluster_at_threshold, init_activities, run_dynamics, step, tie_tolerance,
    ActivityState, ClusteringResult, DynamicsConfig, DynamicsOutcome,
};
pub use error::{Error, Result};
pub use model::{build_weights, distances_from_points, DistanceMatrix, InteractionWeights, PointSet};
pub use scalar::Scalar;
pub use sweep::{detect_plateaus, make_grid, sweep, GridMode, Plateau, SweepCurve, SweepGrid, SweepSample};

pub type PointSet64 = PointSet<f64>;
pub type DistanceMatrix64 = DistanceMatrix<f64>;
pub type InteractionWeights64 = InteractionWeights<f64>;
pub type ActivityState64 = ActivityState<f64>;
pub type DynamicsConfig64 = DynamicsConfig<f64>;
pub type ClusteringResult64 = ClusteringResult<f64>;
pub type SweepGrid64 = SweepGrid<f64>;
pub type SweepCurve64 = SweepCurve<f64>;
pub type Plateau64 = Plateau<f64>;

pub type PointSet32 = PointSet<f32>;
pub type DistanceMatrix32 = DistanceMatrix<f32>;
pub type InteractionWeights32 = InteractionWeights<f32>;
pub type DynamicsConfig32 = DynamicsConfig<f32>;
pub type ClusteringResult32 = ClusteringResult<f32>;
pub type SweepCurve32 = SweepCurve<f32>;
