//! Robust point-cloud sampling.
//!
//! Key-point selection that avoids outliers (isolation-rate reweighting,
//! filtered farthest point sampling, stochastic weighted sampling), full-point
//! resampling (tangent-plane upsampling, local-global-balanced downsampling),
//! and seeded corruption generators for measuring both.

pub mod corruption;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod io;
pub mod pipeline;
pub mod report;
pub mod resampling;
pub mod reweighting;
pub mod rng;
pub mod sampling;

pub use error::{Error, ErrorKind, Result};
pub use geometry::{NeighborGraph, Point, PointCloud, Vector};
pub use pipeline::ProtocolConfig;
pub use resampling::{InterpolationRecord, ResamplePlan};
pub use reweighting::WeightVector;
pub use sampling::{SampleMethod, SampleResult, StartRule};
