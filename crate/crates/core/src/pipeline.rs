//! The two end-to-end protocols. Both resample first and select key points
//! second.

use crate::error::{Error, Result};
use crate::geometry::{build_neighbor_graph, PointCloud};
use crate::resampling::{inference_resample, train_resample, ResamplePlan};
use crate::reweighting::{filter_mask, isolation_rates, sampling_weights_with, WeightTransform, WeightVector};
use crate::rng::derive_seed;
use crate::sampling::{ffps, sws, SampleResult, StartRule};

pub const DEFAULT_K: usize = 20;
pub const DEFAULT_OMEGA: f64 = 0.95;
pub const DEFAULT_RHO: f64 = 0.25;
pub const DEFAULT_TARGET_N: usize = 1024;
pub const DEFAULT_M: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolConfig {
    pub k: usize,
    pub omega: f64,
    pub rho: f64,
    pub target_n: usize,
    pub m: usize,
    pub seed: u64,
    pub start_rule: StartRule,
    pub weight_transform: WeightTransform,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            k: DEFAULT_K,
            omega: DEFAULT_OMEGA,
            rho: DEFAULT_RHO,
            target_n: DEFAULT_TARGET_N,
            m: DEFAULT_M,
            seed: 0,
            start_rule: StartRule::default(),
            weight_transform: WeightTransform::default(),
        }
    }
}

impl ProtocolConfig {
    /// `k` clipped to what a cloud of `n` points supports.
    pub fn effective_k(&self, n: usize) -> Result<usize> {
        if n < 2 {
            return Err(Error::Degenerate("need at least 2 points to build neighborhoods".into()));
        }
        if self.k < 1 {
            return Err(Error::param("k must be at least 1"));
        }
        Ok(self.k.min(n - 1))
    }
}

#[derive(Debug, Clone)]
pub struct InferenceOutput {
    pub cloud: PointCloud,
    pub samples: SampleResult,
    pub weights: WeightVector,
}

/// Size restoration, isolation rates, threshold mask, filtered FPS.
pub fn run_inference_pipeline(cloud: &PointCloud, cfg: &ProtocolConfig) -> Result<InferenceOutput> {
    let prepared = inference_resample(cloud, cfg.target_n, cfg.k.max(1), derive_seed(cfg.seed, 0))?;
    let graph = build_neighbor_graph(&prepared, cfg.effective_k(prepared.len())?)?;
    let weights = filter_mask(isolation_rates(&graph), cfg.omega)?;
    let samples = ffps(&prepared, &weights, cfg.m, cfg.start_rule)?;
    Ok(InferenceOutput {
        cloud: prepared,
        samples,
        weights,
    })
}

#[derive(Debug, Clone)]
pub struct TrainingOutput {
    pub cloud: PointCloud,
    pub plan: ResamplePlan,
    pub samples: SampleResult,
    pub weights: WeightVector,
}

/// Random size jitter, isolation-derived weights, weighted key-point draw.
pub fn run_training_pipeline(cloud: &PointCloud, cfg: &ProtocolConfig) -> Result<TrainingOutput> {
    let (resampled, plan) = train_resample(cloud, cfg.rho, cfg.k.max(1), derive_seed(cfg.seed, 0))?;
    let graph = build_neighbor_graph(&resampled, cfg.effective_k(resampled.len())?)?;
    let weights = sampling_weights_with(isolation_rates(&graph), cfg.weight_transform);
    let samples = sws(&resampled, &weights, cfg.m, derive_seed(cfg.seed, 1))?;
    Ok(TrainingOutput {
        cloud: resampled,
        plan,
        samples,
        weights,
    })
}
