//! Full-points resampling: tangent-plane upsampling, local-global-balanced
//! downsampling, and the training and inference size adjusters built on them.

mod downsample;
mod interpolation;

pub use downsample::{center_neighborhood, lgb_downsample, lgb_downsample_with};
pub use interpolation::{interpolation_candidates, lgp_interpolate, InterpolationRecord, MIN_TANGENT_NORM};

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{build_neighbor_graph, estimate_normals, NeighborGraph, PointCloud};
use crate::rng::{derive_seed, stream_rng};

/// One size adjustment.
///
/// For downsampling `selected` holds the removed indices, all inside the
/// `neighborhood_size`-neighborhood of `center_index`. For upsampling it holds
/// the source index of each accepted interpolant, in output order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResamplePlan {
    pub delta_n: i64,
    pub neighborhood_size: Option<usize>,
    pub center_index: Option<usize>,
    pub selected: Vec<usize>,
}

impl ResamplePlan {
    fn identity() -> Self {
        Self {
            delta_n: 0,
            neighborhood_size: None,
            center_index: None,
            selected: Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Upsampled {
    pub cloud: PointCloud,
    pub plan: ResamplePlan,
    pub records: Vec<InterpolationRecord>,
}

/// Appends `delta_n` tangent-plane interpolants to `cloud`.
pub fn upsample(cloud: &PointCloud, delta_n: usize, graph: &NeighborGraph, seed: u64) -> Result<PointCloud> {
    upsample_detailed(cloud, delta_n, graph, seed).map(|up| up.cloud)
}

/// [`upsample`], also returning the plan and every accepted interpolation.
///
/// Each round builds one candidate per source point and draws from them
/// uniformly without replacement; further rounds with fresh seeds run while
/// more points are needed than one round provides. Normals are estimated
/// from `graph` when the cloud has none. The input points form the prefix of
/// the output.
pub fn upsample_detailed(
    cloud: &PointCloud,
    delta_n: usize,
    graph: &NeighborGraph,
    seed: u64,
) -> Result<Upsampled> {
    if delta_n < 1 {
        return Err(Error::param("upsampling needs a positive delta"));
    }
    let oriented = if cloud.has_normals() {
        cloud.clone()
    } else {
        estimate_normals(cloud, graph)?.cloud
    };

    let mut records: Vec<InterpolationRecord> = Vec::with_capacity(delta_n);
    let mut round = 0u64;
    while records.len() < delta_n {
        let candidates: Vec<InterpolationRecord> =
            interpolation_candidates(&oriented, graph, derive_seed(seed, 2 * round))?
                .into_iter()
                .flatten()
                .collect();
        if candidates.is_empty() {
            return Err(Error::Degenerate(
                "no point admits a tangent-plane interpolant".into(),
            ));
        }
        let need = delta_n - records.len();
        if need >= candidates.len() {
            records.extend(candidates);
        } else {
            let mut rng = stream_rng(seed, 2 * round + 1);
            records.extend(index::sample(&mut rng, candidates.len(), need).into_iter().map(|c| candidates[c]));
        }
        round += 1;
    }

    let (mut points, normals) = cloud.clone().into_parts();
    points.extend(records.iter().map(|r| r.new_point));
    let out = match normals {
        Some(mut normals) => {
            let source = oriented.normals().expect("oriented cloud has normals");
            normals.extend(records.iter().map(|r| source[r.source_index]));
            PointCloud::with_normals(points, normals)?
        }
        None => PointCloud::new(points)?,
    };
    let plan = ResamplePlan {
        delta_n: delta_n as i64,
        neighborhood_size: None,
        center_index: None,
        selected: records.iter().map(|r| r.source_index).collect(),
    };
    Ok(Upsampled {
        cloud: out,
        plan,
        records,
    })
}

fn graph_for(cloud: &PointCloud, k: usize) -> Result<NeighborGraph> {
    if cloud.len() < 2 {
        return Err(Error::Degenerate("cannot upsample a single point".into()));
    }
    build_neighbor_graph(cloud, k.clamp(1, cloud.len() - 1))
}

/// Training-time size jitter: draws `delta_n` uniformly from
/// `[-floor(rho N), floor(rho N)]` and upsamples, downsamples or returns the
/// input accordingly. `k` is clipped to `N - 1` for the upsampling graph.
pub fn train_resample(cloud: &PointCloud, rho: f64, k: usize, seed: u64) -> Result<(PointCloud, ResamplePlan)> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::param(format!("rho must lie in [0, 1), got {rho}")));
    }
    let n = cloud.len();
    if n < 2 {
        return Err(Error::param("training resampling needs at least 2 points"));
    }
    let span = (rho * n as f64).floor() as i64;
    let delta_n = stream_rng(seed, 0).random_range(-span..=span);
    let sub_seed = derive_seed(seed, 1);
    match delta_n {
        0 => Ok((cloud.clone(), ResamplePlan::identity())),
        d if d > 0 => {
            let graph = graph_for(cloud, k)?;
            let up = upsample_detailed(cloud, d as usize, &graph, sub_seed)?;
            Ok((up.cloud, up.plan))
        }
        d => lgb_downsample(cloud, d, sub_seed),
    }
}

/// Inference-time size restoration: upsamples to `target_n` when the cloud is
/// smaller and returns it unchanged otherwise.
pub fn inference_resample(cloud: &PointCloud, target_n: usize, k: usize, seed: u64) -> Result<PointCloud> {
    if target_n < 1 {
        return Err(Error::param("target size must be at least 1"));
    }
    let n = cloud.len();
    if n >= target_n {
        return Ok(cloud.clone());
    }
    let graph = graph_for(cloud, k)?;
    upsample(cloud, target_n - n, &graph, seed)
}
