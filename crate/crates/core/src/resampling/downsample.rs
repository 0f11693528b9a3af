use rand::seq::index;
use rand::Rng;

use super::ResamplePlan;
use crate::error::{Error, Result};
use crate::geometry::{squared_distance, PointCloud};
use crate::rng::rng_from_seed;

/// The `size` points closest to `center`, the center itself first, the rest
/// ascending by distance with lower index winning ties.
pub fn center_neighborhood(cloud: &PointCloud, center: usize, size: usize) -> Vec<usize> {
    let c = cloud.point(center);
    let mut others: Vec<(f64, usize)> = (0..cloud.len())
        .filter(|&j| j != center)
        .map(|j| (squared_distance(c, cloud.point(j)), j))
        .collect();
    let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    let take = size.saturating_sub(1).min(others.len());
    if take > 0 && take < others.len() {
        others.select_nth_unstable_by(take - 1, cmp);
        others.truncate(take);
    }
    others.truncate(take);
    others.sort_unstable_by(cmp);
    std::iter::once(center).chain(others.into_iter().map(|(_, j)| j)).collect()
}

/// Local-global-balanced downsampling with a random neighborhood size.
pub fn lgb_downsample(cloud: &PointCloud, delta_n: i64, seed: u64) -> Result<(PointCloud, ResamplePlan)> {
    lgb_downsample_with(cloud, delta_n, None, seed)
}

/// Removes `-delta_n` points drawn uniformly from the `k~`-neighborhood of a
/// uniformly drawn center. `k~ = |delta_n|` deletes a compact patch and
/// `k~ = N` deletes a uniform random subset. `neighborhood_size` pins `k~`;
/// otherwise it is drawn uniformly from `[|delta_n|, N]`.
pub fn lgb_downsample_with(
    cloud: &PointCloud,
    delta_n: i64,
    neighborhood_size: Option<usize>,
    seed: u64,
) -> Result<(PointCloud, ResamplePlan)> {
    let n = cloud.len();
    if delta_n >= 0 {
        return Err(Error::param(format!("downsampling needs a negative delta, got {delta_n}")));
    }
    let remove = delta_n.unsigned_abs() as usize;
    if remove >= n {
        return Err(Error::param(format!("cannot remove {remove} of {n} points")));
    }
    if let Some(size) = neighborhood_size {
        if size < remove || size > n {
            return Err(Error::param(format!(
                "neighborhood size must lie in [{remove}, {n}], got {size}"
            )));
        }
    }

    let mut rng = rng_from_seed(seed);
    let center = rng.random_range(0..n);
    let size = neighborhood_size.unwrap_or_else(|| rng.random_range(remove..=n));
    let hood = center_neighborhood(cloud, center, size);
    let mut selected: Vec<usize> = index::sample(&mut rng, size, remove)
        .into_iter()
        .map(|slot| hood[slot])
        .collect();
    selected.sort_unstable();

    let mut removed = vec![false; n];
    for &i in &selected {
        removed[i] = true;
    }
    let kept: Vec<usize> = (0..n).filter(|&i| !removed[i]).collect();
    let out = cloud.select(&kept)?;
    Ok((
        out,
        ResamplePlan {
            delta_n,
            neighborhood_size: Some(size),
            center_index: Some(center),
            selected,
        },
    ))
}
