use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{NeighborGraph, Point, PointCloud, Vector};
use crate::rng::{derive_seed, rng_from_seed};

/// Projected offsets shorter than this are treated as parallel to the normal.
pub const MIN_TANGENT_NORM: f64 = 1e-9;

/// One tangent-plane interpolant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpolationRecord {
    pub source_index: usize,
    pub neighbor_index: usize,
    /// Median distance from the source to its neighbors.
    pub delta_med: f64,
    /// Unit direction in the source's tangent plane.
    pub direction: Vector,
    pub new_point: Point,
}

#[inline]
fn project_to_plane(normal: &Vector, v: &Vector) -> Vector {
    // Written as v - n (n.v) so that n and -n give bit-identical results.
    v - normal * normal.dot(v)
}

/// Places a new point at the query's median neighbor distance, along the
/// tangent-plane projection of the offset to a random neighbor.
///
/// The neighbor is drawn uniformly. If its projected offset vanishes, another
/// not-yet-tried neighbor is drawn, so the call fails only when every
/// neighbor is degenerate.
pub fn lgp_interpolate(
    cloud: &PointCloud,
    graph: &NeighborGraph,
    query: usize,
    seed: u64,
) -> Result<InterpolationRecord> {
    let normals = cloud
        .normals()
        .ok_or_else(|| Error::param("interpolation needs normals"))?;
    if query >= cloud.len() || graph.len() != cloud.len() {
        return Err(Error::param(format!("query {query} out of range or graph/cloud mismatch")));
    }
    let p = *cloud.point(query);
    let n = normals[query];
    let delta_med = graph.median_distance(query);

    let mut rng = rng_from_seed(seed);
    let mut pool = graph.neighbors(query).to_vec();
    while !pool.is_empty() {
        let q = pool.swap_remove(rng.random_range(0..pool.len()));
        let v = project_to_plane(&n, &(cloud.point(q) - p));
        let len = v.norm();
        if len < MIN_TANGENT_NORM {
            continue;
        }
        // Second projection removes the rounding left by the first.
        let direction = project_to_plane(&n, &(v / len)).normalize();
        return Ok(InterpolationRecord {
            source_index: query,
            neighbor_index: q,
            delta_med,
            direction,
            new_point: p + direction * delta_med,
        });
    }
    Err(Error::NoInterpolant { index: query })
}

/// Runs [`lgp_interpolate`] once per source point. Source `i` uses seed
/// `derive_seed(seed, i)`, so the result does not depend on thread count.
/// Sources without a valid direction yield `None`.
pub fn interpolation_candidates(
    cloud: &PointCloud,
    graph: &NeighborGraph,
    seed: u64,
) -> Result<Vec<Option<InterpolationRecord>>> {
    if !cloud.has_normals() {
        return Err(Error::param("interpolation needs normals"));
    }
    (0..cloud.len())
        .into_par_iter()
        .map(|i| match lgp_interpolate(cloud, graph, i, derive_seed(seed, i as u64)) {
            Ok(rec) => Ok(Some(rec)),
            Err(Error::NoInterpolant { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect()
}
