use rayon::prelude::*;

use super::kdtree::{KdTree, Neighbor};
use super::{median_of_sorted, squared_distance, PointCloud};
use crate::error::{Error, Result};

/// Clouds up to this size use the brute-force distance matrix.
pub const BRUTE_FORCE_MAX_POINTS: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KnnBackend {
    /// Brute force for small clouds, kd-tree above [`BRUTE_FORCE_MAX_POINTS`].
    #[default]
    Auto,
    BruteForce,
    KdTree,
}

/// k-nearest-neighbor graph with cached local radii.
///
/// Neighbor lists exclude the point itself and are sorted ascending by
/// distance, ties broken by the lower point index.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborGraph {
    k: usize,
    neighbors: Vec<usize>,
    distances: Vec<f64>,
    radii: Vec<f64>,
    median_radius: f64,
}

impl NeighborGraph {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of points the graph was built on.
    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i * self.k..(i + 1) * self.k]
    }

    pub fn distances(&self, i: usize) -> &[f64] {
        &self.distances[i * self.k..(i + 1) * self.k]
    }

    /// Distance to the k-th nearest neighbor.
    pub fn radius(&self, i: usize) -> f64 {
        self.radii[i]
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn median_radius(&self) -> f64 {
        self.median_radius
    }

    /// Median of the neighbor distances of point `i`.
    pub fn median_distance(&self, i: usize) -> f64 {
        median_of_sorted(self.distances(i))
    }
}

pub fn build_neighbor_graph(cloud: &PointCloud, k: usize) -> Result<NeighborGraph> {
    build_neighbor_graph_with(cloud, k, KnnBackend::Auto)
}

pub fn build_neighbor_graph_with(
    cloud: &PointCloud,
    k: usize,
    backend: KnnBackend,
) -> Result<NeighborGraph> {
    let n = cloud.len();
    if n < 2 {
        return Err(Error::param("a neighbor graph needs at least 2 points"));
    }
    if k < 1 || k >= n {
        return Err(Error::param(format!("k must lie in [1, {}], got {k}", n - 1)));
    }
    let points = cloud.points();
    let use_tree = match backend {
        KnnBackend::Auto => n > BRUTE_FORCE_MAX_POINTS,
        KnnBackend::BruteForce => false,
        KnnBackend::KdTree => true,
    };

    let rows: Vec<Vec<(usize, f64)>> = if use_tree {
        let tree = KdTree::new(points);
        (0..n)
            .into_par_iter()
            .map(|i| tree.nearest(&points[i], k, Some(i)))
            .collect()
    } else {
        (0..n)
            .into_par_iter()
            .map_init(Vec::new, |row: &mut Vec<Neighbor>, i| {
                row.clear();
                row.extend((0..n).filter(|&j| j != i).map(|j| Neighbor {
                    dist2: squared_distance(&points[i], &points[j]),
                    index: j,
                }));
                row.select_nth_unstable(k - 1);
                row.truncate(k);
                row.sort_unstable();
                row.iter().map(|nb| (nb.index, nb.dist2)).collect()
            })
            .collect()
    };

    let mut neighbors = Vec::with_capacity(n * k);
    let mut distances = Vec::with_capacity(n * k);
    let mut radii = Vec::with_capacity(n);
    for row in rows {
        debug_assert_eq!(row.len(), k);
        for (j, d2) in row {
            neighbors.push(j);
            distances.push(d2.sqrt());
        }
        radii.push(*distances.last().expect("k >= 1"));
    }
    let mut sorted = radii.clone();
    sorted.sort_by(f64::total_cmp);
    let median_radius = median_of_sorted(&sorted);

    Ok(NeighborGraph {
        k,
        neighbors,
        distances,
        radii,
        median_radius,
    })
}
