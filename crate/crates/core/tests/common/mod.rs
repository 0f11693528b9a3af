//! Independent oracles and shared fixtures for the integration tests.
#![allow(dead_code)]

use nalgebra::distance;
use pointsp::fixtures::{concat, sphere_surface, uniform_cube};
use pointsp::{Point, PointCloud};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random cloud; with `lattice` the coordinates are small integers, which
/// produces exact distance ties and duplicate points.
pub fn random_cloud(n: usize, lattice: bool, seed: u64) -> PointCloud {
    let mut r = rng(seed);
    let pts = (0..n)
        .map(|_| {
            if lattice {
                Point::new(
                    r.random_range(0..5) as f64,
                    r.random_range(0..5) as f64,
                    r.random_range(0..5) as f64,
                )
            } else {
                Point::new(r.random(), r.random(), r.random())
            }
        })
        .collect();
    PointCloud::new(pts).unwrap()
}

/// Full sort of all other points by (distance, index), truncated to k.
pub fn knn_oracle(cloud: &PointCloud, i: usize, k: usize) -> Vec<usize> {
    let p = cloud.point(i);
    let mut all: Vec<(f64, usize)> = (0..cloud.len())
        .filter(|&j| j != i)
        .map(|j| (distance(p, cloud.point(j)), j))
        .collect();
    all.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    all.into_iter().take(k).map(|(_, j)| j).collect()
}

/// Greedy max-min selection that recomputes every candidate's distance to
/// the whole selected set at each step.
pub fn fps_oracle(cloud: &PointCloud, m: usize, start: usize, allowed: Option<&[bool]>) -> Vec<usize> {
    let mut selected = vec![start];
    while selected.len() < m {
        let mut best: Option<(f64, usize)> = None;
        for i in 0..cloud.len() {
            if selected.contains(&i) || allowed.is_some_and(|a| !a[i]) {
                continue;
            }
            let d = selected
                .iter()
                .map(|&s| distance(cloud.point(i), cloud.point(s)))
                .fold(f64::INFINITY, f64::min);
            if best.is_none_or(|(bd, _)| d > bd) {
                best = Some((d, i));
            }
        }
        selected.push(best.unwrap().1);
    }
    selected
}

/// Empirical quantile, linear interpolation between order statistics
/// (position `(n - 1) q`).
pub fn quantile_oracle(values: &[f64], q: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let pos = (v.len() - 1) as f64 * q;
    let lo = pos.floor() as usize;
    let frac = pos - lo as f64;
    if lo + 1 < v.len() {
        v[lo] * (1.0 - frac) + v[lo + 1] * frac
    } else {
        v[lo]
    }
}

/// Unit sphere surface (1024 points) plus 50 uniform outliers in the cube of
/// half-width 2. Outliers occupy indices 1024..1074.
pub struct OutlierFixture {
    pub clean: PointCloud,
    pub corrupted: PointCloud,
    pub outliers: std::ops::Range<usize>,
}

pub fn outlier_fixture(seed: u64) -> OutlierFixture {
    let clean = sphere_surface(1024, seed).without_normals();
    let noise = uniform_cube(50, 2.0, seed.wrapping_add(10_000));
    OutlierFixture {
        corrupted: concat(&clean, &noise),
        outliers: 1024..1074,
        clean,
    }
}

pub fn count_in(indices: &[usize], range: &std::ops::Range<usize>) -> usize {
    indices.iter().filter(|i| range.contains(i)).count()
}
