//! Key-point selection: farthest point sampling, its masked variant, and
//! stochastic weighted sampling without replacement.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{squared_distance, PointCloud};
use crate::reweighting::WeightVector;
use crate::rng::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMethod {
    Fps,
    Ffps,
    Sws,
}

impl fmt::Display for SampleMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SampleMethod::Fps => "fps",
            SampleMethod::Ffps => "ffps",
            SampleMethod::Sws => "sws",
        })
    }
}

/// Policy for the first FPS point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StartRule {
    /// Lowest unmasked index.
    FirstUnmasked,
    /// Unmasked point farthest from the centroid of the unmasked points.
    #[default]
    MaxCentroidDistance,
    /// Uniformly random unmasked point.
    Random { seed: u64 },
}

impl FromStr for StartRule {
    type Err = Error;

    /// Accepts `first`, `centroid`, `random` (seed 0) or `random:<seed>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" | "first_unmasked" => Ok(StartRule::FirstUnmasked),
            "centroid" | "max_centroid_distance" | "max_centroid_distance_unmasked" => {
                Ok(StartRule::MaxCentroidDistance)
            }
            "random" => Ok(StartRule::Random { seed: 0 }),
            _ => match s.strip_prefix("random:").map(str::parse::<u64>) {
                Some(Ok(seed)) => Ok(StartRule::Random { seed }),
                _ => Err(Error::param(format!("unknown start rule '{s}'"))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleResult {
    pub indices: Vec<usize>,
    pub method: SampleMethod,
    pub seed: Option<u64>,
}

/// Resolves a start rule against an optional mask.
pub fn resolve_start(cloud: &PointCloud, mask: Option<&[bool]>, rule: StartRule) -> Result<usize> {
    let keep = |i: usize| mask.is_none_or(|m| m[i]);
    let candidates: Vec<usize> = (0..cloud.len()).filter(|&i| keep(i)).collect();
    if candidates.is_empty() {
        return Err(Error::InsufficientUnmasked {
            requested: 1,
            available: 0,
        });
    }
    Ok(match rule {
        StartRule::FirstUnmasked => candidates[0],
        StartRule::MaxCentroidDistance => {
            let sum = candidates
                .iter()
                .fold(nalgebra::Vector3::zeros(), |acc, &i| acc + cloud.point(i).coords);
            let centroid = nalgebra::Point3::from(sum / candidates.len() as f64);
            let mut best = candidates[0];
            let mut best_d = f64::NEG_INFINITY;
            for &i in &candidates {
                let d = squared_distance(cloud.point(i), &centroid);
                if d > best_d {
                    best = i;
                    best_d = d;
                }
            }
            best
        }
        StartRule::Random { seed } => {
            candidates[rng_from_seed(seed).random_range(0..candidates.len())]
        }
    })
}

/// Farthest point sampling from `start`.
///
/// Each step picks the point with the largest distance to the selected set,
/// lowest index on ties. Runs in `O(mN)` using an incremental min-distance
/// array (squared distances; the argmax is the same).
pub fn fps(cloud: &PointCloud, m: usize, start: usize) -> Result<SampleResult> {
    let n = cloud.len();
    if m < 1 || m > n {
        return Err(Error::param(format!("m must lie in [1, {n}], got {m}")));
    }
    if start >= n {
        return Err(Error::param(format!("start index {start} out of range for {n} points")));
    }
    let indices = farthest_points(cloud, m, start, None);
    Ok(SampleResult {
        indices,
        method: SampleMethod::Fps,
        seed: None,
    })
}

/// FPS restricted to mask-1 points. Masked points are never selected.
pub fn ffps(cloud: &PointCloud, wv: &WeightVector, m: usize, start_rule: StartRule) -> Result<SampleResult> {
    let mask = wv
        .mask()
        .ok_or_else(|| Error::param("weight vector has no filter mask"))?;
    if mask.len() != cloud.len() {
        return Err(Error::param("mask length does not match cloud"));
    }
    let available = mask.iter().filter(|&&b| b).count();
    if m < 1 {
        return Err(Error::param("m must be at least 1"));
    }
    if m > available {
        return Err(Error::InsufficientUnmasked {
            requested: m,
            available,
        });
    }
    let start = resolve_start(cloud, Some(mask), start_rule)?;
    let indices = farthest_points(cloud, m, start, Some(mask));
    let seed = match start_rule {
        StartRule::Random { seed } => Some(seed),
        _ => None,
    };
    Ok(SampleResult {
        indices,
        method: SampleMethod::Ffps,
        seed,
    })
}

fn farthest_points(cloud: &PointCloud, m: usize, start: usize, mask: Option<&[bool]>) -> Vec<usize> {
    let points = cloud.points();
    // Selected and masked points carry -inf so they never win the argmax.
    let mut min_d: Vec<f64> = match mask {
        Some(mask) => mask
            .iter()
            .map(|&keep| if keep { f64::INFINITY } else { f64::NEG_INFINITY })
            .collect(),
        None => vec![f64::INFINITY; points.len()],
    };
    let mut selected = Vec::with_capacity(m);
    let mut current = start;
    loop {
        selected.push(current);
        min_d[current] = f64::NEG_INFINITY;
        if selected.len() == m {
            break;
        }
        let anchor = points[current];
        let mut best = usize::MAX;
        let mut best_d = f64::NEG_INFINITY;
        for (i, slot) in min_d.iter_mut().enumerate() {
            if *slot == f64::NEG_INFINITY {
                continue;
            }
            let d = squared_distance(&points[i], &anchor);
            if d < *slot {
                *slot = d;
            }
            if *slot > best_d {
                best_d = *slot;
                best = i;
            }
        }
        current = best;
    }
    selected
}

/// Stochastic weighted sampling: `m` sequential categorical draws over
/// `sampling_weight`, renormalizing over the remaining points after each
/// draw. Zero-weight points are never drawn.
pub fn sws(cloud: &PointCloud, wv: &WeightVector, m: usize, seed: u64) -> Result<SampleResult> {
    let weights = wv
        .sampling_weight()
        .ok_or_else(|| Error::param("weight vector has no sampling weights"))?;
    if weights.len() != cloud.len() {
        return Err(Error::param("weight vector length does not match cloud"));
    }
    let available = weights.iter().filter(|&&w| w > 0.0).count();
    if m < 1 {
        return Err(Error::param("m must be at least 1"));
    }
    if m > available {
        return Err(Error::InsufficientSupport {
            requested: m,
            available,
        });
    }
    let mut remaining: Vec<(usize, f64)> = weights
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, w)| w > 0.0)
        .collect();
    let mut rng = rng_from_seed(seed);
    let mut indices = Vec::with_capacity(m);
    for _ in 0..m {
        let total: f64 = remaining.iter().map(|&(_, w)| w).sum();
        let target = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut pick = remaining.len() - 1;
        for (slot, &(_, w)) in remaining.iter().enumerate() {
            acc += w;
            if target < acc {
                pick = slot;
                break;
            }
        }
        indices.push(remaining.remove(pick).0);
    }
    Ok(SampleResult {
        indices,
        method: SampleMethod::Sws,
        seed: Some(seed),
    })
}
