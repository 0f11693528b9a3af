//! Per-point isolation rates and the two weightings derived from them: a
//! categorical sampling distribution for training and a binary keep-mask for
//! filtered FPS at inference.
//!
//! The isolation rate of point `i` is the fraction of its k neighbor
//! distances that are at least the median local radius of the whole cloud.
//! High values flag outliers. Sampling weights decrease with isolation and the
//! mask drops the most isolated `1 - omega` tail.

use crate::error::{Error, Result};
use crate::geometry::NeighborGraph;

/// Monotone map from isolation rate to unnormalized sampling weight.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum WeightTransform {
    /// `1 - isolation`.
    #[default]
    Complement,
    /// `exp(-beta * isolation)`.
    Exponential { beta: f64 },
}

impl WeightTransform {
    fn apply(self, isolation: f64) -> f64 {
        match self {
            WeightTransform::Complement => 1.0 - isolation,
            WeightTransform::Exponential { beta } => (-beta * isolation).exp(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    isolation: Vec<f64>,
    sampling_weight: Option<Vec<f64>>,
    mask: Option<Vec<bool>>,
    omega: Option<f64>,
}

impl WeightVector {
    /// Wraps precomputed isolation rates. Values must lie in `[0, 1]`.
    pub fn from_isolation(isolation: Vec<f64>) -> Result<Self> {
        if isolation.is_empty() {
            return Err(Error::EmptyCloud);
        }
        if let Some(i) = isolation.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::param(format!(
                "isolation rate {} at index {i} is outside [0, 1]",
                isolation[i]
            )));
        }
        Ok(Self {
            isolation,
            sampling_weight: None,
            mask: None,
            omega: None,
        })
    }

    pub fn len(&self) -> usize {
        self.isolation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.isolation.is_empty()
    }

    pub fn isolation(&self) -> &[f64] {
        &self.isolation
    }

    pub fn sampling_weight(&self) -> Option<&[f64]> {
        self.sampling_weight.as_deref()
    }

    pub fn mask(&self) -> Option<&[bool]> {
        self.mask.as_deref()
    }

    pub fn omega(&self) -> Option<f64> {
        self.omega
    }

    /// Replaces the sampling weights with an explicit distribution. Entries
    /// must be nonnegative with a positive sum; they are normalized.
    pub fn with_explicit_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.len() {
            return Err(Error::param("weight vector length mismatch"));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::param("sampling weights must be finite and nonnegative"));
        }
        let total: f64 = weights.iter().sum();
        if total.is_nan() || total <= 0.0 {
            return Err(Error::param("sampling weights sum to zero"));
        }
        self.sampling_weight = Some(weights.into_iter().map(|w| w / total).collect());
        Ok(self)
    }

    /// Replaces the mask with an explicit one. At least one entry must be set.
    pub fn with_explicit_mask(mut self, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != self.len() {
            return Err(Error::param("mask length mismatch"));
        }
        if !mask.iter().any(|&m| m) {
            return Err(Error::param("mask must keep at least one point"));
        }
        self.mask = Some(mask);
        self.omega = None;
        Ok(self)
    }

    pub fn unmasked_count(&self) -> Option<usize> {
        self.mask.as_ref().map(|m| m.iter().filter(|&&b| b).count())
    }
}

/// Fraction of each point's neighbor distances that are `>=` the median
/// local radius.
pub fn isolation_rates(graph: &NeighborGraph) -> WeightVector {
    let threshold = graph.median_radius();
    let k = graph.k() as f64;
    let isolation = (0..graph.len())
        .map(|i| {
            let far = graph.distances(i).iter().filter(|&&d| d >= threshold).count();
            far as f64 / k
        })
        .collect();
    WeightVector {
        isolation,
        sampling_weight: None,
        mask: None,
        omega: None,
    }
}

pub fn sampling_weights(wv: WeightVector) -> WeightVector {
    sampling_weights_with(wv, WeightTransform::Complement)
}

/// Normalized categorical weights from isolation rates. Falls back to the
/// uniform distribution when every transformed weight is zero.
pub fn sampling_weights_with(mut wv: WeightVector, transform: WeightTransform) -> WeightVector {
    let raw: Vec<f64> = wv
        .isolation
        .iter()
        .map(|&iso| transform.apply(iso).max(0.0))
        .collect();
    let total: f64 = raw.iter().sum();
    let n = raw.len() as f64;
    wv.sampling_weight = Some(if total > 0.0 && total.is_finite() {
        raw.into_iter().map(|w| w / total).collect()
    } else {
        vec![1.0 / n; raw.len()]
    });
    wv
}

/// Empirical quantile with linear interpolation between order statistics.
pub fn quantile_linear(values: &[f64], q: f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Binary keep-mask for filtered FPS.
///
/// A point is dropped when its isolation strictly exceeds the `omega`
/// quantile of all isolation rates. If that drops more than
/// `N - ceil(omega * N)` points, the least isolated of the dropped points
/// (lowest index first among ties) are restored until `ceil(omega * N)` are
/// kept.
pub fn filter_mask(mut wv: WeightVector, omega: f64) -> Result<WeightVector> {
    if !(omega > 0.0 && omega <= 1.0) {
        return Err(Error::param(format!("omega must lie in (0, 1], got {omega}")));
    }
    let n = wv.len();
    let threshold = quantile_linear(&wv.isolation, omega);
    let mut mask: Vec<bool> = wv.isolation.iter().map(|&v| v <= threshold).collect();

    let required = ((omega * n as f64).ceil() as usize).clamp(1, n);
    let kept = mask.iter().filter(|&&m| m).count();
    if kept < required {
        let mut dropped: Vec<usize> = (0..n).filter(|&i| !mask[i]).collect();
        dropped.sort_by(|&a, &b| wv.isolation[a].total_cmp(&wv.isolation[b]).then(a.cmp(&b)));
        for &i in dropped.iter().take(required - kept) {
            mask[i] = true;
        }
    }
    wv.mask = Some(mask);
    wv.omega = Some(omega);
    Ok(wv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_neighbor_graph, PointCloud};

    fn collinear() -> PointCloud {
        PointCloud::from_arrays(&[
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [2.0, 0.0, 0.0],
            [3.0, 0.0, 0.0],
            [10.0, 0.0, 0.0],
        ])
        .unwrap()
    }

    #[test]
    fn collinear_isolation() {
        let wv = isolation_rates(&build_neighbor_graph(&collinear(), 2).unwrap());
        assert_eq!(wv.isolation(), &[0.5, 0.0, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn collinear_weights() {
        let wv = sampling_weights(WeightVector::from_isolation(vec![0.5, 0.0, 0.0, 0.5, 1.0]).unwrap());
        let expected = [1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0, 0.0];
        for (w, e) in wv.sampling_weight().unwrap().iter().zip(expected) {
            assert!((w - e).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_fallbacks() {
        let wv = sampling_weights(WeightVector::from_isolation(vec![1.0; 4]).unwrap());
        assert_eq!(wv.sampling_weight().unwrap(), &[0.25; 4]);
        let wv = sampling_weights(WeightVector::from_isolation(vec![0.3; 5]).unwrap());
        for w in wv.sampling_weight().unwrap() {
            assert!((w - 0.2).abs() < 1e-12);
        }
    }

    #[test]
    fn exponential_transform_is_monotone() {
        let wv = sampling_weights_with(
            WeightVector::from_isolation(vec![0.0, 0.5, 1.0]).unwrap(),
            WeightTransform::Exponential { beta: 2.0 },
        );
        let w = wv.sampling_weight().unwrap();
        assert!(w[0] > w[1] && w[1] > w[2]);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mask_fixture() {
        let base = WeightVector::from_isolation(vec![0.5, 0.0, 0.0, 0.5, 1.0]).unwrap();
        let wv = filter_mask(base.clone(), 0.79).unwrap();
        assert_eq!(wv.mask().unwrap(), &[true, true, true, true, false]);
        let wv = filter_mask(base, 1.0).unwrap();
        assert!(wv.mask().unwrap().iter().all(|&m| m));
        let wv = filter_mask(WeightVector::from_isolation(vec![0.4; 7]).unwrap(), 0.5).unwrap();
        assert!(wv.mask().unwrap().iter().all(|&m| m));
    }

    #[test]
    fn mask_keeps_ceil_omega_n() {
        // Distinct values: the interpolated 0.95 quantile alone would keep 9 of 10.
        let iso: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).collect();
        let wv = filter_mask(WeightVector::from_isolation(iso).unwrap(), 0.95).unwrap();
        assert_eq!(wv.unmasked_count(), Some(10));
        let iso: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).collect();
        let wv = filter_mask(WeightVector::from_isolation(iso).unwrap(), 0.05).unwrap();
        assert_eq!(wv.mask().unwrap().iter().position(|&m| m), Some(0));
        assert_eq!(wv.unmasked_count(), Some(1));
    }

    #[test]
    fn omega_out_of_range() {
        let wv = WeightVector::from_isolation(vec![0.0, 1.0]).unwrap();
        assert!(filter_mask(wv.clone(), 0.0).is_err());
        assert!(filter_mask(wv.clone(), 1.5).is_err());
        assert!(filter_mask(wv, f64::NAN).is_err());
    }

    #[test]
    fn quantile_interpolates() {
        assert!((quantile_linear(&[0.0, 0.0, 0.5, 0.5, 1.0], 0.79) - 0.58).abs() < 1e-12);
        assert_eq!(quantile_linear(&[3.0, 1.0, 2.0], 0.5), 2.0);
        assert_eq!(quantile_linear(&[3.0], 0.3), 3.0);
    }
}
