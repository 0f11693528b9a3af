//! Point-cloud container, exact kNN indexing, PCA normals and set distances.

mod kdtree;
mod knn;
mod metrics;
mod normals;

pub use kdtree::KdTree;
pub use knn::{build_neighbor_graph, build_neighbor_graph_with, KnnBackend, NeighborGraph, BRUTE_FORCE_MAX_POINTS};
pub use metrics::{chamfer_distance, nearest_distances};
pub use normals::{estimate_normals, NormalEstimate};

use nalgebra::{Point3, Vector3};

use crate::error::{Error, Result};

pub type Point = Point3<f64>;
pub type Vector = Vector3<f64>;

/// Tolerance on the Euclidean norm of stored normals.
pub const UNIT_NORMAL_TOLERANCE: f64 = 1e-6;

/// An ordered set of 3D points with optional unit normals.
///
/// Indices are stable: every operation that keeps a point keeps its relative
/// order, and operations that add points append them.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<Point>,
    normals: Option<Vec<Vector>>,
}

impl PointCloud {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        Self::build(points, None)
    }

    pub fn with_normals(points: Vec<Point>, normals: Vec<Vector>) -> Result<Self> {
        Self::build(points, Some(normals))
    }

    pub fn from_arrays(points: &[[f64; 3]]) -> Result<Self> {
        Self::new(points.iter().map(|p| Point::new(p[0], p[1], p[2])).collect())
    }

    fn build(points: Vec<Point>, normals: Option<Vec<Vector>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyCloud);
        }
        if let Some(index) = points.iter().position(|p| !p.coords.iter().all(|c| c.is_finite())) {
            return Err(Error::NonFinite { index });
        }
        if let Some(normals) = &normals {
            if normals.len() != points.len() {
                return Err(Error::param(format!(
                    "{} normals supplied for {} points",
                    normals.len(),
                    points.len()
                )));
            }
            for (index, n) in normals.iter().enumerate() {
                let norm = n.norm();
                if !norm.is_finite() || (norm - 1.0).abs() > UNIT_NORMAL_TOLERANCE {
                    return Err(Error::NonUnitNormal { index, norm });
                }
            }
        }
        Ok(Self { points, normals })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false for a constructed cloud; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, index: usize) -> &Point {
        &self.points[index]
    }

    pub fn normals(&self) -> Option<&[Vector]> {
        self.normals.as_deref()
    }

    pub fn has_normals(&self) -> bool {
        self.normals.is_some()
    }

    pub fn centroid(&self) -> Point {
        let sum = self
            .points
            .iter()
            .fold(Vector::zeros(), |acc, p| acc + p.coords);
        Point::from(sum / self.points.len() as f64)
    }

    /// Returns a copy without normals.
    pub fn without_normals(&self) -> Self {
        Self {
            points: self.points.clone(),
            normals: None,
        }
    }

    /// Returns the points at `indices`, in that order, carrying normals along.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let points = indices.iter().map(|&i| self.points[i]).collect();
        let normals = self
            .normals
            .as_ref()
            .map(|n| indices.iter().map(|&i| n[i]).collect());
        Self::build(points, normals)
    }

    /// Applies `f` to every point. Normals are dropped because an arbitrary
    /// map does not say how they transform.
    pub fn map_points(&self, f: impl Fn(&Point) -> Point) -> Result<Self> {
        Self::new(self.points.iter().map(f).collect())
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let points = self.points.iter().map(|p| p * factor).collect();
        Self::build(points, self.normals.clone())
    }

    pub fn into_parts(self) -> (Vec<Point>, Option<Vec<Vector>>) {
        (self.points, self.normals)
    }
}

#[inline]
pub fn squared_distance(a: &Point, b: &Point) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    let dz = a.z - b.z;
    dx * dx + dy * dy + dz * dz
}

/// Median of an ascending slice; mean of the two central values for even length.
pub(crate) fn median_of_sorted(values: &[f64]) -> f64 {
    let n = values.len();
    debug_assert!(n > 0);
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(matches!(PointCloud::new(vec![]), Err(Error::EmptyCloud)));
        let err = PointCloud::from_arrays(&[[0.0, 0.0, 0.0], [f64::NAN, 0.0, 0.0]]).unwrap_err();
        assert!(matches!(err, Error::NonFinite { index: 1 }));
        let err = PointCloud::from_arrays(&[[0.0, f64::INFINITY, 0.0]]).unwrap_err();
        assert!(matches!(err, Error::NonFinite { index: 0 }));
    }

    #[test]
    fn normals_must_match_and_be_unit() {
        let pts = vec![Point::origin(), Point::new(1.0, 0.0, 0.0)];
        assert!(PointCloud::with_normals(pts.clone(), vec![Vector::z()]).is_err());
        let err = PointCloud::with_normals(pts.clone(), vec![Vector::z(), Vector::new(0.0, 0.0, 2.0)])
            .unwrap_err();
        assert!(matches!(err, Error::NonUnitNormal { index: 1, .. }));
        assert!(PointCloud::with_normals(pts, vec![Vector::z(), Vector::x()]).is_ok());
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median_of_sorted(&[1.0, 2.0, 8.0]), 2.0);
        assert_eq!(median_of_sorted(&[1.0, 2.0, 2.0, 8.0]), 2.0);
        assert_eq!(median_of_sorted(&[1.0, 3.0]), 2.0);
    }
}
