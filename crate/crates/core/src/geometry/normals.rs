use nalgebra::{Matrix3, SymmetricEigen};
use rayon::prelude::*;

use super::{NeighborGraph, PointCloud, Vector};
use crate::error::{Error, Result};

/// Relative eigenvalue floor below which a covariance direction is treated as
/// empty.
const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct NormalEstimate {
    pub cloud: PointCloud,
    /// Indices whose neighborhood was collinear or coincident; their normal is
    /// an arbitrary unit vector orthogonal to the dominant direction.
    pub degenerate: Vec<usize>,
}

/// PCA normals over each point's neighborhood (the point plus its k
/// neighbors). Sign is canonicalized so the largest-magnitude component is
/// positive. Existing normals are returned untouched.
pub fn estimate_normals(cloud: &PointCloud, graph: &NeighborGraph) -> Result<NormalEstimate> {
    if graph.len() != cloud.len() {
        return Err(Error::param(format!(
            "graph built on {} points, cloud has {}",
            graph.len(),
            cloud.len()
        )));
    }
    if cloud.has_normals() {
        return Ok(NormalEstimate {
            cloud: cloud.clone(),
            degenerate: Vec::new(),
        });
    }
    let points = cloud.points();
    let fitted: Vec<(Vector, bool)> = (0..cloud.len())
        .into_par_iter()
        .map(|i| {
            let members = std::iter::once(i).chain(graph.neighbors(i).iter().copied());
            let count = graph.k() as f64 + 1.0;
            let mean = members
                .clone()
                .fold(Vector::zeros(), |acc, j| acc + points[j].coords)
                / count;
            let cov = members.fold(Matrix3::zeros(), |acc, j| {
                let d = points[j].coords - mean;
                acc + d * d.transpose()
            }) / count;
            plane_normal(cov)
        })
        .collect();

    let degenerate = fitted
        .iter()
        .enumerate()
        .filter_map(|(i, (_, flag))| flag.then_some(i))
        .collect();
    let normals = fitted.into_iter().map(|(n, _)| n).collect();
    Ok(NormalEstimate {
        cloud: PointCloud::with_normals(points.to_vec(), normals)?,
        degenerate,
    })
}

/// Smallest-eigenvalue eigenvector of a covariance matrix, plus a flag for
/// rank-deficient (collinear or coincident) neighborhoods.
fn plane_normal(cov: Matrix3<f64>) -> (Vector, bool) {
    let eig = SymmetricEigen::new(cov);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let largest = eig.eigenvalues[order[2]];
    let middle = eig.eigenvalues[order[1]];

    if largest.is_nan() || largest <= 0.0 {
        return (Vector::z(), true);
    }
    if middle <= RANK_TOLERANCE * largest {
        let dominant: Vector = eig.eigenvectors.column(order[2]).into();
        return (canonical_sign(orthogonal_unit(&dominant)), true);
    }
    let normal: Vector = eig.eigenvectors.column(order[0]).into();
    (canonical_sign(normal.normalize()), false)
}

fn orthogonal_unit(dir: &Vector) -> Vector {
    let abs = dir.abs();
    let axis = if abs.x <= abs.y && abs.x <= abs.z {
        Vector::x()
    } else if abs.y <= abs.z {
        Vector::y()
    } else {
        Vector::z()
    };
    dir.cross(&axis).normalize()
}

fn canonical_sign(n: Vector) -> Vector {
    let abs = n.abs();
    let mut best = 0;
    for d in 1..3 {
        if abs[d] > abs[best] {
            best = d;
        }
    }
    if n[best] < 0.0 {
        -n
    } else {
        n
    }
}
