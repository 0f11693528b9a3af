use super::kdtree::KdTree;
use super::{squared_distance, PointCloud, BRUTE_FORCE_MAX_POINTS};

/// Distance from every point of `from` to its nearest point in `to`.
pub fn nearest_distances(from: &PointCloud, to: &PointCloud) -> Vec<f64> {
    if to.len() > BRUTE_FORCE_MAX_POINTS {
        let tree = KdTree::new(to.points());
        from.points()
            .iter()
            .map(|p| tree.nearest(p, 1, None)[0].1.sqrt())
            .collect()
    } else {
        from.points()
            .iter()
            .map(|p| {
                to.points()
                    .iter()
                    .map(|q| squared_distance(p, q))
                    .fold(f64::INFINITY, f64::min)
                    .sqrt()
            })
            .collect()
    }
}

/// Symmetric Chamfer distance: mean nearest-neighbor distance from `a` to `b`
/// plus the mean from `b` to `a`.
pub fn chamfer_distance(a: &PointCloud, b: &PointCloud) -> f64 {
    let mean = |d: Vec<f64>| d.iter().sum::<f64>() / d.len() as f64;
    mean(nearest_distances(a, b)) + mean(nearest_distances(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(dx: f64) -> PointCloud {
        PointCloud::from_arrays(&[
            [dx, 0.0, 0.0],
            [1.0 + dx, 0.0, 0.0],
            [dx, 1.0, 0.0],
            [1.0 + dx, 1.0, 0.0],
        ])
        .unwrap()
    }

    #[test]
    fn fixtures() {
        assert_eq!(chamfer_distance(&square(0.0), &square(0.0)), 0.0);
        let a = PointCloud::from_arrays(&[[0.0, 0.0, 0.0]]).unwrap();
        let b = PointCloud::from_arrays(&[[1.0, 0.0, 0.0]]).unwrap();
        assert_eq!(chamfer_distance(&a, &b), 2.0);
        assert!((chamfer_distance(&square(0.0), &square(0.1)) - 0.2).abs() < 1e-12);
    }
}
