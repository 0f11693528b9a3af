//! Seeded synthetic shapes used as clean inputs for experiments and tests.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::geometry::{Point, PointCloud, Vector};
use crate::rng::rng_from_seed;

/// `n` points uniform on the unit sphere, with outward normals.
pub fn sphere_surface(n: usize, seed: u64) -> PointCloud {
    let mut rng = rng_from_seed(seed);
    let dirs: Vec<Vector> = (0..n).map(|_| random_unit_vector(&mut rng)).collect();
    let points = dirs.iter().map(|d| Point::from(*d)).collect();
    PointCloud::with_normals(points, dirs).expect("unit sphere samples are valid")
}

/// `n` points uniform in the axis-aligned cube of the given half-width.
pub fn uniform_cube(n: usize, half_width: f64, seed: u64) -> PointCloud {
    let mut rng = rng_from_seed(seed);
    let points = (0..n)
        .map(|_| {
            Point::new(
                rng.random_range(-half_width..half_width),
                rng.random_range(-half_width..half_width),
                rng.random_range(-half_width..half_width),
            )
        })
        .collect();
    PointCloud::new(points).expect("cube samples are finite")
}

/// `n` points uniform in the unit square of the `z = 0` plane, normals `+z`.
pub fn plane_patch(n: usize, seed: u64) -> PointCloud {
    let mut rng = rng_from_seed(seed);
    let points = (0..n)
        .map(|_| Point::new(rng.random::<f64>(), rng.random::<f64>(), 0.0))
        .collect();
    PointCloud::with_normals(points, vec![Vector::z(); n]).expect("plane samples are valid")
}

/// Concatenates two clouds, dropping normals unless both carry them.
pub fn concat(a: &PointCloud, b: &PointCloud) -> PointCloud {
    let mut points = a.points().to_vec();
    points.extend_from_slice(b.points());
    match (a.normals(), b.normals()) {
        (Some(na), Some(nb)) => {
            let mut normals = na.to_vec();
            normals.extend_from_slice(nb);
            PointCloud::with_normals(points, normals).expect("inputs were valid")
        }
        _ => PointCloud::new(points).expect("inputs were valid"),
    }
}

pub(crate) fn random_unit_vector(rng: &mut impl Rng) -> Vector {
    loop {
        let v = Vector::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        );
        let norm = v.norm();
        if norm > 1e-12 {
            return v / norm;
        }
    }
}
