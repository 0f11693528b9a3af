mod common;

use common::{random_cloud, rng};
use pointsp::fixtures::{plane_patch, sphere_surface};
use pointsp::geometry::{build_neighbor_graph, chamfer_distance, squared_distance};
use pointsp::resampling::{
    inference_resample, lgb_downsample, lgb_downsample_with, train_resample, upsample, upsample_detailed,
};
use rand::Rng;

#[test]
fn sphere_upsampling_gets_closer_to_dense_reference() {
    let cloud = sphere_surface(2048, 1).without_normals();
    let reference = sphere_surface(8192, 2);
    let graph = build_neighbor_graph(&cloud, 20).unwrap();
    let up = upsample(&cloud, 512, &graph, 3).unwrap();
    assert_eq!(up.len(), 2560);
    let before = chamfer_distance(&cloud, &reference);
    let after = chamfer_distance(&up, &reference);
    assert!(after <= before, "{after} > {before}");
}

#[test]
fn upsample_to_1024_keeps_prefix() {
    let cloud = sphere_surface(512, 5);
    let graph = build_neighbor_graph(&cloud, 20).unwrap();
    let up = upsample_detailed(&cloud, 512, &graph, 1).unwrap();
    assert_eq!(up.cloud.len(), 1024);
    assert_eq!(&up.cloud.points()[..512], cloud.points());
    assert_eq!(&up.cloud.normals().unwrap()[..512], cloud.normals().unwrap());
    for rec in &up.records {
        let n = cloud.normals().unwrap()[rec.source_index];
        assert!(rec.direction.dot(&n).abs() <= 1e-6);
        assert!(((rec.new_point - cloud.point(rec.source_index)).norm() - rec.delta_med).abs() <= 1e-6);
    }
}

#[test]
fn plane_with_exact_normals_stays_planar() {
    let cloud = plane_patch(300, 4);
    let graph = build_neighbor_graph(&cloud, 20).unwrap();
    let up = upsample(&cloud, 700, &graph, 2).unwrap();
    assert!(up.points().iter().all(|p| p.z.abs() <= 1e-9));
}

#[test]
fn downsample_removes_from_neighborhood() {
    let mut r = rng(2);
    for trial in 0..300u64 {
        let n = r.random_range(3..150);
        let cloud = random_cloud(n, false, trial);
        let remove = r.random_range(1..n) as i64;
        let (out, plan) = lgb_downsample(&cloud, -remove, trial).unwrap();
        assert_eq!(out.len(), n - remove as usize);
        let size = plan.neighborhood_size.unwrap();
        assert!(size >= remove as usize && size <= n);
        let center = plan.center_index.unwrap();
        // Oracle: everything within the size-th smallest distance from the center.
        let mut dists: Vec<f64> = (0..n).map(|j| squared_distance(cloud.point(center), cloud.point(j))).collect();
        dists.sort_by(f64::total_cmp);
        let cutoff = dists[size - 1];
        for &i in &plan.selected {
            assert!(squared_distance(cloud.point(center), cloud.point(i)) <= cutoff);
        }
        assert_eq!(plan.selected.len(), remove as usize);
    }
}

#[test]
fn train_resample_delta_is_uniform() {
    // 513 possible sizes grouped into 9 bins of 57.
    let cloud = sphere_surface(1024, 11);
    let mut bins = [0usize; 9];
    for seed in 0..1000 {
        let (out, plan) = train_resample(&cloud, 0.25, 20, seed).unwrap();
        assert_eq!(out.len() as i64, 1024 + plan.delta_n);
        assert!((768..=1280).contains(&out.len()));
        bins[(out.len() - 768) / 57] += 1;
    }
    let p: f64 = 1.0 / 9.0;
    let expected = 1000.0 * p;
    let sigma = (1000.0 * p * (1.0 - p)).sqrt();
    for b in bins {
        assert!((b as f64 - expected).abs() <= 3.0 * sigma, "{bins:?}");
    }
}

#[test]
fn resamplers_are_deterministic() {
    let cloud = sphere_surface(400, 6).without_normals();
    let graph = build_neighbor_graph(&cloud, 20).unwrap();
    assert_eq!(upsample(&cloud, 77, &graph, 5).unwrap(), upsample(&cloud, 77, &graph, 5).unwrap());
    assert_eq!(lgb_downsample(&cloud, -50, 5).unwrap(), lgb_downsample(&cloud, -50, 5).unwrap());
    for seed in 0..10 {
        assert_eq!(train_resample(&cloud, 0.3, 20, seed).unwrap(), train_resample(&cloud, 0.3, 20, seed).unwrap());
    }
    assert_eq!(inference_resample(&cloud, 600, 20, 1).unwrap(), inference_resample(&cloud, 600, 20, 1).unwrap());
}

#[test]
fn inference_examples() {
    let cloud = sphere_surface(1024, 1);
    assert_eq!(inference_resample(&cloud, 1024, 20, 0).unwrap(), cloud);
    let small = sphere_surface(700, 2);
    let out = inference_resample(&small, 1024, 20, 0).unwrap();
    assert_eq!(out.len(), 1024);
    assert_eq!(&out.points()[..700], small.points());
    let big = sphere_surface(1500, 3);
    assert_eq!(inference_resample(&big, 1024, 20, 0).unwrap(), big);
}

#[test]
fn global_limit_of_downsampling_ignores_locality() {
    let cloud = random_cloud(40, false, 8);
    let (_, plan) = lgb_downsample_with(&cloud, -39, Some(40), 1).unwrap();
    assert_eq!(plan.selected.len(), 39);
}
