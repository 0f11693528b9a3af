mod common;

use common::{fps_oracle, random_cloud, rng};
use pointsp::reweighting::{sampling_weights, WeightVector};
use pointsp::sampling::{ffps, fps, resolve_start, sws, StartRule};
use pointsp::geometry::squared_distance;
use pointsp::PointCloud;
use rand::Rng;

fn full_mask(n: usize) -> WeightVector {
    WeightVector::from_isolation(vec![0.0; n]).unwrap().with_explicit_mask(vec![true; n]).unwrap()
}

#[test]
fn ffps_under_full_mask_equals_fps() {
    for seed in 0..100u64 {
        let cloud = random_cloud(256, seed % 4 == 0, 40_000 + seed);
        let wv = full_mask(256);
        for rule in [StartRule::MaxCentroidDistance, StartRule::FirstUnmasked, StartRule::Random { seed }] {
            let start = resolve_start(&cloud, None, rule).unwrap();
            assert_eq!(
                ffps(&cloud, &wv, 64, rule).unwrap().indices,
                fps(&cloud, 64, start).unwrap().indices
            );
        }
    }
}

#[test]
fn ffps_matches_masked_oracle_and_excludes_masked() {
    let mut r = rng(3);
    for seed in 0..60u64 {
        let n = r.random_range(4..100);
        let cloud = random_cloud(n, seed % 2 == 0, seed);
        let mut mask: Vec<bool> = (0..n).map(|_| r.random_bool(0.7)).collect();
        mask[r.random_range(0..n)] = true;
        let unmasked = mask.iter().filter(|&&b| b).count();
        let wv = WeightVector::from_isolation(vec![0.0; n]).unwrap().with_explicit_mask(mask.clone()).unwrap();
        let m = r.random_range(1..=unmasked);
        let got = ffps(&cloud, &wv, m, StartRule::FirstUnmasked).unwrap();
        assert!(got.indices.iter().all(|&i| mask[i]));
        let start = mask.iter().position(|&b| b).unwrap();
        assert_eq!(got.indices, fps_oracle(&cloud, m, start, Some(&mask)));
    }
}

#[test]
fn fps_coverage_is_non_increasing_in_m() {
    let cloud = random_cloud(200, false, 9);
    let order = fps(&cloud, 200, 0).unwrap().indices;
    let mut previous = f64::INFINITY;
    for m in 1..=200 {
        let coverage = (0..200)
            .map(|i| order[..m].iter().map(|&s| squared_distance(cloud.point(i), cloud.point(s))).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        assert!(coverage <= previous);
        previous = coverage;
    }
    assert_eq!(previous, 0.0);
}

#[test]
fn sws_uniform_frequencies() {
    let cloud = random_cloud(6, false, 1);
    let wv = sampling_weights(WeightVector::from_isolation(vec![0.2; 6]).unwrap());
    let mut counts = [0usize; 6];
    for seed in 0..10_000 {
        counts[sws(&cloud, &wv, 1, seed).unwrap().indices[0]] += 1;
    }
    for c in counts {
        assert!((c as f64 / 10_000.0 - 1.0 / 6.0).abs() <= 0.02, "{counts:?}");
    }
    let perm = sws(&cloud, &wv, 6, 5).unwrap().indices;
    let mut sorted = perm.clone();
    sorted.sort();
    assert_eq!(sorted, vec![0, 1, 2, 3, 4, 5]);
}

#[test]
fn sws_weighted_frequencies() {
    let cloud = random_cloud(5, false, 2);
    let wv = sampling_weights(WeightVector::from_isolation(vec![0.5, 0.0, 0.0, 0.5, 1.0]).unwrap());
    let mut counts = [0usize; 5];
    for seed in 0..10_000 {
        counts[sws(&cloud, &wv, 1, seed).unwrap().indices[0]] += 1;
    }
    assert_eq!(counts[4], 0);
    for i in [1, 2] {
        assert!((counts[i] as f64 / 10_000.0 - 1.0 / 3.0).abs() <= 0.02, "{counts:?}");
    }
    for seed in 0..200 {
        let got = sws(&cloud, &wv, 4, seed).unwrap().indices;
        assert!(!got.contains(&4));
    }
}

#[test]
fn sampling_is_deterministic() {
    let cloud: PointCloud = random_cloud(300, false, 12);
    let wv = sampling_weights(WeightVector::from_isolation((0..300).map(|i| (i % 7) as f64 / 7.0).collect()).unwrap());
    assert_eq!(sws(&cloud, &wv, 50, 99).unwrap(), sws(&cloud, &wv, 50, 99).unwrap());
    assert_ne!(sws(&cloud, &wv, 50, 99).unwrap(), sws(&cloud, &wv, 50, 100).unwrap());
    assert_eq!(fps(&cloud, 50, 3).unwrap(), fps(&cloud, 50, 3).unwrap());
}
