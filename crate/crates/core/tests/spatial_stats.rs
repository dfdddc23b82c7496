mod common;

use common::{rng, uniform_points};
use proptest::prelude::*;
use uavbs::spatial::{mean_cov, sample_thomas_at_least};
use uavbs::{
    calibrate_sigma, sample_thomas, voronoi_cell_areas, voronoi_cov, Point2D, Region, SigmaSearch,
    ThomasParams,
};

fn km3() -> Region {
    Region::square(3000.0)
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

#[test]
fn poisson_points_have_unit_cov() {
    let region = km3();
    let covs: Vec<f64> = (0..100)
        .map(|s| voronoi_cov(&uniform_points(&mut rng(s), 200, 3000.0), &region).unwrap())
        .collect();
    let (m, _) = mean_and_se(&covs);
    assert!((m - 1.0).abs() <= 0.1, "mean CoV {m}");
}

#[test]
fn free_process_count_matches_intensity() {
    // 6 users/km^2 over 9 km^2.
    let params = ThomasParams {
        parent_intensity: 0.6,
        mean_offspring: 10.0,
        sigma: 100.0,
        total_intensity_target: None,
    };
    let counts: Vec<f64> = (0..300)
        .map(|s| sample_thomas(&km3(), &params, &mut rng(s)).len() as f64)
        .collect();
    let (m, _) = mean_and_se(&counts);
    assert!((m / 54.0 - 1.0).abs() <= 0.1, "mean count {m}");
}

#[test]
fn wide_clusters_approach_poisson() {
    let params = ThomasParams::with_total_intensity(9.0, 45.0, 20_000.0);
    let m = mean_cov(&km3(), &params, 100, 17);
    assert!((m - 1.0).abs() <= 0.1, "{m}");
}

#[test]
fn tight_small_clusters_are_heterogeneous() {
    let params = ThomasParams {
        parent_intensity: 0.9,
        mean_offspring: 10.0,
        sigma: 50.0,
        total_intensity_target: None,
    };
    let m = mean_cov(&km3(), &params, 200, 1);
    assert!(m > 2.0, "{m}");
    // Regression value from the first validated run.
    assert!((m - 3.273_619).abs() < 1e-5, "{m}");
}

#[test]
fn cov_decreases_with_cluster_spread() {
    let base = ThomasParams::with_total_intensity(9.0, 45.0, 1.0);
    let mut prev: Option<(f64, f64)> = None;
    for sigma in [10.0, 50.0, 150.0, 400.0, 1000.0, 3000.0] {
        let covs: Vec<f64> = (0..150)
            .map(|s| {
                let users = sample_thomas_at_least(&km3(), &base.with_sigma(sigma), 3, &mut rng(s));
                voronoi_cov(&users, &km3()).unwrap()
            })
            .collect();
        let (m, se) = mean_and_se(&covs);
        if let Some((pm, pse)) = prev {
            assert!(m <= pm + se.max(pse), "sigma {sigma}: {m} after {pm}");
        }
        prev = Some((m, se));
    }
}

#[test]
fn calibration_targets() {
    let params = ThomasParams::with_total_intensity(9.0, 45.0, 100.0);
    let search = SigmaSearch::default();
    let flat = calibrate_sigma(&km3(), &params, 1.0, &search).unwrap();
    assert_eq!(flat, search.sigma_max);

    let s5 = calibrate_sigma(&km3(), &params, 5.0, &search).unwrap();
    let resampled = mean_cov(&km3(), &params.with_sigma(s5), 400, 1_000_000);
    assert!(
        (4.85..=5.15).contains(&resampled),
        "sigma {s5}: {resampled}"
    );

    let s3 = calibrate_sigma(&km3(), &params, 3.0, &search).unwrap();
    let s6 = calibrate_sigma(&km3(), &params, 6.0, &search).unwrap();
    assert!(s6 < s5 && s5 < s3, "{s6} {s5} {s3}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cells_partition_the_region(pts in prop::collection::vec((0.0f64..500.0, 0.0f64..300.0), 3..80)) {
        let region = Region::new(0.0, 500.0, 0.0, 300.0).unwrap();
        let users: Vec<Point2D> = pts.into_iter().map(Point2D::from).collect();
        if let Ok(areas) = voronoi_cell_areas(&users, &region) {
            let total: f64 = areas.iter().sum();
            prop_assert!((total / region.area() - 1.0).abs() < 1e-6);
            prop_assert!(areas.iter().all(|&a| a > 0.0));
        }
    }

    #[test]
    fn thomas_samples_are_seeded_and_bounded(seed in 0u64..1000, sigma in 1.0f64..2000.0) {
        let params = ThomasParams::with_total_intensity(9.0, 45.0, sigma);
        let a = sample_thomas(&km3(), &params, &mut rng(seed));
        let b = sample_thomas(&km3(), &params, &mut rng(seed));
        prop_assert_eq!(&a, &b);
        prop_assert!(a.iter().all(|p| km3().contains(*p)));
    }
}
