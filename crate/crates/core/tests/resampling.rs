use gsa_core::moment_independent::{knn_mutual_information, KnnSettings};
use gsa_core::resampling::{
    bootstrap_ci, grouped_jackknife_ci, rank_indices, ranked_estimates, ranking_order,
    BootstrapSettings, JackknifeSettings, Method,
};
use gsa_core::GsaError;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

const GAUSSIAN_MI_HALF: f64 = 0.143_841_036_225_890_2;

fn normals(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

fn mean_of(data: &[f64]) -> impl Fn(&[usize]) -> gsa_core::Result<f64> + Sync + '_ {
    move |rows| Ok(rows.iter().map(|&i| data[i]).sum::<f64>() / rows.len() as f64)
}

fn mi(x: &[f64], y: &[f64]) -> gsa_core::Result<f64> {
    knn_mutual_information(x, y, &KnnSettings::default())
}

#[test]
fn constant_data_gives_zero_width() {
    let data = vec![2.5; 500];
    let ci = bootstrap_ci(500, &BootstrapSettings::default(), 1, mean_of(&data)).unwrap();
    assert_eq!((ci.low, ci.high), (2.5, 2.5));
}

#[test]
fn normal_mean_width_follows_clt() {
    let data = normals(10_000, 2);
    let ci = bootstrap_ci(10_000, &BootstrapSettings::default(), 3, mean_of(&data)).unwrap();
    let expected = 2.0 * 1.96 / 100.0;
    assert!((ci.width() / expected - 1.0).abs() < 0.2, "{}", ci.width());
    assert!(ci.contains(data.iter().sum::<f64>() / 1e4));
}

#[test]
fn width_shrinks_as_inverse_root_n() {
    let sizes = [500usize, 2000, 8000, 32_000];
    let settings = BootstrapSettings {
        replicates: 400,
        level: 0.95,
    };
    let pts: Vec<(f64, f64)> = sizes
        .iter()
        .map(|&n| {
            let data = normals(n, n as u64);
            let ci = bootstrap_ci(n, &settings, 5, mean_of(&data)).unwrap();
            ((n as f64).ln(), ci.width().ln())
        })
        .collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    assert!((slope + 0.5).abs() <= 0.15, "{slope}");
}

#[test]
fn bootstrap_is_deterministic_and_validates() {
    let data = normals(1000, 4);
    let s = BootstrapSettings::default();
    let a = bootstrap_ci(1000, &s, 9, mean_of(&data)).unwrap();
    let b = bootstrap_ci(1000, &s, 9, mean_of(&data)).unwrap();
    assert_eq!(a, b);
    let few = BootstrapSettings {
        replicates: 99,
        level: 0.95,
    };
    assert!(bootstrap_ci(1000, &few, 9, mean_of(&data)).is_err());
    assert!(bootstrap_ci(0, &s, 9, |_| Ok(0.0)).is_err());
}

#[test]
fn failing_statistic_reports_replicate() {
    let err = bootstrap_ci(100, &BootstrapSettings::default(), 1, |rows| {
        if rows.len() == 100 && rows[0] == rows[1] {
            Err(GsaError::DegenerateData("duplicate".into()))
        } else {
            Ok(1.0)
        }
    })
    .unwrap_err();
    assert!(matches!(err, GsaError::Resample { .. }), "{err:?}");
}

#[test]
fn jackknife_covers_zero_for_independent_pairs() {
    let s = JackknifeSettings {
        groups: 50,
        level: 0.95,
    };
    let runs = 100;
    let covered = (0..runs)
        .filter(|&r| {
            let x = normals(1000, 2 * r);
            let y = normals(1000, 2 * r + 1);
            grouped_jackknife_ci(&x, &y, &s, r, mi)
                .unwrap()
                .interval
                .contains(0.0)
        })
        .count();
    assert!(covered >= 90, "{covered}/{runs}");
}

#[test]
fn jackknife_covers_gaussian_mutual_information() {
    let s = JackknifeSettings {
        groups: 50,
        level: 0.95,
    };
    let runs = 100;
    let covered = (0..runs)
        .filter(|&r| {
            let x = normals(2000, 1000 + 2 * r);
            let e = normals(2000, 1001 + 2 * r);
            let y: Vec<f64> = x
                .iter()
                .zip(&e)
                .map(|(a, b)| 0.5 * a + 0.75f64.sqrt() * b)
                .collect();
            grouped_jackknife_ci(&x, &y, &s, r, mi)
                .unwrap()
                .interval
                .contains(GAUSSIAN_MI_HALF)
        })
        .count();
    assert!(covered >= 90, "{covered}/{runs}");
}

#[test]
fn jackknife_preconditions() {
    let x = normals(100, 1);
    let s = JackknifeSettings {
        groups: 51,
        level: 0.95,
    };
    assert!(grouped_jackknife_ci(&x, &x, &s, 0, mi).is_err());
    assert!(grouped_jackknife_ci(&x, &x[..99], &JackknifeSettings::default(), 0, mi).is_err());
}

#[test]
fn rank_examples() {
    // T, RH, U, FA
    assert_eq!(
        rank_indices(&[0.0090, 0.0987, 0.9203, 0.0222]),
        vec![4, 2, 1, 3]
    );
    assert_eq!(
        rank_indices(&[0.0282, 0.8011, 0.6106, 0.0113]),
        vec![3, 1, 2, 4]
    );
    assert_eq!(rank_indices(&[0.3; 4]), vec![1, 2, 3, 4]);
    assert_eq!(rank_indices(&[f64::NAN, 0.1, 0.2]), vec![3, 2, 1]);
    assert_eq!(
        ranking_order(&[0.0090, 0.0987, 0.9203, 0.0222]),
        vec![2, 1, 3, 0]
    );
}

#[test]
fn ranked_estimates_carry_ranks_and_names() {
    let names: Vec<String> = ["T", "RH", "U", "FA"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let est = ranked_estimates(
        Method::SobolTotal,
        &names,
        &[0.0090, 0.0987, 0.9203, 0.0222],
        None,
    );
    let ranks: Vec<usize> = est.iter().map(|e| e.rank).collect();
    assert_eq!(ranks, vec![4, 2, 1, 3]);
    assert!(est
        .iter()
        .all(|e| e.ci_low <= e.value && e.value <= e.ci_high));
    for m in Method::ALL {
        assert_eq!(Method::from_name(m.name()), Some(m));
    }
}

proptest! {
    #[test]
    fn ranks_survive_positive_affine_maps(
        values in prop::collection::vec(-1e3f64..1e3, 1..12),
        scale in 1e-3f64..1e3,
        shift in -1e3f64..1e3,
    ) {
        let mapped: Vec<f64> = values.iter().map(|v| scale * v + shift).collect();
        let ranks = rank_indices(&values);
        // an affine map can merge values that differ by less than rounding
        let distinct = {
            let mut s = mapped.clone();
            s.sort_by(f64::total_cmp);
            s.windows(2).all(|w| w[0] != w[1])
        };
        if distinct {
            prop_assert_eq!(rank_indices(&mapped), ranks.clone());
        }
        let mut sorted = ranks;
        sorted.sort();
        prop_assert_eq!(sorted, (1..=values.len()).collect::<Vec<_>>());
    }
}
