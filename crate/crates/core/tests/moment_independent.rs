use gsa_core::moment_independent::{
    binned_density, delta_given_data, differential_entropy, knn_mutual_information, normalize_mi,
    DeltaSettings, KnnSettings,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

const GAUSSIAN_ENTROPY: f64 = 1.418_938_533_204_672_7;
/// `-0.5 ln(1 - 0.5^2)`
const GAUSSIAN_MI_HALF: f64 = 0.143_841_036_225_890_2;

fn normals(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

fn uniforms(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random()).collect()
}

fn correlated(n: usize, r: f64, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let x = normals(n, seed);
    let e = normals(n, seed ^ 0xabcdef);
    let y = x
        .iter()
        .zip(&e)
        .map(|(a, b)| r * a + (1.0 - r * r).sqrt() * b)
        .collect();
    (x, y)
}

#[test]
fn entropy_of_reference_laws() {
    let s = KnnSettings::default();
    let h = differential_entropy(&uniforms(1_000_000, 1), &s).unwrap();
    assert!(h.abs() < 0.01, "{h}");
    let h = differential_entropy(&normals(1_000_000, 2), &s).unwrap();
    assert!((h - GAUSSIAN_ENTROPY).abs() < 0.01, "{h}");
}

#[test]
fn entropy_shift_and_scale() {
    let y = normals(20_000, 3);
    let s = KnnSettings::default();
    let h = differential_entropy(&y, &s).unwrap();
    let shifted: Vec<f64> = y.iter().map(|v| v + 37.5).collect();
    assert!((differential_entropy(&shifted, &s).unwrap() - h).abs() < 1e-6);
    let scaled: Vec<f64> = y.iter().map(|v| v * 4.0).collect();
    assert!((differential_entropy(&scaled, &s).unwrap() - h - 4f64.ln()).abs() < 0.01);
}

#[test]
fn mutual_information_reference_values() {
    let s = KnnSettings::default();
    let mi = knn_mutual_information(&normals(100_000, 4), &normals(100_000, 5), &s).unwrap();
    assert!(mi.abs() < 0.01, "{mi}");
    let (x, y) = correlated(100_000, 0.5, 6);
    let mi = knn_mutual_information(&x, &y, &s).unwrap();
    assert!((mi - GAUSSIAN_MI_HALF).abs() < 0.01, "{mi}");
    assert!((normalize_mi(GAUSSIAN_MI_HALF).rho - 0.5).abs() < 1e-12);
    // swapping the arguments only changes estimator noise
    let swapped = knn_mutual_information(&y, &x, &s).unwrap();
    assert!((mi - swapped).abs() < 0.01);
}

#[test]
fn mutual_information_ignores_affine_rescaling_of_x() {
    let (x, y) = correlated(100_000, 0.5, 7);
    let s = KnnSettings::default();
    let a = knn_mutual_information(&x, &y, &s).unwrap();
    let x2: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
    let b = knn_mutual_information(&x2, &y, &s).unwrap();
    assert!((a - b).abs() < 0.01);
}

#[test]
fn mutual_information_preconditions() {
    let s = KnnSettings::default();
    assert!(knn_mutual_information(&[1.0, 2.0, 3.0, 4.0], &[1.0, 2.0, 3.0, 4.0], &s).is_err());
    assert!(knn_mutual_information(&[1.0; 10], &uniforms(10, 1), &s).is_err());
}

#[test]
fn delta_null_and_full_dependence() {
    let n = 5000;
    let s = DeltaSettings::default();
    // the null level is a bias, so it is judged on the mean of several pairs
    let (mut delta, mut mi) = (0.0, 0.0);
    for r in 0..8 {
        let x = uniforms(n, 8 + 2 * r);
        let y = normals(n, 9 + 2 * r);
        let d = delta_given_data(&x, &y, &s).unwrap();
        assert!((0.0..0.07).contains(&d), "{d}");
        delta += d / 8.0;
        mi += knn_mutual_information(&x, &y, &KnnSettings::default()).unwrap() / 8.0;
    }
    assert!(delta <= 0.05, "{delta}");
    assert!(mi.abs() <= 0.05, "{mi}");
    let x = uniforms(n, 8);
    let full = delta_given_data(&x, &x, &s).unwrap();
    assert!((0.9..=1.02).contains(&full), "{full}");
}

#[test]
fn delta_rejects_bad_partitions() {
    let x = uniforms(1000, 1);
    let too_many = DeltaSettings {
        partitions: Some(21),
        ..Default::default()
    };
    assert!(delta_given_data(&x, &x, &too_many).is_err());
    let one = DeltaSettings {
        partitions: Some(1),
        ..Default::default()
    };
    assert!(delta_given_data(&x, &x, &one).is_err());
    assert!(delta_given_data(&x[..999], &x, &DeltaSettings::default()).is_err());
}

#[test]
fn density_curve_invariants() {
    for seed in 0..3 {
        let y: Vec<f64> = normals(50_000, seed).iter().map(|v| v.exp()).collect();
        let d = binned_density(&y, 512).unwrap();
        assert!(d.density.iter().all(|&v| v >= 0.0));
        assert!((0.98..=1.02).contains(&d.integral()));
        assert!(d.bandwidth > 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn normalized_mi_is_monotone(a in 0.0f64..20.0, b in 0.0f64..20.0) {
        let (ra, rb) = (normalize_mi(a).rho, normalize_mi(b).rho);
        prop_assert!((0.0..1.0).contains(&ra) || a > 18.0);
        if a < b {
            prop_assert!(ra <= rb);
        }
        if a + 1e-6 < b && b < 15.0 {
            prop_assert!(ra < rb);
        }
    }

    #[test]
    fn delta_stays_in_unit_interval(seed in any::<u64>(), power in 0.0f64..3.0, noise in 0.0f64..2.0) {
        let n = 1000;
        let x = uniforms(n, seed);
        let e = normals(n, seed.wrapping_add(1));
        let y: Vec<f64> = x.iter().zip(&e).map(|(a, b)| a.powf(power) + noise * b).collect();
        let d = delta_given_data(&x, &y, &DeltaSettings::default()).unwrap();
        prop_assert!((0.0..=1.02).contains(&d), "{}", d);
    }

    #[test]
    fn entropy_is_permutation_invariant(seed in any::<u64>()) {
        let y = normals(500, seed);
        let mut rev = y.clone();
        rev.reverse();
        let s = KnnSettings { k: 3, jitter_seed: 0 };
        let a = differential_entropy(&y, &s).unwrap();
        let b = differential_entropy(&rev, &s).unwrap();
        prop_assert!((a - b).abs() < 1e-6);
    }
}
