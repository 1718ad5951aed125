mod common;

use common::ishigami_quadrature;
use gsa_core::models::{ishigami_model, linear_gaussian_model, ModelDefinition};
use gsa_core::sampling::RandomVariableSpec;
use gsa_core::sobol::{estimate_sobol, evaluate_sobol_design, sample_variance};
use gsa_core::GsaError;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

#[test]
fn variance_examples() {
    assert_eq!(sample_variance(&[3.0; 10]).unwrap(), 0.0);
    assert_eq!(sample_variance(&[0.0, 2.0]).unwrap(), 2.0);
    assert!(sample_variance(&[1.0]).is_err());
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let draws: Vec<f64> = (0..1_000_000)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    assert!((sample_variance(&draws).unwrap() - 1.0).abs() < 0.01);
}

#[test]
fn single_determining_input() {
    let est = estimate_sobol(&linear_gaussian_model(vec![1.0, 0.0]), 4000, 5).unwrap();
    assert!((est[0].main_effect - 1.0).abs() < 0.02 && (est[0].total_effect - 1.0).abs() < 0.02);
    assert!(est[1].main_effect.abs() < 0.02 && est[1].total_effect.abs() < 0.02);
}

#[test]
fn linear_combination_shares() {
    let est = estimate_sobol(&linear_gaussian_model(vec![2.0, 1.0]), 4000, 7).unwrap();
    for (e, target) in est.iter().zip([0.8, 0.2]) {
        assert!((e.main_effect - target).abs() < 0.02, "{e:?}");
        assert!((e.total_effect - target).abs() < 0.02, "{e:?}");
        assert_eq!(e.n_evaluations, 4 * 4000);
    }
}

#[test]
fn ishigami_matches_quadrature() {
    let (main, total) = ishigami_quadrature(7.0, 0.1, 160);
    // closed-form values as a sanity check on the quadrature itself
    for (q, exact) in main.iter().zip([0.3139, 0.4424, 0.0]) {
        assert!((q - exact).abs() < 1e-3, "{q} {exact}");
    }
    for (q, exact) in total.iter().zip([0.5576, 0.4424, 0.2437]) {
        assert!((q - exact).abs() < 1e-3, "{q} {exact}");
    }
    let est = estimate_sobol(&ishigami_model(7.0, 0.1), 50_000, 11).unwrap();
    for i in 0..3 {
        assert!(
            (est[i].main_effect - main[i]).abs() < 0.02,
            "S{i}: {} vs {}",
            est[i].main_effect,
            main[i]
        );
        assert!(
            (est[i].total_effect - total[i]).abs() < 0.02,
            "ST{i}: {} vs {}",
            est[i].total_effect,
            total[i]
        );
    }
}

#[test]
fn additive_model_main_equals_total_within_noise() {
    let model = linear_gaussian_model(vec![1.0, 2.0, 3.0]);
    let out = evaluate_sobol_design(&model, 4000, 13).unwrap();
    let est = out.estimate().unwrap();
    // standard errors from 200 bootstrap-free batch replicates of the design
    let batches: Vec<Vec<f64>> = (0..20)
        .map(|b| {
            let rows: Vec<usize> = (b * 200..(b + 1) * 200).collect();
            out.estimate_rows(&rows)
                .unwrap()
                .iter()
                .map(|e| e.main_effect - e.total_effect)
                .collect()
        })
        .collect();
    for i in 0..3 {
        let d: Vec<f64> = batches.iter().map(|v| v[i]).collect();
        let m = d.iter().sum::<f64>() / d.len() as f64;
        let sd = (d.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (d.len() - 1) as f64).sqrt();
        let se = sd / (20f64).sqrt();
        assert!(
            (est[i].main_effect - est[i].total_effect).abs() <= 3.0 * se.max(1e-3),
            "{i}"
        );
    }
    let sum: f64 = est.iter().map(|e| e.main_effect).sum();
    assert!(sum <= 1.03, "{sum}");
}

#[test]
fn scale_invariance() {
    let model = ishigami_model(7.0, 0.1);
    let a = estimate_sobol(&model, 2000, 3).unwrap();
    let b = estimate_sobol(&model.scaled(10.0), 2000, 3).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x.main_effect - y.main_effect).abs() < 1e-12);
        assert!((x.total_effect - y.total_effect).abs() < 1e-12);
    }
}

#[test]
fn degenerate_and_small_designs_rejected() {
    let specs = vec![RandomVariableSpec::new("x", 0.0, 1.0, -3.0, 3.0).unwrap()];
    let constant = ModelDefinition::new("c", specs, |_| Ok(5.0));
    assert!(matches!(
        estimate_sobol(&constant, 200, 1),
        Err(GsaError::DegenerateModel { .. })
    ));
    assert!(estimate_sobol(&linear_gaussian_model(vec![1.0]), 99, 1).is_err());
}

#[test]
fn deterministic_given_seed() {
    let m = ishigami_model(7.0, 0.1);
    assert_eq!(
        estimate_sobol(&m, 500, 9).unwrap(),
        estimate_sobol(&m, 500, 9).unwrap()
    );
}
