mod common;

use common::{random_mixture, random_state, rng};
use qcorr_core::tomography::{expected_counts, reconstruct, setting_label, BASIS_SET};
use qcorr_core::{
    apply_dephasing_a, bell_state, bootstrap_report, from_mixture, interference_state,
    linear_inversion, project_physical, projectors, simulate_counts, trace_distance, BellMixture,
    BellState, ChannelStrength, ComplexMatrix, CountSet, Error,
};

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.total_cmp(b));
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

#[test]
fn frozen_setting_order() {
    let labels: Vec<String> = (0..16).map(setting_label).collect();
    assert_eq!(
        labels.join(" "),
        "HH HV VV VH RH RV DV DH DR DD RD HD VD VL HL RL"
    );
    assert_eq!(BASIS_SET.len(), 16);
    for p in projectors() {
        assert!((p.trace().re - 1.0).abs() < 1e-14);
        assert!((&p * &p).max_abs_diff(&p) < 1e-14);
    }
}

#[test]
fn noiseless_round_trip() {
    let mut r = rng(11);
    for _ in 0..100 {
        let rho = random_state(&mut r, 4);
        let set = expected_counts(&rho, 10_000).unwrap();
        let raw = linear_inversion(&set).unwrap();
        assert!(raw.max_abs_diff(&rho) <= 1e-9);
        let fit = reconstruct(&set).unwrap();
        assert!(trace_distance(&fit, &rho).unwrap() <= 1e-9);
    }
}

#[test]
fn exact_counts_of_dephased_interference_state() {
    let rho = apply_dephasing_a(
        &interference_state(0.75).unwrap(),
        &ChannelStrength::from_kappa(0.5).unwrap(),
    )
    .unwrap();
    let fit = reconstruct(&expected_counts(&rho, 1_000).unwrap()).unwrap();
    assert!(fit.max_abs_diff(&rho) <= 1e-9);
}

fn median_distance(truths: impl Fn(u64) -> ComplexMatrix) -> f64 {
    median(
        (0..100)
            .map(|k| {
                let rho = truths(k);
                let set = simulate_counts(&rho, 10_000, 1_000 + k).unwrap();
                trace_distance(&reconstruct(&set).unwrap(), &rho).unwrap()
            })
            .collect(),
    )
}

#[test]
fn finite_count_accuracy_for_input_state() {
    let rho = interference_state(0.75).unwrap();
    let med = median_distance(|_| rho.clone());
    assert!(med <= 0.03, "median trace distance {med}");
}

#[test]
fn finite_count_accuracy_for_random_bell_mixtures() {
    // Independent Monte Carlo of the same pipeline puts the median for
    // full-rank Bell-diagonal truths near 0.031 at this N.
    let mixtures: Vec<BellMixture> = {
        let mut r = rng(12);
        (0..100).map(|_| random_mixture(&mut r)).collect()
    };
    let med = median_distance(|k| from_mixture(&mixtures[k as usize]).unwrap());
    assert!(
        (0.028..=0.034).contains(&med),
        "median trace distance {med}"
    );
}

#[test]
fn fitted_state_predicts_counts() {
    let mut r = rng(13);
    let mut consistent_runs = 0;
    for k in 0..20 {
        let rho = random_state(&mut r, 4);
        let set = simulate_counts(&rho, 10_000, 77 + k).unwrap();
        let fit = reconstruct(&set).unwrap();
        let counts = set.ordered_counts().unwrap();
        let flux = counts[0] + counts[1] + counts[2] + counts[3];
        let within = projectors()
            .iter()
            .zip(counts)
            .filter(|(p, n)| {
                let predicted = flux * (*p * &fit).trace().re;
                (predicted - n).abs() <= 3.0 * n.max(1.0).sqrt()
            })
            .count();
        if within >= 14 {
            consistent_runs += 1;
        }
    }
    assert!(consistent_runs >= 19, "{consistent_runs}/20");
}

#[test]
fn poisson_counts_are_unbiased() {
    let rho = bell_state(BellState::PhiPlus);
    let n = 1_000u64;
    let trials = 1_000;
    let mean = (0..trials)
        .map(|seed| simulate_counts(&rho, n, seed).unwrap().records[9].count / n as f64)
        .sum::<f64>()
        / trials as f64;
    let sigma = (0.5 / n as f64).sqrt();
    assert!(
        (mean - 0.5).abs() <= 3.0 * sigma / (trials as f64).sqrt(),
        "{mean}"
    );
}

#[test]
fn simulation_is_reproducible() {
    let rho = interference_state(0.75).unwrap();
    let a = simulate_counts(&rho, 5_000, 42).unwrap();
    let b = simulate_counts(&rho, 5_000, 42).unwrap();
    let c = simulate_counts(&rho, 5_000, 43).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
    for rec in &a.records {
        assert_eq!(rec.count.fract(), 0.0);
    }
}

#[test]
fn bootstrap_error_bars() {
    let rho = interference_state(0.75).unwrap();
    let set = simulate_counts(&rho, 10_000, 3).unwrap();
    let report = bootstrap_report(&set, 200, 9).unwrap();
    assert!(report.quantum.std > 0.0 && report.quantum.std < 0.05);
    assert_eq!(report.resamples, 200);
    let again = bootstrap_report(&set, 200, 9).unwrap();
    assert_eq!(report, again);
}

#[test]
fn bootstrap_spread_shrinks_with_counts() {
    // full-rank truth, away from the boundary of state space
    let rho = apply_dephasing_a(
        &interference_state(0.75).unwrap(),
        &ChannelStrength::from_kappa(0.5).unwrap(),
    )
    .unwrap();
    let small = bootstrap_report(&simulate_counts(&rho, 1_000, 21).unwrap(), 200, 1).unwrap();
    let large = bootstrap_report(&simulate_counts(&rho, 10_000, 22).unwrap(), 200, 1).unwrap();
    let ratio = small.total.std / large.total.std;
    let expect = 10f64.sqrt();
    assert!(
        ratio > expect / 1.5 && ratio < expect * 1.5,
        "ratio {ratio}"
    );
}

#[test]
fn bootstrap_resample_bounds() {
    let set = simulate_counts(&interference_state(0.75).unwrap(), 1_000, 1).unwrap();
    assert!(bootstrap_report(&set, 10, 0).is_err());
    let zero = bootstrap_report(&set, 0, 0).unwrap();
    assert_eq!(zero.quantum.std, 0.0);
    assert_eq!(zero.quantum.mean, zero.point.quantum);
}

#[test]
fn incomplete_records_list_missing_indices() {
    let mut set = simulate_counts(&interference_state(0.75).unwrap(), 1_000, 1).unwrap();
    set.records.retain(|r| r.i != 3 && r.i != 11);
    match set.ordered_counts() {
        Err(Error::MissingRecords { missing }) => assert_eq!(missing, vec![3, 11]),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn rejects_implausible_records() {
    let good = simulate_counts(&interference_state(0.75).unwrap(), 1_000, 1).unwrap();
    let mut bad = good.clone();
    bad.records[4].setting = "HH".into();
    assert!(bad.ordered_counts().is_err());
    let mut bad = good.clone();
    bad.records[0].count = 20_000.0;
    assert!(bad.ordered_counts().is_err());
    let mut bad = good.clone();
    bad.records[0].count = -1.0;
    assert!(bad.ordered_counts().is_err());
    let mut bad = good.clone();
    bad.records.push(good.records[0].clone());
    assert!(bad.ordered_counts().is_err());
    let bad = CountSet { n: 0, ..good };
    assert!(bad.ordered_counts().is_err());
}

#[test]
fn counts_json_round_trip() {
    let set = simulate_counts(&interference_state(0.75).unwrap(), 1_000, 1).unwrap();
    let text = serde_json::to_string(&set).unwrap();
    assert!(text.contains("\"N\":1000"));
    assert!(!text.contains(".0,"));
    let back: CountSet = serde_json::from_str(&text).unwrap();
    assert_eq!(back, set);
}

#[test]
fn projection_keeps_physical_states() {
    let mut r = rng(14);
    for _ in 0..20 {
        let rho = random_state(&mut r, 4);
        assert!(project_physical(&rho).unwrap().max_abs_diff(&rho) < 1e-12);
    }
}
