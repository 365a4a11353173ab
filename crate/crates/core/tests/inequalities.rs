//! Sign checks, the function g and the alpha scan.

use glasschain::inequalities::{
    alpha_scan, check_first_inequality, check_second_inequality, critical_alpha, critical_alpha_curve, enumerated_truncated_average, g_function,
    g_slope, second_inequality_hypotheses, Boundary, CheckOptions, Sign,
};
use glasschain::{BondLaw, DisorderModel, Error};
use proptest::prelude::*;

#[test]
fn frozen_g_and_root() {
    let mags = [1.0, 1.0, 1.0];
    assert!((g_function(0.5, &mags).unwrap() + 3.8598931501489364).abs() < 1e-12);
    assert!((critical_alpha(&mags).unwrap() - 0.7392354528488408).abs() < 1e-15);
}

#[test]
fn curve_row_at_unit_coupling() {
    let grid: Vec<f64> = (0..=6).map(|i| 0.5 + 0.25 * i as f64).collect();
    let curve = critical_alpha_curve(&[1.0, 1.0, 1.0], 1, &grid).unwrap();
    let row = curve.iter().find(|p| p.j_l == 1.0).unwrap();
    assert!((row.alpha_star - 0.7392354528488408).abs() < 1e-15);
    assert!(curve.windows(2).all(|w| w[0].alpha_star < w[1].alpha_star));
}

#[test]
fn unclassified_models_are_rejected() {
    let m = DisorderModel::new(vec![BondLaw::bernoulli(1.0, 0.2).unwrap(), BondLaw::bernoulli(1.0, 0.9).unwrap()]).unwrap();
    assert_eq!(check_first_inequality(&m, 1, &CheckOptions::default()), Err(Error::Unclassified));
}

#[test]
fn zero_bond_gives_zero_verdict() {
    let m = DisorderModel::new(vec![
        BondLaw::shifted_symmetric(0.0, 0.0).unwrap(),
        BondLaw::shifted_symmetric(1.0, 0.5).unwrap(),
        BondLaw::shifted_symmetric(1.0, 0.5).unwrap(),
    ])
    .unwrap();
    let v = check_first_inequality(&m, 1, &CheckOptions::default()).unwrap();
    assert_eq!(v.verdict, Sign::Zero);
    assert_eq!(v.expected, Some(Sign::Positive));
    assert!(!v.is_violation());
}

#[test]
fn free_chain_pairs_are_zero() {
    let m = DisorderModel::uniform(4, BondLaw::gaussian(0.1, 1.0).unwrap()).unwrap();
    let opts = CheckOptions {
        boundary: Boundary::Free,
        ..CheckOptions::default()
    };
    let v = check_second_inequality(&m, 1, 4, &opts).unwrap();
    assert_eq!((v.value, v.verdict, v.expected), (0.0, Sign::Zero, Some(Sign::Zero)));
}

#[test]
fn ferromagnet_has_positive_pairs() {
    let m = DisorderModel::uniform(4, BondLaw::shifted_symmetric(2.0, 1.0).unwrap()).unwrap();
    assert!(!second_inequality_hypotheses(&m).symmetric_bond);
    let v = check_second_inequality(&m, 1, 3, &CheckOptions::default()).unwrap();
    assert_eq!((v.verdict, v.expected), (Sign::Positive, Some(Sign::Positive)));
}

#[test]
fn sampled_verdict_for_symmetric_gaussians() {
    let m = DisorderModel::uniform(4, BondLaw::gaussian(0.0, 1.0).unwrap()).unwrap();
    let v = check_second_inequality(&m, 1, 2, &CheckOptions::default()).unwrap();
    assert!(v.std_error > 0.0);
    assert_eq!(v.verdict, Sign::Negative, "{v:?}");
}

#[test]
fn scan_sign_follows_g() {
    let mags = [0.8, 1.4, 0.6, 1.1];
    let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    for row in alpha_scan(&mags, 1, 3, &grid, 1e-12).unwrap() {
        let g_sign = Sign::classify(row.g, 1e-12 * g_slope(&mags).unwrap());
        assert_eq!(row.verdict, g_sign, "alpha {}", row.alpha);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn average_has_sign_of_g(mags in prop::collection::vec(0.2f64..2.5, 3..=6), alpha in 0.0f64..=1.0) {
        let g = g_function(alpha, &mags).unwrap();
        let (avg, scale) = enumerated_truncated_average(&mags, alpha, 1, 2, false).unwrap();
        prop_assume!(g.abs() > 1e-9 * g_slope(&mags).unwrap());
        prop_assert_eq!(avg > 0.0, g > 0.0, "avg {} scale {} g {}", avg, scale, g);
    }

    #[test]
    fn closed_form_and_enumerated_averages_agree(mags in prop::collection::vec(0.2f64..2.5, 3..=6), alpha in 0.0f64..=1.0) {
        let (a, _) = enumerated_truncated_average(&mags, alpha, 1, 3, false).unwrap();
        let (b, _) = enumerated_truncated_average(&mags, alpha, 1, 3, true).unwrap();
        prop_assert!((a - b).abs() <= 1e-11 * 1f64.max(a.abs()));
    }
}
