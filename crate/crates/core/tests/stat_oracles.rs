mod common;

use common::oracle;
use counterfact::stats::{cramers_v, hellinger, ks_statistic, pearson, regression_r2};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn distribution(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, len).prop_map(|w| {
        let total: f64 = w.iter().sum();
        if total == 0.0 {
            let mut v = vec![0.0; w.len()];
            v[0] = 1.0;
            v
        } else {
            w.iter().map(|x| x / total).collect()
        }
    })
}

fn distribution_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..=50).prop_flat_map(|n| (distribution(n), distribution(n)))
}

fn sample() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![(-100.0f64..100.0), (0i32..5).prop_map(f64::from)], 1..=50)
}

fn paired(max_code: u32) -> impl Strategy<Value = (Vec<u32>, Vec<f64>)> {
    (2usize..=50).prop_flat_map(move |n| {
        (
            prop::collection::vec(0..max_code, n),
            prop::collection::vec(-20.0f64..20.0, n),
        )
    })
}

fn codes_pair() -> impl Strategy<Value = (Vec<u32>, Vec<u32>)> {
    (2usize..=50, 1u32..6, 1u32..6).prop_flat_map(|(n, r, c)| {
        (prop::collection::vec(0..r, n), prop::collection::vec(0..c, n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn hellinger_matches_both_closed_forms((p, q) in distribution_pair()) {
        let h = hellinger(&p, &q).unwrap();
        prop_assert!((h - oracle::hellinger_euclidean(&p, &q)).abs() < TOL);
        let bc = oracle::hellinger(&p, &q);
        // the Bhattacharyya form loses precision when h is tiny
        if h > 1e-4 {
            prop_assert!((h - bc).abs() < TOL);
        }
    }

    #[test]
    fn hellinger_is_a_bounded_symmetric_metric((p, q) in distribution_pair()) {
        let pq = hellinger(&p, &q).unwrap();
        prop_assert!((0.0..=1.0).contains(&pq));
        prop_assert_eq!(pq, hellinger(&q, &p).unwrap());
        prop_assert_eq!(hellinger(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn ks_matches_ecdf_scan(x in sample(), y in sample()) {
        let d = ks_statistic(&x, &y).unwrap();
        prop_assert!((d - oracle::ks(&x, &y)).abs() < TOL);
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert_eq!(d, ks_statistic(&y, &x).unwrap());
    }

    #[test]
    fn ks_ignores_monotone_transforms(x in sample(), y in sample()) {
        let f = |v: &f64| (v / 10.0).exp() * 3.0 - 1.0;
        let tx: Vec<f64> = x.iter().map(f).collect();
        let ty: Vec<f64> = y.iter().map(f).collect();
        let a = ks_statistic(&x, &y).unwrap();
        let b = ks_statistic(&tx, &ty).unwrap();
        prop_assert!((a - b).abs() < TOL);
    }

    #[test]
    fn pearson_matches_raw_moments((x, y) in (2usize..=50).prop_flat_map(|n| (
        prop::collection::vec(-100.0f64..100.0, n),
        prop::collection::vec(-100.0f64..100.0, n),
    ))) {
        let r = pearson(&x, &y).unwrap();
        prop_assert!((r - oracle::pearson(&x, &y)).abs() < TOL);
        prop_assert!((-1.0..=1.0).contains(&r));
        let scaled: Vec<f64> = x.iter().map(|v| 2.5 * v + 7.0).collect();
        prop_assert!((pearson(&scaled, &y).unwrap() - r).abs() < TOL);
        let negated: Vec<f64> = y.iter().map(|v| -v).collect();
        prop_assert!((pearson(&x, &negated).unwrap() + r).abs() < TOL);
    }

    #[test]
    fn regression_r2_matches_least_squares((groups, y) in paired(6)) {
        let r2 = regression_r2(&groups, &y).unwrap();
        prop_assert!((r2 - oracle::regression_r2(&groups, &y)).abs() < TOL);
        prop_assert!((0.0..=1.0).contains(&r2));
    }

    #[test]
    fn cramers_v_matches_chi_squared((a, b) in codes_pair()) {
        let v = cramers_v(&a, &b).unwrap();
        prop_assert!((v - oracle::cramers_v(&a, &b)).abs() < TOL);
        prop_assert!((0.0..=1.0 + TOL).contains(&v));
        prop_assert!((v - cramers_v(&b, &a).unwrap()).abs() < TOL);
    }

    #[test]
    fn cramers_v_ignores_relabelling((a, b) in codes_pair()) {
        let relabel: Vec<u32> = a.iter().map(|c| 17 - 3 * c).collect();
        prop_assert!((cramers_v(&a, &b).unwrap() - cramers_v(&relabel, &b).unwrap()).abs() < TOL);
    }
}

#[test]
fn hand_values() {
    let h = hellinger(&[0.5, 0.5], &[0.9, 0.1]).unwrap();
    assert!((h - 0.3249).abs() < 5e-5);
    let ks = ks_statistic(&[1.0, 2.0, 3.0, 4.0], &[3.0, 4.0, 5.0, 6.0]).unwrap();
    assert!((ks - 0.5).abs() < TOL);
    let r = pearson(&[1.0, 2.0, 3.0, 4.0, 5.0], &[2.0, 1.0, 4.0, 3.0, 5.0]).unwrap();
    assert!((r - 0.8).abs() < TOL);
    let a = [0, 0, 0, 0, 1, 1, 1, 1];
    let b = [0, 0, 0, 1, 1, 1, 1, 0];
    assert!((cramers_v(&a, &b).unwrap() - 0.5).abs() < TOL);
}
