mod common;

use common::gen;
use counterfact::{column_distribution, Dataset, DistributionSummary, FilterConstraint};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn csv_round_trip_preserves_everything(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=60);
        let k = rng.random_range(1..=6);
        let g = gen::dataset(&mut rng, n, k, true);
        let text = g.dataset.to_csv();
        let reread = Dataset::load_csv_with(text.as_bytes(), "generated", &g.options).unwrap();
        prop_assert_eq!(reread, g.dataset);
    }

    #[test]
    fn distributions_account_for_every_row(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=80);
        let g = gen::dataset(&mut rng, n, 4, true);
        let ds = &g.dataset;
        let subset: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
        for name in ds.column_names() {
            let full = column_distribution(ds, name, None).unwrap();
            let missing = match &full {
                DistributionSummary::Categorical { missing, .. } => *missing,
                DistributionSummary::Numerical { missing, .. } => *missing,
            };
            prop_assert_eq!(full.present() + missing, n);
            if full.present() > 0 {
                let total: f64 = full.fractions().iter().sum();
                prop_assert!((total - 1.0).abs() < 1e-9);
            }
            if !subset.is_empty() {
                let part = column_distribution(ds, name, Some(&subset)).unwrap();
                prop_assert!(part.present() <= subset.len());
            }
        }
    }

    #[test]
    fn constraint_text_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gen::dataset(&mut rng, 30, 5, false);
        let c = gen::constraint(&mut rng, &g.dataset);
        let text = c.to_string();
        prop_assert_eq!(text.parse::<FilterConstraint>().unwrap(), c);
    }
}

#[test]
fn mixture_of_two_subsets_recombines() {
    // the full-column distribution is the size-weighted mix of any split
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = gen::dataset(&mut rng, 120, 3, false);
    let ds = &g.dataset;
    let left: Vec<usize> = (0..60).collect();
    let right: Vec<usize> = (60..120).collect();
    for name in ds.column_names() {
        let full = column_distribution(ds, name, None).unwrap().fractions();
        let a = column_distribution(ds, name, Some(&left)).unwrap();
        let b = column_distribution(ds, name, Some(&right)).unwrap();
        if let (DistributionSummary::Numerical { .. }, DistributionSummary::Numerical { .. }) = (&a, &b) {
            for (i, f) in full.iter().enumerate() {
                let mixed = (a.fractions()[i] * a.present() as f64 + b.fractions()[i] * b.present() as f64)
                    / (a.present() + b.present()) as f64;
                assert!((f - mixed).abs() < 1e-12);
            }
        }
    }
}
