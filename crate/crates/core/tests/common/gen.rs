//! Random datasets and filters for property tests.

#![allow(dead_code)]

use counterfact::{included_mask, Dataset, FilterConstraint, FilterStack, LoadOptions, TypeHint};
use rand::seq::IndexedRandom;
use rand::Rng;

pub const OUTCOME: &str = "y";

pub struct Generated {
    pub dataset: Dataset,
    pub cells: Vec<(String, Vec<Option<String>>)>,
    pub options: LoadOptions,
}

/// A dataset with `n_features` mixed features plus an outcome column `y`.
/// Numerical features are continuous and forced numerical; categorical
/// ones draw from a handful of labels. About 5% of cells are missing.
pub fn dataset<R: Rng>(rng: &mut R, n: usize, n_features: usize, missing: bool) -> Generated {
    let mut options = LoadOptions::default();
    let mut cells = Vec::with_capacity(n_features + 1);
    for f in 0..n_features {
        let name = format!("f{f}");
        let numeric = rng.random_bool(0.5);
        let levels = rng.random_range(2..=5usize);
        let values: Vec<Option<String>> = (0..n)
            .map(|r| {
                if missing && r > 0 && rng.random_bool(0.05) {
                    None
                } else if numeric {
                    Some(format!("{:.4}", rng.random_range(-50.0..50.0)))
                } else {
                    Some(["a", "b", "c", "d", "e"][rng.random_range(0..levels)].to_owned())
                }
            })
            .collect();
        if numeric {
            options = options.with_override(name.clone(), TypeHint::Numerical);
        }
        cells.push((name, values));
    }
    let numeric_outcome = rng.random_bool(0.3);
    let outcome: Vec<Option<String>> = (0..n)
        .map(|_| {
            Some(if numeric_outcome {
                format!("{:.3}", rng.random_range(0.0..10.0))
            } else {
                rng.random_range(0..2u8).to_string()
            })
        })
        .collect();
    if numeric_outcome {
        options = options.with_override(OUTCOME, TypeHint::Numerical);
    }
    cells.push((OUTCOME.to_owned(), outcome));
    let dataset = Dataset::from_columns("generated", cells.clone(), &options).expect("valid dataset");
    Generated {
        dataset,
        cells,
        options,
    }
}

/// One random constraint on a non-outcome column.
pub fn constraint<R: Rng>(rng: &mut R, ds: &Dataset) -> FilterConstraint {
    let features: Vec<&str> = ds.column_names().filter(|c| *c != OUTCOME).collect();
    let name = *features.choose(rng).unwrap();
    let col = ds.column(name).unwrap();
    if col.kind().is_categorical() {
        let cats = col.categories();
        let k = rng.random_range(1..=cats.len());
        let picked: Vec<String> = cats.choose_multiple(rng, k).cloned().collect();
        FilterConstraint::categories(name, picked).unwrap()
    } else {
        let present: Vec<f64> = col.numbers().unwrap().iter().flatten().copied().collect();
        let a = *present.choose(rng).unwrap();
        let b = *present.choose(rng).unwrap();
        FilterConstraint::numeric_range(name, a.min(b), a.max(b)).unwrap()
    }
}

/// A stack of one or two constraints that leaves both IN and its
/// complement non-empty, if one is found within a few attempts.
pub fn valid_stack<R: Rng>(rng: &mut R, ds: &Dataset) -> Option<FilterStack> {
    for _ in 0..50 {
        let mut stack = FilterStack::new();
        stack.push(constraint(rng, ds));
        if rng.random_bool(0.3) {
            stack.push(constraint(rng, ds));
        }
        let in_rows = included_mask(ds, &stack).unwrap();
        if !in_rows.is_empty() && in_rows.len() < ds.n_rows() {
            return Some(stack);
        }
    }
    None
}
