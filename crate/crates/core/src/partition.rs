//! Splits the rows that fail a filter into a counterfactual subset (rows
//! most similar to the included rows) and an excluded subset (the rest).
//!
//! Similarity is the mean normalized Euclidean distance from a non-matching
//! row to the included rows, over the features left after removing the
//! filtered columns and the outcome. Numerical features are min-max scaled
//! over the whole dataset; categorical features differ by 0 (equal) or 1.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{ColumnType, Dataset};
use crate::error::{Error, Result};
use crate::filter::{included_mask, FilterStack};

fn default_true() -> bool {
    true
}

fn default_cf_fraction() -> f64 {
    0.5
}

fn default_cap() -> Option<usize> {
    Some(1000)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityConfig {
    /// Candidate similarity features; `None` means every column.
    #[serde(default)]
    pub features: Option<Vec<String>>,
    /// Drop filter-constrained columns from the candidates.
    #[serde(default = "default_true")]
    pub exclude_filtered: bool,
    /// Drop the outcome column from the candidates.
    #[serde(default = "default_true")]
    pub exclude_outcome: bool,
    /// Share of the non-matching rows assigned to the counterfactual subset.
    #[serde(default = "default_cf_fraction")]
    pub cf_fraction: f64,
    /// Above this many included rows, distances are averaged over a seeded
    /// uniform sample of that size. `None` disables sampling.
    #[serde(default = "default_cap")]
    pub in_sample_cap: Option<usize>,
    #[serde(default)]
    pub seed: u64,
}

impl Default for SimilarityConfig {
    fn default() -> Self {
        SimilarityConfig {
            features: None,
            exclude_filtered: true,
            exclude_outcome: true,
            cf_fraction: default_cf_fraction(),
            in_sample_cap: default_cap(),
            seed: 0,
        }
    }
}

impl SimilarityConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cf_fraction > 0.0 && self.cf_fraction < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "cf_fraction must lie strictly between 0 and 1, got {}",
                self.cf_fraction
            )));
        }
        if self.in_sample_cap == Some(0) {
            return Err(Error::InvalidConfig("in_sample_cap must be positive".into()));
        }
        Ok(())
    }

    /// Resolves the similarity feature names in dataset column order.
    pub fn resolve_features(
        &self,
        ds: &Dataset,
        stack: &FilterStack,
        outcome: Option<&str>,
    ) -> Result<Vec<String>> {
        if let Some(explicit) = &self.features {
            for name in explicit {
                ds.column(name)?;
            }
        }
        let features: Vec<String> = ds
            .column_names()
            .filter(|name| {
                self.features
                    .as_ref()
                    .is_none_or(|f| f.iter().any(|x| x == name))
            })
            .filter(|name| !(self.exclude_filtered && stack.contains_column(name)))
            .filter(|name| !(self.exclude_outcome && outcome == Some(*name)))
            .map(str::to_owned)
            .collect();
        if features.is_empty() {
            return Err(Error::NoUsableFeatures);
        }
        Ok(features)
    }

    /// Size of the counterfactual subset for `m` non-matching rows:
    /// `ceil(cf_fraction * m)`.
    pub fn cf_size(&self, m: usize) -> usize {
        // the epsilon keeps exact products like 0.3 * 10 from rounding up
        let raw = (self.cf_fraction * m as f64 - 1e-9).ceil();
        (raw.max(0.0) as usize).min(m)
    }
}

enum FeatureValues<'a> {
    /// Min-max scaled to [0, 1].
    Scaled(Vec<Option<f64>>),
    Codes(&'a [Option<u32>]),
}

/// Precomputed per-feature values for distance evaluation.
pub struct DistanceSpace<'a> {
    features: Vec<FeatureValues<'a>>,
}

impl<'a> DistanceSpace<'a> {
    pub fn new<S: AsRef<str>>(ds: &'a Dataset, features: &[S]) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::NoUsableFeatures);
        }
        let features = features
            .iter()
            .map(|name| {
                let col = ds.column(name.as_ref())?;
                Ok(match col.kind() {
                    ColumnType::Numerical => {
                        let (lo, hi) = col.range().expect("numerical columns have a range");
                        let span = hi - lo;
                        let numbers = col.numbers().expect("numerical columns parse");
                        FeatureValues::Scaled(
                            numbers
                                .iter()
                                .map(|v| v.map(|v| if span > 0.0 { (v - lo) / span } else { 0.0 }))
                                .collect(),
                        )
                    }
                    _ => FeatureValues::Codes(col.codes()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DistanceSpace { features })
    }

    /// `sqrt(sum of squared per-feature gaps / usable features)`. Features
    /// missing in either row are skipped.
    pub fn distance(&self, a: usize, b: usize) -> Result<f64> {
        let mut sum = 0.0;
        let mut usable = 0usize;
        for feature in &self.features {
            let gap = match feature {
                FeatureValues::Scaled(v) => match (v[a], v[b]) {
                    (Some(x), Some(y)) => x - y,
                    _ => continue,
                },
                FeatureValues::Codes(c) => match (c[a], c[b]) {
                    (Some(x), Some(y)) => f64::from(u8::from(x != y)),
                    _ => continue,
                },
            };
            sum += gap * gap;
            usable += 1;
        }
        if usable == 0 {
            return Err(Error::NoUsableFeatures);
        }
        Ok((sum / usable as f64).sqrt().min(1.0))
    }

    /// Mean distance from `row` to each of `targets`. Pairs with no usable
    /// feature are left out of the mean.
    pub fn mean_distance(&self, row: usize, targets: &[usize]) -> Result<f64> {
        if targets.is_empty() {
            return Err(Error::EmptyIncluded);
        }
        let (sum, count) = targets
            .iter()
            .filter_map(|&t| self.distance(row, t).ok())
            .fold((0.0, 0usize), |(s, n), d| (s + d, n + 1));
        if count == 0 {
            return Err(Error::NoUsableFeatures);
        }
        Ok(sum / count as f64)
    }
}

pub fn normalized_distance<S: AsRef<str>>(
    ds: &Dataset,
    a: usize,
    b: usize,
    features: &[S],
) -> Result<f64> {
    ds.check_rows(&[a, b])?;
    DistanceSpace::new(ds, features)?.distance(a, b)
}

/// Mean normalized distance from row `b` to the included rows, using the
/// configured sample cap and seed when `in_rows` is large.
pub fn mean_distance_to_included<S: AsRef<str>>(
    ds: &Dataset,
    b: usize,
    in_rows: &[usize],
    features: &[S],
    cfg: &SimilarityConfig,
) -> Result<f64> {
    if in_rows.is_empty() {
        return Err(Error::EmptyIncluded);
    }
    ds.check_rows(in_rows)?;
    ds.check_rows(&[b])?;
    let space = DistanceSpace::new(ds, features)?;
    space.mean_distance(b, &reference_rows(in_rows, cfg))
}

/// The included rows distances are measured against: all of them, or a
/// seeded uniform sample when there are more than the cap.
pub fn reference_rows(in_rows: &[usize], cfg: &SimilarityConfig) -> Vec<usize> {
    match cfg.in_sample_cap {
        Some(cap) if in_rows.len() > cap => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut picked: Vec<usize> = rand::seq::index::sample(&mut rng, in_rows.len(), cap)
                .into_iter()
                .map(|i| in_rows[i])
                .collect();
            picked.sort_unstable();
            picked
        }
        _ => in_rows.to_vec(),
    }
}

/// The row subsets a filter produces. `ExControl` is the undivided
/// complement shown when the counterfactual view is off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SubsetKind {
    #[serde(rename = "IN")]
    In,
    #[serde(rename = "CF")]
    Cf,
    #[serde(rename = "EX")]
    Ex,
    #[serde(rename = "EX_control")]
    ExControl,
}

impl SubsetKind {
    pub fn label(self) -> &'static str {
        match self {
            SubsetKind::In => "IN",
            SubsetKind::Cf => "CF",
            SubsetKind::Ex => "EX",
            SubsetKind::ExControl => "EX_control",
        }
    }
}

impl std::fmt::Display for SubsetKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetPartition {
    pub in_rows: Vec<usize>,
    pub cf_rows: Vec<usize>,
    pub ex_rows: Vec<usize>,
    /// Mean distance to the included rows, for every non-matching row.
    pub mean_distance: BTreeMap<usize, f64>,
    /// Resolved similarity features.
    pub features: Vec<String>,
    pub config: SimilarityConfig,
}

impl SubsetPartition {
    pub fn n_rows(&self) -> usize {
        self.in_rows.len() + self.cf_rows.len() + self.ex_rows.len()
    }

    /// Union of the counterfactual and excluded rows, ascending.
    pub fn complement(&self) -> Vec<usize> {
        let mut rows: Vec<usize> = self.cf_rows.iter().chain(&self.ex_rows).copied().collect();
        rows.sort_unstable();
        rows
    }
}

/// Splits the rows around the filter stack.
///
/// The counterfactual subset takes the `ceil(cf_fraction * m)` non-matching
/// rows with the smallest mean distance to the included rows; ties go to the
/// lower row index. A non-matching row that shares no usable feature with
/// any included row is treated as maximally distant.
pub fn partition(
    ds: &Dataset,
    stack: &FilterStack,
    cfg: &SimilarityConfig,
    outcome: Option<&str>,
) -> Result<SubsetPartition> {
    cfg.validate()?;
    let in_rows = included_mask(ds, stack)?;
    if in_rows.is_empty() {
        return Err(Error::EmptyIncluded);
    }
    if in_rows.len() == ds.n_rows() {
        return Err(Error::EmptyComplement);
    }
    let features = cfg.resolve_features(ds, stack, outcome)?;
    let space = DistanceSpace::new(ds, &features)?;
    let reference = reference_rows(&in_rows, cfg);

    let mut is_in = vec![false; ds.n_rows()];
    for &r in &in_rows {
        is_in[r] = true;
    }
    let others: Vec<usize> = (0..ds.n_rows()).filter(|&r| !is_in[r]).collect();

    let distances: Vec<f64> = others
        .par_iter()
        .map(|&row| match space.mean_distance(row, &reference) {
            Ok(d) => Ok(d),
            Err(Error::NoUsableFeatures) => Ok(1.0),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;

    let mut ranked: Vec<(usize, f64)> = others.iter().copied().zip(distances).collect();
    ranked.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let cf_count = cfg.cf_size(ranked.len());
    let mut cf_rows: Vec<usize> = ranked[..cf_count].iter().map(|p| p.0).collect();
    let mut ex_rows: Vec<usize> = ranked[cf_count..].iter().map(|p| p.0).collect();
    cf_rows.sort_unstable();
    ex_rows.sort_unstable();

    Ok(SubsetPartition {
        in_rows,
        cf_rows,
        ex_rows,
        mean_distance: ranked.into_iter().collect(),
        features,
        config: cfg.clone(),
    })
}
