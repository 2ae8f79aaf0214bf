//! Feature-to-outcome association measures.
//!
//! The measure follows the column types. Two numerical columns use
//! Pearson's r and two categorical ones use Cramér's V; a mixed pair uses
//! the R² of a one-hot regression. A constant column yields 0.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AssociationMethod {
    Pearson,
    RegressionR2,
    CramersV,
}

impl AssociationMethod {
    pub fn for_types(feature_categorical: bool, outcome_categorical: bool) -> Self {
        match (feature_categorical, outcome_categorical) {
            (false, false) => AssociationMethod::Pearson,
            (true, true) => AssociationMethod::CramersV,
            _ => AssociationMethod::RegressionR2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssociationRecord {
    pub feature: String,
    pub method: AssociationMethod,
    pub value: f64,
    /// Rows with both cells present.
    pub rows: usize,
}

fn check_pair(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    if left < 2 {
        return Err(Error::TooFewRows(left));
    }
    Ok(())
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x.len(), y.len())?;
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(0.0);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// R² of the least-squares fit of `y` on one-hot indicators of `groups`
/// (with intercept). The fitted values are the group means, so this is the
/// between-group share of the total sum of squares.
pub fn regression_r2(groups: &[u32], y: &[f64]) -> Result<f64> {
    check_pair(groups.len(), y.len())?;
    let k = groups.iter().max().map_or(0, |&g| g as usize + 1);
    let mut sums = vec![0.0; k];
    let mut counts = vec![0usize; k];
    for (&g, &v) in groups.iter().zip(y) {
        sums[g as usize] += v;
        counts[g as usize] += 1;
    }
    let grand = mean(y);
    let total: f64 = y.iter().map(|v| (v - grand).powi(2)).sum();
    if total == 0.0 {
        return Ok(0.0);
    }
    let residual: f64 = groups
        .iter()
        .zip(y)
        .map(|(&g, &v)| (v - sums[g as usize] / counts[g as usize] as f64).powi(2))
        .sum();
    Ok((1.0 - residual / total).clamp(0.0, 1.0))
}

/// Cramér's V `sqrt(chi2 / (N * min(r - 1, c - 1)))` over the levels that
/// actually occur, without continuity correction.
pub fn cramers_v(a: &[u32], b: &[u32]) -> Result<f64> {
    check_pair(a.len(), b.len())?;
    let compact = |codes: &[u32]| -> (Vec<usize>, usize) {
        let mut levels: Vec<u32> = codes.to_vec();
        levels.sort_unstable();
        levels.dedup();
        let idx = codes
            .iter()
            .map(|c| levels.binary_search(c).expect("level present"))
            .collect();
        (idx, levels.len())
    };
    let (ra, r) = compact(a);
    let (cb, c) = compact(b);
    let k = r.min(c);
    if k < 2 {
        return Ok(0.0);
    }
    let mut table = vec![0usize; r * c];
    for (&i, &j) in ra.iter().zip(&cb) {
        table[i * c + j] += 1;
    }
    let n = a.len() as f64;
    let row_tot: Vec<f64> = (0..r)
        .map(|i| table[i * c..(i + 1) * c].iter().sum::<usize>() as f64)
        .collect();
    let col_tot: Vec<f64> = (0..c)
        .map(|j| (0..r).map(|i| table[i * c + j]).sum::<usize>() as f64)
        .collect();
    let mut chi2 = 0.0;
    for i in 0..r {
        for j in 0..c {
            let expected = row_tot[i] * col_tot[j] / n;
            let diff = table[i * c + j] as f64 - expected;
            chi2 += diff * diff / expected;
        }
    }
    Ok((chi2 / (n * (k - 1) as f64)).sqrt().clamp(0.0, 1.0))
}

/// Association between `feature` and `outcome` over the rows of `subset`
/// where both cells are present.
pub fn association(
    ds: &Dataset,
    feature: &str,
    outcome: &str,
    subset: &[usize],
) -> Result<AssociationRecord> {
    let f = ds.column(feature)?;
    let o = ds.column(outcome)?;
    ds.check_rows(subset)?;
    let rows: Vec<usize> = subset
        .iter()
        .copied()
        .filter(|&r| !f.cell(r).is_missing() && !o.cell(r).is_missing())
        .collect();
    if rows.len() < 2 {
        return Err(Error::TooFewRows(rows.len()));
    }
    let codes = |c: &crate::dataset::Column| -> Vec<u32> {
        rows.iter().map(|&r| c.codes()[r].expect("present")).collect()
    };
    let numbers = |c: &crate::dataset::Column| -> Vec<f64> {
        rows.iter()
            .map(|&r| c.numbers().expect("numerical")[r].expect("present"))
            .collect()
    };
    let method = AssociationMethod::for_types(f.kind().is_categorical(), o.kind().is_categorical());
    let value = match method {
        AssociationMethod::Pearson => pearson(&numbers(f), &numbers(o))?,
        AssociationMethod::CramersV => cramers_v(&codes(f), &codes(o))?,
        AssociationMethod::RegressionR2 if f.kind().is_categorical() => {
            regression_r2(&codes(f), &numbers(o))?
        }
        AssociationMethod::RegressionR2 => regression_r2(&codes(o), &numbers(f))?,
    };
    Ok(AssociationRecord {
        feature: feature.to_owned(),
        method,
        value,
        rows: rows.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SortOrder {
    Asc,
    Desc,
}

/// Stable sort by value, or by absolute value when `by_magnitude`.
pub fn sort_associations(records: &mut [AssociationRecord], order: SortOrder, by_magnitude: bool) {
    let key = |r: &AssociationRecord| if by_magnitude { r.value.abs() } else { r.value };
    records.sort_by(|a, b| {
        let ord: Ordering = key(a).total_cmp(&key(b));
        match order {
            SortOrder::Asc => ord,
            SortOrder::Desc => ord.reverse(),
        }
    });
}
