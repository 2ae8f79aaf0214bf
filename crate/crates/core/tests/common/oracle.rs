//! Slow, direct reference implementations used to cross-check the library.
//! Each one follows the textbook definition and shares no code with the
//! crate under test.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use counterfact::{ColumnType, Dataset};
use nalgebra::{DMatrix, DVector};

/// Bhattacharyya form of the Hellinger distance.
pub fn hellinger(p: &[f64], q: &[f64]) -> f64 {
    let mut bc = 0.0;
    for i in 0..p.len() {
        bc += (p[i] * q[i]).sqrt();
    }
    (1.0 - bc).max(0.0).sqrt()
}

/// Euclidean form: `||sqrt(p) - sqrt(q)|| / sqrt(2)`.
pub fn hellinger_euclidean(p: &[f64], q: &[f64]) -> f64 {
    let v: Vec<f64> = p.iter().zip(q).map(|(a, b)| a.sqrt() - b.sqrt()).collect();
    (v.iter().map(|d| d * d).sum::<f64>() / 2.0).sqrt()
}

/// Evaluates both empirical CDFs at every observed value.
pub fn ks(x: &[f64], y: &[f64]) -> f64 {
    let ecdf = |s: &[f64], t: f64| s.iter().filter(|&&v| v <= t).count() as f64 / s.len() as f64;
    x.iter()
        .chain(y)
        .map(|&t| (ecdf(x, t) - ecdf(y, t)).abs())
        .fold(0.0, f64::max)
}

/// Raw-moment Pearson correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let syy: f64 = y.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let vx = n * sxx - sx * sx;
    let vy = n * syy - sy * sy;
    let spread = |v: &[f64]| {
        let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    };
    if spread(x) == 0.0 || spread(y) == 0.0 {
        return 0.0;
    }
    (n * sxy - sx * sy) / (vx.sqrt() * vy.sqrt())
}

/// R² of an explicit least-squares fit of `y` on an intercept plus dummy
/// columns for every observed group but the first.
pub fn regression_r2(groups: &[u32], y: &[f64]) -> f64 {
    let levels: Vec<u32> = groups.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let n = y.len();
    let mean = y.iter().sum::<f64>() / n as f64;
    let sst: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    if sst == 0.0 {
        return 0.0;
    }
    let x = DMatrix::from_fn(n, levels.len(), |r, c| {
        if c == 0 {
            1.0
        } else {
            f64::from(u8::from(groups[r] == levels[c]))
        }
    });
    let yv = DVector::from_column_slice(y);
    let xt = x.transpose();
    let beta = (&xt * &x).lu().solve(&(&xt * &yv)).expect("full-rank design");
    let resid = yv - x * beta;
    1.0 - resid.norm_squared() / sst
}

/// Chi-squared based Cramér's V over observed levels.
pub fn cramers_v(a: &[u32], b: &[u32]) -> f64 {
    let mut table: BTreeMap<(u32, u32), f64> = BTreeMap::new();
    let mut ra: BTreeMap<u32, f64> = BTreeMap::new();
    let mut cb: BTreeMap<u32, f64> = BTreeMap::new();
    for (&i, &j) in a.iter().zip(b) {
        *table.entry((i, j)).or_default() += 1.0;
        *ra.entry(i).or_default() += 1.0;
        *cb.entry(j).or_default() += 1.0;
    }
    let k = ra.len().min(cb.len());
    if k < 2 {
        return 0.0;
    }
    let n = a.len() as f64;
    let mut chi2 = 0.0;
    for (&i, &ni) in &ra {
        for (&j, &nj) in &cb {
            let e = ni * nj / n;
            let o = table.get(&(i, j)).copied().unwrap_or(0.0);
            chi2 += (o - e) * (o - e) / e;
        }
    }
    (chi2 / (n * (k as f64 - 1.0))).sqrt()
}

/// Full-dataset `(min, max)` of a numerical column, read from raw cells.
pub fn raw_range(ds: &Dataset, feature: &str) -> (f64, f64) {
    let col = ds.column(feature).unwrap();
    (0..ds.n_rows())
        .filter_map(|r| col.raw(r).map(|s| s.trim().parse::<f64>().unwrap()))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// Distance between two rows computed straight from the raw cells.
pub fn row_distance(ds: &Dataset, a: usize, b: usize, features: &[String]) -> Option<f64> {
    let ranges: Vec<(f64, f64)> = features.iter().map(|f| raw_range_or_unit(ds, f)).collect();
    row_distance_with(ds, a, b, features, &ranges)
}

fn raw_range_or_unit(ds: &Dataset, feature: &str) -> (f64, f64) {
    if ds.column(feature).unwrap().kind() == ColumnType::Numerical {
        raw_range(ds, feature)
    } else {
        (0.0, 1.0)
    }
}

fn row_distance_with(
    ds: &Dataset,
    a: usize,
    b: usize,
    features: &[String],
    ranges: &[(f64, f64)],
) -> Option<f64> {
    let mut sum = 0.0;
    let mut used = 0;
    for (f, &(lo, hi)) in features.iter().zip(ranges) {
        let col = ds.column(f).unwrap();
        let (Some(x), Some(y)) = (col.raw(a), col.raw(b)) else {
            continue;
        };
        let gap = if col.kind() == ColumnType::Numerical {
            let (x, y) = (x.trim().parse::<f64>().unwrap(), y.trim().parse::<f64>().unwrap());
            if hi > lo {
                (x - y) / (hi - lo)
            } else {
                0.0
            }
        } else if x == y {
            0.0
        } else {
            1.0
        };
        sum += gap * gap;
        used += 1;
    }
    (used > 0).then(|| (sum / used as f64).sqrt())
}

pub struct ReferencePartition {
    pub cf: BTreeSet<usize>,
    pub ex: BTreeSet<usize>,
    pub distance: BTreeMap<usize, f64>,
}

/// Ranks every non-included row by mean raw-cell distance to all of
/// `in_rows` and takes the closest `ceil(fraction * m)`.
pub fn reference_partition(
    ds: &Dataset,
    in_rows: &[usize],
    features: &[String],
    fraction: f64,
) -> ReferencePartition {
    let included: BTreeSet<usize> = in_rows.iter().copied().collect();
    let ranges: Vec<(f64, f64)> = features.iter().map(|f| raw_range_or_unit(ds, f)).collect();
    let mut scored: Vec<(f64, usize)> = Vec::new();
    for row in (0..ds.n_rows()).filter(|r| !included.contains(r)) {
        let ds_to_in: Vec<f64> = in_rows
            .iter()
            .filter_map(|&t| row_distance_with(ds, row, t, features, &ranges))
            .collect();
        let d = if ds_to_in.is_empty() {
            1.0
        } else {
            ds_to_in.iter().sum::<f64>() / ds_to_in.len() as f64
        };
        scored.push((d, row));
    }
    scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    let take = ((fraction * scored.len() as f64) - 1e-9).ceil().max(0.0) as usize;
    ReferencePartition {
        cf: scored[..take].iter().map(|s| s.1).collect(),
        ex: scored[take..].iter().map(|s| s.1).collect(),
        distance: scored.iter().map(|&(d, r)| (r, d)).collect(),
    }
}
