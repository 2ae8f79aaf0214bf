use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-6;

fn check_distribution(p: &[f64]) -> Result<()> {
    if let Some(bad) = p.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(Error::NotADistribution(format!("invalid mass {bad}")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::NotADistribution(format!("masses sum to {total}")));
    }
    Ok(())
}

/// Hellinger distance `sqrt(1 - sum_i sqrt(p_i q_i))` between two
/// distributions over the same ordered categories.
pub fn hellinger(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    check_distribution(p)?;
    check_distribution(q)?;
    // equal to 1 - sum sqrt(p q) for normalized inputs, and exactly 0 when p == q
    let spread: f64 = p
        .iter()
        .zip(q)
        .map(|(a, b)| (a.sqrt() - b.sqrt()).powi(2))
        .sum();
    Ok((0.5 * spread).clamp(0.0, 1.0).sqrt())
}

/// Hellinger distance between labelled distributions. Labels absent from
/// one side carry probability 0 there.
pub fn hellinger_labeled(p: &BTreeMap<String, f64>, q: &BTreeMap<String, f64>) -> Result<f64> {
    let universe: BTreeSet<&String> = p.keys().chain(q.keys()).collect();
    let align = |m: &BTreeMap<String, f64>| -> Vec<f64> {
        universe
            .iter()
            .map(|k| m.get(*k).copied().unwrap_or(0.0))
            .collect()
    };
    hellinger(&align(p), &align(q))
}

/// Two-sample Kolmogorov-Smirnov statistic `sup_t |F_x(t) - F_y(t)|`,
/// evaluated exactly at every breakpoint. Samples must be free of NaN.
pub fn ks_statistic(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut xs = x.to_vec();
    let mut ys = y.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (n, m) = (xs.len() as f64, ys.len() as f64);

    let (mut i, mut j) = (0, 0);
    let mut sup: f64 = 0.0;
    while i < xs.len() && j < ys.len() {
        let t = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= t {
            i += 1;
        }
        while j < ys.len() && ys[j] <= t {
            j += 1;
        }
        sup = sup.max((i as f64 / n - j as f64 / m).abs());
    }
    Ok(sup.min(1.0))
}
