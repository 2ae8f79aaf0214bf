use serde::{Deserialize, Serialize};

use crate::dataset::{column_distribution, ColumnType, Dataset, DistributionSummary};
use crate::error::{Error, Result};
use crate::partition::SubsetKind;
use crate::stats::divergence::{hellinger, ks_statistic};

/// Upper bound (inclusive) of a weak IN/CF difference.
pub const WEAK_MAX: f64 = 0.40;
/// Lower bound (inclusive) of a strong IN/CF difference.
pub const STRONG_MIN: f64 = 0.60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strength {
    Weak,
    Moderate,
    Strong,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DivergenceMeasure {
    Hellinger,
    KolmogorovSmirnov,
}

pub fn classify_strength(d: f64) -> Result<Strength> {
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::OutOfRange(d));
    }
    Ok(if d <= WEAK_MAX {
        Strength::Weak
    } else if d < STRONG_MIN {
        Strength::Moderate
    } else {
        Strength::Strong
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterStrengthReport {
    pub d: f64,
    pub measure: DivergenceMeasure,
    pub strength: Strength,
    pub in_size: usize,
    pub cf_size: usize,
    pub ex_size: usize,
}

/// Outcome summary of one subset. Numerical outcomes also carry the raw
/// values (row order) for the KS statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetOutcome {
    pub subset: SubsetKind,
    pub size: usize,
    pub summary: DistributionSummary,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sample: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    pub outcome: String,
    pub kind: ColumnType,
    pub subsets: Vec<SubsetOutcome>,
}

impl OutcomeDistribution {
    /// Summarizes the outcome over each given subset. Empty subsets are
    /// skipped.
    pub fn build(ds: &Dataset, outcome: &str, subsets: &[(SubsetKind, &[usize])]) -> Result<Self> {
        let col = ds.column(outcome)?;
        let numbers = (!col.kind().is_categorical()).then(|| col.numbers().expect("numerical"));
        let subsets = subsets
            .iter()
            .filter(|(_, rows)| !rows.is_empty())
            .map(|&(subset, rows)| {
                Ok(SubsetOutcome {
                    subset,
                    size: rows.len(),
                    summary: column_distribution(ds, outcome, Some(rows))?,
                    sample: numbers.map(|n| rows.iter().filter_map(|&r| n[r]).collect()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(OutcomeDistribution {
            outcome: outcome.to_owned(),
            kind: col.kind(),
            subsets,
        })
    }

    pub fn get(&self, subset: SubsetKind) -> Option<&SubsetOutcome> {
        self.subsets.iter().find(|s| s.subset == subset)
    }
}

/// IN/CF outcome difference: Hellinger distance for a categorical outcome,
/// the KS statistic for a numerical one.
pub fn in_cf_difference(dist: &OutcomeDistribution) -> Result<(f64, DivergenceMeasure)> {
    let side = |kind| {
        dist.get(kind)
            .filter(|s| s.summary.present() > 0)
            .ok_or(Error::EmptySubset)
    };
    let (inc, cf) = (side(SubsetKind::In)?, side(SubsetKind::Cf)?);
    if dist.kind.is_categorical() {
        let d = hellinger(&inc.summary.fractions(), &cf.summary.fractions())?;
        Ok((d, DivergenceMeasure::Hellinger))
    } else {
        let empty = Vec::new();
        let d = ks_statistic(
            inc.sample.as_ref().unwrap_or(&empty),
            cf.sample.as_ref().unwrap_or(&empty),
        )?;
        Ok((d, DivergenceMeasure::KolmogorovSmirnov))
    }
}

pub fn strength_report(
    dist: &OutcomeDistribution,
    in_size: usize,
    cf_size: usize,
    ex_size: usize,
) -> Result<FilterStrengthReport> {
    let (d, measure) = in_cf_difference(dist)?;
    Ok(FilterStrengthReport {
        d,
        measure,
        strength: classify_strength(d)?,
        in_size,
        cf_size,
        ex_size,
    })
}
