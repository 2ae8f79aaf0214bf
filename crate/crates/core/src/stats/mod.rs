//! Outcome divergence, strength classes and association measures.

pub mod association;
pub mod divergence;
pub mod strength;

pub use association::{
    association, cramers_v, pearson, regression_r2, sort_associations, AssociationMethod,
    AssociationRecord, SortOrder,
};
pub use divergence::{hellinger, hellinger_labeled, ks_statistic};
pub use strength::{
    classify_strength, in_cf_difference, strength_report, DivergenceMeasure,
    FilterStrengthReport, OutcomeDistribution, Strength, SubsetOutcome, STRONG_MIN, WEAK_MAX,
};
