//! Counterfactual subset analysis for interactive filtering of tabular data.
//!
//! Filtering a table splits it into the rows that match (IN) and the rows
//! that do not. This crate further splits the non-matching rows into those
//! most similar to IN on the remaining features (the counterfactual subset,
//! CF) and the rest (EX), then measures how far the outcome distribution of
//! IN is from that of CF. A small IN/CF difference means the filtered
//! feature explains little on its own and other features are likely
//! confounding the picture.
//!
//! ```
//! use std::sync::Arc;
//! use counterfact::{Dataset, Mode, Session};
//!
//! let csv = "group,age,outcome\na,21,1\na,35,0\nb,22,1\nb,40,0\nb,23,1\n";
//! let ds = Arc::new(Dataset::load_csv(csv.as_bytes(), "demo").unwrap());
//! let mut session = Session::create(ds, "outcome", Mode::Counterfactual, Default::default()).unwrap();
//! let snapshot = session.push_filter("group=a".parse().unwrap()).unwrap();
//! let report = snapshot.strength.unwrap();
//! assert_eq!(report.in_size + report.cf_size + report.ex_size, 5);
//! ```

pub mod dataset;
pub mod error;
pub mod filter;
pub mod partition;
pub mod session;
pub mod stats;

pub use dataset::{
    column_distribution, infer_column_type, ColumnType, Dataset, DistributionSummary, LoadOptions,
    TypeHint,
};
pub use error::{Error, Result};
pub use filter::{included_mask, FilterConstraint, FilterStack, Predicate};
pub use partition::{
    mean_distance_to_included, normalized_distance, partition, SimilarityConfig, SubsetKind,
    SubsetPartition,
};
pub use session::{analyze, AnalysisSnapshot, Mode, Session, SessionEvent, SessionLog};
pub use stats::{classify_strength, FilterStrengthReport, Strength};

/// Serializes `value` as canonical JSON: object keys sorted, floats in
/// shortest round-trip form, no insignificant whitespace.
pub fn to_canonical_json<T: serde::Serialize>(value: &T) -> serde_json::Result<String> {
    // serde_json::Map is a BTreeMap unless `preserve_order` is enabled
    let tree = serde_json::to_value(value)?;
    serde_json::to_string(&tree)
}

/// Re-emits a JSON document in canonical form.
pub fn canonicalize_json(text: &str) -> serde_json::Result<String> {
    let tree: serde_json::Value = serde_json::from_str(text)?;
    serde_json::to_string(&tree)
}
