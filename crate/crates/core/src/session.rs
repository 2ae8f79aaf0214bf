//! Exploration state and the analysis snapshot rendered after every filter
//! change.
//!
//! Every snapshot is recomputed from scratch out of the session settings
//! and the current filter stack, so replaying a session's event log
//! reproduces its snapshots exactly.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dataset::{bin_edges, bin_index, column_distribution, Dataset, DistributionSummary, NUMERIC_BINS};
use crate::error::{Error, Result};
use crate::filter::{included_mask, FilterConstraint, FilterStack};
use crate::partition::{partition, SimilarityConfig, SubsetKind, SubsetPartition};
use crate::stats::{
    association, strength_report, AssociationMethod, FilterStrengthReport, OutcomeDistribution,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// The complement is split into CF and EX, with a filter strength report.
    Counterfactual,
    /// Only IN and the undivided complement are shown.
    Control,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "counterfactual" | "cf" => Ok(Mode::Counterfactual),
            "control" => Ok(Mode::Control),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetView {
    pub subset: SubsetKind,
    pub rows: Vec<usize>,
    /// Share of all dataset rows.
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssociationEntry {
    pub subset: SubsetKind,
    pub feature: String,
    pub method: AssociationMethod,
    /// `None` when the subset has fewer than two complete rows.
    pub value: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Feature,
    Outcome,
}

/// Data behind a feature-versus-outcome plot for one subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeatureOutcomePairing {
    /// Categorical feature and outcome: counts indexed `[feature][outcome]`.
    Contingency {
        feature_categories: Vec<String>,
        outcome_categories: Vec<String>,
        counts: Vec<Vec<usize>>,
    },
    /// One categorical side: the numerical side's values grouped by category.
    Grouped {
        categorical: Side,
        categories: Vec<String>,
        values: Vec<Vec<f64>>,
    },
    /// Both numerical: 2-D counts on the full-range bins, indexed `[x][y]`.
    Binned {
        feature_edges: Vec<f64>,
        outcome_edges: Vec<f64>,
        counts: Vec<Vec<usize>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetFeatureView {
    pub subset: SubsetKind,
    pub distribution: DistributionSummary,
    pub pairing: FeatureOutcomePairing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectedFeature {
    pub feature: String,
    pub subsets: Vec<SubsetFeatureView>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisSnapshot {
    pub n_rows: usize,
    pub outcome: String,
    pub mode: Mode,
    pub filters: Vec<FilterConstraint>,
    /// Visible subsets: IN/CF/EX, or IN/EX_control in control mode.
    pub subsets: Vec<SubsetView>,
    /// Mean distance to IN of every non-matching row (counterfactual mode).
    pub mean_distance: Option<BTreeMap<usize, f64>>,
    pub similarity_features: Option<Vec<String>>,
    pub outcome_distribution: OutcomeDistribution,
    pub strength: Option<FilterStrengthReport>,
    pub associations: Vec<AssociationEntry>,
    pub selected: Option<SelectedFeature>,
}

impl AnalysisSnapshot {
    pub fn subset(&self, kind: SubsetKind) -> Option<&SubsetView> {
        self.subsets.iter().find(|s| s.subset == kind)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Layout {
    /// No effective filter: every row is included.
    Unfiltered,
    Counterfactual(SubsetPartition),
    Control { in_rows: Vec<usize>, rest: Vec<usize> },
}

fn compute_layout(
    ds: &Dataset,
    outcome: &str,
    mode: Mode,
    cfg: &SimilarityConfig,
    stack: &FilterStack,
) -> Result<Layout> {
    if stack.is_empty() {
        return Ok(Layout::Unfiltered);
    }
    let in_rows = included_mask(ds, stack)?;
    if in_rows.is_empty() {
        return Err(Error::EmptyIncluded);
    }
    if in_rows.len() == ds.n_rows() {
        // only reachable by removing a filter; nothing left to compare against
        return Ok(Layout::Unfiltered);
    }
    match mode {
        Mode::Counterfactual => Ok(Layout::Counterfactual(partition(ds, stack, cfg, Some(outcome))?)),
        Mode::Control => {
            let mut is_in = vec![false; ds.n_rows()];
            for &r in &in_rows {
                is_in[r] = true;
            }
            let rest = (0..ds.n_rows()).filter(|&r| !is_in[r]).collect();
            Ok(Layout::Control { in_rows, rest })
        }
    }
}

fn visible_subsets(ds: &Dataset, mode: Mode, layout: &Layout) -> Vec<(SubsetKind, Vec<usize>)> {
    match (layout, mode) {
        (Layout::Unfiltered, Mode::Counterfactual) => vec![
            (SubsetKind::In, (0..ds.n_rows()).collect()),
            (SubsetKind::Cf, Vec::new()),
            (SubsetKind::Ex, Vec::new()),
        ],
        (Layout::Unfiltered, Mode::Control) => vec![
            (SubsetKind::In, (0..ds.n_rows()).collect()),
            (SubsetKind::ExControl, Vec::new()),
        ],
        (Layout::Counterfactual(p), _) => vec![
            (SubsetKind::In, p.in_rows.clone()),
            (SubsetKind::Cf, p.cf_rows.clone()),
            (SubsetKind::Ex, p.ex_rows.clone()),
        ],
        (Layout::Control { in_rows, rest }, _) => vec![
            (SubsetKind::In, in_rows.clone()),
            (SubsetKind::ExControl, rest.clone()),
        ],
    }
}

fn pairing(
    ds: &Dataset,
    feature: &str,
    outcome: &str,
    rows: &[usize],
) -> Result<FeatureOutcomePairing> {
    let f = ds.column(feature)?;
    let o = ds.column(outcome)?;
    let complete: Vec<usize> = rows
        .iter()
        .copied()
        .filter(|&r| !f.cell(r).is_missing() && !o.cell(r).is_missing())
        .collect();
    let grouped = |cat: &crate::dataset::Column, num: &crate::dataset::Column, side| {
        let mut values = vec![Vec::new(); cat.categories().len()];
        let numbers = num.numbers().expect("numerical");
        for &r in &complete {
            values[cat.codes()[r].expect("present") as usize].push(numbers[r].expect("present"));
        }
        FeatureOutcomePairing::Grouped {
            categorical: side,
            categories: cat.categories().to_vec(),
            values,
        }
    };
    Ok(match (f.kind().is_categorical(), o.kind().is_categorical()) {
        (true, true) => {
            let mut counts = vec![vec![0usize; o.categories().len()]; f.categories().len()];
            for &r in &complete {
                let (i, j) = (f.codes()[r].expect("present"), o.codes()[r].expect("present"));
                counts[i as usize][j as usize] += 1;
            }
            FeatureOutcomePairing::Contingency {
                feature_categories: f.categories().to_vec(),
                outcome_categories: o.categories().to_vec(),
                counts,
            }
        }
        (true, false) => grouped(f, o, Side::Feature),
        (false, true) => grouped(o, f, Side::Outcome),
        (false, false) => {
            let edges = |c: &crate::dataset::Column| {
                let (lo, hi) = c.range().expect("numerical");
                bin_edges(lo, hi, NUMERIC_BINS)
            };
            let (fe, oe) = (edges(f), edges(o));
            let (fx, oy) = (f.numbers().expect("numerical"), o.numbers().expect("numerical"));
            let mut counts = vec![vec![0usize; NUMERIC_BINS]; NUMERIC_BINS];
            for &r in &complete {
                let i = bin_index(&fe, fx[r].expect("present"));
                let j = bin_index(&oe, oy[r].expect("present"));
                counts[i][j] += 1;
            }
            FeatureOutcomePairing::Binned {
                feature_edges: fe,
                outcome_edges: oe,
                counts,
            }
        }
    })
}

fn build_snapshot(
    ds: &Dataset,
    outcome: &str,
    mode: Mode,
    stack: &FilterStack,
    layout: &Layout,
    selected: Option<&str>,
) -> Result<AnalysisSnapshot> {
    if let Some(feature) = selected {
        ds.column(feature)?;
    }
    let n = ds.n_rows();
    let visible = visible_subsets(ds, mode, layout);
    let refs: Vec<(SubsetKind, &[usize])> = visible.iter().map(|(k, r)| (*k, r.as_slice())).collect();
    let outcome_distribution = OutcomeDistribution::build(ds, outcome, &refs)?;

    let (strength, mean_distance, similarity_features) = match layout {
        Layout::Counterfactual(p) => (
            Some(strength_report(
                &outcome_distribution,
                p.in_rows.len(),
                p.cf_rows.len(),
                p.ex_rows.len(),
            )?),
            Some(p.mean_distance.clone()),
            Some(p.features.clone()),
        ),
        _ => (None, None, None),
    };

    let outcome_col = ds.column(outcome)?;
    let mut associations = Vec::new();
    for (kind, rows) in &visible {
        for col in ds.columns().iter().filter(|c| c.name() != outcome) {
            let method = AssociationMethod::for_types(
                col.kind().is_categorical(),
                outcome_col.kind().is_categorical(),
            );
            let value = match association(ds, col.name(), outcome, rows) {
                Ok(rec) => Some(rec.value),
                Err(Error::TooFewRows(_)) => None,
                Err(e) => return Err(e),
            };
            associations.push(AssociationEntry {
                subset: *kind,
                feature: col.name().to_owned(),
                method,
                value,
            });
        }
    }

    let selected = selected
        .map(|feature| -> Result<SelectedFeature> {
            let subsets = visible
                .iter()
                .filter(|(_, rows)| !rows.is_empty())
                .map(|(kind, rows)| {
                    Ok(SubsetFeatureView {
                        subset: *kind,
                        distribution: column_distribution(ds, feature, Some(rows))?,
                        pairing: pairing(ds, feature, outcome, rows)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SelectedFeature {
                feature: feature.to_owned(),
                subsets,
            })
        })
        .transpose()?;

    let subsets = visible
        .into_iter()
        .map(|(subset, rows)| SubsetView {
            subset,
            fraction: rows.len() as f64 / n as f64,
            rows,
        })
        .collect();

    Ok(AnalysisSnapshot {
        n_rows: n,
        outcome: outcome.to_owned(),
        mode,
        filters: stack.iter().cloned().collect(),
        subsets,
        mean_distance,
        similarity_features,
        outcome_distribution,
        strength,
        associations,
        selected,
    })
}

/// Computes a snapshot from scratch.
pub fn analyze(
    ds: &Dataset,
    outcome: &str,
    mode: Mode,
    cfg: &SimilarityConfig,
    stack: &FilterStack,
    selected: Option<&str>,
) -> Result<AnalysisSnapshot> {
    ds.column(outcome)?;
    cfg.validate()?;
    let layout = compute_layout(ds, outcome, mode, cfg, stack)?;
    build_snapshot(ds, outcome, mode, stack, &layout, selected)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum SessionEvent {
    Push { constraint: FilterConstraint },
    Pop { column: String },
}

/// Replayable record of a session: how it was created and every successful
/// filter operation since.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionLog {
    pub dataset: String,
    pub outcome: String,
    pub mode: Mode,
    #[serde(default)]
    pub config: SimilarityConfig,
    pub events: Vec<SessionEvent>,
}

/// A single exploration. Operations take `&mut self`, so one session has
/// one writer; snapshots are plain values.
#[derive(Debug, Clone)]
pub struct Session {
    dataset: Arc<Dataset>,
    outcome: String,
    mode: Mode,
    config: SimilarityConfig,
    stack: FilterStack,
    layout: Layout,
    events: Vec<SessionEvent>,
}

impl Session {
    pub fn create(
        dataset: Arc<Dataset>,
        outcome: impl Into<String>,
        mode: Mode,
        config: SimilarityConfig,
    ) -> Result<Self> {
        let outcome = outcome.into();
        dataset.column(&outcome)?;
        config.validate()?;
        Ok(Session {
            dataset,
            outcome,
            mode,
            config,
            stack: FilterStack::new(),
            layout: Layout::Unfiltered,
            events: Vec::new(),
        })
    }

    /// Rebuilds a session by applying every logged event in order.
    pub fn replay(dataset: Arc<Dataset>, log: &SessionLog) -> Result<Self> {
        let mut session = Session::create(dataset, &log.outcome, log.mode, log.config.clone())?;
        for event in &log.events {
            match event {
                SessionEvent::Push { constraint } => session.push_filter(constraint.clone())?,
                SessionEvent::Pop { column } => session.pop_filter(column)?,
            };
        }
        Ok(session)
    }

    pub fn dataset(&self) -> &Arc<Dataset> {
        &self.dataset
    }

    pub fn outcome(&self) -> &str {
        &self.outcome
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn config(&self) -> &SimilarityConfig {
        &self.config
    }

    pub fn filters(&self) -> &FilterStack {
        &self.stack
    }

    pub fn events(&self) -> &[SessionEvent] {
        &self.events
    }

    pub fn log(&self, dataset: impl Into<String>) -> SessionLog {
        SessionLog {
            dataset: dataset.into(),
            outcome: self.outcome.clone(),
            mode: self.mode,
            config: self.config.clone(),
            events: self.events.clone(),
        }
    }

    /// Adds (or replaces, for an already-filtered column) a constraint and
    /// recomputes everything. On error the session is unchanged.
    pub fn push_filter(&mut self, constraint: FilterConstraint) -> Result<AnalysisSnapshot> {
        if constraint.column() == self.outcome {
            return Err(Error::OutcomeConstraint(self.outcome.clone()));
        }
        constraint.validate(&self.dataset)?;
        let mut stack = self.stack.clone();
        stack.push(constraint.clone());
        if included_mask(&self.dataset, &stack)?.len() == self.dataset.n_rows() {
            return Err(Error::EmptyComplement);
        }
        let snapshot = self.commit(stack)?;
        self.events.push(SessionEvent::Push { constraint });
        Ok(snapshot)
    }

    pub fn pop_filter(&mut self, column: &str) -> Result<AnalysisSnapshot> {
        let mut stack = self.stack.clone();
        stack.remove(column)?;
        let snapshot = self.commit(stack)?;
        self.events.push(SessionEvent::Pop {
            column: column.to_owned(),
        });
        Ok(snapshot)
    }

    pub fn snapshot(&self, selected_feature: Option<&str>) -> Result<AnalysisSnapshot> {
        build_snapshot(
            &self.dataset,
            &self.outcome,
            self.mode,
            &self.stack,
            &self.layout,
            selected_feature,
        )
    }

    fn commit(&mut self, stack: FilterStack) -> Result<AnalysisSnapshot> {
        let layout = compute_layout(&self.dataset, &self.outcome, self.mode, &self.config, &stack)?;
        let snapshot = build_snapshot(&self.dataset, &self.outcome, self.mode, &stack, &layout, None)?;
        self.stack = stack;
        self.layout = layout;
        Ok(snapshot)
    }
}
