//! Batch filter audits: apply a sequence of constraints to a CSV file and
//! report the strength of each step.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use counterfact::session::AnalysisSnapshot;
use counterfact::stats::FilterStrengthReport;
use counterfact::{
    Dataset, DistributionSummary, Error, FilterConstraint, LoadOptions, Mode, Session,
    SimilarityConfig, SubsetKind,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone)]
pub struct AnalyzeRequest {
    pub data: PathBuf,
    pub outcome: String,
    pub filters: Vec<String>,
    pub mode: Mode,
    pub config: SimilarityConfig,
    pub options: LoadOptions,
    pub feature: Option<String>,
}

#[derive(Debug)]
pub enum AnalyzeError {
    /// The input could not be read or does not fit the data.
    Input(String),
    /// A well-formed request the engine rejects.
    Domain(Error),
}

impl AnalyzeError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AnalyzeError::Input(_) => 1,
            AnalyzeError::Domain(_) => 2,
        }
    }
}

impl std::fmt::Display for AnalyzeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AnalyzeError::Input(msg) => f.write_str(msg),
            AnalyzeError::Domain(e) => write!(f, "{} ({})", e, e.code()),
        }
    }
}

impl From<Error> for AnalyzeError {
    fn from(e: Error) -> Self {
        match e {
            Error::MalformedCsv(_)
            | Error::EmptyDataset
            | Error::AllMissing(_)
            | Error::TypeOverride { .. }
            | Error::UnknownColumn(_)
            | Error::ConstraintSyntax(_)
            | Error::InvalidConstraint { .. }
            | Error::InvalidConfig(_)
            | Error::RowOutOfRange { .. } => AnalyzeError::Input(format!("{} ({})", e, e.code())),
            other => AnalyzeError::Domain(other),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditStep {
    pub filter: FilterConstraint,
    pub in_size: usize,
    pub complement_size: usize,
    /// Present in counterfactual mode.
    pub report: Option<FilterStrengthReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub dataset: String,
    pub outcome: String,
    pub mode: Mode,
    /// One entry per constraint, each measured on the cumulative stack.
    pub steps: Vec<AuditStep>,
    pub snapshot: AnalysisSnapshot,
}

pub fn run_analyze(req: &AnalyzeRequest) -> Result<AuditReport, AnalyzeError> {
    let bytes = std::fs::read(&req.data)
        .map_err(|e| AnalyzeError::Input(format!("cannot read {}: {e}", req.data.display())))?;
    let name = req
        .data
        .file_stem()
        .map_or_else(|| "data".to_owned(), |s| s.to_string_lossy().into_owned());
    let ds = Arc::new(Dataset::load_csv_with(bytes.as_slice(), name.clone(), &req.options)?);
    let constraints = req
        .filters
        .iter()
        .map(|f| f.parse::<FilterConstraint>())
        .collect::<Result<Vec<_>, _>>()?;
    // name checks first so a typo is an input error, not a half-run audit
    for c in &constraints {
        ds.column(c.column())?;
    }
    if let Some(feature) = &req.feature {
        ds.column(feature)?;
    }

    let mut session = Session::create(ds, &req.outcome, req.mode, req.config.clone())?;
    let mut steps = Vec::with_capacity(constraints.len());
    for c in constraints {
        let snap = session.push_filter(c.clone())?;
        let in_size = snap.subset(SubsetKind::In).map_or(0, |s| s.rows.len());
        steps.push(AuditStep {
            filter: c,
            in_size,
            complement_size: snap.n_rows - in_size,
            report: snap.strength,
        });
    }
    let snapshot = session.snapshot(req.feature.as_deref())?;
    Ok(AuditReport {
        dataset: name,
        outcome: req.outcome.clone(),
        mode: req.mode,
        steps,
        snapshot,
    })
}

fn r4(v: f64) -> String {
    format!("{v:.4}")
}

impl AuditReport {
    /// Plain-text rendering. Every number is the JSON value rounded to four
    /// decimals.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "dataset {}  outcome {}  mode {:?}  rows {}",
            self.dataset,
            self.outcome,
            self.mode,
            self.snapshot.n_rows
        );
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:<32} {:>8} {:<18} {:<9} {:>6} {:>6} {:>6}",
            "filter", "d", "measure", "strength", "IN", "CF", "EX"
        );
        for step in &self.steps {
            match &step.report {
                Some(r) => {
                    let _ = writeln!(
                        out,
                        "{:<32} {:>8} {:<18} {:<9} {:>6} {:>6} {:>6}",
                        step.filter.to_string(),
                        r4(r.d),
                        format!("{:?}", r.measure),
                        format!("{:?}", r.strength),
                        r.in_size,
                        r.cf_size,
                        r.ex_size
                    );
                }
                None => {
                    let _ = writeln!(
                        out,
                        "{:<32} {:>8} {:<18} {:<9} {:>6} {:>13}",
                        step.filter.to_string(),
                        "-",
                        "-",
                        "-",
                        step.in_size,
                        step.complement_size
                    );
                }
            }
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "outcome by subset");
        for view in &self.snapshot.subsets {
            let _ = write!(
                out,
                "  {:<10} rows {:>6}  share {}",
                view.subset.label(),
                view.rows.len(),
                r4(view.fraction)
            );
            match self.snapshot.outcome_distribution.get(view.subset).map(|o| &o.summary) {
                Some(DistributionSummary::Categorical { categories, .. }) => {
                    for c in categories {
                        let _ = write!(out, "  {}={}", c.category, r4(c.fraction));
                    }
                }
                Some(DistributionSummary::Numerical {
                    mean: Some(mean),
                    min: Some(min),
                    max: Some(max),
                    ..
                }) => {
                    let _ = write!(out, "  mean={} min={} max={}", r4(*mean), r4(*min), r4(*max));
                }
                _ => {}
            }
            let _ = writeln!(out);
        }
        out
    }
}
