//! Filter constraints and the conjunctive filter stack.
//!
//! Constraints have a compact text form used by the CLI and HTTP API:
//! `col:lo..hi` for an inclusive numeric range (either bound may be left
//! empty) and `col=a|b` for a set of category labels.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::{Cell, Dataset};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Predicate {
    /// Inclusive on both ends.
    NumericRange { lo: f64, hi: f64 },
    CategorySet(BTreeSet<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct FilterConstraint {
    column: String,
    predicate: Predicate,
}

impl FilterConstraint {
    pub fn numeric_range(column: impl Into<String>, lo: f64, hi: f64) -> Result<Self> {
        let column = column.into();
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidConstraint {
                column,
                reason: format!("range {lo}..{hi} is empty"),
            });
        }
        Ok(FilterConstraint {
            column,
            predicate: Predicate::NumericRange { lo, hi },
        })
    }

    pub fn categories<I, S>(column: impl Into<String>, values: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let column = column.into();
        let values: BTreeSet<String> = values.into_iter().map(Into::into).collect();
        if values.is_empty() {
            return Err(Error::InvalidConstraint {
                column,
                reason: "category set is empty".into(),
            });
        }
        Ok(FilterConstraint {
            column,
            predicate: Predicate::CategorySet(values),
        })
    }

    pub fn column(&self) -> &str {
        &self.column
    }

    pub fn predicate(&self) -> &Predicate {
        &self.predicate
    }

    /// Checks the constraint against a dataset. Ranges need a column whose
    /// present cells all parse as numbers; category labels must occur in it.
    pub fn validate(&self, ds: &Dataset) -> Result<()> {
        let col = ds.column(&self.column)?;
        match &self.predicate {
            Predicate::NumericRange { .. } if col.numbers().is_none() => {
                Err(Error::InvalidConstraint {
                    column: self.column.clone(),
                    reason: "numeric range on a non-numeric column".into(),
                })
            }
            Predicate::NumericRange { .. } => Ok(()),
            Predicate::CategorySet(values) => {
                match values.iter().find(|v| !col.categories().contains(v)) {
                    Some(v) => Err(Error::InvalidConstraint {
                        column: self.column.clone(),
                        reason: format!("`{v}` is not a category of this column"),
                    }),
                    None => Ok(()),
                }
            }
        }
    }

    /// Whether a single cell satisfies the predicate. Missing cells never do.
    pub fn matches_cell(&self, cell: Cell<'_>) -> bool {
        match &self.predicate {
            Predicate::NumericRange { lo, hi } => {
                cell.number.is_some_and(|v| *lo <= v && v <= *hi)
            }
            Predicate::CategorySet(values) => cell.raw.is_some_and(|v| values.contains(v)),
        }
    }

    pub fn matches(&self, ds: &Dataset, row: usize) -> Result<bool> {
        let col = ds.column(&self.column)?;
        Ok(self.matches_cell(col.cell(row)))
    }
}

fn format_bound(v: f64) -> String {
    if v.is_infinite() {
        String::new()
    } else {
        format!("{v}")
    }
}

impl fmt::Display for FilterConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.predicate {
            Predicate::NumericRange { lo, hi } => {
                write!(f, "{}:{}..{}", self.column, format_bound(*lo), format_bound(*hi))
            }
            Predicate::CategorySet(values) => {
                let joined: Vec<&str> = values.iter().map(String::as_str).collect();
                write!(f, "{}={}", self.column, joined.join("|"))
            }
        }
    }
}

impl FromStr for FilterConstraint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let syntax = || Error::ConstraintSyntax(s.to_owned());
        if let Some((column, values)) = s.split_once('=') {
            let column = column.trim();
            if column.is_empty() {
                return Err(syntax());
            }
            let labels: Vec<&str> = values.split('|').collect();
            if labels.iter().any(|l| l.is_empty()) {
                return Err(syntax());
            }
            return FilterConstraint::categories(column, labels);
        }
        let (column, range) = s.rsplit_once(':').ok_or_else(syntax)?;
        let (lo, hi) = range.split_once("..").ok_or_else(syntax)?;
        let column = column.trim();
        if column.is_empty() || (lo.trim().is_empty() && hi.trim().is_empty()) {
            return Err(syntax());
        }
        let bound = |text: &str, open: f64| -> Result<f64> {
            let text = text.trim();
            if text.is_empty() {
                return Ok(open);
            }
            text.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(syntax)
        };
        FilterConstraint::numeric_range(
            column,
            bound(lo, f64::NEG_INFINITY)?,
            bound(hi, f64::INFINITY)?,
        )
    }
}

impl TryFrom<String> for FilterConstraint {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        value.parse()
    }
}

impl From<FilterConstraint> for String {
    fn from(value: FilterConstraint) -> Self {
        value.to_string()
    }
}

/// Ordered conjunction of constraints, at most one per column.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FilterStack {
    constraints: Vec<FilterConstraint>,
}

impl FilterStack {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a constraint. A constraint on a column already in the stack
    /// replaces the old one in place; returns the replaced constraint.
    pub fn push(&mut self, constraint: FilterConstraint) -> Option<FilterConstraint> {
        match self
            .constraints
            .iter_mut()
            .find(|c| c.column == constraint.column)
        {
            Some(slot) => Some(std::mem::replace(slot, constraint)),
            None => {
                self.constraints.push(constraint);
                None
            }
        }
    }

    pub fn remove(&mut self, column: &str) -> Result<FilterConstraint> {
        let pos = self
            .constraints
            .iter()
            .position(|c| c.column == column)
            .ok_or_else(|| Error::NotInStack(column.to_owned()))?;
        Ok(self.constraints.remove(pos))
    }

    pub fn contains_column(&self, column: &str) -> bool {
        self.constraints.iter().any(|c| c.column == column)
    }

    pub fn columns(&self) -> impl Iterator<Item = &str> {
        self.constraints.iter().map(FilterConstraint::column)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, FilterConstraint> {
        self.constraints.iter()
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }
}

impl FromIterator<FilterConstraint> for FilterStack {
    fn from_iter<T: IntoIterator<Item = FilterConstraint>>(iter: T) -> Self {
        let mut stack = FilterStack::new();
        for c in iter {
            stack.push(c);
        }
        stack
    }
}

impl<'a> IntoIterator for &'a FilterStack {
    type Item = &'a FilterConstraint;
    type IntoIter = std::slice::Iter<'a, FilterConstraint>;

    fn into_iter(self) -> Self::IntoIter {
        self.constraints.iter()
    }
}

/// Rows matching every constraint in the stack, ascending. An empty stack
/// matches all rows.
pub fn included_mask(ds: &Dataset, stack: &FilterStack) -> Result<Vec<usize>> {
    let resolved = stack
        .iter()
        .map(|c| ds.column(c.column()).map(|col| (c, col)))
        .collect::<Result<Vec<_>>>()?;
    Ok((0..ds.n_rows())
        .filter(|&row| resolved.iter().all(|(c, col)| c.matches_cell(col.cell(row))))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn recid() -> Dataset {
        let csv = "sex,v_decile_score,two_year_recid\n\
                   male,7,1\nfemale,2,0\nmale,,1\nfemale,10,0\nmale,6,0\n";
        Dataset::load_csv(csv.as_bytes(), "recid").unwrap()
    }

    #[test]
    fn range_match_is_inclusive() {
        let ds = recid();
        let c = FilterConstraint::numeric_range("v_decile_score", 6.0, 10.0).unwrap();
        assert!(c.matches(&ds, 0).unwrap()); // 7
        assert!(!c.matches(&ds, 1).unwrap()); // 2
        assert!(c.matches(&ds, 3).unwrap()); // 10, upper bound
        assert!(c.matches(&ds, 4).unwrap()); // 6, lower bound
    }

    #[test]
    fn category_mismatch() {
        let ds = recid();
        let c = FilterConstraint::categories("sex", ["female"]).unwrap();
        assert!(!c.matches(&ds, 0).unwrap());
        assert!(c.matches(&ds, 1).unwrap());
    }

    #[test]
    fn missing_never_matches() {
        let ds = recid();
        let c = FilterConstraint::numeric_range("v_decile_score", f64::NEG_INFINITY, f64::INFINITY)
            .unwrap();
        assert!(!c.matches(&ds, 2).unwrap());
        let empty = Cell {
            raw: None,
            number: None,
        };
        assert!(!FilterConstraint::categories("sex", ["male"])
            .unwrap()
            .matches_cell(empty));
    }

    #[test]
    fn empty_stack_is_identity() {
        let ds = recid();
        assert_eq!(
            included_mask(&ds, &FilterStack::new()).unwrap(),
            vec![0, 1, 2, 3, 4]
        );
    }

    #[test]
    fn stack_is_intersection() {
        let ds = recid();
        let a: FilterConstraint = "sex=male".parse().unwrap();
        let b: FilterConstraint = "v_decile_score:6..10".parse().unwrap();
        let ma = included_mask(&ds, &[a.clone()].into_iter().collect()).unwrap();
        let mb = included_mask(&ds, &[b.clone()].into_iter().collect()).unwrap();
        let both = included_mask(&ds, &[a, b].into_iter().collect()).unwrap();
        let expected: Vec<usize> = ma.iter().copied().filter(|r| mb.contains(r)).collect();
        assert_eq!(both, expected);
        assert_eq!(both, vec![0, 4]);
    }

    #[test]
    fn unknown_column_in_stack() {
        let ds = recid();
        let stack: FilterStack = ["age:1..2".parse().unwrap()].into_iter().collect();
        assert_eq!(
            included_mask(&ds, &stack),
            Err(Error::UnknownColumn("age".into()))
        );
    }

    #[test]
    fn push_replaces_same_column() {
        let mut stack = FilterStack::new();
        stack.push("a:0..1".parse().unwrap());
        stack.push("b=x".parse().unwrap());
        let old = stack.push("a:2..3".parse().unwrap());
        assert_eq!(stack.len(), 2);
        assert_eq!(old.unwrap().to_string(), "a:0..1");
        assert_eq!(stack.iter().next().unwrap().to_string(), "a:2..3");
        assert_eq!(stack.remove("zz"), Err(Error::NotInStack("zz".into())));
    }

    #[test]
    fn syntax_round_trip() {
        for text in ["sex=female", "race=a|b|c", "x:1.5..2", "x:-3..", "x:..5", "a:b:0..1"] {
            let c: FilterConstraint = text.parse().unwrap();
            assert_eq!(c.to_string(), text);
        }
        let c: FilterConstraint = "a:b:0..1".parse().unwrap();
        assert_eq!(c.column(), "a:b");
    }

    #[test]
    fn syntax_errors() {
        for bad in ["", "x", "x:1", "x:..", ":1..2", "=a", "x=", "x=a||b", "x:a..b", "x:3..1"] {
            assert!(bad.parse::<FilterConstraint>().is_err(), "{bad} should fail");
        }
        assert!(matches!(
            "x:3..1".parse::<FilterConstraint>(),
            Err(Error::InvalidConstraint { .. })
        ));
    }

    #[test]
    fn validation() {
        let ds = recid();
        assert!("sex=female".parse::<FilterConstraint>().unwrap().validate(&ds).is_ok());
        assert!(matches!(
            "sex=other".parse::<FilterConstraint>().unwrap().validate(&ds),
            Err(Error::InvalidConstraint { .. })
        ));
        assert!(matches!(
            "sex:0..1".parse::<FilterConstraint>().unwrap().validate(&ds),
            Err(Error::InvalidConstraint { .. })
        ));
        // decile scores are categorical by count but still filterable as ranges
        assert!("v_decile_score:6..10"
            .parse::<FilterConstraint>()
            .unwrap()
            .validate(&ds)
            .is_ok());
    }

    #[test]
    fn serde_uses_text_form() {
        let c: FilterConstraint = "sex=female".parse().unwrap();
        assert_eq!(serde_json::to_string(&c).unwrap(), "\"sex=female\"");
        let back: FilterConstraint = serde_json::from_str("\"x:1..2\"").unwrap();
        assert_eq!(back, FilterConstraint::numeric_range("x", 1.0, 2.0).unwrap());
    }
}
