//! CSV ingestion with column typing, plus per-column distributions.
//!
//! A [`Dataset`] is an immutable column store. Every column keeps its raw
//! cell text so the table can be written back unchanged. Columns whose
//! present cells are all finite numbers also get a parsed numeric view;
//! categorical columns get category codes.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A numeric-parsing column with at most this many distinct values is
/// treated as categorical.
pub const CATEGORICAL_CUTOFF: usize = 10;

/// Number of equal-width bins used for numerical distributions.
pub const NUMERIC_BINS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ColumnType {
    Numerical,
    CategoricalBinary,
    CategoricalMulti,
}

impl ColumnType {
    pub fn is_categorical(self) -> bool {
        !matches!(self, ColumnType::Numerical)
    }
}

/// Explicit type requested for a column at load time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TypeHint {
    Numerical,
    Categorical,
}

impl std::str::FromStr for TypeHint {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "numerical" | "numeric" | "num" => Ok(TypeHint::Numerical),
            "categorical" | "cat" => Ok(TypeHint::Categorical),
            other => Err(format!("unknown column type `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LoadOptions {
    /// Per-column type overrides, keyed by column name.
    #[serde(default)]
    pub overrides: BTreeMap<String, TypeHint>,
}

impl LoadOptions {
    pub fn with_override(mut self, column: impl Into<String>, hint: TypeHint) -> Self {
        self.overrides.insert(column.into(), hint);
        self
    }
}

/// Empty cells and the literal `NA` are missing.
pub fn is_missing(cell: &str) -> bool {
    let t = cell.trim();
    t.is_empty() || t == "NA"
}

fn parse_number(cell: &str) -> Option<f64> {
    cell.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Classifies a column from its cells. `None` and missing markers are ignored.
///
/// Distinct values are counted on the raw cell text.
pub fn infer_column_type<S: AsRef<str>>(values: &[Option<S>]) -> Result<ColumnType> {
    let present = values
        .iter()
        .filter_map(|v| v.as_ref().map(AsRef::as_ref))
        .filter(|v| !is_missing(v));
    let mut distinct = BTreeSet::new();
    let mut all_numeric = true;
    for v in present {
        all_numeric &= parse_number(v).is_some();
        distinct.insert(v);
    }
    if distinct.is_empty() {
        return Err(Error::AllMissing(String::new()));
    }
    Ok(classify(distinct.len(), all_numeric))
}

fn classify(distinct: usize, all_numeric: bool) -> ColumnType {
    if all_numeric && distinct > CATEGORICAL_CUTOFF {
        ColumnType::Numerical
    } else if distinct == 2 {
        ColumnType::CategoricalBinary
    } else {
        ColumnType::CategoricalMulti
    }
}

/// A borrowed view of one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell<'a> {
    pub raw: Option<&'a str>,
    pub number: Option<f64>,
}

impl Cell<'_> {
    pub fn is_missing(&self) -> bool {
        self.raw.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    name: String,
    kind: ColumnType,
    raw: Vec<Option<String>>,
    numbers: Option<Vec<Option<f64>>>,
    range: Option<(f64, f64)>,
    categories: Vec<String>,
    codes: Vec<Option<u32>>,
}

impl Column {
    fn build(name: String, cells: Vec<Option<String>>, hint: Option<TypeHint>) -> Result<Self> {
        let raw: Vec<Option<String>> = cells
            .into_iter()
            .map(|c| c.filter(|s| !is_missing(s)))
            .collect();
        let inferred = infer_column_type(&raw).map_err(|e| match e {
            Error::AllMissing(_) => Error::AllMissing(name.clone()),
            other => other,
        })?;

        let parsed: Vec<Option<f64>> = raw
            .iter()
            .map(|c| c.as_deref().and_then(parse_number))
            .collect();
        let numeric = raw
            .iter()
            .zip(&parsed)
            .all(|(r, p)| r.is_none() || p.is_some());
        let distinct: BTreeSet<&str> = raw.iter().flatten().map(String::as_str).collect();

        let kind = match hint {
            None => inferred,
            Some(TypeHint::Numerical) if !numeric => {
                return Err(Error::TypeOverride {
                    column: name,
                    requested: "numerical".into(),
                    reason: "not every cell is a finite number".into(),
                })
            }
            Some(TypeHint::Numerical) => ColumnType::Numerical,
            Some(TypeHint::Categorical) if distinct.len() == 2 => ColumnType::CategoricalBinary,
            Some(TypeHint::Categorical) => ColumnType::CategoricalMulti,
        };

        let (numbers, range) = if numeric {
            let range = parsed.iter().flatten().fold(None, |acc, &v| match acc {
                None => Some((v, v)),
                Some((lo, hi)) => Some((f64::min(lo, v), f64::max(hi, v))),
            });
            (Some(parsed), range)
        } else {
            (None, None)
        };

        let (categories, codes) = if kind.is_categorical() {
            let mut categories: Vec<String> = distinct.into_iter().map(str::to_owned).collect();
            if numeric {
                categories.sort_by(|a, b| {
                    let (x, y) = (parse_number(a).unwrap(), parse_number(b).unwrap());
                    x.total_cmp(&y).then_with(|| a.cmp(b))
                });
            }
            let lookup: HashMap<&str, u32> = categories
                .iter()
                .enumerate()
                .map(|(i, c)| (c.as_str(), i as u32))
                .collect();
            let codes = raw
                .iter()
                .map(|c| c.as_deref().map(|s| lookup[s]))
                .collect();
            (categories, codes)
        } else {
            (Vec::new(), Vec::new())
        };

        Ok(Column {
            name,
            kind,
            raw,
            numbers,
            range,
            categories,
            codes,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> ColumnType {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }

    pub fn cell(&self, row: usize) -> Cell<'_> {
        Cell {
            raw: self.raw[row].as_deref(),
            number: self.numbers.as_ref().and_then(|n| n[row]),
        }
    }

    pub fn raw(&self, row: usize) -> Option<&str> {
        self.raw[row].as_deref()
    }

    /// Parsed values, present only when every non-missing cell is numeric.
    pub fn numbers(&self) -> Option<&[Option<f64>]> {
        self.numbers.as_deref()
    }

    /// Full-dataset `(min, max)` of a numeric-parsing column.
    pub fn range(&self) -> Option<(f64, f64)> {
        self.range
    }

    /// Sorted category labels; empty for numerical columns.
    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    /// Per-row category codes indexing [`Column::categories`]; empty for
    /// numerical columns.
    pub fn codes(&self) -> &[Option<u32>] {
        &self.codes
    }

    pub fn missing_count(&self) -> usize {
        self.raw.iter().filter(|c| c.is_none()).count()
    }

    pub fn distinct_count(&self) -> usize {
        if self.kind.is_categorical() {
            return self.categories.len();
        }
        self.raw
            .iter()
            .flatten()
            .collect::<BTreeSet<_>>()
            .len()
    }

    fn hint(&self) -> TypeHint {
        if self.kind.is_categorical() {
            TypeHint::Categorical
        } else {
            TypeHint::Numerical
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    columns: Vec<Column>,
    index: HashMap<String, usize>,
    n_rows: usize,
}

impl Dataset {
    /// Builds a dataset from named cell vectors. `None` cells are missing.
    pub fn from_columns(
        name: impl Into<String>,
        columns: Vec<(String, Vec<Option<String>>)>,
        options: &LoadOptions,
    ) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::MalformedCsv("no columns".into()));
        }
        let n_rows = columns[0].1.len();
        if n_rows == 0 {
            return Err(Error::EmptyDataset);
        }
        let mut index = HashMap::with_capacity(columns.len());
        for (i, (col, cells)) in columns.iter().enumerate() {
            if col.is_empty() {
                return Err(Error::MalformedCsv(format!("column {} has an empty name", i + 1)));
            }
            if cells.len() != n_rows {
                return Err(Error::MalformedCsv(format!(
                    "column `{col}` has {} cells, expected {n_rows}",
                    cells.len()
                )));
            }
            if index.insert(col.clone(), i).is_some() {
                return Err(Error::MalformedCsv(format!("duplicate column name `{col}`")));
            }
        }
        if let Some(unknown) = options.overrides.keys().find(|k| !index.contains_key(*k)) {
            return Err(Error::UnknownColumn(unknown.clone()));
        }
        let columns = columns
            .into_iter()
            .map(|(col, cells)| {
                let hint = options.overrides.get(&col).copied();
                Column::build(col, cells, hint)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Dataset {
            name: name.into(),
            columns,
            index,
            n_rows,
        })
    }

    pub fn load_csv<R: Read>(source: R, name: impl Into<String>) -> Result<Self> {
        Self::load_csv_with(source, name, &LoadOptions::default())
    }

    pub fn load_csv_with<R: Read>(
        source: R,
        name: impl Into<String>,
        options: &LoadOptions,
    ) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(false)
            .from_reader(source);
        let header: Vec<String> = reader
            .headers()
            .map_err(|e| Error::MalformedCsv(e.to_string()))?
            .iter()
            .map(str::to_owned)
            .collect();
        if header.is_empty() || header.iter().all(String::is_empty) {
            return Err(Error::MalformedCsv("empty header".into()));
        }
        let mut cells: Vec<Vec<Option<String>>> = vec![Vec::new(); header.len()];
        for record in reader.records() {
            let record = record.map_err(|e| Error::MalformedCsv(e.to_string()))?;
            for (col, value) in cells.iter_mut().zip(record.iter()) {
                col.push(Some(value.to_owned()));
            }
        }
        if cells[0].is_empty() {
            return Err(Error::EmptyDataset);
        }
        Self::from_columns(name, header.into_iter().zip(cells).collect(), options)
    }

    /// Writes the table back as CSV. Missing cells become empty fields.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(self.columns.iter().map(Column::name))
            .expect("writing to a Vec cannot fail");
        for row in 0..self.n_rows {
            writer
                .write_record(self.columns.iter().map(|c| c.raw(row).unwrap_or("")))
                .expect("writing to a Vec cannot fail");
        }
        let bytes = writer.into_inner().expect("flush to a Vec cannot fail");
        String::from_utf8(bytes).expect("cells are valid UTF-8")
    }

    /// A new dataset containing `rows` in the given order. Column types are
    /// carried over rather than re-inferred.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Dataset> {
        self.check_rows(rows)?;
        let mut options = LoadOptions::default();
        let columns = self
            .columns
            .iter()
            .map(|c| {
                options.overrides.insert(c.name.clone(), c.hint());
                let cells = rows.iter().map(|&r| c.raw[r].clone()).collect();
                (c.name.clone(), cells)
            })
            .collect();
        Dataset::from_columns(self.name.clone(), columns, &options)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(Column::name)
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownColumn(name.to_owned()))
    }

    pub fn column(&self, name: &str) -> Result<&Column> {
        self.column_index(name).map(|i| &self.columns[i])
    }

    pub fn column_at(&self, index: usize) -> &Column {
        &self.columns[index]
    }

    pub(crate) fn check_rows(&self, rows: &[usize]) -> Result<()> {
        match rows.iter().find(|&&r| r >= self.n_rows) {
            Some(&index) => Err(Error::RowOutOfRange {
                index,
                n_rows: self.n_rows,
            }),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryCount {
    pub category: String,
    pub count: usize,
    pub fraction: f64,
}

/// Distribution of one column over a set of rows.
///
/// Categorical summaries list every category of the column (zero counts
/// included). Numerical summaries always use the bins of the full column,
/// so summaries over different subsets line up.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistributionSummary {
    Categorical {
        categories: Vec<CategoryCount>,
        missing: usize,
    },
    Numerical {
        edges: Vec<f64>,
        counts: Vec<usize>,
        fractions: Vec<f64>,
        min: Option<f64>,
        max: Option<f64>,
        mean: Option<f64>,
        missing: usize,
    },
}

impl DistributionSummary {
    /// Number of non-missing cells summarized.
    pub fn present(&self) -> usize {
        match self {
            DistributionSummary::Categorical { categories, .. } => {
                categories.iter().map(|c| c.count).sum()
            }
            DistributionSummary::Numerical { counts, .. } => counts.iter().sum(),
        }
    }

    pub fn fractions(&self) -> Vec<f64> {
        match self {
            DistributionSummary::Categorical { categories, .. } => {
                categories.iter().map(|c| c.fraction).collect()
            }
            DistributionSummary::Numerical { fractions, .. } => fractions.clone(),
        }
    }
}

/// Equal-width bin edges over `[min, max]`. A degenerate range gets a unit
/// wide span centred on the value.
pub fn bin_edges(min: f64, max: f64, bins: usize) -> Vec<f64> {
    let (lo, hi) = if max > min {
        (min, max)
    } else {
        (min - 0.5, min + 0.5)
    };
    let width = (hi - lo) / bins as f64;
    let mut edges: Vec<f64> = (0..=bins).map(|i| lo + width * i as f64).collect();
    edges[bins] = hi;
    edges
}

/// Bin index for `value` given edges from [`bin_edges`]. Bins are half-open
/// except the last, which also takes the upper edge.
pub fn bin_index(edges: &[f64], value: f64) -> usize {
    let interior = &edges[1..edges.len() - 1];
    interior.partition_point(|&e| e <= value)
}

pub fn column_distribution(
    ds: &Dataset,
    column: &str,
    subset: Option<&[usize]>,
) -> Result<DistributionSummary> {
    let col = ds.column(column)?;
    if let Some(rows) = subset {
        if rows.is_empty() {
            return Err(Error::EmptySubset);
        }
        ds.check_rows(rows)?;
    }
    let all: Vec<usize>;
    let rows = match subset {
        Some(rows) => rows,
        None => {
            all = (0..ds.n_rows()).collect();
            &all
        }
    };

    if col.kind().is_categorical() {
        let mut counts = vec![0usize; col.categories().len()];
        let mut missing = 0;
        for &r in rows {
            match col.codes()[r] {
                Some(code) => counts[code as usize] += 1,
                None => missing += 1,
            }
        }
        let present: usize = counts.iter().sum();
        let categories = col
            .categories()
            .iter()
            .zip(counts)
            .map(|(category, count)| CategoryCount {
                category: category.clone(),
                count,
                fraction: fraction(count, present),
            })
            .collect();
        return Ok(DistributionSummary::Categorical {
            categories,
            missing,
        });
    }

    let numbers = col.numbers().expect("numerical columns parse");
    let (lo, hi) = col.range().expect("numerical columns have a range");
    let edges = bin_edges(lo, hi, NUMERIC_BINS);
    let mut counts = vec![0usize; NUMERIC_BINS];
    let mut missing = 0;
    let mut stats: Option<(f64, f64, f64)> = None;
    for &r in rows {
        let Some(v) = numbers[r] else {
            missing += 1;
            continue;
        };
        counts[bin_index(&edges, v)] += 1;
        stats = Some(match stats {
            None => (v, v, v),
            Some((mn, mx, sum)) => (mn.min(v), mx.max(v), sum + v),
        });
    }
    let present: usize = counts.iter().sum();
    let fractions = counts.iter().map(|&c| fraction(c, present)).collect();
    Ok(DistributionSummary::Numerical {
        edges,
        counts,
        fractions,
        min: stats.map(|s| s.0),
        max: stats.map(|s| s.1),
        mean: stats.map(|s| s.2 / present as f64),
        missing,
    })
}

fn fraction(count: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        count as f64 / total as f64
    }
}
