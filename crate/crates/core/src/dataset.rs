//! Typed mixed-data container, CSV ingestion and ±1 dichotomization.
//!
//! Cells are stored as `f64`. Continuous columns hold the value itself;
//! categorical columns hold the level index (an exact small integer).

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cell tokens treated as missing on ingestion.
pub const NA_TOKENS: [&str; 2] = ["", "NA"];

/// Largest categorical column [`dichotomize`] will search exhaustively.
pub const MAX_DICHOTOMIZE_LEVELS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColumnType {
    Continuous,
    Categorical { levels: Vec<String> },
}

impl ColumnType {
    pub fn is_categorical(&self) -> bool {
        matches!(self, ColumnType::Categorical { .. })
    }

    /// Number of declared levels, `None` for continuous columns.
    pub fn n_levels(&self) -> Option<usize> {
        match self {
            ColumnType::Continuous => None,
            ColumnType::Categorical { levels } => Some(levels.len()),
        }
    }

    fn validate(&self, name: &str) -> Result<()> {
        if let ColumnType::Categorical { levels } = self {
            if levels.len() < 2 {
                return Err(Error::Schema(format!(
                    "categorical column {name:?} declares fewer than two levels"
                )));
            }
            let unique: BTreeSet<&String> = levels.iter().collect();
            if unique.len() != levels.len() {
                return Err(Error::Schema(format!(
                    "categorical column {name:?} declares duplicate levels"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    name: String,
    kind: ColumnType,
    values: Vec<f64>,
}

impl Column {
    pub fn continuous(name: impl Into<String>, values: Vec<f64>) -> Self {
        Column {
            name: name.into(),
            kind: ColumnType::Continuous,
            values,
        }
    }

    /// Categorical column from level labels and per-row level indices.
    pub fn categorical(name: impl Into<String>, levels: Vec<String>, codes: &[usize]) -> Self {
        Column {
            name: name.into(),
            kind: ColumnType::Categorical { levels },
            values: codes.iter().map(|&c| c as f64).collect(),
        }
    }

    /// Two-level categorical column with levels `"-1"` and `"+1"`.
    pub fn signs(name: impl Into<String>, values: &[f64]) -> Self {
        let codes: Vec<usize> = values.iter().map(|&v| usize::from(v > 0.0)).collect();
        Column::categorical(name, vec!["-1".into(), "+1".into()], &codes)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &ColumnType {
        &self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_categorical(&self) -> bool {
        self.kind.is_categorical()
    }

    pub fn level(&self, row: usize) -> usize {
        self.values[row] as usize
    }

    /// Number of distinct values (or observed levels).
    pub fn distinct_count(&self) -> usize {
        let mut v: Vec<f64> = self.values.clone();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.distinct_count() < 2
    }

    /// Column values as ±1 if this is a two-level categorical column or a
    /// continuous column already coded in {−1, +1}.
    pub fn as_signs(&self) -> Option<Vec<f64>> {
        match &self.kind {
            ColumnType::Categorical { levels } if levels.len() == 2 => Some(
                self.values
                    .iter()
                    .map(|&c| if c == 0.0 { -1.0 } else { 1.0 })
                    .collect(),
            ),
            ColumnType::Continuous if self.values.iter().all(|&v| v == -1.0 || v == 1.0) => {
                Some(self.values.clone())
            }
            _ => None,
        }
    }

    fn select(&self, rows: &[usize]) -> Column {
        Column {
            name: self.name.clone(),
            kind: self.kind.clone(),
            values: rows.iter().map(|&r| self.values[r]).collect(),
        }
    }
}

/// An n×p table of typed columns.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedDataset {
    columns: Vec<Column>,
    n: usize,
}

impl MixedDataset {
    /// Builds a dataset and checks every invariant: equal column lengths,
    /// valid level indices, n ≥ 2 and no degenerate column.
    pub fn new(columns: Vec<Column>) -> Result<Self> {
        let data = Self::from_columns(columns)?;
        if data.n == 0 {
            return Err(Error::EmptyData);
        }
        data.check_non_degenerate()?;
        Ok(data)
    }

    /// Like [`MixedDataset::new`] but allows degenerate columns. Used for
    /// subsamples, where a vanished level is tolerated downstream.
    pub fn from_columns(columns: Vec<Column>) -> Result<Self> {
        let n = columns.first().map_or(0, Column::len);
        let mut names = BTreeSet::new();
        for col in &columns {
            if col.len() != n {
                return Err(Error::Schema(format!(
                    "column {:?} has {} rows, expected {n}",
                    col.name,
                    col.len()
                )));
            }
            if !names.insert(col.name.as_str()) {
                return Err(Error::Schema(format!("duplicate column name {:?}", col.name)));
            }
            col.kind.validate(&col.name)?;
            match &col.kind {
                ColumnType::Continuous => {
                    if col.values.iter().any(|v| !v.is_finite()) {
                        return Err(Error::Schema(format!(
                            "column {:?} has a non-finite value",
                            col.name
                        )));
                    }
                }
                ColumnType::Categorical { levels } => {
                    for (row, &v) in col.values.iter().enumerate() {
                        if v < 0.0 || v.fract() != 0.0 || v as usize >= levels.len() {
                            return Err(Error::UnknownLevel {
                                column: col.name.clone(),
                                row: row + 1,
                                value: v.to_string(),
                            });
                        }
                    }
                }
            }
        }
        Ok(MixedDataset { columns, n })
    }

    fn check_non_degenerate(&self) -> Result<()> {
        match self.columns.iter().find(|c| c.is_degenerate()) {
            Some(c) => Err(Error::DegenerateColumn {
                column: c.name.clone(),
            }),
            None => Ok(()),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &Column {
        &self.columns[j]
    }

    pub fn names(&self) -> Vec<String> {
        self.columns.iter().map(|c| c.name.clone()).collect()
    }

    pub fn all_continuous(&self) -> bool {
        self.columns.iter().all(|c| !c.is_categorical())
    }

    pub fn has_categorical(&self) -> bool {
        self.columns.iter().any(Column::is_categorical)
    }

    /// Row subset, in the order given. Degenerate columns are allowed.
    pub fn subset_rows(&self, rows: &[usize]) -> MixedDataset {
        MixedDataset {
            columns: self.columns.iter().map(|c| c.select(rows)).collect(),
            n: rows.len(),
        }
    }

    /// The dataset with column `j` removed.
    pub fn without_column(&self, j: usize) -> MixedDataset {
        MixedDataset {
            columns: self
                .columns
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, c)| c.clone())
                .collect(),
            n: self.n,
        }
    }

    pub fn schema(&self) -> Schema {
        Schema {
            columns: self
                .columns
                .iter()
                .map(|c| ColumnSpec {
                    name: c.name.clone(),
                    kind: match c.kind {
                        ColumnType::Continuous => SpecKind::Continuous,
                        ColumnType::Categorical { .. } => SpecKind::Categorical,
                    },
                    levels: match &c.kind {
                        ColumnType::Continuous => Vec::new(),
                        ColumnType::Categorical { levels } => levels.clone(),
                    },
                })
                .collect(),
        }
    }

    /// Writes the dataset as CSV with a header row. Categorical cells are
    /// written as their level labels.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(self.columns.iter().map(|c| c.name.as_str()))?;
        for row in 0..self.n {
            let record: Vec<String> = self
                .columns
                .iter()
                .map(|c| match &c.kind {
                    ColumnType::Continuous => c.values[row].to_string(),
                    ColumnType::Categorical { levels } => levels[c.level(row)].clone(),
                })
                .collect();
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpecKind {
    Continuous,
    Categorical,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSpec {
    pub name: String,
    pub kind: SpecKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub levels: Vec<String>,
}

impl ColumnSpec {
    fn column_type(&self) -> Result<ColumnType> {
        let kind = match self.kind {
            SpecKind::Continuous => {
                if !self.levels.is_empty() {
                    return Err(Error::Schema(format!(
                        "continuous column {:?} must not declare levels",
                        self.name
                    )));
                }
                ColumnType::Continuous
            }
            SpecKind::Categorical => ColumnType::Categorical {
                levels: self.levels.clone(),
            },
        };
        kind.validate(&self.name)?;
        Ok(kind)
    }
}

/// JSON schema sidecar: `{"columns":[{"name":…,"kind":…,"levels":[…]}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schema {
    pub columns: Vec<ColumnSpec>,
}

impl Schema {
    pub fn from_path(path: &Path) -> Result<Schema> {
        read_json(path)
    }
}

/// Deserializes a JSON file; errors name the file and the offending field.
pub(crate) fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let file = open(path)?;
    let de = &mut serde_json::Deserializer::from_reader(std::io::BufReader::new(file));
    serde_path_to_error::deserialize(de).map_err(|e| Error::Config {
        path: format!("{}: {}", path.display(), e.path()),
        message: e.inner().to_string(),
    })
}

pub(crate) fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::NotFound(path.to_path_buf()),
        _ => Error::Io(e),
    })
}

/// Result of CSV ingestion.
#[derive(Debug, Clone)]
pub struct Ingested {
    pub data: MixedDataset,
    pub rows_dropped: usize,
}

pub fn ingest_csv(path: &Path, schema: &Schema) -> Result<Ingested> {
    ingest_reader(open(path)?, schema)
}

/// Reads CSV from any reader, applying casewise deletion for rows with a
/// missing cell (see [`NA_TOKENS`]).
pub fn ingest_reader<R: Read>(reader: R, schema: &Schema) -> Result<Ingested> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();

    let specs: HashMap<&str, &ColumnSpec> =
        schema.columns.iter().map(|c| (c.name.as_str(), c)).collect();
    if specs.len() != schema.columns.len() {
        return Err(Error::Schema("schema declares a column twice".into()));
    }
    for name in &header {
        if !specs.contains_key(name.as_str()) {
            return Err(Error::Schema(format!("CSV column {name:?} missing from schema")));
        }
    }
    for spec in &schema.columns {
        if !header.contains(&spec.name) {
            return Err(Error::Schema(format!(
                "schema column {:?} missing from CSV header",
                spec.name
            )));
        }
    }
    let kinds: Vec<ColumnType> = header
        .iter()
        .map(|h| specs[h.as_str()].column_type())
        .collect::<Result<_>>()?;
    let lookups: Vec<Option<HashMap<&str, usize>>> = kinds
        .iter()
        .map(|k| match k {
            ColumnType::Continuous => None,
            ColumnType::Categorical { levels } => Some(
                levels
                    .iter()
                    .enumerate()
                    .map(|(i, l)| (l.as_str(), i))
                    .collect(),
            ),
        })
        .collect();

    let mut values: Vec<Vec<f64>> = vec![Vec::new(); header.len()];
    let mut rows_dropped = 0;
    for (idx, record) in rdr.records().enumerate() {
        let record = record?;
        let row = idx + 1;
        if record.len() != header.len() {
            return Err(Error::Schema(format!(
                "row {row} has {} cells, expected {}",
                record.len(),
                header.len()
            )));
        }
        if record.iter().any(|cell| NA_TOKENS.contains(&cell.trim())) {
            rows_dropped += 1;
            continue;
        }
        for (j, cell) in record.iter().enumerate() {
            let cell = cell.trim();
            let v = match &lookups[j] {
                None => cell.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
                    Error::Parse {
                        column: header[j].clone(),
                        row,
                        value: cell.to_string(),
                    }
                })?,
                Some(map) => *map.get(cell).ok_or_else(|| Error::UnknownLevel {
                    column: header[j].clone(),
                    row,
                    value: cell.to_string(),
                })? as f64,
            };
            values[j].push(v);
        }
    }
    if rows_dropped > 0 {
        log::info!("casewise deletion: {rows_dropped} row(s) dropped");
    }

    let columns = header
        .into_iter()
        .zip(kinds)
        .zip(values)
        .map(|((name, kind), values)| Column { name, kind, values })
        .collect();
    Ok(Ingested {
        data: MixedDataset::new(columns)?,
        rows_dropped,
    })
}

/// How one column was mapped to ±1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinaryRule {
    /// Already coded ±1.
    Identity,
    /// Values ≤ `median` map to −1.
    Median { median: f64 },
    /// Levels listed in `minus` map to −1, all others to +1.
    Levels { minus: Vec<usize> },
}

impl BinaryRule {
    pub fn apply(&self, column: &Column) -> Vec<f64> {
        match self {
            BinaryRule::Identity => column.values.clone(),
            BinaryRule::Median { median } => column
                .values
                .iter()
                .map(|&v| if v <= *median { -1.0 } else { 1.0 })
                .collect(),
            BinaryRule::Levels { minus } => column
                .values
                .iter()
                .map(|&v| {
                    if minus.contains(&(v as usize)) {
                        -1.0
                    } else {
                        1.0
                    }
                })
                .collect(),
        }
    }
}

/// A dataset with every cell in {−1, +1}.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryDataset {
    names: Vec<String>,
    values: Vec<Vec<f64>>,
    mapping: Vec<BinaryRule>,
}

impl BinaryDataset {
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Column-major ±1 values.
    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn mapping(&self) -> &[BinaryRule] {
        &self.mapping
    }

    pub fn n_rows(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    pub fn n_cols(&self) -> usize {
        self.values.len()
    }

    /// View as a dataset of two-level categorical columns (`"-1"`, `"+1"`).
    pub fn to_mixed(&self) -> MixedDataset {
        let columns = self
            .names
            .iter()
            .zip(&self.values)
            .map(|(name, v)| Column::signs(name.clone(), v))
            .collect();
        MixedDataset {
            columns,
            n: self.n_rows(),
        }
    }
}

/// Median of the values as given (mean of the two middle values for even n).
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Most balanced bipartition of `counts.len()` levels, returned as the
/// sorted list of levels mapped to −1. Ties resolve to the lexicographically
/// smallest list, which always contains level 0.
pub fn balanced_bipartition(counts: &[usize]) -> Vec<usize> {
    let c = counts.len();
    debug_assert!((2..=MAX_DICHOTOMIZE_LEVELS).contains(&c));
    let total: usize = counts.iter().sum();
    let full = (1u32 << c) - 1;
    let mut best: Option<(usize, Vec<usize>)> = None;
    // Masks with bit 0 set, excluding the full set.
    for mask in (1..full).step_by(2) {
        let minus: usize = (0..c).filter(|&l| mask >> l & 1 == 1).map(|l| counts[l]).sum();
        let imbalance = minus.abs_diff(total - minus);
        let better = match &best {
            None => true,
            Some((b, set)) => {
                imbalance < *b || (imbalance == *b && mask_levels(mask, c) < *set)
            }
        };
        if better {
            best = Some((imbalance, mask_levels(mask, c)));
        }
    }
    best.map(|(_, set)| set).unwrap_or_else(|| vec![0])
}

fn mask_levels(mask: u32, c: usize) -> Vec<usize> {
    (0..c).filter(|&l| mask >> l & 1 == 1).collect()
}

/// Maps every column to ±1: continuous columns by a median split, categorical
/// columns by the most balanced level bipartition, ±1 columns unchanged.
pub fn dichotomize(data: &MixedDataset) -> Result<BinaryDataset> {
    let mut mapping = Vec::with_capacity(data.n_cols());
    let mut values = Vec::with_capacity(data.n_cols());
    for col in data.columns() {
        let rule = match col.kind() {
            ColumnType::Continuous if col.as_signs().is_some() => BinaryRule::Identity,
            ColumnType::Continuous => BinaryRule::Median {
                median: median(col.values()),
            },
            ColumnType::Categorical { levels } => {
                if levels.len() > MAX_DICHOTOMIZE_LEVELS {
                    return Err(Error::TooManyLevels {
                        column: col.name().to_string(),
                        levels: levels.len(),
                        max: MAX_DICHOTOMIZE_LEVELS,
                    });
                }
                let mut counts = vec![0usize; levels.len()];
                for row in 0..col.len() {
                    counts[col.level(row)] += 1;
                }
                BinaryRule::Levels {
                    minus: balanced_bipartition(&counts),
                }
            }
        };
        values.push(rule.apply(col));
        mapping.push(rule);
    }
    Ok(BinaryDataset {
        names: data.names(),
        values,
        mapping,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema(cols: &[(&str, &[&str])]) -> Schema {
        Schema {
            columns: cols
                .iter()
                .map(|(name, levels)| ColumnSpec {
                    name: name.to_string(),
                    kind: if levels.is_empty() {
                        SpecKind::Continuous
                    } else {
                        SpecKind::Categorical
                    },
                    levels: levels.iter().map(|s| s.to_string()).collect(),
                })
                .collect(),
        }
    }

    #[test]
    fn casewise_deletion_drops_incomplete_rows() {
        let csv = "x,y\n1.0,a\n,b\n3.0,b\n";
        let got = ingest_reader(csv.as_bytes(), &schema(&[("x", &[]), ("y", &["a", "b"])])).unwrap();
        assert_eq!(got.rows_dropped, 1);
        assert_eq!(got.data.n_rows(), 2);
        assert_eq!(got.data.column(0).values(), &[1.0, 3.0]);
    }

    #[test]
    fn na_token_counts_as_missing() {
        let csv = "x,y\n1,a\nNA,b\n2,b\n4,a\n";
        let got = ingest_reader(csv.as_bytes(), &schema(&[("x", &[]), ("y", &["a", "b"])])).unwrap();
        assert_eq!(got.rows_dropped, 1);
        assert_eq!(got.data.n_rows(), 3);
    }

    #[test]
    fn single_observed_level_is_degenerate() {
        let csv = "x,y\n1,a\n2,a\n3,a\n";
        let err = ingest_reader(csv.as_bytes(), &schema(&[("x", &[]), ("y", &["a", "b"])]))
            .unwrap_err();
        assert!(matches!(err, Error::DegenerateColumn { ref column } if column == "y"));
    }

    #[test]
    fn complete_file_is_unchanged() {
        let csv = "a,b,c,d\n1,2,x,0.5\n2,1,y,0.25\n3,0,x,1.5\n";
        let s = schema(&[("a", &[]), ("b", &[]), ("c", &["x", "y"]), ("d", &[])]);
        let got = ingest_reader(csv.as_bytes(), &s).unwrap();
        assert_eq!(got.rows_dropped, 0);
        assert_eq!(got.data.n_rows(), 3);
        assert_eq!(got.data.n_cols(), 4);
        assert!(got.data.column(2).is_categorical());
        assert!(!got.data.column(3).is_categorical());
    }

    #[test]
    fn unknown_level_names_column_and_row() {
        let csv = "x,y\n1,a\n2,z\n";
        let err = ingest_reader(csv.as_bytes(), &schema(&[("x", &[]), ("y", &["a", "b"])]))
            .unwrap_err();
        match err {
            Error::UnknownLevel { column, row, value } => {
                assert_eq!((column.as_str(), row, value.as_str()), ("y", 2, "z"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn all_rows_missing_is_empty_data() {
        let csv = "x,y\n,a\nNA,b\n";
        let err = ingest_reader(csv.as_bytes(), &schema(&[("x", &[]), ("y", &["a", "b"])]))
            .unwrap_err();
        assert!(matches!(err, Error::EmptyData));
    }

    #[test]
    fn header_must_match_schema() {
        let csv = "x,q\n1,a\n2,b\n";
        let err = ingest_reader(csv.as_bytes(), &schema(&[("x", &[]), ("y", &["a", "b"])]))
            .unwrap_err();
        assert!(matches!(err, Error::Schema(_)));
    }

    #[test]
    fn schema_json_shape() {
        let json = r#"{"columns":[{"name":"x","kind":"continuous"},{"name":"g","kind":"categorical","levels":["a","b"]}]}"#;
        let s: Schema = serde_json::from_str(json).unwrap();
        assert_eq!(s, schema(&[("x", &[]), ("g", &["a", "b"])]));
        assert_eq!(serde_json::to_string(&s).unwrap(), json);
    }

    #[test]
    fn median_split_sends_ties_down() {
        let data =
            MixedDataset::new(vec![Column::continuous("x", vec![1.0, 2.0, 3.0, 4.0, 5.0])]).unwrap();
        let b = dichotomize(&data).unwrap();
        assert_eq!(b.values()[0], vec![-1.0, -1.0, -1.0, 1.0, 1.0]);
        assert_eq!(b.mapping()[0], BinaryRule::Median { median: 3.0 });
    }

    #[test]
    fn categorical_bipartition_is_most_balanced() {
        // a:40%, b:35%, c:25%
        assert_eq!(balanced_bipartition(&[40, 35, 25]), vec![0]);
        // exact balance is reachable two ways; lexicographic order decides
        assert_eq!(balanced_bipartition(&[1, 1, 1, 1]), vec![0, 1]);
        assert_eq!(balanced_bipartition(&[5, 5]), vec![0]);
    }

    #[test]
    fn sign_columns_pass_through() {
        let v = vec![-1.0, 1.0, 1.0, 1.0];
        let data = MixedDataset::new(vec![
            Column::continuous("x", v.clone()),
            Column::signs("s", &v),
        ])
        .unwrap();
        let b = dichotomize(&data).unwrap();
        assert_eq!(b.values()[0], v);
        assert_eq!(b.values()[1], v);
        assert_eq!(b.mapping()[0], BinaryRule::Identity);
    }

    #[test]
    fn dichotomize_is_idempotent() {
        let data = MixedDataset::new(vec![
            Column::continuous("x", vec![0.3, -1.2, 4.0, 2.2, 0.0, 1.1]),
            Column::categorical(
                "g",
                vec!["a".into(), "b".into(), "c".into()],
                &[0, 1, 2, 2, 1, 0],
            ),
        ])
        .unwrap();
        let once = dichotomize(&data).unwrap();
        let twice = dichotomize(&once.to_mixed()).unwrap();
        assert_eq!(once.values(), twice.values());
    }

    #[test]
    fn csv_round_trip() {
        let data = MixedDataset::new(vec![
            Column::continuous("x", vec![0.1, -2.5, 1e-17]),
            Column::categorical("g", vec!["a".into(), "b,c".into()], &[1, 0, 1]),
        ])
        .unwrap();
        let mut buf = Vec::new();
        data.write_csv(&mut buf).unwrap();
        let back = ingest_reader(buf.as_slice(), &data.schema()).unwrap();
        assert_eq!(back.data, data);
    }
}
