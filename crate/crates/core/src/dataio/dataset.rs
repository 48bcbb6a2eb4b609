//! Comma-separated data with a header row and an optional sidecar schema.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::paradigm::{Case, FeatureKind, FeatureSpec, FeatureValue, FeatureVector, Schema, TrainingSet};

fn io_error(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io { path: path.display().to_string(), detail: e.to_string() }
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| io_error(path, e))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawColumn {
    kind: String,
    #[serde(default)]
    levels: Option<Vec<String>>,
    #[serde(default)]
    symbols: Option<Vec<String>>,
}

/// Column kinds declared in a sidecar file, a JSON object mapping column
/// names to `{"kind": "numeric"}`, `{"kind": "ordinal", "levels": [..]}` or
/// `{"kind": "nominal", "symbols": [..]}`. Undeclared columns are numeric.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ColumnKinds {
    pub columns: BTreeMap<String, FeatureKind>,
}

impl ColumnKinds {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: BTreeMap<String, RawColumn> = serde_json::from_str(text)
            .map_err(|e| Error::Parse { row: e.line(), col: e.column(), detail: e.to_string() })?;
        let mut columns = BTreeMap::new();
        for (name, col) in raw {
            let missing = |what: &str| Error::Parse {
                row: 0,
                col: 0,
                detail: format!("column `{name}`: {what} list is required"),
            };
            let kind = match col.kind.as_str() {
                "numeric" => FeatureKind::Numeric,
                "ordinal" => FeatureKind::Ordinal { levels: col.levels.clone().ok_or_else(|| missing("levels"))? },
                "nominal" => FeatureKind::Nominal { symbols: col.symbols.clone().ok_or_else(|| missing("symbols"))? },
                other => return Err(Error::UnknownColumnKind { column: name, kind: other.to_string() }),
            };
            columns.insert(name, kind);
        }
        Ok(ColumnKinds { columns })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read_text(path)?)
    }
}

/// A parsed data file.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub set: TrainingSet<f64>,
    pub schema: Schema,
    pub target: String,
    /// File line of each case, header being line 1.
    pub lines: Vec<usize>,
    /// Hex SHA-256 of the file contents.
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn parse_value(token: &str, kind: &FeatureKind, row: usize, col: usize) -> Result<FeatureValue<f64>> {
    let fail = |detail: String| Error::Parse { row, col, detail };
    match kind {
        FeatureKind::Numeric => match token.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(FeatureValue::Numeric(v)),
            _ => Err(fail(format!("`{token}` is not a finite number"))),
        },
        FeatureKind::Ordinal { levels } => levels
            .iter()
            .position(|l| l == token)
            .map(FeatureValue::Ordinal)
            .ok_or_else(|| fail(format!("`{token}` is not a declared level"))),
        FeatureKind::Nominal { symbols } => {
            if symbols.iter().any(|s| s == token) {
                Ok(FeatureValue::Nominal(token.to_string()))
            } else {
                Err(fail(format!("`{token}` is not a declared symbol")))
            }
        }
    }
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(text.as_bytes())
}

fn csv_error(e: csv::Error) -> Error {
    let row = e.position().map_or(0, |p| p.line() as usize);
    Error::Parse { row, col: 0, detail: e.to_string() }
}

/// Parses data text. The feedback column is `target`, or the last column.
pub fn parse_dataset(text: &str, target: Option<&str>, kinds: &ColumnKinds) -> Result<Dataset> {
    let mut rdr = reader(text);
    let header: Vec<String> = rdr.headers().map_err(csv_error)?.iter().map(str::to_string).collect();
    if header.len() < 2 {
        return Err(Error::Parse { row: 1, col: 1, detail: "need at least one feature and one feedback column".into() });
    }
    let target_col = match target {
        Some(name) => header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::UnknownColumn { name: name.to_string() })?,
        None => header.len() - 1,
    };
    for name in kinds.columns.keys() {
        if !header.contains(name) {
            return Err(Error::UnknownColumn { name: name.clone() });
        }
    }
    let features: Vec<FeatureSpec> = header
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != target_col)
        .map(|(_, name)| FeatureSpec {
            name: name.clone(),
            kind: kinds.columns.get(name).cloned().unwrap_or(FeatureKind::Numeric),
        })
        .collect();
    let schema = Schema::new(features);
    let mut cases = Vec::new();
    let mut lines = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let row = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != header.len() {
            return Err(Error::Parse {
                row,
                col: record.len().min(header.len()) + 1,
                detail: format!("expected {} fields, found {}", header.len(), record.len()),
            });
        }
        let mut values = Vec::with_capacity(schema.dim());
        let mut spec_iter = schema.features.iter();
        let mut y = 0.0;
        for (col, token) in record.iter().enumerate() {
            if col == target_col {
                y = match token.parse::<f64>() {
                    Ok(v) if v.is_finite() => v,
                    _ => {
                        return Err(Error::Parse { row, col: col + 1, detail: format!("`{token}` is not a finite number") })
                    }
                };
            } else {
                let spec = spec_iter.next().expect("one spec per feature column");
                values.push(parse_value(token, &spec.kind, row, col + 1)?);
            }
        }
        cases.push(Case::new(FeatureVector::new(values), y));
        lines.push(row);
    }
    let set = TrainingSet::with_schema(cases, schema.clone()).map_err(|e| match e {
        Error::DuplicateFeatureVector { first, second } => Error::DuplicateRows { first: lines[first], second: lines[second] },
        Error::SchemaMismatch { index, detail } => Error::Parse { row: lines[index], col: 0, detail },
        other => other,
    })?;
    Ok(Dataset {
        set,
        schema,
        target: header[target_col].clone(),
        lines,
        sha256: sha256_hex(text.as_bytes()),
    })
}

pub fn load_dataset(path: &Path, target: Option<&str>, kinds: &ColumnKinds) -> Result<Dataset> {
    parse_dataset(&read_text(path)?, target, kinds)
}

/// Parses query rows holding exactly the feature columns of `schema`, in
/// any order.
pub fn parse_queries(text: &str, schema: &Schema) -> Result<Vec<FeatureVector<f64>>> {
    let mut rdr = reader(text);
    let header: Vec<String> = rdr.headers().map_err(csv_error)?.iter().map(str::to_string).collect();
    if header.len() != schema.dim() {
        return Err(Error::DimensionMismatch { expected: schema.dim(), found: header.len() });
    }
    let order = schema
        .features
        .iter()
        .map(|f| header.iter().position(|h| *h == f.name).ok_or_else(|| Error::UnknownColumn { name: f.name.clone() }))
        .collect::<Result<Vec<usize>>>()?;
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let row = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != header.len() {
            return Err(Error::DimensionMismatch { expected: header.len(), found: record.len() });
        }
        let values = schema
            .features
            .iter()
            .zip(&order)
            .map(|(spec, &col)| parse_value(&record[col], &spec.kind, row, col + 1))
            .collect::<Result<Vec<_>>>()?;
        out.push(FeatureVector::new(values));
    }
    Ok(out)
}

pub fn load_queries(path: &Path, schema: &Schema) -> Result<Vec<FeatureVector<f64>>> {
    parse_queries(&read_text(path)?, schema)
}
