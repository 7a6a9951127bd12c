//! Dataset ingestion: delimited categorical records, optionally in
//! contingency-table form with a trailing integer count column.

use std::collections::HashMap;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

/// A categorical variable with an ordered list of category labels.
///
/// Category order matters: it fixes edge order in event trees and the
/// default split order of the binary resize.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub categories: Vec<String>,
}

impl Variable {
    pub fn new(name: impl Into<String>, categories: Vec<String>) -> Self {
        Variable {
            name: name.into(),
            categories,
        }
    }

    pub fn category_index(&self, label: &str) -> Option<u32> {
        self.categories.iter().position(|c| c == label).map(|i| i as u32)
    }
}

/// Complete categorical records with nonnegative integer multiplicities.
///
/// Rows are stored as category indices; duplicate rows are folded into
/// weights at construction, so row order never affects downstream counts.
#[derive(Debug, Clone)]
pub struct Dataset {
    variables: Vec<Variable>,
    rows: Vec<Vec<u32>>,
    weights: Vec<u64>,
}

impl Dataset {
    /// Builds a dataset from parts, validating categories and row shapes.
    pub fn from_parts(variables: Vec<Variable>, rows: Vec<Vec<u32>>, weights: Vec<u64>) -> Result<Self> {
        if rows.len() != weights.len() {
            return Err(Error::Data(format!(
                "{} rows but {} weights",
                rows.len(),
                weights.len()
            )));
        }
        for var in &variables {
            if var.categories.is_empty() {
                return Err(Error::Data(format!("variable '{}' has no categories", var.name)));
            }
            let mut seen = std::collections::HashSet::new();
            for c in &var.categories {
                if !seen.insert(c) {
                    return Err(Error::Data(format!(
                        "variable '{}' has duplicate category '{}'",
                        var.name, c
                    )));
                }
            }
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != variables.len() {
                return Err(Error::data_row(i + 1, "wrong number of values"));
            }
            for (v, &idx) in variables.iter().zip(row) {
                if idx as usize >= v.categories.len() {
                    return Err(Error::data_row(
                        i + 1,
                        format!("category index {} out of range for '{}'", idx, v.name),
                    ));
                }
            }
        }
        let (rows, weights) = fold_duplicates(rows, weights);
        Ok(Dataset {
            variables,
            rows,
            weights,
        })
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, name: &str) -> Option<(usize, &Variable)> {
        self.variables
            .iter()
            .enumerate()
            .find(|(_, v)| v.name == name)
    }

    /// Number of distinct records.
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Sum of all record weights.
    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&[u32], u64)> {
        self.rows
            .iter()
            .map(|r| r.as_slice())
            .zip(self.weights.iter().copied())
    }
}

fn fold_duplicates(rows: Vec<Vec<u32>>, weights: Vec<u64>) -> (Vec<Vec<u32>>, Vec<u64>) {
    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut out_rows = Vec::new();
    let mut out_weights: Vec<u64> = Vec::new();
    for (row, w) in rows.into_iter().zip(weights) {
        match index.get(&row) {
            Some(&i) => out_weights[i] += w,
            None => {
                index.insert(row.clone(), out_rows.len());
                out_rows.push(row);
                out_weights.push(w);
            }
        }
    }
    (out_rows, out_weights)
}

/// Per-variable schema override: category order, and the variable order itself.
#[derive(Debug, Clone, Default)]
pub struct Schema {
    pub variables: Vec<SchemaVar>,
}

#[derive(Debug, Clone)]
pub struct SchemaVar {
    pub name: String,
    /// When present, fixes the category order; cells outside the list are rejected.
    pub categories: Option<Vec<String>>,
}

#[derive(Debug, Clone)]
pub struct IngestOptions {
    pub delimiter: u8,
    /// Variable order / category overrides. Defaults to header order and
    /// first-appearance category order.
    pub schema: Option<Schema>,
    /// Name of a nonnegative integer multiplicity column (contingency form).
    pub count_column: Option<String>,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions {
            delimiter: b',',
            schema: None,
            count_column: None,
        }
    }
}

/// Reads delimited text with a header row into a [`Dataset`].
///
/// Every cell must be nonempty; incomplete rows are rejected, not imputed.
pub fn ingest<R: Read>(reader: R, opts: &IngestOptions) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(opts.delimiter)
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::Data(format!("bad header: {e}")))?
        .iter()
        .map(|s| s.to_string())
        .collect();
    if header.is_empty() {
        return Err(Error::Data("empty header".into()));
    }

    let count_idx = match &opts.count_column {
        Some(name) => Some(
            header
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::Config(format!("count column '{name}' not in header")))?,
        ),
        None => None,
    };

    // Variable columns in output order: schema order when given, else header order.
    let var_cols: Vec<usize> = match &opts.schema {
        Some(schema) => {
            let mut cols = Vec::new();
            for sv in &schema.variables {
                let col = header
                    .iter()
                    .position(|h| *h == sv.name)
                    .ok_or_else(|| Error::Config(format!("schema variable '{}' not in header", sv.name)))?;
                if Some(col) == count_idx {
                    return Err(Error::Config(format!(
                        "schema variable '{}' is the count column",
                        sv.name
                    )));
                }
                cols.push(col);
            }
            cols
        }
        None => (0..header.len()).filter(|c| Some(*c) != count_idx).collect(),
    };

    let fixed_categories: Vec<Option<Vec<String>>> = match &opts.schema {
        Some(schema) => schema.variables.iter().map(|sv| sv.categories.clone()).collect(),
        None => vec![None; var_cols.len()],
    };

    let mut categories: Vec<Vec<String>> = fixed_categories
        .iter()
        .map(|f| f.clone().unwrap_or_default())
        .collect();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut weights: Vec<u64> = Vec::new();

    for (line, record) in rdr.records().enumerate() {
        let row_no = line + 1; // 1-based data row
        let record = record.map_err(|e| Error::data_row(row_no, e.to_string()))?;
        if record.len() != header.len() {
            return Err(Error::data_row(
                row_no,
                format!("expected {} cells, found {}", header.len(), record.len()),
            ));
        }
        let mut row = Vec::with_capacity(var_cols.len());
        for (vi, &col) in var_cols.iter().enumerate() {
            let cell = record.get(col).unwrap_or("");
            if cell.is_empty() {
                return Err(Error::data_row(
                    row_no,
                    format!("missing value for '{}'", header[col]),
                ));
            }
            let idx = match categories[vi].iter().position(|c| c == cell) {
                Some(i) => i as u32,
                None => {
                    if fixed_categories[vi].is_some() {
                        return Err(Error::data_row(
                            row_no,
                            format!("value '{}' not in schema categories of '{}'", cell, header[col]),
                        ));
                    }
                    categories[vi].push(cell.to_string());
                    (categories[vi].len() - 1) as u32
                }
            };
            row.push(idx);
        }
        let w = match count_idx {
            Some(col) => {
                let cell = record.get(col).unwrap_or("");
                cell.parse::<u64>().map_err(|_| {
                    Error::data_row(row_no, format!("count column value '{cell}' is not a nonnegative integer"))
                })?
            }
            None => 1,
        };
        rows.push(row);
        weights.push(w);
    }

    let variables: Vec<Variable> = var_cols
        .iter()
        .zip(categories)
        .map(|(&col, cats)| Variable::new(header[col].clone(), cats))
        .collect();
    for var in &variables {
        if var.categories.is_empty() {
            return Err(Error::Data(format!(
                "variable '{}' has no observed categories and no schema override",
                var.name
            )));
        }
    }
    Dataset::from_parts(variables, rows, weights)
}

pub fn ingest_path(path: impl AsRef<Path>, opts: &IngestOptions) -> Result<Dataset> {
    let file = File::open(path.as_ref())?;
    ingest(file, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> IngestOptions {
        IngestOptions::default()
    }

    #[test]
    fn ingest_plain_rows() {
        let text = "a,b\nx,u\nx,v\ny,u\nx,u\n";
        let d = ingest(text.as_bytes(), &opts()).unwrap();
        assert_eq!(d.variables().len(), 2);
        assert_eq!(d.variables()[0].categories, vec!["x", "y"]);
        assert_eq!(d.total_weight(), 4);
        assert_eq!(d.num_rows(), 3); // duplicate (x,u) folded
    }

    #[test]
    fn ingest_empty_body() {
        let d = ingest("a,b\n".as_bytes(), &opts()).unwrap();
        assert_eq!(d.num_rows(), 0);
        assert_eq!(d.total_weight(), 0);
        assert_eq!(d.variables().len(), 2);
    }

    #[test]
    fn ingest_contingency_weights() {
        let text = "v,ans,n\nA,yes,3\nA,no,1\n";
        let mut o = opts();
        o.count_column = Some("n".into());
        let d = ingest(text.as_bytes(), &o).unwrap();
        assert_eq!(d.total_weight(), 4);
        assert_eq!(d.variables().len(), 2);
    }

    #[test]
    fn ingest_rejects_missing_cell() {
        let text = "a,b\nx,\n";
        let err = ingest(text.as_bytes(), &opts()).unwrap_err();
        assert!(matches!(err, Error::DataRow { row: 1, .. }), "{err}");
    }

    #[test]
    fn ingest_rejects_non_integer_weight() {
        let text = "a,n\nx,1.5\n";
        let mut o = opts();
        o.count_column = Some("n".into());
        let err = ingest(text.as_bytes(), &o).unwrap_err();
        assert!(matches!(err, Error::DataRow { row: 1, .. }), "{err}");
    }

    #[test]
    fn ingest_rejects_unknown_schema_variable() {
        let text = "a,b\nx,u\n";
        let mut o = opts();
        o.schema = Some(Schema {
            variables: vec![SchemaVar {
                name: "zzz".into(),
                categories: None,
            }],
        });
        let err = ingest(text.as_bytes(), &o).unwrap_err();
        assert!(matches!(err, Error::Config(_)), "{err}");
    }

    #[test]
    fn schema_fixes_category_order() {
        let text = "a\ny\nx\n";
        let mut o = opts();
        o.schema = Some(Schema {
            variables: vec![SchemaVar {
                name: "a".into(),
                categories: Some(vec!["x".into(), "y".into(), "z".into()]),
            }],
        });
        let d = ingest(text.as_bytes(), &o).unwrap();
        assert_eq!(d.variables()[0].categories, vec!["x", "y", "z"]);
    }

    #[test]
    fn zero_weight_rows_register_categories() {
        let text = "a,n\nx,0\ny,2\n";
        let mut o = opts();
        o.count_column = Some("n".into());
        let d = ingest(text.as_bytes(), &o).unwrap();
        assert_eq!(d.variables()[0].categories, vec!["x", "y"]);
        assert_eq!(d.total_weight(), 2);
    }
}
