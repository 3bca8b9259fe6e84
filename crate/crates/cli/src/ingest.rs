//! Delimited-text ingestion: comma separation with a header row, standard
//! quoting. Missing values are empty fields or the literal "NA".

use anyhow::{bail, Context, Result};
use std::path::{Path, PathBuf};
use tailrank::Sample;

/// Where the observations come from and how to subset them.
#[derive(Debug, Clone)]
pub struct DatasetSpec {
    pub path: PathBuf,
    pub value_column: String,
    /// Optional (column, required value) filter; rows whose filter cell is
    /// missing or different are excluded.
    pub filter: Option<(String, String)>,
    /// Skip rows with a missing value cell instead of failing on them.
    pub drop_missing: bool,
}

fn is_missing(field: &str) -> bool {
    field.is_empty() || field == "NA"
}

/// Read the positive values of `value_column`, applying the optional filter.
///
/// Never coerces silently: an unparseable or nonpositive value aborts with
/// the offending row number (1-based data rows; the header is row 0).
pub fn ingest(spec: &DatasetSpec) -> Result<Sample<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(&spec.path)
        .with_context(|| format!("cannot open {}", spec.path.display()))?;

    let headers = reader.headers().context("cannot read header row")?.clone();
    let value_idx = headers
        .iter()
        .position(|h| h == spec.value_column)
        .with_context(|| {
            format!(
                "column `{}` not found in {} (header: {})",
                spec.value_column,
                spec.path.display(),
                headers.iter().collect::<Vec<_>>().join(",")
            )
        })?;
    let filter_idx = match &spec.filter {
        Some((col, _)) => Some(headers.iter().position(|h| h == col).with_context(|| {
            format!("filter column `{col}` not found in {}", spec.path.display())
        })?),
        None => None,
    };

    let mut values = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let row = row_idx + 1;
        let record = record.with_context(|| format!("row {row}: malformed record"))?;
        if let (Some(idx), Some((_, want))) = (filter_idx, &spec.filter) {
            let cell = record.get(idx).unwrap_or("");
            if is_missing(cell) || cell != want {
                continue;
            }
        }
        let cell = record.get(value_idx).unwrap_or("");
        if is_missing(cell) {
            if spec.drop_missing {
                continue;
            }
            bail!(
                "row {row}: missing value in column `{}` (use --drop-missing to skip such rows)",
                spec.value_column
            );
        }
        let value: f64 = cell
            .parse()
            .with_context(|| format!("row {row}: cannot parse `{cell}` as a number"))?;
        if !(value > 0.0) || !value.is_finite() {
            bail!(
                "row {row}: value {value} in column `{}` is not a positive finite number",
                spec.value_column
            );
        }
        values.push(value);
    }

    if values.is_empty() {
        bail!(
            "no rows left after filtering {} (filter: {:?})",
            spec.path.display(),
            spec.filter
        );
    }
    let label = match &spec.filter {
        Some((col, val)) => format!("{}[{col}={val}]", spec.path.display()),
        None => spec.path.display().to_string(),
    };
    Ok(Sample::with_provenance(values, None, label)?)
}

/// Parse the `--filter COL=VAL` syntax.
pub fn parse_filter(text: &str) -> Result<(String, String)> {
    match text.split_once('=') {
        Some((col, val)) if !col.is_empty() && !val.is_empty() => {
            Ok((col.to_string(), val.to_string()))
        }
        _ => bail!("--filter expects COL=VAL, got `{text}`"),
    }
}

/// Write a one-column CSV of sample values (header `value`).
pub fn sample_to_csv(sample: &Sample<f64>) -> String {
    let mut out = String::from("value\n");
    for v in sample.values() {
        out.push_str(&format!("{v}\n"));
    }
    out
}

/// Helper shared by tests and commands: resolve a dataset argument bundle.
pub fn dataset_spec(
    path: &Path,
    value_column: &str,
    filter: Option<&str>,
    drop_missing: bool,
) -> Result<DatasetSpec> {
    Ok(DatasetSpec {
        path: path.to_path_buf(),
        value_column: value_column.to_string(),
        filter: filter.map(parse_filter).transpose()?,
        drop_missing,
    })
}
