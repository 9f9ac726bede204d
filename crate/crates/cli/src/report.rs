//! CSV serialization of case results and spectrum sweeps.
//!
//! Schema: `case,family,order,nmse_noisy_mean,nmse_noisefree_mean,
//! inv_sigma_min,theta_star_norm`, one row per (family, order), RFC-4180
//! quoting, LF line endings, floats printed as the shortest round-trip
//! decimal. Spectrum-only rows leave the NMSE cells (and, without a data
//! generator, the theta-star cell) empty.

use anyhow::{anyhow, bail, Context};
use descent_lab::harness::CaseResult;
use descent_lab::spectrum::SpectrumSweep;

pub const CSV_HEADER: &str =
    "case,family,order,nmse_noisy_mean,nmse_noisefree_mean,inv_sigma_min,theta_star_norm";

/// One CSV row; `None` serializes as an empty cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub case: String,
    pub family: String,
    pub order: usize,
    pub nmse_noisy_mean: Option<f64>,
    pub nmse_noisefree_mean: Option<f64>,
    pub inv_sigma_min: f64,
    pub theta_star_norm: Option<f64>,
}

fn quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn float_cell(value: Option<f64>) -> String {
    value.map(|v| format!("{v}")).unwrap_or_default()
}

pub fn rows_from_case(result: &CaseResult<f64>) -> Vec<CsvRow> {
    let case = result.config.case_id.label().to_string();
    let mut rows = Vec::new();
    for curve in [&result.linear, &result.optimal] {
        for record in &curve.records {
            rows.push(CsvRow {
                case: case.clone(),
                family: curve.family.as_str().to_string(),
                order: record.order,
                nmse_noisy_mean: Some(record.nmse_noisy_mean),
                nmse_noisefree_mean: Some(record.nmse_noisefree_mean),
                inv_sigma_min: record.inv_sigma_min,
                theta_star_norm: Some(record.theta_star_norm),
            });
        }
    }
    rows
}

pub fn rows_from_sweep(sweep: &SpectrumSweep<f64>, family: &str) -> Vec<CsvRow> {
    sweep
        .orders()
        .iter()
        .enumerate()
        .map(|(i, order)| CsvRow {
            case: "spectrum".to_string(),
            family: family.to_string(),
            order: *order,
            nmse_noisy_mean: None,
            nmse_noisefree_mean: None,
            inv_sigma_min: sweep.inv_sigma_min()[i],
            theta_star_norm: sweep.theta_star_norm().map(|norms| norms[i]),
        })
        .collect()
}

pub fn format_csv(rows: &[CsvRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&quote(&row.case));
        out.push(',');
        out.push_str(&quote(&row.family));
        out.push(',');
        out.push_str(&row.order.to_string());
        out.push(',');
        out.push_str(&float_cell(row.nmse_noisy_mean));
        out.push(',');
        out.push_str(&float_cell(row.nmse_noisefree_mean));
        out.push(',');
        out.push_str(&format!("{}", row.inv_sigma_min));
        out.push(',');
        out.push_str(&float_cell(row.theta_star_norm));
        out.push('\n');
    }
    out
}

/// Splits one CSV record honoring RFC-4180 quoting.
fn split_record(line: &str) -> anyhow::Result<Vec<String>> {
    let mut fields = Vec::new();
    let mut current = String::new();
    let mut chars = line.chars().peekable();
    let mut in_quotes = false;
    while let Some(c) = chars.next() {
        if in_quotes {
            match c {
                '"' => {
                    if chars.peek() == Some(&'"') {
                        chars.next();
                        current.push('"');
                    } else {
                        in_quotes = false;
                    }
                }
                other => current.push(other),
            }
        } else {
            match c {
                '"' if current.is_empty() => in_quotes = true,
                ',' => fields.push(std::mem::take(&mut current)),
                other => current.push(other),
            }
        }
    }
    if in_quotes {
        bail!("unterminated quote in record '{line}'");
    }
    fields.push(current);
    Ok(fields)
}

fn parse_float_cell(cell: &str, what: &str) -> anyhow::Result<Option<f64>> {
    if cell.is_empty() {
        return Ok(None);
    }
    Ok(Some(cell.parse().with_context(|| {
        format!("bad {what} value '{cell}'")
    })?))
}

pub fn parse_csv(text: &str) -> anyhow::Result<Vec<CsvRow>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| anyhow!("empty CSV"))?;
    if header != CSV_HEADER {
        bail!("unexpected CSV header '{header}'");
    }
    let mut rows = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let fields = split_record(line)?;
        if fields.len() != 7 {
            bail!("expected 7 fields, got {} in '{line}'", fields.len());
        }
        rows.push(CsvRow {
            case: fields[0].clone(),
            family: fields[1].clone(),
            order: fields[2]
                .parse()
                .with_context(|| format!("bad order '{}'", fields[2]))?,
            nmse_noisy_mean: parse_float_cell(&fields[3], "nmse_noisy_mean")?,
            nmse_noisefree_mean: parse_float_cell(&fields[4], "nmse_noisefree_mean")?,
            inv_sigma_min: fields[5]
                .parse()
                .with_context(|| format!("bad inv_sigma_min '{}'", fields[5]))?,
            theta_star_norm: parse_float_cell(&fields[6], "theta_star_norm")?,
        });
    }
    Ok(rows)
}
