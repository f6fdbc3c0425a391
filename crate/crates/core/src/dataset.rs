//! Panel ingestion and shaping: company × fiscal-year tables, sign splits,
//! ratios of two variables and summary statistics.

use std::collections::BTreeMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::digits::{parse_decimal, DecimalValue, ParsedValue};
use crate::error::{Error, Result};

/// Column layout of a panel file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    /// `company, year, variable, value`, one observation per row.
    #[default]
    Long,
    /// `company, year, <var1>, <var2>, …`.
    Wide,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IngestConfig {
    pub layout: Layout,
    pub delimiter: u8,
    /// Thousands separator removed from every value cell before parsing.
    pub thousands_separator: Option<char>,
    /// Inclusive range of accepted fiscal years. Years are otherwise opaque
    /// labels.
    pub year_range: Option<(i32, i32)>,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            layout: Layout::Long,
            delimiter: b',',
            thousands_separator: None,
            year_range: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PanelKey {
    pub company: String,
    pub year: String,
}

impl PanelKey {
    pub fn new(company: impl Into<String>, year: impl Into<String>) -> Self {
        PanelKey {
            company: company.into(),
            year: year.into(),
        }
    }
}

/// One variable over the panel. `None` marks a blank (missing) cell.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PanelSeries {
    pub variable: String,
    pub entries: BTreeMap<PanelKey, Option<String>>,
}

impl PanelSeries {
    pub fn new(variable: impl Into<String>) -> Self {
        PanelSeries {
            variable: variable.into(),
            entries: BTreeMap::new(),
        }
    }

    pub fn present_count(&self) -> usize {
        self.entries.values().filter(|v| v.is_some()).count()
    }

    pub fn missing_count(&self) -> usize {
        self.entries.values().filter(|v| v.is_none()).count()
    }

    /// Every entry parsed; missing cells come back as
    /// [`ParsedValue::NonNumeric`].
    pub fn parsed_values(&self) -> Vec<ParsedValue> {
        self.entries
            .values()
            .map(|v| v.as_deref().map_or(ParsedValue::NonNumeric, parse_decimal))
            .collect()
    }

    /// Parsed values of the present cells only.
    pub fn present_values(&self) -> Vec<ParsedValue> {
        self.entries
            .values()
            .flatten()
            .map(|s| parse_decimal(s))
            .collect()
    }
}

/// All series read from one file, in order of first appearance.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Panel {
    pub series: Vec<PanelSeries>,
    /// Data rows read, excluding the header.
    pub rows_read: u64,
    pub missing_cells: u64,
}

impl Panel {
    pub fn get(&self, variable: &str) -> Option<&PanelSeries> {
        self.series.iter().find(|s| s.variable == variable)
    }

    pub fn require(&self, variable: &str) -> Result<&PanelSeries> {
        self.get(variable)
            .ok_or_else(|| Error::UnknownVariable(variable.to_owned()))
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.series.iter().map(|s| s.variable.as_str())
    }

    /// Total number of stored cells, blank or not.
    pub fn entry_count(&self) -> usize {
        self.series.iter().map(|s| s.entries.len()).sum()
    }

    fn series_mut(&mut self, variable: &str) -> &mut PanelSeries {
        let idx = match self.series.iter().position(|s| s.variable == variable) {
            Some(i) => i,
            None => {
                self.series.push(PanelSeries::new(variable));
                self.series.len() - 1
            }
        };
        &mut self.series[idx]
    }
}

fn ingest_err(line: u64, column: &str, message: impl Into<String>) -> Error {
    Error::Ingest {
        line,
        column: column.to_owned(),
        message: message.into(),
    }
}

fn find_column(headers: &csv::StringRecord, name: &str) -> Option<usize> {
    headers.iter().position(|h| h.eq_ignore_ascii_case(name))
}

/// Reads a delimited panel file. Any malformed row rejects the whole file.
pub fn load_panel<R: Read>(source: R, config: &IngestConfig) -> Result<Panel> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(config.delimiter)
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let headers = reader.headers().map_err(|e| csv_err(e, "header"))?.clone();
    if headers.is_empty() || headers.iter().all(str::is_empty) {
        return Err(ingest_err(1, "header", "missing header row"));
    }
    let company_col = find_column(&headers, "company")
        .ok_or_else(|| ingest_err(1, "company", "header has no `company` column"))?;
    let year_col = find_column(&headers, "year")
        .ok_or_else(|| ingest_err(1, "year", "header has no `year` column"))?;

    // (column index, variable name) pairs that carry values in wide form.
    let (variable_col, value_col, wide_columns) = match config.layout {
        Layout::Long => {
            let var = find_column(&headers, "variable")
                .ok_or_else(|| ingest_err(1, "variable", "header has no `variable` column"))?;
            let val = find_column(&headers, "value")
                .ok_or_else(|| ingest_err(1, "value", "header has no `value` column"))?;
            (var, val, Vec::new())
        }
        Layout::Wide => {
            let cols: Vec<(usize, String)> = headers
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != company_col && i != year_col)
                .map(|(i, h)| (i, h.to_owned()))
                .collect();
            if cols.is_empty() {
                return Err(ingest_err(
                    1,
                    "header",
                    "wide layout needs at least one variable column",
                ));
            }
            if let Some((_, h)) = cols.iter().find(|(_, h)| h.is_empty()) {
                return Err(ingest_err(1, h, "empty variable name in header"));
            }
            for (k, (_, h)) in cols.iter().enumerate() {
                if cols[..k].iter().any(|(_, other)| other == h) {
                    return Err(ingest_err(1, h, "duplicate variable column"));
                }
            }
            (0, 0, cols)
        }
    };

    let mut panel = Panel::default();
    for record in reader.records() {
        let record = record.map_err(|e| csv_err(e, "row"))?;
        let line = record.position().map_or(0, |p| p.line());
        panel.rows_read += 1;
        let company = &record[company_col];
        let year = &record[year_col];
        if company.is_empty() {
            return Err(ingest_err(line, "company", "blank company identifier"));
        }
        check_year(year, line, config)?;
        let key = PanelKey::new(company, year);

        let mut store = |variable: &str, column: &str, raw: &str| -> Result<()> {
            let cell = clean_cell(raw, config, line, column)?;
            if cell.is_none() {
                panel.missing_cells += 1;
            }
            let series = panel.series_mut(variable);
            if series.entries.contains_key(&key) {
                return Err(ingest_err(
                    line,
                    column,
                    format!(
                        "duplicate entry for ({}, {}, {variable})",
                        key.company, key.year
                    ),
                ));
            }
            series.entries.insert(key.clone(), cell);
            Ok(())
        };

        match config.layout {
            Layout::Long => {
                let variable = &record[variable_col];
                if variable.is_empty() {
                    return Err(ingest_err(line, "variable", "blank variable name"));
                }
                store(variable, "value", &record[value_col])?;
            }
            Layout::Wide => {
                for (idx, name) in &wide_columns {
                    store(name, name, &record[*idx])?;
                }
            }
        }
    }
    Ok(panel)
}

fn csv_err(err: csv::Error, column: &str) -> Error {
    let line = err.position().map_or(0, |p| p.line());
    match err.kind() {
        csv::ErrorKind::Io(_) => Error::Csv(err),
        _ => ingest_err(line, column, err.to_string()),
    }
}

fn check_year(year: &str, line: u64, config: &IngestConfig) -> Result<()> {
    if year.is_empty() {
        return Err(ingest_err(line, "year", "blank fiscal year"));
    }
    if let Some((lo, hi)) = config.year_range {
        let y: i32 = year
            .parse()
            .map_err(|_| ingest_err(line, "year", format!("`{year}` is not a year")))?;
        if !(lo..=hi).contains(&y) {
            return Err(ingest_err(
                line,
                "year",
                format!("year {y} outside the configured range {lo}-{hi}"),
            ));
        }
    }
    Ok(())
}

fn clean_cell(raw: &str, config: &IngestConfig, line: u64, column: &str) -> Result<Option<String>> {
    let text = match config.thousands_separator {
        Some(sep) => raw.replace(sep, ""),
        None => raw.to_owned(),
    };
    if text.trim().is_empty() {
        return Ok(None);
    }
    match parse_decimal(&text) {
        ParsedValue::NonNumeric => {
            Err(ingest_err(line, column, format!("`{raw}` is not a number")))
        }
        _ => Ok(Some(text.trim().to_owned())),
    }
}

/// Result of partitioning values by strict sign.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SignSplit {
    pub negatives: Vec<DecimalValue>,
    pub positives: Vec<DecimalValue>,
    pub zero_count: usize,
    /// Non-numeric inputs, which belong to neither side.
    pub non_numeric: usize,
}

pub fn split_by_sign<'a, I>(values: I) -> SignSplit
where
    I: IntoIterator<Item = &'a ParsedValue>,
{
    let mut split = SignSplit::default();
    for v in values {
        match v {
            ParsedValue::Value(d) if d.is_negative() => split.negatives.push(d.clone()),
            ParsedValue::Value(d) => split.positives.push(d.clone()),
            ParsedValue::Zero => split.zero_count += 1,
            ParsedValue::NonNumeric => split.non_numeric += 1,
        }
    }
    split
}

/// Bookkeeping for [`derive_ratio`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RatioExclusions {
    /// Keys where either operand is absent or blank.
    pub missing_operand: usize,
    pub zero_denominator: usize,
    /// Quotients that overflowed or underflowed `f64`.
    pub non_finite: usize,
}

/// Per-key quotient of two series, rendered at 15 significant digits.
///
/// A ratio entry exists only where both operands are present and the
/// denominator is nonzero.
pub fn derive_ratio(
    numerator: &PanelSeries,
    denominator: &PanelSeries,
) -> (PanelSeries, RatioExclusions) {
    let mut out = PanelSeries::new(format!("{}/{}", numerator.variable, denominator.variable));
    let mut excluded = RatioExclusions::default();
    let keys: std::collections::BTreeSet<&PanelKey> = numerator
        .entries
        .keys()
        .chain(denominator.entries.keys())
        .collect();
    for key in keys {
        let num = numerator.entries.get(key).and_then(|v| v.as_deref());
        let den = denominator.entries.get(key).and_then(|v| v.as_deref());
        let (Some(num), Some(den)) = (num, den) else {
            excluded.missing_operand += 1;
            continue;
        };
        let den = match parse_decimal(den) {
            ParsedValue::Value(d) => d.to_f64(),
            ParsedValue::Zero => {
                excluded.zero_denominator += 1;
                continue;
            }
            ParsedValue::NonNumeric => {
                excluded.missing_operand += 1;
                continue;
            }
        };
        let num = match parse_decimal(num) {
            ParsedValue::Value(d) => d.to_f64(),
            ParsedValue::Zero => 0.0,
            ParsedValue::NonNumeric => {
                excluded.missing_operand += 1;
                continue;
            }
        };
        let q = num / den;
        let cell = match DecimalValue::from_f64(q) {
            ParsedValue::Value(d) => d.to_string(),
            ParsedValue::Zero if num == 0.0 => "0".to_owned(),
            _ => {
                excluded.non_finite += 1;
                continue;
            }
        };
        out.entries.insert(key.clone(), Some(cell));
    }
    (out, excluded)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StatsMode {
    /// The values themselves; zeros count as 0.
    #[default]
    Raw,
    /// Each nonzero value replaced by its signed significand.
    Significand,
}

/// Moment summary of a sample.
///
/// `stdev` uses the `n − 1` denominator. Skewness is `m₃ / m₂^{3/2}` and
/// excess kurtosis `m₄ / m₂² − 3`, both from the biased central moments `m_k`.
/// `cv` is `stdev / mean` and keeps the sign of the mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub n: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub stdev: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub cv: f64,
}

pub fn summary_stats<'a, I>(values: I, mode: StatsMode) -> Result<SummaryStats>
where
    I: IntoIterator<Item = &'a ParsedValue>,
{
    let xs: Vec<f64> = values
        .into_iter()
        .filter_map(|v| match (v, mode) {
            (ParsedValue::Value(d), StatsMode::Raw) => Some(d.to_f64()),
            (ParsedValue::Value(d), StatsMode::Significand) => Some(d.significand()),
            (ParsedValue::Zero, StatsMode::Raw) => Some(0.0),
            _ => None,
        })
        .collect();
    summarize(&xs)
}

/// [`SummaryStats`] of plain numbers.
pub fn summarize(xs: &[f64]) -> Result<SummaryStats> {
    let n = xs.len();
    if n < 2 {
        return Err(Error::Degenerate(format!(
            "summary statistics need at least 2 values, got {n}"
        )));
    }
    let nf = n as f64;
    let mean = xs.iter().sum::<f64>() / nf;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &x in xs {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
        min = min.min(x);
        max = max.max(x);
    }
    let stdev = (m2 / (nf - 1.0)).sqrt();
    let (m2, m3, m4) = (m2 / nf, m3 / nf, m4 / nf);
    Ok(SummaryStats {
        n,
        min,
        max,
        // Rounding can push the mean a hair outside the observed range.
        mean: mean.clamp(min, max),
        stdev,
        skewness: m3 / m2.powf(1.5),
        excess_kurtosis: m4 / (m2 * m2) - 3.0,
        cv: stdev / mean,
    })
}
