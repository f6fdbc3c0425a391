//! From series to conformity reports, and report serialization.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::conformity::{run_test, ConformityClass, TestResult};
use crate::dataset::{derive_ratio, split_by_sign, Panel, PanelSeries, RatioExclusions};
use crate::digits::{tally, DigitTally, ParsedValue};
use crate::error::{Error, Result};
use crate::laws::{expected_distribution, LawKind};

pub const MAD_CONVENTION: &str = "mad_paper = sum over bins of |f_o - f_e|; \
mad_mean = mad_paper / K (K = bin count); `conformity` classifies mad_mean, \
`conformity_paper_sum` classifies mad_paper against the same thresholds";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Excluded {
    pub zero: u64,
    pub nonnumeric: u64,
}

/// One (slice, law) row of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawRecord {
    pub label: String,
    pub law: LawKind,
    pub n: u64,
    pub excluded: Excluded,
    pub bins: Vec<u32>,
    pub counts: Vec<u64>,
    pub observed: Vec<f64>,
    pub expected: Vec<f64>,
    pub chi2: f64,
    pub df: usize,
    pub chi2_critical: f64,
    pub chi2_p_value: f64,
    pub chi2_reject: bool,
    pub mad_paper: f64,
    pub mad_mean: f64,
    pub conformity: ConformityClass,
    pub conformity_paper_sum: ConformityClass,
    pub mad_forms_disagree: bool,
}

impl LawRecord {
    pub fn new(label: impl Into<String>, tally: &DigitTally, alpha: f64) -> Result<Self> {
        let expected = expected_distribution(tally.kind());
        let test = run_test(tally, &expected, alpha)?;
        Ok(LawRecord {
            label: label.into(),
            law: tally.kind(),
            n: tally.n_included(),
            excluded: Excluded {
                zero: tally.n_excluded_zero(),
                nonnumeric: tally.n_excluded_nonnumeric(),
            },
            bins: tally.kind().bins().collect(),
            counts: tally.counts().to_vec(),
            observed: tally.frequencies()?,
            expected: expected.probs().to_vec(),
            chi2: test.chi2,
            df: test.df,
            chi2_critical: test.chi2_critical,
            chi2_p_value: test.chi2_p_value,
            chi2_reject: test.chi2_reject,
            mad_paper: test.mad_paper,
            mad_mean: test.mad_mean,
            conformity: test.conformity,
            conformity_paper_sum: test.conformity_paper_sum,
            mad_forms_disagree: test.mad_forms_disagree(),
        })
    }

    /// The tally this record was built from, exclusions included.
    pub fn tally(&self) -> Result<DigitTally> {
        let mut t = DigitTally::from_counts(self.law, &self.counts)?;
        let mut excluded = DigitTally::empty(self.law);
        (0..self.excluded.zero).for_each(|_| excluded.push(&ParsedValue::Zero));
        (0..self.excluded.nonnumeric).for_each(|_| excluded.push(&ParsedValue::NonNumeric));
        t = t.merge(&excluded)?;
        Ok(t)
    }

    pub fn test_result(&self, alpha: f64) -> TestResult {
        TestResult {
            kind: self.law,
            chi2: self.chi2,
            df: self.df,
            chi2_critical: self.chi2_critical,
            chi2_p_value: self.chi2_p_value,
            chi2_reject: self.chi2_reject,
            mad_paper: self.mad_paper,
            mad_mean: self.mad_mean,
            conformity: self.conformity,
            conformity_paper_sum: self.conformity_paper_sum,
            alpha,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub tool: String,
    pub mad_convention: String,
    /// Random generator, when the data is synthetic.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    /// Pairs dropped while building each ratio slice.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub ratio_exclusions: BTreeMap<String, RatioExclusions>,
}

impl Default for ReportMetadata {
    fn default() -> Self {
        ReportMetadata {
            tool: concat!("digitlaw ", env!("CARGO_PKG_VERSION")).to_owned(),
            mad_convention: MAD_CONVENTION.to_owned(),
            generator: None,
            ratio_exclusions: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConformityReport {
    pub dataset: String,
    pub alpha: f64,
    pub metadata: ReportMetadata,
    pub slices: Vec<LawRecord>,
}

impl ConformityReport {
    pub fn new(dataset: impl Into<String>, alpha: f64) -> Self {
        ConformityReport {
            dataset: dataset.into(),
            alpha,
            metadata: ReportMetadata::default(),
            slices: Vec::new(),
        }
    }

    pub fn record(&self, label: &str, law: LawKind) -> Option<&LawRecord> {
        self.slices
            .iter()
            .find(|r| r.label == label && r.law == law)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Tallies `values` under every law in `laws` and tests each tally.
pub fn analyze(
    label: &str,
    values: &[ParsedValue],
    laws: &[LawKind],
    alpha: f64,
) -> Result<Vec<LawRecord>> {
    laws.iter()
        .map(|&law| {
            let t = tally(values, law);
            if t.n_included() == 0 {
                return Err(Error::Degenerate(format!(
                    "slice `{label}` has no nonzero numeric values"
                )));
            }
            LawRecord::new(label, &t, alpha)
        })
        .collect()
}

/// A variable to analyze, optionally with its negative and positive parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesSpec {
    pub name: String,
    pub split: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioSpec {
    pub numerator: String,
    pub denominator: String,
    pub split: bool,
}

impl RatioSpec {
    pub fn label(&self) -> String {
        format!("{}/{}", self.numerator, self.denominator)
    }
}

fn split_suffix(s: &str) -> Result<(&str, bool)> {
    match s.split_once(':') {
        Some((name, "split")) => Ok((name.trim(), true)),
        Some((_, other)) => Err(Error::Config(format!(
            "unknown modifier `{other}` in `{s}`"
        ))),
        None => Ok((s.trim(), false)),
    }
}

impl FromStr for SeriesSpec {
    type Err = Error;

    /// `NAME` or `NAME:split`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, split) = split_suffix(s)?;
        if name.is_empty() {
            return Err(Error::Config(format!("empty variable name in `{s}`")));
        }
        Ok(SeriesSpec {
            name: name.to_owned(),
            split,
        })
    }
}

impl FromStr for RatioSpec {
    type Err = Error;

    /// `NUM/DEN` or `NUM/DEN:split`.
    fn from_str(s: &str) -> Result<Self> {
        let (body, split) = split_suffix(s)?;
        match body.split_once('/') {
            Some((n, d)) if !n.trim().is_empty() && !d.trim().is_empty() => Ok(RatioSpec {
                numerator: n.trim().to_owned(),
                denominator: d.trim().to_owned(),
                split,
            }),
            _ => Err(Error::Config(format!(
                "ratio `{s}` is not of the form NUM/DEN"
            ))),
        }
    }
}

/// Which slices of a panel to analyze.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PanelSpec {
    pub variables: Vec<SeriesSpec>,
    pub ratios: Vec<RatioSpec>,
}

impl PanelSpec {
    /// Every variable of `panel`, unsplit, and no ratios.
    pub fn all_variables(panel: &Panel) -> Self {
        PanelSpec {
            variables: panel
                .variables()
                .map(|name| SeriesSpec {
                    name: name.to_owned(),
                    split: false,
                })
                .collect(),
            ratios: Vec::new(),
        }
    }
}

fn push_series(
    out: &mut Vec<LawRecord>,
    label: &str,
    series: &PanelSeries,
    split: bool,
    laws: &[LawKind],
    alpha: f64,
) -> Result<()> {
    let values = series.parsed_values();
    out.extend(analyze(label, &values, laws, alpha)?);
    if split {
        let parts = split_by_sign(&values);
        for (suffix, part) in [("(-)", parts.negatives), ("(+)", parts.positives)] {
            let part: Vec<ParsedValue> = part.into_iter().map(ParsedValue::Value).collect();
            out.extend(analyze(&format!("{label}{suffix}"), &part, laws, alpha)?);
        }
    }
    Ok(())
}

/// Runs every requested slice: variables first (full, then negative and
/// positive parts when split), then ratios, each under every law in `laws`.
pub fn analyze_panel(
    dataset: &str,
    panel: &Panel,
    spec: &PanelSpec,
    laws: &[LawKind],
    alpha: f64,
) -> Result<ConformityReport> {
    if laws.is_empty() {
        return Err(Error::Config("no digit laws requested".into()));
    }
    // Resolve every name before doing any work.
    for v in &spec.variables {
        panel.require(&v.name)?;
    }
    for r in &spec.ratios {
        panel.require(&r.numerator)?;
        panel.require(&r.denominator)?;
    }

    let mut report = ConformityReport::new(dataset, alpha);
    for v in &spec.variables {
        let series = panel.require(&v.name)?;
        push_series(&mut report.slices, &v.name, series, v.split, laws, alpha)?;
    }
    for r in &spec.ratios {
        let (ratio, excluded) =
            derive_ratio(panel.require(&r.numerator)?, panel.require(&r.denominator)?);
        let label = r.label();
        push_series(&mut report.slices, &label, &ratio, r.split, laws, alpha)?;
        report.metadata.ratio_exclusions.insert(label, excluded);
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    Json,
    Csv,
    #[default]
    Markdown,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "md" | "markdown" => Ok(Format::Markdown),
            other => Err(Error::Config(format!("unknown format `{other}`"))),
        }
    }
}

/// Serializes a report. JSON keeps full precision; CSV and Markdown round
/// frequencies to 5 decimals and statistics to 4.
pub fn render(report: &ConformityReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports always serialize");
            s.push('\n');
            s
        }
        Format::Csv => render_csv(report),
        Format::Markdown => render_markdown(report),
    }
}

const CSV_HEADER: [&str; 14] = [
    "slice",
    "law",
    "row",
    "bin",
    "count",
    "observed",
    "expected",
    "chi2",
    "df",
    "chi2_critical",
    "chi2_reject",
    "mad_paper",
    "mad_mean",
    "conformity",
];

fn render_csv(report: &ConformityReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in &report.slices {
        for i in 0..r.bins.len() {
            w.write_record([
                r.label.as_str(),
                r.law.name(),
                "bin",
                &r.bins[i].to_string(),
                &r.counts[i].to_string(),
                &format!("{:.5}", r.observed[i]),
                &format!("{:.5}", r.expected[i]),
                "",
                "",
                "",
                "",
                "",
                "",
                "",
            ])
            .expect("in-memory write");
        }
        w.write_record([
            r.label.as_str(),
            r.law.name(),
            "stats",
            "",
            &r.n.to_string(),
            "",
            "",
            &format!("{:.4}", r.chi2),
            &r.df.to_string(),
            &format!("{:.4}", r.chi2_critical),
            &r.chi2_reject.to_string(),
            &format!("{:.4}", r.mad_paper),
            &format!("{:.4}", r.mad_mean),
            &r.conformity.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

fn law_title(law: LawKind) -> &'static str {
    match law {
        LawKind::FirstDigit => "BL1, first digit",
        LawKind::SecondDigit => "BL2, second digit",
        LawKind::FirstTwoDigits => "BL12, first two digits",
    }
}

fn render_markdown(report: &ConformityReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {}\n", report.dataset);
    let _ = writeln!(
        out,
        "alpha = {}. MAD convention: {}.\n",
        report.alpha, report.metadata.mad_convention
    );

    let mut laws: Vec<LawKind> = Vec::new();
    for r in &report.slices {
        if !laws.contains(&r.law) {
            laws.push(r.law);
        }
    }
    for law in laws {
        let recs: Vec<&LawRecord> = report.slices.iter().filter(|r| r.law == law).collect();
        let _ = writeln!(out, "## {}\n", law_title(law));

        let mut header = String::from("| d |");
        let mut rule = String::from("|---|");
        for r in &recs {
            let _ = write!(header, " count {} |", r.label);
            rule.push_str("---:|");
        }
        for r in &recs {
            let _ = write!(header, " f {} |", r.label);
            rule.push_str("---:|");
        }
        let _ = write!(header, " {law} |");
        rule.push_str("---:|");
        let _ = writeln!(out, "{header}\n{rule}");

        let expected = &recs[0].expected;
        for (i, bin) in recs[0].bins.iter().enumerate() {
            let mut row = format!("| {bin} |");
            for r in &recs {
                let _ = write!(row, " {} |", r.counts[i]);
            }
            for r in &recs {
                let _ = write!(row, " {:.5} |", r.observed[i]);
            }
            let _ = write!(row, " {:.5} |", expected[i]);
            let _ = writeln!(out, "{row}");
        }

        let stat_row = |name: &str, f: &dyn Fn(&LawRecord) -> String| {
            let mut row = format!("| {name} |");
            for r in &recs {
                let _ = write!(row, " {} |", f(r));
            }
            row.push_str(&" |".repeat(recs.len() + 1));
            row
        };
        let rows = [
            stat_row("N", &|r| r.n.to_string()),
            stat_row("χ²", &|r| format!("{:.4}", r.chi2)),
            stat_row("χ²_c", &|r| format!("{:.4}", r.chi2_critical)),
            stat_row("χ² reject", &|r| {
                if r.chi2_reject { "yes" } else { "no" }.to_owned()
            }),
            stat_row("MAD (sum)", &|r| format!("{:.4}", r.mad_paper)),
            stat_row("MAD (mean)", &|r| format!("{:.4}", r.mad_mean)),
            stat_row("class (mean)", &|r| r.conformity.to_string()),
            stat_row("class (sum)", &|r| r.conformity_paper_sum.to_string()),
        ];
        for row in rows {
            let _ = writeln!(out, "{row}");
        }
        let df = recs[0].df;
        let _ = writeln!(
            out,
            "\ndf = {df}, critical value at alpha = {}.\n",
            report.alpha
        );
    }
    out
}

/// Plot-ready frequencies of one record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlotTable {
    /// File-name friendly identifier, e.g. `PI_neg.bl1`.
    pub name: String,
    /// `bin,observed,expected` rows at full precision.
    pub text: String,
}

fn file_stem(label: &str) -> String {
    label
        .replace("(-)", "_neg")
        .replace("(+)", "_pos")
        .replace('/', "_over_")
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

pub fn plot_data(report: &ConformityReport) -> Vec<PlotTable> {
    report
        .slices
        .iter()
        .map(|r| {
            let mut text = String::from("bin,observed,expected\n");
            for ((bin, fo), fe) in r.bins.iter().zip(&r.observed).zip(&r.expected) {
                let _ = writeln!(text, "{bin},{fo},{fe}");
            }
            PlotTable {
                name: format!("{}.{}", file_stem(&r.label), r.law.name()),
                text,
            }
        })
        .collect()
}
