//! Command-line front end for `digitlaw`.
//!
//! Each subcommand is a plain function writing to any [`Write`], so the
//! binary and the tests drive exactly the same code.

use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use digitlaw::dataset::{summary_stats, StatsMode, SummaryStats};
use digitlaw::report::{plot_data, RatioSpec, SeriesSpec};
use digitlaw::synth::{generate, SynthConfig, GENERATOR};
use digitlaw::{
    analyze_panel, expected_distribution, load_panel, render, ConformityReport, Error,
    IngestConfig, LawKind, Layout, Panel, PanelSpec, Result,
};

#[derive(Debug, Parser)]
#[command(
    name = "digitlaw",
    version,
    about = "Benford digit-law conformity analysis"
)]
pub struct Cli {
    /// Print ingest diagnostics to stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the expected distribution of one law.
    Expected(ExpectedArgs),
    /// Test the variables of a panel file against the digit laws.
    Analyze(AnalyzeArgs),
    /// Draw a Benford sample, optionally with injected roundings.
    Synth(SynthArgs),
    /// Summary statistics of one variable.
    Stats(StatsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    #[default]
    #[value(alias = "markdown")]
    Md,
}

impl From<OutputFormat> for digitlaw::Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Json => digitlaw::Format::Json,
            OutputFormat::Csv => digitlaw::Format::Csv,
            OutputFormat::Md => digitlaw::Format::Markdown,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum LayoutArg {
    #[default]
    Long,
    Wide,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ModeArg {
    #[default]
    Raw,
    Significand,
}

fn parse_law(s: &str) -> std::result::Result<LawKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct ExpectedArgs {
    #[arg(short, long, value_parser = parse_law)]
    pub law: LawKind,
    #[arg(short, long, value_enum, default_value_t)]
    pub format: OutputFormat,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// How to read a panel file.
#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pub layout: LayoutArg,
    #[arg(short, long, default_value_t = ',')]
    pub delimiter: char,
    /// Character stripped from value cells, e.g. `,` in `1,234`.
    #[arg(long)]
    pub thousands_sep: Option<char>,
    /// Accepted fiscal years, e.g. `2009-2022`.
    #[arg(long, value_parser = parse_year_range)]
    pub years: Option<(i32, i32)>,
}

fn parse_year_range(s: &str) -> std::result::Result<(i32, i32), String> {
    let bad = || format!("`{s}` is not a year range like 2009-2022");
    let (a, b) = s.split_once('-').ok_or_else(bad)?;
    let (a, b) = (
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    );
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

impl InputArgs {
    fn config(&self) -> Result<IngestConfig> {
        if !self.delimiter.is_ascii() {
            return Err(Error::Config(format!(
                "delimiter `{}` is not ASCII",
                self.delimiter
            )));
        }
        Ok(IngestConfig {
            layout: match self.layout {
                LayoutArg::Long => Layout::Long,
                LayoutArg::Wide => Layout::Wide,
            },
            delimiter: self.delimiter as u8,
            thousands_separator: self.thousands_sep,
            year_range: self.years,
        })
    }

    fn load(&self, verbose: u8) -> Result<Panel> {
        let config = self.config()?;
        let file = File::open(&self.input).map_err(|e| {
            Error::Io(io::Error::new(
                e.kind(),
                format!("{}: {e}", self.input.display()),
            ))
        })?;
        let panel = load_panel(BufReader::new(file), &config)?;
        if verbose > 0 {
            eprintln!(
                "read {} rows, {} variables, {} missing cells",
                panel.rows_read,
                panel.series.len(),
                panel.missing_cells
            );
        }
        Ok(panel)
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Variables to test, `NAME` or `NAME:split`; all columns when omitted.
    #[arg(short = 'V', long, value_delimiter = ',')]
    pub variables: Vec<String>,
    /// Ratio series `NUM/DEN`, optionally `NUM/DEN:split`.
    #[arg(short, long, value_delimiter = ',')]
    pub ratio: Vec<String>,
    #[arg(short, long, value_delimiter = ',', value_parser = parse_law,
          default_values = ["bl1", "bl2", "bl12"])]
    pub laws: Vec<LawKind>,
    #[arg(short, long, default_value_t = digitlaw::conformity::DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(short, long, value_enum, default_value_t)]
    pub format: OutputFormat,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Directory receiving one `bin,observed,expected` csv per slice and law.
    #[arg(long)]
    pub plot_dir: Option<PathBuf>,
    /// Dataset name in the report; defaults to the input file name.
    #[arg(long)]
    pub dataset: Option<String>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(short, long, default_value_t = 1000)]
    pub n: usize,
    #[arg(short, long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub exponent_min: i32,
    #[arg(long, default_value_t = 9, allow_hyphen_values = true)]
    pub exponent_max: i32,
    #[arg(long, default_value_t = 0.0)]
    pub negative_fraction: f64,
    /// Probability of rounding up each value whose second digit is 9.
    #[arg(long, default_value_t = 0.0)]
    pub inject_rounding: f64,
    /// Analyze the sample and print the report instead of the sample.
    #[arg(long)]
    pub self_test: bool,
    /// With `--self-test`, also save the sample here.
    #[arg(long)]
    pub sample: Option<PathBuf>,
    #[arg(short = 'V', long, default_value = "X")]
    pub variable: String,
    #[arg(short, long, value_delimiter = ',', value_parser = parse_law,
          default_values = ["bl1", "bl2", "bl12"])]
    pub laws: Vec<LawKind>,
    #[arg(short, long, default_value_t = digitlaw::conformity::DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(short, long, value_enum, default_value_t)]
    pub format: OutputFormat,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(short = 'V', long)]
    pub variable: String,
    #[arg(short, long, value_enum, default_value_t)]
    pub mode: ModeArg,
    #[arg(short, long, value_enum, default_value_t)]
    pub format: OutputFormat,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Exit status for an error: 2 for bad or unreadable data, 1 otherwise.
pub fn exit_code(err: &Error) -> u8 {
    if err.is_data_error() {
        2
    } else {
        1
    }
}

/// Runs a parsed command line, writing to `stdout` unless an `--output`
/// file is given.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let (text, output) = match &cli.command {
        Command::Expected(a) => (cmd_expected(a.law, a.format)?, &a.output),
        Command::Analyze(a) => (cmd_analyze(a, cli.verbose)?, &a.output),
        Command::Synth(a) => (cmd_synth(a)?, &a.output),
        Command::Stats(a) => (cmd_stats(a, cli.verbose)?, &a.output),
    };
    match output {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn cmd_expected(law: LawKind, format: OutputFormat) -> Result<String> {
    let dist = expected_distribution(law);
    let mut s = String::new();
    match format {
        OutputFormat::Md => {
            s.push_str(&format!("| {law} | expected |\n|---:|---:|\n"));
            for (bin, p) in dist.iter() {
                s.push_str(&format!("| {bin} | {p:.5} |\n"));
            }
        }
        OutputFormat::Csv => {
            s.push_str("bin,expected\n");
            for (bin, p) in dist.iter() {
                s.push_str(&format!("{bin},{p}\n"));
            }
        }
        OutputFormat::Json => {
            let rows: Vec<_> = dist
                .iter()
                .map(|(bin, p)| serde_json::json!({ "bin": bin, "expected": p }))
                .collect();
            s = serde_json::to_string_pretty(&serde_json::json!({ "law": law, "bins": rows }))?;
            s.push('\n');
        }
    }
    Ok(s)
}

fn panel_spec(variables: &[String], ratios: &[String], panel: &Panel) -> Result<PanelSpec> {
    let mut spec = if variables.is_empty() {
        PanelSpec::all_variables(panel)
    } else {
        PanelSpec {
            variables: variables
                .iter()
                .map(|v| v.parse::<SeriesSpec>())
                .collect::<Result<_>>()?,
            ratios: Vec::new(),
        }
    };
    spec.ratios = ratios
        .iter()
        .map(|r| r.parse::<RatioSpec>())
        .collect::<Result<_>>()?;
    Ok(spec)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )))
    }
}

pub fn cmd_analyze(args: &AnalyzeArgs, verbose: u8) -> Result<String> {
    check_alpha(args.alpha)?;
    let panel = args.input.load(verbose)?;
    let spec = panel_spec(&args.variables, &args.ratio, &panel)?;
    if spec.variables.is_empty() && spec.ratios.is_empty() {
        return Err(Error::Degenerate("the input has no variables".into()));
    }
    let dataset = args
        .dataset
        .clone()
        .unwrap_or_else(|| file_label(&args.input.input));
    let report = analyze_panel(&dataset, &panel, &spec, &args.laws, args.alpha)?;
    if verbose > 0 {
        for (label, ex) in &report.metadata.ratio_exclusions {
            eprintln!(
                "{label}: excluded {} missing operand, {} zero denominator, {} non-finite",
                ex.missing_operand, ex.zero_denominator, ex.non_finite
            );
        }
    }
    if let Some(dir) = &args.plot_dir {
        write_plots(dir, &report)?;
    }
    Ok(render(&report, args.format.into()))
}

fn file_label(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn write_plots(dir: &Path, report: &ConformityReport) -> Result<()> {
    fs::create_dir_all(dir)?;
    for table in plot_data(report) {
        let name: String = table
            .name
            .chars()
            .map(|c| {
                if c.is_ascii_alphanumeric() || "._-".contains(c) {
                    c
                } else {
                    '_'
                }
            })
            .collect();
        fs::write(dir.join(format!("{name}.csv")), table.text)?;
    }
    Ok(())
}

/// The sample as a long-form panel: one company per value, year 0.
pub fn synth_csv(args: &SynthArgs) -> Result<String> {
    let values = generate(&synth_config(args))?;
    let mut s = String::with_capacity(values.len() * 32);
    s.push_str("company,year,variable,value\n");
    for (i, v) in values.iter().enumerate() {
        s.push_str(&format!("s{i},0,{},{v}\n", args.variable));
    }
    Ok(s)
}

fn synth_config(args: &SynthArgs) -> SynthConfig {
    SynthConfig {
        n: args.n,
        seed: args.seed,
        exponent_range: (args.exponent_min, args.exponent_max),
        negative_fraction: args.negative_fraction,
        inject_rounding: args.inject_rounding,
    }
}

pub fn cmd_synth(args: &SynthArgs) -> Result<String> {
    let config = synth_config(args);
    config.validate()?;
    if args.variable.contains([',', '\n', '"']) || args.variable.trim().is_empty() {
        return Err(Error::Config(format!(
            "unusable variable name `{}`",
            args.variable
        )));
    }
    let sample = synth_csv(args)?;
    if !args.self_test {
        return Ok(sample);
    }
    check_alpha(args.alpha)?;
    if let Some(path) = &args.sample {
        fs::write(path, &sample)?;
    }
    let panel = load_panel(sample.as_bytes(), &IngestConfig::default())?;
    let spec = PanelSpec::all_variables(&panel);
    let mut report = analyze_panel("synthetic", &panel, &spec, &args.laws, args.alpha)?;
    report.metadata.generator = Some(format!(
        "{GENERATOR}; n={} seed={} exponents={}..={} negative_fraction={} inject_rounding={}",
        config.n,
        config.seed,
        config.exponent_range.0,
        config.exponent_range.1,
        config.negative_fraction,
        config.inject_rounding
    ));
    Ok(render(&report, args.format.into()))
}

pub fn cmd_stats(args: &StatsArgs, verbose: u8) -> Result<String> {
    let panel = args.input.load(verbose)?;
    let series = panel.require(&args.variable)?;
    let mode = match args.mode {
        ModeArg::Raw => StatsMode::Raw,
        ModeArg::Significand => StatsMode::Significand,
    };
    let stats = summary_stats(&series.parsed_values(), mode)?;
    render_stats(&args.variable, &stats, args.format)
}

const STATS_COLUMNS: [&str; 9] = [
    "variable",
    "n",
    "min",
    "max",
    "mean",
    "stdev",
    "skewness",
    "excess_kurtosis",
    "cv",
];

fn render_stats(variable: &str, s: &SummaryStats, format: OutputFormat) -> Result<String> {
    let cells = [
        variable.to_owned(),
        s.n.to_string(),
        format!("{:.4}", s.min),
        format!("{:.4}", s.max),
        format!("{:.4}", s.mean),
        format!("{:.4}", s.stdev),
        format!("{:.4}", s.skewness),
        format!("{:.4}", s.excess_kurtosis),
        format!("{:.4}", s.cv),
    ];
    Ok(match format {
        OutputFormat::Md => format!(
            "| {} |\n|{}\n| {} |\n",
            STATS_COLUMNS.join(" | "),
            "---|".repeat(STATS_COLUMNS.len()),
            cells.join(" | ")
        ),
        OutputFormat::Csv => format!("{}\n{}\n", STATS_COLUMNS.join(","), cells.join(",")),
        OutputFormat::Json => {
            let mut v = serde_json::to_value(s)?;
            v["variable"] = variable.into();
            let mut out = serde_json::to_string_pretty(&v)?;
            out.push('\n');
            out
        }
    })
}
