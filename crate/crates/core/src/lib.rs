//! Benford digit-law conformity testing.
//!
//! `digitlaw` checks whether a set of reported figures follows the
//! logarithmic laws of significant digits:
//!
//! * BL1, the first significant digit, `P(d₁ = i) = log10(1 + 1/i)`;
//! * BL2, the second significant digit, `P(d₂ = j) = Σₖ log10(1 + 1/(10k + j))`;
//! * BL12, the first two digits together, `P(d₁d₂ = b) = log10(1 + 1/b)`.
//!
//! Observed digit counts are compared with the law through Pearson's χ² and
//! the mean absolute deviation (MAD). The crate also ingests company × year
//! panels, derives ratios between variables, splits series by sign and
//! generates synthetic Benford samples with controlled rounding
//! manipulation for power studies.
//!
//! ```
//! use digitlaw::{parse_decimal, report::analyze, LawKind};
//!
//! let values: Vec<_> = ["1204.5", "-37.1", "0.0098", "250", ""]
//!     .iter()
//!     .map(|s| parse_decimal(s))
//!     .collect();
//! let records = analyze("toy", &values, &[LawKind::FirstDigit], 0.05).unwrap();
//! assert_eq!(records[0].n, 4);
//! assert_eq!(records[0].excluded.nonnumeric, 1);
//! ```
//!
//! The `book/` directory of the repository walks through each concept with
//! runnable examples; every snippet there is compiled and run as a doc-test
//! of this crate.

pub mod conformity;
pub mod dataset;
pub mod digits;
mod error;
pub mod laws;
pub mod reference;
pub mod report;
pub mod special;
pub mod synth;

pub use conformity::{
    chi_square, chi_square_critical, classify, mad_mean, mad_paper, run_test, ConformityClass,
    TestResult,
};
pub use dataset::{load_panel, IngestConfig, Layout, Panel, PanelSeries};
pub use digits::{parse_decimal, tally, DecimalValue, DigitTally, ParsedValue};
pub use error::{Error, Result};
pub use laws::{expected_distribution, ExpectedDistribution, LawKind};
pub use report::{analyze_panel, render, ConformityReport, Format, PanelSpec};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/laws.md")]
    mod laws {}
    #[doc = include_str!("../../../book/src/digits.md")]
    mod digits {}
    #[doc = include_str!("../../../book/src/tests.md")]
    mod tests {}
    #[doc = include_str!("../../../book/src/panels.md")]
    mod panels {}
    #[doc = include_str!("../../../book/src/synthetic.md")]
    mod synthetic {}
    #[doc = include_str!("../../../book/src/reports.md")]
    mod reports {}
}
