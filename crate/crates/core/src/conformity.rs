//! Chi-square and MAD conformity statistics.
//!
//! Two forms of the mean absolute deviation are reported side by side:
//!
//! * `mad_paper` is the plain sum `Σ |f_o − f_e|` over all bins, which is the
//!   figure commonly printed in digit-analysis tables;
//! * `mad_mean` divides that sum by the bin count `K`, which is the quantity
//!   the conventional conformity thresholds are calibrated against.
//!
//! Conformity classes are assigned from `mad_mean`. The class of the sum
//! form is kept as well so a reader can see when the two readings disagree.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::digits::DigitTally;
use crate::error::{Error, Result};
use crate::laws::{ExpectedDistribution, LawKind};
use crate::special;

pub const DEFAULT_ALPHA: f64 = 0.05;

/// Ordered verdict from the MAD thresholds, best first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConformityClass {
    Close,
    Acceptable,
    Marginal,
    Nonconforming,
}

impl fmt::Display for ConformityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConformityClass::Close => "close",
            ConformityClass::Acceptable => "acceptable",
            ConformityClass::Marginal => "marginal",
            ConformityClass::Nonconforming => "nonconforming",
        })
    }
}

/// Upper bounds (inclusive) of the close, acceptable and marginal classes.
///
/// BL1 uses 0.006 / 0.012 / 0.015. For BL2 and BL12 only the close bound is
/// standard in the forensic literature (0.008 and 0.0012); the other two
/// bounds follow Nigrini's tables.
pub fn mad_thresholds(kind: LawKind) -> [f64; 3] {
    match kind {
        LawKind::FirstDigit => [0.006, 0.012, 0.015],
        LawKind::SecondDigit => [0.008, 0.010, 0.012],
        LawKind::FirstTwoDigits => [0.0012, 0.0018, 0.0022],
    }
}

/// Summary of one conformity test of a tally against its law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub kind: LawKind,
    pub chi2: f64,
    pub df: usize,
    pub chi2_critical: f64,
    pub chi2_p_value: f64,
    pub chi2_reject: bool,
    pub mad_paper: f64,
    pub mad_mean: f64,
    /// Class from `mad_mean`.
    pub conformity: ConformityClass,
    /// Class obtained by reading `mad_paper` against the same thresholds.
    pub conformity_paper_sum: ConformityClass,
    pub alpha: f64,
}

impl TestResult {
    /// True when the two MAD readings land in different classes.
    pub fn mad_forms_disagree(&self) -> bool {
        self.conformity != self.conformity_paper_sum
    }
}

fn check_pair(tally: &DigitTally, expected: &ExpectedDistribution) -> Result<()> {
    if tally.kind() != expected.kind() {
        return Err(Error::KindMismatch {
            expected: expected.kind(),
            found: tally.kind(),
        });
    }
    if tally.n_included() == 0 {
        return Err(Error::Degenerate(format!(
            "cannot test an empty {} tally",
            tally.kind()
        )));
    }
    Ok(())
}

/// Pearson statistic `Σ (O − E)² / E` with `E = n · p`, and its degrees of
/// freedom (bin count minus one). No continuity correction.
pub fn chi_square(tally: &DigitTally, expected: &ExpectedDistribution) -> Result<(f64, usize)> {
    check_pair(tally, expected)?;
    let n = tally.n_included() as f64;
    let stat = tally
        .counts()
        .iter()
        .zip(expected.probs())
        .map(|(&o, &p)| {
            let e = n * p;
            let d = o as f64 - e;
            d * d / e
        })
        .sum();
    Ok((stat, tally.kind().bin_count() - 1))
}

/// Upper-tail critical value of χ²(`df`) at significance `alpha`.
pub fn chi_square_critical(df: usize, alpha: f64) -> Result<f64> {
    if df == 0 {
        return Err(Error::InvalidParameter(
            "degrees of freedom must be at least 1".into(),
        ));
    }
    check_alpha(alpha)?;
    Ok(special::chi_square_isf(alpha, df as f64))
}

/// Probability of a χ²(`df`) variate exceeding `stat`.
pub fn chi_square_p_value(stat: f64, df: usize) -> Result<f64> {
    if df == 0 {
        return Err(Error::InvalidParameter(
            "degrees of freedom must be at least 1".into(),
        ));
    }
    if stat.is_nan() || stat < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "chi-square statistic {stat} is negative"
        )));
    }
    Ok(special::chi_square_sf(stat, df as f64))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "significance level {alpha} is not in (0, 1)"
        )))
    }
}

/// `Σ |f_o − f_e|` over all bins.
pub fn mad_paper(tally: &DigitTally, expected: &ExpectedDistribution) -> Result<f64> {
    check_pair(tally, expected)?;
    let n = tally.n_included() as f64;
    Ok(tally
        .counts()
        .iter()
        .zip(expected.probs())
        .map(|(&o, &p)| (o as f64 / n - p).abs())
        .sum())
}

/// [`mad_paper`] divided by the bin count.
pub fn mad_mean(tally: &DigitTally, expected: &ExpectedDistribution) -> Result<f64> {
    Ok(mad_paper(tally, expected)? / tally.kind().bin_count() as f64)
}

/// Maps a MAD value onto the law's classes. Boundaries belong to the lower
/// (better) class.
pub fn classify(mad: f64, kind: LawKind) -> Result<ConformityClass> {
    if mad.is_nan() || mad < 0.0 {
        return Err(Error::InvalidParameter(format!("MAD {mad} is negative")));
    }
    let [close, acceptable, marginal] = mad_thresholds(kind);
    Ok(if mad <= close {
        ConformityClass::Close
    } else if mad <= acceptable {
        ConformityClass::Acceptable
    } else if mad <= marginal {
        ConformityClass::Marginal
    } else {
        ConformityClass::Nonconforming
    })
}

pub fn run_test(
    tally: &DigitTally,
    expected: &ExpectedDistribution,
    alpha: f64,
) -> Result<TestResult> {
    check_alpha(alpha)?;
    let (chi2, df) = chi_square(tally, expected)?;
    let chi2_critical = chi_square_critical(df, alpha)?;
    let mad_paper = mad_paper(tally, expected)?;
    let mad_mean = mad_paper / tally.kind().bin_count() as f64;
    Ok(TestResult {
        kind: tally.kind(),
        chi2,
        df,
        chi2_critical,
        chi2_p_value: chi_square_p_value(chi2, df)?,
        chi2_reject: chi2 > chi2_critical,
        mad_paper,
        mad_mean,
        conformity: classify(mad_mean, tally.kind())?,
        conformity_paper_sum: classify(mad_paper, tally.kind())?,
        alpha,
    })
}
