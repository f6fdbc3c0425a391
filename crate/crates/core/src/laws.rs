//! Closed-form Benford probabilities for the first digit, the second digit
//! and the first-two-digit pair.
//!
//! Every probability is computed from its logarithmic formula in double
//! precision; there are no lookup tables.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which digit law a tally or distribution refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LawKind {
    /// First significant digit, bins 1..=9.
    #[serde(rename = "bl1")]
    FirstDigit,
    /// Second significant digit, bins 0..=9.
    #[serde(rename = "bl2")]
    SecondDigit,
    /// First two significant digits, bins 10..=99.
    #[serde(rename = "bl12")]
    FirstTwoDigits,
}

impl LawKind {
    pub const ALL: [LawKind; 3] = [
        LawKind::FirstDigit,
        LawKind::SecondDigit,
        LawKind::FirstTwoDigits,
    ];

    pub fn bins(self) -> RangeInclusive<u32> {
        match self {
            LawKind::FirstDigit => 1..=9,
            LawKind::SecondDigit => 0..=9,
            LawKind::FirstTwoDigits => 10..=99,
        }
    }

    /// Number of bins, `K` in the MAD definition.
    pub fn bin_count(self) -> usize {
        match self {
            LawKind::FirstDigit => 9,
            LawKind::SecondDigit => 10,
            LawKind::FirstTwoDigits => 90,
        }
    }

    pub fn contains(self, bin: u32) -> bool {
        self.bins().contains(&bin)
    }

    /// Position of `bin` in the ascending bin order.
    pub fn index_of(self, bin: u32) -> Option<usize> {
        self.contains(bin)
            .then(|| (bin - self.bins().start()) as usize)
    }

    /// Short lowercase name used on the command line and in serialized output.
    pub fn name(self) -> &'static str {
        match self {
            LawKind::FirstDigit => "bl1",
            LawKind::SecondDigit => "bl2",
            LawKind::FirstTwoDigits => "bl12",
        }
    }
}

impl fmt::Display for LawKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LawKind::FirstDigit => "BL1",
            LawKind::SecondDigit => "BL2",
            LawKind::FirstTwoDigits => "BL12",
        };
        f.write_str(s)
    }
}

impl FromStr for LawKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bl1" | "first" | "fd" => Ok(LawKind::FirstDigit),
            "bl2" | "second" | "sd" => Ok(LawKind::SecondDigit),
            "bl12" | "first-two" | "fsd" => Ok(LawKind::FirstTwoDigits),
            other => Err(Error::Config(format!("unknown law `{other}`"))),
        }
    }
}

/// `log10(1 + 1/i)` for a first digit `i` in 1..=9.
pub fn expected_first_digit(digit: u32) -> Result<f64> {
    check(LawKind::FirstDigit, digit)?;
    Ok(log_law(digit))
}

/// Probability of second digit `j`, summed over all nine possible leading
/// digits.
pub fn expected_second_digit(digit: u32) -> Result<f64> {
    check(LawKind::SecondDigit, digit)?;
    Ok((1..=9).map(|k| log_law(10 * k + digit)).sum())
}

/// `log10(1 + 1/b)` for a first-two-digit bin `b` in 10..=99.
pub fn expected_first_two(bin: u32) -> Result<f64> {
    check(LawKind::FirstTwoDigits, bin)?;
    Ok(log_law(bin))
}

fn log_law(n: u32) -> f64 {
    (1.0 + 1.0 / f64::from(n)).log10()
}

fn check(kind: LawKind, bin: u32) -> Result<()> {
    if kind.contains(bin) {
        Ok(())
    } else {
        Err(Error::BinOutOfRange { kind, bin })
    }
}

/// A full Benford distribution over the bins of one law, in ascending bin
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedDistribution {
    kind: LawKind,
    probs: Vec<f64>,
}

impl ExpectedDistribution {
    pub fn new(kind: LawKind) -> Self {
        let f = match kind {
            LawKind::FirstDigit => expected_first_digit,
            LawKind::SecondDigit => expected_second_digit,
            LawKind::FirstTwoDigits => expected_first_two,
        };
        let probs = kind
            .bins()
            .map(|b| f(b).expect("bin iterated from the law's own domain"))
            .collect();
        ExpectedDistribution { kind, probs }
    }

    pub fn kind(&self) -> LawKind {
        self.kind
    }

    /// Probabilities in ascending bin order.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, bin: u32) -> Option<f64> {
        self.kind.index_of(bin).map(|i| self.probs[i])
    }

    /// `(bin, probability)` pairs in ascending bin order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.kind.bins().zip(self.probs.iter().copied())
    }
}

pub fn expected_distribution(kind: LawKind) -> ExpectedDistribution {
    ExpectedDistribution::new(kind)
}

#[cfg(test)]
#[allow(clippy::approx_constant)]
mod tests {
    use super::*;

    fn round4(x: f64) -> f64 {
        (x * 1e4).round() / 1e4
    }

    #[test]
    fn first_digit_values() {
        assert!((expected_first_digit(1).unwrap() - 0.30103).abs() < 5e-6);
        assert_eq!(round4(expected_first_digit(9).unwrap()), 0.0458);
        let total: f64 = (1..=9).map(|i| expected_first_digit(i).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn second_digit_values() {
        assert_eq!(round4(expected_second_digit(0).unwrap()), 0.1197);
        assert_eq!(round4(expected_second_digit(9).unwrap()), 0.0850);
        for j in 0..=9 {
            let marginal: f64 = (1..=9)
                .map(|i| expected_first_two(10 * i + j).unwrap())
                .sum();
            assert!((marginal - expected_second_digit(j).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn first_two_values() {
        assert_eq!(round4(expected_first_two(10).unwrap()), 0.0414);
        assert_eq!(round4(expected_first_two(50).unwrap()), 0.0086);
        assert_eq!(round4(expected_first_two(99).unwrap()), 0.0044);
    }

    #[test]
    fn out_of_range_bins() {
        assert!(matches!(
            expected_first_digit(0),
            Err(Error::BinOutOfRange { bin: 0, .. })
        ));
        assert!(expected_first_digit(10).is_err());
        assert!(expected_second_digit(10).is_err());
        assert!(expected_first_two(9).is_err());
        assert!(expected_first_two(100).is_err());
    }

    #[test]
    fn distributions() {
        let bl1 = expected_distribution(LawKind::FirstDigit);
        assert_eq!(bl1.probs().len(), 9);
        let (bin, p) = bl1.iter().next().unwrap();
        assert_eq!(bin, 1);
        assert!((p - 0.30103).abs() < 5e-6);

        let bl2 = expected_distribution(LawKind::SecondDigit);
        assert_eq!(bl2.probs().len(), 10);
        assert_eq!(round4(bl2.prob(1).unwrap()), 0.1139);

        let bl12 = expected_distribution(LawKind::FirstTwoDigits);
        assert_eq!(bl12.probs().len(), 90);
        for d in [&bl1, &bl2, &bl12] {
            let total: f64 = d.probs().iter().sum();
            assert!((total - 1.0).abs() < 1e-12, "{} sums to {total}", d.kind());
            assert!(d.probs().windows(2).all(|w| w[0] > w[1]));
        }
    }

    #[test]
    fn first_digit_marginal_of_pairs() {
        for i in 1..=9 {
            let row: f64 = (0..=9)
                .map(|j| expected_first_two(10 * i + j).unwrap())
                .sum();
            assert!((row - expected_first_digit(i).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn law_names_parse() {
        for kind in LawKind::ALL {
            assert_eq!(kind.name().parse::<LawKind>().unwrap(), kind);
        }
        assert!("bl9".parse::<LawKind>().is_err());
    }
}
