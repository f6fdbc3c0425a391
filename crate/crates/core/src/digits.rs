//! Exact significant-digit extraction.
//!
//! Numbers are parsed from their decimal text into a sign, a string of
//! significant digits and a power-of-ten exponent. Digit extraction reads the
//! digit string directly, so values such as `0.1` or `1e-7` never go through a
//! binary floating-point logarithm.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laws::LawKind;

/// Significant digits kept when a computed `f64` is turned into a decimal.
pub const F64_SIGNIFICANT_DIGITS: usize = 15;

/// A nonzero decimal number in canonical form.
///
/// The value is `sign × d₁.d₂d₃… × 10^exponent`. The digit string starts with
/// a nonzero digit and carries no trailing zeros, so every number has exactly
/// one representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DecimalValue {
    negative: bool,
    digits: String,
    exponent: i32,
}

/// Result of parsing one cell or literal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ParsedValue {
    Value(DecimalValue),
    Zero,
    /// Blank, missing or unparseable text.
    NonNumeric,
}

impl DecimalValue {
    /// Builds a value from raw parts. `digits` may carry trailing zeros; they
    /// are stripped. Returns `None` if `digits` is empty, contains a non-digit
    /// or starts with `0`.
    pub fn from_parts(negative: bool, digits: &str, exponent: i32) -> Option<Self> {
        let trimmed = digits.trim_end_matches('0');
        if trimmed.is_empty()
            || !trimmed.bytes().all(|b| b.is_ascii_digit())
            || trimmed.starts_with('0')
        {
            return None;
        }
        Some(DecimalValue {
            negative,
            digits: trimmed.to_owned(),
            exponent,
        })
    }

    /// Converts a computed number by rendering it at
    /// [`F64_SIGNIFICANT_DIGITS`] significant digits.
    pub fn from_f64(x: f64) -> ParsedValue {
        if !x.is_finite() {
            return ParsedValue::NonNumeric;
        }
        if x == 0.0 {
            return ParsedValue::Zero;
        }
        parse_decimal(&format!("{:.*e}", F64_SIGNIFICANT_DIGITS - 1, x))
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    /// `+1` or `-1`.
    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    /// Significant digits without trailing zeros.
    pub fn digits(&self) -> &str {
        &self.digits
    }

    /// Power of ten of the leading digit.
    pub fn exponent(&self) -> i32 {
        self.exponent
    }

    pub fn negate(&self) -> Self {
        DecimalValue {
            negative: !self.negative,
            ..self.clone()
        }
    }

    pub fn abs(&self) -> Self {
        DecimalValue {
            negative: false,
            ..self.clone()
        }
    }

    /// Multiplies by `10^shift`. Returns `None` on exponent overflow.
    pub fn scale_pow10(&self, shift: i32) -> Option<Self> {
        Some(DecimalValue {
            exponent: self.exponent.checked_add(shift)?,
            ..self.clone()
        })
    }

    fn digit_at(&self, pos: usize) -> u32 {
        self.digits
            .as_bytes()
            .get(pos)
            .map_or(0, |b| u32::from(b - b'0'))
    }

    pub fn first_digit(&self) -> u32 {
        self.digit_at(0)
    }

    /// Second significant digit; `0` when the value has a single significant
    /// digit (`500` is `5.0 × 10²`).
    pub fn second_digit(&self) -> u32 {
        self.digit_at(1)
    }

    pub fn first_two(&self) -> u32 {
        10 * self.first_digit() + self.second_digit()
    }

    /// The bin this value falls in under `kind`.
    pub fn bin(&self, kind: LawKind) -> u32 {
        match kind {
            LawKind::FirstDigit => self.first_digit(),
            LawKind::SecondDigit => self.second_digit(),
            LawKind::FirstTwoDigits => self.first_two(),
        }
    }

    /// Signed significand `±d₁.d₂d₃…`, with magnitude in `[1, 10)`.
    pub fn significand(&self) -> f64 {
        let mut text = String::with_capacity(self.digits.len() + 2);
        if self.negative {
            text.push('-');
        }
        text.push_str(&self.digits[..1]);
        if self.digits.len() > 1 {
            text.push('.');
            text.push_str(&self.digits[1..]);
        }
        let s: f64 = text.parse().expect("digit string is a valid float literal");
        // A very long digit string such as 9.99…9 can round up to 10.
        if s.abs() >= 10.0 {
            f64::from(self.sign()) * 9.999_999_999_999_998
        } else {
            s
        }
    }

    /// Nearest `f64` to the full value.
    pub fn to_f64(&self) -> f64 {
        self.to_string().parse().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for DecimalValue {
    /// Canonical scientific rendering, e.g. `-3.45e-3` or `5e2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        f.write_str(&self.digits[..1])?;
        if self.digits.len() > 1 {
            write!(f, ".{}", &self.digits[1..])?;
        }
        write!(f, "e{}", self.exponent)
    }
}

impl ParsedValue {
    pub fn as_value(&self) -> Option<&DecimalValue> {
        match self {
            ParsedValue::Value(v) => Some(v),
            _ => None,
        }
    }

    /// Bin under `kind`, failing for zero and non-numeric input.
    pub fn bin(&self, kind: LawKind) -> Result<u32> {
        match self {
            ParsedValue::Value(v) => Ok(v.bin(kind)),
            ParsedValue::Zero => Err(Error::ZeroValue),
            ParsedValue::NonNumeric => Err(Error::NonNumeric),
        }
    }

    pub fn significand(&self) -> Result<f64> {
        match self {
            ParsedValue::Value(v) => Ok(v.significand()),
            ParsedValue::Zero => Err(Error::ZeroValue),
            ParsedValue::NonNumeric => Err(Error::NonNumeric),
        }
    }
}

impl FromStr for DecimalValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match parse_decimal(s) {
            ParsedValue::Value(v) => Ok(v),
            ParsedValue::Zero => Err(Error::ZeroValue),
            ParsedValue::NonNumeric => Err(Error::NonNumeric),
        }
    }
}

/// Parses plain (`-0.003`, `123.45`) or scientific (`1.2345e8`) notation.
///
/// Never fails: zero in any spelling maps to [`ParsedValue::Zero`] and
/// anything else that is not a number, including blank text, maps to
/// [`ParsedValue::NonNumeric`].
pub fn parse_decimal(text: &str) -> ParsedValue {
    parse_inner(text.trim()).unwrap_or(ParsedValue::NonNumeric)
}

fn parse_inner(s: &str) -> Option<ParsedValue> {
    let (negative, rest) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exp_part) = match rest.find(['e', 'E']) {
        Some(pos) => (&rest[..pos], Some(&rest[pos + 1..])),
        None => (rest, None),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let all_digits = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
    if int_part.len() + frac_part.len() == 0 || !all_digits(int_part) || !all_digits(frac_part) {
        return None;
    }
    let exp: i64 = match exp_part {
        Some(e) => {
            let body = e.strip_prefix(['+', '-']).unwrap_or(e);
            if body.is_empty() || body.len() > 12 || !all_digits(body) {
                return None;
            }
            e.parse().ok()?
        }
        None => 0,
    };

    let combined = format!("{int_part}{frac_part}");
    let leading = combined.bytes().take_while(|&b| b == b'0').count();
    if leading == combined.len() {
        return Some(ParsedValue::Zero);
    }
    let significant = combined[leading..].trim_end_matches('0');
    // Position of the leading digit relative to the decimal point.
    let lead_pos = int_part.len() as i64 - leading as i64 - 1;
    let exponent = i32::try_from(exp.checked_add(lead_pos)?).ok()?;
    Some(ParsedValue::Value(DecimalValue {
        negative,
        digits: significant.to_owned(),
        exponent,
    }))
}

/// Observed bin counts for one law over one series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitTally {
    kind: LawKind,
    counts: Vec<u64>,
    n_included: u64,
    n_excluded_zero: u64,
    n_excluded_nonnumeric: u64,
}

impl DigitTally {
    pub fn empty(kind: LawKind) -> Self {
        DigitTally {
            kind,
            counts: vec![0; kind.bin_count()],
            n_included: 0,
            n_excluded_zero: 0,
            n_excluded_nonnumeric: 0,
        }
    }

    /// Builds a tally directly from counts in ascending bin order.
    pub fn from_counts(kind: LawKind, counts: &[u64]) -> Result<Self> {
        if counts.len() != kind.bin_count() {
            return Err(Error::InvalidParameter(format!(
                "{kind} needs {} counts, got {}",
                kind.bin_count(),
                counts.len()
            )));
        }
        Ok(DigitTally {
            kind,
            counts: counts.to_vec(),
            n_included: counts.iter().sum(),
            n_excluded_zero: 0,
            n_excluded_nonnumeric: 0,
        })
    }

    pub fn push(&mut self, value: &ParsedValue) {
        match value {
            ParsedValue::Value(v) => self.push_value(v),
            ParsedValue::Zero => self.n_excluded_zero += 1,
            ParsedValue::NonNumeric => self.n_excluded_nonnumeric += 1,
        }
    }

    pub fn push_value(&mut self, value: &DecimalValue) {
        let idx = self
            .kind
            .index_of(value.bin(self.kind))
            .expect("canonical decimals always land in the law's domain");
        self.counts[idx] += 1;
        self.n_included += 1;
    }

    /// Adds another partial tally of the same law.
    pub fn merge(mut self, other: &DigitTally) -> Result<Self> {
        if self.kind != other.kind {
            return Err(Error::KindMismatch {
                expected: self.kind,
                found: other.kind,
            });
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.n_included += other.n_included;
        self.n_excluded_zero += other.n_excluded_zero;
        self.n_excluded_nonnumeric += other.n_excluded_nonnumeric;
        Ok(self)
    }

    pub fn kind(&self) -> LawKind {
        self.kind
    }

    /// Counts in ascending bin order.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, bin: u32) -> Option<u64> {
        self.kind.index_of(bin).map(|i| self.counts[i])
    }

    pub fn n_included(&self) -> u64 {
        self.n_included
    }

    pub fn n_excluded_zero(&self) -> u64 {
        self.n_excluded_zero
    }

    pub fn n_excluded_nonnumeric(&self) -> u64 {
        self.n_excluded_nonnumeric
    }

    pub fn n_total(&self) -> u64 {
        self.n_included + self.n_excluded_zero + self.n_excluded_nonnumeric
    }

    /// Observed frequencies `count / n_included` in ascending bin order.
    pub fn frequencies(&self) -> Result<Vec<f64>> {
        if self.n_included == 0 {
            return Err(Error::Degenerate(format!(
                "no values left to tally for {}",
                self.kind
            )));
        }
        let n = self.n_included as f64;
        Ok(self.counts.iter().map(|&c| c as f64 / n).collect())
    }
}

/// Tallies `values` under `kind`, counting zeros and non-numeric entries
/// separately.
pub fn tally<'a, I>(values: I, kind: LawKind) -> DigitTally
where
    I: IntoIterator<Item = &'a ParsedValue>,
{
    let mut t = DigitTally::empty(kind);
    for v in values {
        t.push(v);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn val(s: &str) -> DecimalValue {
        s.parse().unwrap()
    }

    #[test]
    fn parse_plain_integer() {
        let v = val("2035");
        assert_eq!(v.sign(), 1);
        assert_eq!(v.digits(), "2035");
        assert_eq!(v.exponent(), 3);
        assert_eq!(v.significand(), 2.035);
    }

    #[test]
    fn parse_negative_fraction() {
        let v = val("-0.00345");
        assert_eq!(v.sign(), -1);
        assert_eq!(v.digits(), "345");
        assert_eq!(v.exponent(), -3);
        assert_eq!(v.significand(), -3.45);
    }

    #[test]
    fn parse_zero_and_blank() {
        for z in ["0", "0.00", "-0", "+0e5", ".0", "000"] {
            assert_eq!(parse_decimal(z), ParsedValue::Zero, "{z}");
        }
        for bad in [
            "", "   ", "abc", "1.2.3", "-", ".", "e5", "1e", "1e+", "--1", "1,000", "NaN", "inf",
        ] {
            assert_eq!(parse_decimal(bad), ParsedValue::NonNumeric, "{bad:?}");
        }
    }

    #[test]
    fn parse_scientific() {
        let v = val("1.2345e8");
        assert_eq!(v.digits(), "12345");
        assert_eq!(v.exponent(), 8);
        let v = val("  -12.5E-3 ");
        assert_eq!(v.digits(), "125");
        assert_eq!(v.exponent(), -2);
        assert_eq!(val("+.5").exponent(), -1);
        assert_eq!(val("7.").digits(), "7");
    }

    #[test]
    fn trailing_zeros_are_canonicalized() {
        assert_eq!(val("500"), val("5e2"));
        assert_eq!(val("500.000"), val("0.5e3"));
        assert_eq!(val("500").digits(), "5");
    }

    #[test]
    fn exponent_overflow_is_non_numeric() {
        assert_eq!(parse_decimal("1e99999999999"), ParsedValue::NonNumeric);
        assert_eq!(parse_decimal("1e2147483648"), ParsedValue::NonNumeric);
        assert!(matches!(
            parse_decimal("1e2147483647"),
            ParsedValue::Value(_)
        ));
    }

    #[test]
    fn extractors() {
        let v = val("2035");
        assert_eq!(
            (v.first_digit(), v.second_digit(), v.first_two()),
            (2, 0, 20)
        );
        let v = val("-9.9748");
        assert_eq!(
            (v.first_digit(), v.second_digit(), v.first_two()),
            (9, 9, 99)
        );
        assert_eq!(val("500").second_digit(), 0);
        assert_eq!(val("1.05").first_two(), 10);
        assert_eq!(val("0.0123").first_two(), 12);
    }

    #[test]
    fn zero_has_no_digits() {
        assert!(matches!(
            ParsedValue::Zero.bin(LawKind::FirstDigit),
            Err(Error::ZeroValue)
        ));
        assert!(ParsedValue::Zero.significand().is_err());
        assert!("0".parse::<DecimalValue>().is_err());
    }

    #[test]
    fn significands() {
        assert_eq!(val("2438029900000").significand(), 2.4380299);
        assert_eq!(val("-19722854000").significand(), -1.9722854);
        assert_eq!(val("7").significand(), 7.0);
        assert!(val("9.99999999999999999999").significand() < 10.0);
    }

    #[test]
    fn f64_conversion_uses_fifteen_digits() {
        let ParsedValue::Value(v) = DecimalValue::from_f64(0.1) else {
            panic!()
        };
        assert_eq!(v.digits(), "1");
        assert_eq!(v.exponent(), -1);
        let ParsedValue::Value(v) = DecimalValue::from_f64(0.1 + 0.2) else {
            panic!()
        };
        assert_eq!(v.digits(), "3");
        assert_eq!(DecimalValue::from_f64(0.0), ParsedValue::Zero);
        assert_eq!(DecimalValue::from_f64(f64::NAN), ParsedValue::NonNumeric);
    }

    #[test]
    fn tally_excludes_zero_and_blank() {
        let values: Vec<_> = ["1.2", "2.3", "19", "0", ""]
            .iter()
            .map(|s| parse_decimal(s))
            .collect();
        let t = tally(&values, LawKind::FirstDigit);
        assert_eq!(t.count(1), Some(2));
        assert_eq!(t.count(2), Some(1));
        assert_eq!(t.n_included(), 3);
        assert_eq!(t.n_excluded_zero(), 1);
        assert_eq!(t.n_excluded_nonnumeric(), 1);
        assert_eq!(t.n_total(), 5);
    }

    #[test]
    fn merge_rejects_other_law() {
        let a = DigitTally::empty(LawKind::FirstDigit);
        let b = DigitTally::empty(LawKind::SecondDigit);
        assert!(matches!(a.merge(&b), Err(Error::KindMismatch { .. })));
    }

    #[test]
    fn empty_tally_has_no_frequencies() {
        let t = DigitTally::empty(LawKind::SecondDigit);
        assert!(matches!(t.frequencies(), Err(Error::Degenerate(_))));
    }

    #[test]
    fn from_counts_checks_length() {
        assert!(DigitTally::from_counts(LawKind::FirstDigit, &[1; 10]).is_err());
        let t = DigitTally::from_counts(LawKind::SecondDigit, &[1; 10]).unwrap();
        assert_eq!(t.n_included(), 10);
    }
}
