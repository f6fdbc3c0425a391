//! Synthetic Benford samples and second-digit rounding manipulation.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`), seeded through
//! `SeedableRng::seed_from_u64`. Uniform doubles take the top 53 bits of each
//! 64-bit output and bounded integers use a 128-bit widening multiply, so a
//! given seed produces the same sample on every platform.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::digits::DecimalValue;
use crate::error::{Error, Result};

/// Name of the generator, recorded in report metadata.
pub const GENERATOR: &str = "chacha8 (rand_chacha 0.9, seed_from_u64)";

const SAMPLE_STREAM: u64 = 0;
const INJECT_STREAM: u64 = 1;

/// Digits kept for each synthetic significand.
const SIGNIFICAND_DIGITS: u32 = 15;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub n: usize,
    pub seed: u64,
    /// Inclusive range of the power of ten of each value.
    pub exponent_range: (i32, i32),
    /// Probability of a value being negative.
    pub negative_fraction: f64,
    /// Probability of rounding up a value whose second digit is 9.
    pub inject_rounding: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n: 1000,
            seed: 0,
            exponent_range: (0, 9),
            negative_fraction: 0.0,
            inject_rounding: 0.0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.exponent_range;
        if lo > hi {
            return Err(Error::InvalidParameter(format!(
                "exponent range {lo}..={hi} is empty"
            )));
        }
        check_probability("negative fraction", self.negative_fraction)?;
        check_probability("rounding strength", self.inject_rounding)
    }
}

fn check_probability(what: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{what} {p} is not in [0, 1]"
        )))
    }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn unit_f64(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn below(rng: &mut impl RngCore, span: u64) -> u64 {
    ((u128::from(rng.next_u64()) * u128::from(span)) >> 64) as u64
}

/// Draws `config.n` values whose significands are `10^U`, `U ~ U[0, 1)`.
///
/// Per value the generator consumes, in order: one draw for `U`, one for the
/// exponent and one for the sign.
pub fn sample_benford(config: &SynthConfig) -> Result<Vec<DecimalValue>> {
    config.validate()?;
    let mut rng = rng(config.seed, SAMPLE_STREAM);
    let (lo, hi) = config.exponent_range;
    let span = (i64::from(hi) - i64::from(lo) + 1) as u64;
    let scale = 10f64.powi(SIGNIFICAND_DIGITS as i32 - 1);
    let max_mantissa = 10u64.pow(SIGNIFICAND_DIGITS) - 1;
    let mut out = Vec::with_capacity(config.n);
    for _ in 0..config.n {
        let u = unit_f64(&mut rng);
        let exponent = (i64::from(lo) + below(&mut rng, span) as i64) as i32;
        let negative = unit_f64(&mut rng) < config.negative_fraction;
        let mantissa = ((10f64.powf(u) * scale) as u64).clamp(scale as u64, max_mantissa);
        let value = DecimalValue::from_parts(negative, &mantissa.to_string(), exponent)
            .expect("mantissa has 15 digits and a nonzero lead");
        out.push(value);
    }
    Ok(out)
}

/// Rounds up the significand of a value: `d.9xxx` becomes `d+1`, and
/// `9.9xxx` becomes `1` with the exponent raised by one.
pub fn round_up_second_nine(value: &DecimalValue) -> Option<DecimalValue> {
    if value.digits().len() < 2 || value.second_digit() != 9 {
        return None;
    }
    let first = value.first_digit();
    let (lead, exponent) = if first == 9 {
        (1, value.exponent().checked_add(1)?)
    } else {
        (first + 1, value.exponent())
    };
    DecimalValue::from_parts(value.is_negative(), &lead.to_string(), exponent)
}

/// Applies [`round_up_second_nine`] to each eligible value with probability
/// `strength`. One random draw is consumed per eligible value only.
pub fn inject_rounding(
    values: &[DecimalValue],
    strength: f64,
    seed: u64,
) -> Result<Vec<DecimalValue>> {
    check_probability("rounding strength", strength)?;
    let mut rng = rng(seed, INJECT_STREAM);
    Ok(values
        .iter()
        .map(|v| match round_up_second_nine(v) {
            Some(rounded) if unit_f64(&mut rng) < strength => rounded,
            _ => v.clone(),
        })
        .collect())
}

/// [`sample_benford`] followed by [`inject_rounding`] at the configured
/// strength. Injection reuses the seed on a separate ChaCha stream.
pub fn generate(config: &SynthConfig) -> Result<Vec<DecimalValue>> {
    let sample = sample_benford(config)?;
    if config.inject_rounding == 0.0 {
        return Ok(sample);
    }
    inject_rounding(&sample, config.inject_rounding, config.seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformity::{mad_mean, ConformityClass};
    use crate::digits::DigitTally;
    use crate::laws::{expected_distribution, LawKind};

    fn d(s: &str) -> DecimalValue {
        s.parse().unwrap()
    }

    #[test]
    fn empty_sample() {
        let cfg = SynthConfig {
            n: 0,
            ..Default::default()
        };
        assert!(sample_benford(&cfg).unwrap().is_empty());
    }

    #[test]
    fn deterministic() {
        let cfg = SynthConfig {
            n: 500,
            seed: 99,
            negative_fraction: 0.3,
            ..Default::default()
        };
        assert_eq!(sample_benford(&cfg).unwrap(), sample_benford(&cfg).unwrap());
        let other = SynthConfig {
            seed: 100,
            ..cfg.clone()
        };
        assert_ne!(
            sample_benford(&cfg).unwrap(),
            sample_benford(&other).unwrap()
        );
    }

    #[test]
    fn respects_ranges() {
        let cfg = SynthConfig {
            n: 2000,
            seed: 3,
            exponent_range: (-2, 1),
            negative_fraction: 0.25,
            ..Default::default()
        };
        let xs = sample_benford(&cfg).unwrap();
        assert!(xs.iter().all(|v| (-2..=1).contains(&v.exponent())));
        let neg = xs.iter().filter(|v| v.is_negative()).count();
        assert!((400..600).contains(&neg), "{neg}");
        for e in -2..=1 {
            assert!(xs.iter().any(|v| v.exponent() == e));
        }
    }

    #[test]
    fn invalid_configs() {
        let bad = [
            SynthConfig {
                exponent_range: (3, 2),
                ..Default::default()
            },
            SynthConfig {
                negative_fraction: 1.5,
                ..Default::default()
            },
            SynthConfig {
                inject_rounding: -0.1,
                ..Default::default()
            },
            SynthConfig {
                inject_rounding: f64::NAN,
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(sample_benford(&cfg).is_err() || generate(&cfg).is_err());
        }
    }

    #[test]
    fn large_sample_is_close_to_bl1() {
        let cfg = SynthConfig {
            n: 100_000,
            seed: 11,
            ..Default::default()
        };
        let xs = sample_benford(&cfg).unwrap();
        let mut t = DigitTally::empty(LawKind::FirstDigit);
        xs.iter().for_each(|v| t.push_value(v));
        let m = mad_mean(&t, &expected_distribution(LawKind::FirstDigit)).unwrap();
        assert!(m < 0.006, "{m}");
        let class = crate::conformity::classify(m, LawKind::FirstDigit).unwrap();
        assert_eq!(class, ConformityClass::Close);
    }

    #[test]
    fn rounding_rule() {
        assert_eq!(round_up_second_nine(&d("1.97")), Some(d("2")));
        assert_eq!(round_up_second_nine(&d("9.95")), Some(d("10")));
        assert_eq!(round_up_second_nine(&d("-495")), Some(d("-500")));
        assert_eq!(round_up_second_nine(&d("1.87")), None);
        assert_eq!(round_up_second_nine(&d("9")), None);
    }

    #[test]
    fn strength_zero_is_identity() {
        let xs: Vec<_> = ["1.97", "9.95", "3.3", "19"].iter().map(|s| d(s)).collect();
        assert_eq!(inject_rounding(&xs, 0.0, 1).unwrap(), xs);
        let all = inject_rounding(&xs, 1.0, 1).unwrap();
        assert_eq!(all, vec![d("2"), d("10"), d("3.3"), d("20")]);
        assert!(inject_rounding(&xs, 2.0, 1).is_err());
    }
}
