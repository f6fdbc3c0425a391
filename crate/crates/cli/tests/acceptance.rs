//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use digitlaw::conformity::{chi_square_critical, mad_mean, mad_paper, run_test};
use digitlaw::reference::{
    PublishedSeries, CRITICAL_VALUES, EXPECTED_PROPORTIONS, FIRST_DIGIT, FIRST_TWO_DIGITS,
    SECOND_DIGIT,
};
use digitlaw::report::analyze;
use digitlaw::synth::{inject_rounding, sample_benford, SynthConfig};
use digitlaw::{
    expected_distribution, parse_decimal, render, tally, ConformityClass, ConformityReport,
    DecimalValue, DigitTally, Format, LawKind, ParsedValue,
};
use digitlaw_cli::{run, Cli};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

const CHI2_TOL: f64 = 0.01;
const MAD_TOL: f64 = 0.0005;
const SEEDS: std::ops::RangeInclusive<u64> = 1..=100;

// Seeds out of 100 meeting each synthetic threshold. An independent numpy
// simulation of 1,000 ideal Benford samples put every pass rate at 1.0, and
// the first run of this suite confirmed 100 of 100 for each.
const FROZEN_MAD_PASSES: [usize; 3] = [100, 100, 100];
const FROZEN_HALF_ROUNDING_REJECTS: usize = 100;

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 expected-law tables", expected_tables),
        ("2 fixture chi-square and MAD", fixture_reproduction),
        ("3 critical values", critical_values),
        ("4 decisions", decisions),
        ("5 first-two-digit frequencies", pair_frequencies),
        ("6 synthetic conformity", synthetic_conformity),
        ("7 rounding injection", injection_detectability),
        ("8 structural invariants", structural_invariants),
        ("9 pipeline on rebuilt panel", pipeline),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let (ok, detail) = check();
        let secs = start.elapsed().as_secs_f64();
        println!(
            "{} criterion {name} ({secs:.2}s): {detail}",
            if ok { "PASS" } else { "FAIL" }
        );
        failed += usize::from(!ok);
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn summarize(misses: Vec<String>, total: usize) -> Outcome {
    if misses.is_empty() {
        (true, format!("{total} of {total} values within tolerance"))
    } else {
        (
            false,
            format!(
                "{} of {total} values within tolerance; off: {}",
                total - misses.len(),
                misses.join("; ")
            ),
        )
    }
}

fn expected_tables() -> Outcome {
    let mut misses = Vec::new();
    for &(law, bin, printed) in &EXPECTED_PROPORTIONS {
        let p = expected_distribution(law).prob(bin).unwrap();
        if (p - printed).abs() > 5e-5 {
            misses.push(format!("{law} {bin} printed {printed} computed {p:.5}"));
        }
    }
    summarize(misses, EXPECTED_PROPORTIONS.len())
}

fn published_pairs() -> impl Iterator<Item = &'static PublishedSeries> {
    FIRST_DIGIT.iter().chain(SECOND_DIGIT.iter())
}

fn fixture_reproduction() -> Outcome {
    let mut misses = Vec::new();
    let mut total = 0;
    for s in published_pairs() {
        let t = DigitTally::from_counts(s.law, s.counts).unwrap();
        let r = run_test(&t, &expected_distribution(s.law), 0.05).unwrap();
        total += 2;
        if (r.chi2 - s.chi2).abs() > CHI2_TOL {
            misses.push(format!(
                "{} {} chi2 published {} computed {:.4}",
                s.label, s.law, s.chi2, r.chi2
            ));
        }
        if (r.mad_paper - s.mad).abs() > MAD_TOL {
            misses.push(format!(
                "{} {} MAD published {} computed {:.5}",
                s.label, s.law, s.mad, r.mad_paper
            ));
        }
    }
    summarize(misses, total)
}

fn critical_values() -> Outcome {
    let mut misses = Vec::new();
    for &(df, printed) in &CRITICAL_VALUES {
        let c = chi_square_critical(df, 0.05).unwrap();
        if (c - printed).abs() > 0.001 {
            misses.push(format!("df={df} printed {printed} computed {c:.3}"));
        }
    }
    summarize(misses, CRITICAL_VALUES.len())
}

fn decisions() -> Outcome {
    let mut misses = Vec::new();
    let mut total = 0;
    for s in published_pairs() {
        let t = DigitTally::from_counts(s.law, s.counts).unwrap();
        let r = run_test(&t, &expected_distribution(s.law), 0.05).unwrap();
        total += 2;
        if r.conformity_paper_sum != ConformityClass::Nonconforming {
            misses.push(format!(
                "{} {} MAD class {}",
                s.label, s.law, r.conformity_paper_sum
            ));
        }
        if r.chi2_reject != (s.chi2 > s.chi2_critical) {
            misses.push(format!("{} {} chi2 decision", s.label, s.law));
        }
    }
    summarize(misses, total)
}

fn pair_frequencies() -> Outcome {
    let mut misses = Vec::new();
    let mut total = 0;
    for t in &FIRST_TWO_DIGITS {
        for &(bin, count, printed) in t.rows {
            total += 1;
            let f = count as f64 / t.n as f64;
            if (f - printed).abs() > 5e-6 {
                misses.push(format!(
                    "{} {bin} printed {printed} computed {f:.6}",
                    t.label
                ));
            }
        }
    }
    summarize(misses, total)
}

fn values(sample: &[DecimalValue]) -> Vec<ParsedValue> {
    sample.iter().cloned().map(ParsedValue::Value).collect()
}

fn synthetic_conformity() -> Outcome {
    let bounds = [0.006, 0.008, 0.0012];
    let mut passes = [0usize; 3];
    for seed in SEEDS {
        let cfg = SynthConfig {
            n: 100_000,
            seed,
            ..SynthConfig::default()
        };
        let sample = values(&sample_benford(&cfg).unwrap());
        for (k, law) in LawKind::ALL.into_iter().enumerate() {
            let m = mad_mean(&tally(&sample, law), &expected_distribution(law)).unwrap();
            passes[k] += usize::from(m < bounds[k]);
        }
    }
    let ok = passes.iter().all(|&p| p >= 95) && passes == FROZEN_MAD_PASSES;
    (
        ok,
        format!(
            "seeds under bound: BL1 {}/100, BL2 {}/100, BL12 {}/100 (need >= 95, frozen {:?})",
            passes[0], passes[1], passes[2], FROZEN_MAD_PASSES
        ),
    )
}

fn injection_detectability() -> Outcome {
    let e = expected_distribution(LawKind::SecondDigit);
    let mut full_ok = 0;
    let mut half_rejects = 0;
    for seed in SEEDS {
        let cfg = SynthConfig {
            n: 10_000,
            seed,
            ..SynthConfig::default()
        };
        let clean = sample_benford(&cfg).unwrap();

        let full = tally(
            &values(&inject_rounding(&clean, 1.0, seed).unwrap()),
            LawKind::SecondDigit,
        );
        let r = run_test(&full, &e, 0.05).unwrap();
        full_ok +=
            usize::from(full.count(9) == Some(0) && r.conformity == ConformityClass::Nonconforming);

        let half = tally(
            &values(&inject_rounding(&clean, 0.5, seed).unwrap()),
            LawKind::SecondDigit,
        );
        half_rejects += usize::from(run_test(&half, &e, 0.05).unwrap().chi2_reject);
    }
    let ok = full_ok == 100 && half_rejects >= 95 && half_rejects == FROZEN_HALF_ROUNDING_REJECTS;
    (
        ok,
        format!("p=1: {full_ok}/100 seeds with empty 9 bin and nonconforming; p=0.5: chi2 rejects {half_rejects}/100"),
    )
}

fn decimal() -> impl Strategy<Value = DecimalValue> {
    (any::<bool>(), "[1-9][0-9]{0,17}", -200i32..200)
        .prop_map(|(neg, d, e)| DecimalValue::from_parts(neg, &d, e).unwrap())
}

fn parsed() -> impl Strategy<Value = ParsedValue> {
    prop_oneof![
        8 => decimal().prop_map(ParsedValue::Value),
        1 => Just(ParsedValue::Zero),
        1 => Just(ParsedValue::NonNumeric),
    ]
}

fn law() -> impl Strategy<Value = LawKind> {
    prop::sample::select(LawKind::ALL.to_vec())
}

const CASES: u32 = 1000;

fn check<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&strategy, test)
        .map_err(|e| format!("{name}: {e}"))
}

fn structural_invariants() -> Outcome {
    let dists = LawKind::ALL.map(expected_distribution);
    let results = [
        check("normalization", (law(), 0.0f64..1.0), |(kind, _)| {
            let sum: f64 = expected_distribution(kind).probs().iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-12);
            Ok(())
        }),
        check("marginalization", (0u32..10, 1u32..10), |(j, i)| {
            let pair = &dists[2];
            let col: f64 = (1..=9).map(|a| pair.prob(10 * a + j).unwrap()).sum();
            let row: f64 = (0..=9).map(|b| pair.prob(10 * i + b).unwrap()).sum();
            prop_assert!((col - dists[1].prob(j).unwrap()).abs() < 1e-12);
            prop_assert!((row - dists[0].prob(i).unwrap()).abs() < 1e-12);
            Ok(())
        }),
        check(
            "sign and scale invariance",
            (decimal(), -60i32..60),
            |(v, k)| {
                let scaled = v.scale_pow10(k).unwrap();
                for kind in LawKind::ALL {
                    prop_assert_eq!(v.bin(kind), v.negate().bin(kind));
                    prop_assert_eq!(v.bin(kind), scaled.bin(kind));
                }
                Ok(())
            },
        ),
        check(
            "tally conservation",
            (prop::collection::vec(parsed(), 0..300), law()),
            |(vs, kind)| {
                let t = tally(&vs, kind);
                prop_assert_eq!(t.counts().iter().sum::<u64>(), t.n_included());
                prop_assert_eq!(t.n_total() as usize, vs.len());
                Ok(())
            },
        ),
        check(
            "MAD forms",
            law().prop_flat_map(|k| (Just(k), prop::collection::vec(0u64..10_000, k.bin_count()))),
            |(kind, counts)| {
                prop_assume!(counts.iter().any(|&c| c > 0));
                let t = DigitTally::from_counts(kind, &counts).unwrap();
                let e = expected_distribution(kind);
                let (sum, mean) = (mad_paper(&t, &e).unwrap(), mad_mean(&t, &e).unwrap());
                prop_assert!((sum - kind.bin_count() as f64 * mean).abs() < 1e-12);
                Ok(())
            },
        ),
        check(
            "json round trip",
            prop::collection::vec(parsed(), 1..150),
            |vs| {
                prop_assume!(vs.iter().any(|v| matches!(v, ParsedValue::Value(_))));
                let mut report = ConformityReport::new("invariants", 0.05);
                report.slices = analyze("s", &vs, &LawKind::ALL, 0.05).unwrap();
                let back = ConformityReport::from_json(&render(&report, Format::Json)).unwrap();
                prop_assert_eq!(back, report);
                Ok(())
            },
        ),
        check("text round trip", decimal(), |v| {
            prop_assert_eq!(parse_decimal(&v.to_string()), ParsedValue::Value(v));
            Ok(())
        }),
    ];
    let errors: Vec<String> = results.into_iter().filter_map(Result::err).collect();
    if errors.is_empty() {
        (true, format!("7 properties, {CASES} cases each"))
    } else {
        (false, errors.join("; "))
    }
}

fn pipeline() -> Outcome {
    let panel = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/data/ftse_rebuilt_panel.csv"
    );
    let args = [
        "digitlaw",
        "analyze",
        "--input",
        panel,
        "--layout",
        "wide",
        "--variables",
        "PI:split,TA",
        "--ratio",
        "PI/TA",
        "--laws",
        "bl1,bl2,bl12",
        "--alpha",
        "0.05",
        "--format",
        "json",
    ];
    let cli = Cli::try_parse_from(args).expect("valid command line");
    let mut out = Vec::new();
    if let Err(e) = run(&cli, &mut out) {
        return (false, format!("analyze failed: {e}"));
    }
    let report = match ConformityReport::from_json(&String::from_utf8(out).unwrap()) {
        Ok(r) => r,
        Err(e) => return (false, format!("report does not parse: {e}")),
    };
    let mut misses = Vec::new();
    let mut total = 0;
    for s in &FIRST_DIGIT {
        let Some(r) = report.record(s.label, LawKind::FirstDigit) else {
            misses.push(format!("{} missing from report", s.label));
            continue;
        };
        total += 3;
        if r.counts != s.counts {
            misses.push(format!("{} counts differ", s.label));
        }
        if (r.chi2 - s.chi2).abs() > CHI2_TOL {
            misses.push(format!(
                "{} chi2 published {} computed {:.4}",
                s.label, s.chi2, r.chi2
            ));
        }
        if (r.mad_paper - s.mad).abs() > MAD_TOL {
            misses.push(format!(
                "{} MAD published {} computed {:.5}",
                s.label, s.mad, r.mad_paper
            ));
        }
    }
    summarize(misses, total)
}
