//! Published digit statistics for FTSE All-Share companies, fiscal years
//! 2009–2022: pre-tax income (`PI`), its negative and positive parts, total
//! assets (`TA`) and the per-company-year ratio `PI/TA`.
//!
//! The raw panel is proprietary, so these tables are the reference points the
//! toolkit is checked against. Values are transcribed as printed, including
//! the printed rounding. Frequency columns of the printed first-digit table
//! for `PI` are shifted one column to the right relative to their headers;
//! the counts below are the self-consistent source.

use crate::laws::LawKind;

/// Printed counts and statistics for one (series, law) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedSeries {
    pub label: &'static str,
    pub law: LawKind,
    /// Counts in ascending bin order.
    pub counts: &'static [u64],
    pub chi2: f64,
    /// Printed MAD, which is the sum form `Σ |f_o − f_e|`.
    pub mad: f64,
    /// Critical value printed alongside, at 5 %.
    pub chi2_critical: f64,
}

impl PublishedSeries {
    pub fn n(&self) -> u64 {
        self.counts.iter().sum()
    }
}

const FD: LawKind = LawKind::FirstDigit;
const SD: LawKind = LawKind::SecondDigit;

pub const FIRST_DIGIT: [PublishedSeries; 5] = [
    PublishedSeries {
        label: "PI",
        law: FD,
        counts: &[2035, 1262, 785, 701, 508, 436, 416, 332, 293],
        chi2: 16.5706,
        mad: 0.04103,
        chi2_critical: 15.507,
    },
    PublishedSeries {
        label: "PI(-)",
        law: FD,
        counts: &[374, 214, 120, 111, 96, 84, 67, 51, 43],
        chi2: 10.3233,
        mad: 0.07764,
        chi2_critical: 15.507,
    },
    PublishedSeries {
        label: "PI(+)",
        law: FD,
        counts: &[1661, 1048, 665, 590, 412, 352, 349, 281, 250],
        chi2: 15.7448,
        mad: 0.04664,
        chi2_critical: 15.507,
    },
    PublishedSeries {
        label: "TA",
        law: FD,
        counts: &[2084, 1186, 829, 761, 494, 400, 399, 340, 318],
        chi2: 27.757,
        mad: 0.04258,
        chi2_critical: 15.507,
    },
    PublishedSeries {
        label: "PI/TA",
        law: FD,
        counts: &[2223, 1100, 655, 564, 523, 508, 446, 386, 360],
        chi2: 117.287,
        mad: 0.11404,
        chi2_critical: 15.507,
    },
];

pub const SECOND_DIGIT: [PublishedSeries; 5] = [
    PublishedSeries {
        label: "PI",
        law: SD,
        counts: &[875, 753, 745, 707, 675, 626, 648, 606, 595, 538],
        chi2: 9.855,
        mad: 0.02741,
        chi2_critical: 16.919,
    },
    PublishedSeries {
        label: "PI(-)",
        law: SD,
        counts: &[166, 121, 129, 126, 116, 118, 94, 115, 78, 97],
        chi2: 15.208,
        mad: 0.08787,
        chi2_critical: 16.919,
    },
    PublishedSeries {
        label: "PI(+)",
        law: SD,
        counts: &[709, 632, 616, 581, 559, 508, 554, 491, 517, 441],
        chi2: 10.742,
        mad: 0.03560,
        chi2_critical: 16.919,
    },
    PublishedSeries {
        label: "TA",
        law: SD,
        counts: &[821, 764, 758, 717, 686, 635, 621, 634, 616, 559],
        chi2: 3.6678,
        mad: 0.02057,
        chi2_critical: 16.919,
    },
    PublishedSeries {
        label: "PI/TA",
        law: SD,
        counts: &[853, 854, 696, 681, 666, 650, 594, 605, 574, 592],
        chi2: 18.063,
        mad: 0.04253,
        chi2_critical: 16.919,
    },
];

/// A printed first-two-digit table: only some rows are shown.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedPairTable {
    pub label: &'static str,
    /// Size of the full series.
    pub n: u64,
    /// `(bin, count, printed frequency)` for the rows that are shown.
    pub rows: &'static [(u32, u64, f64)],
    pub chi2: f64,
    pub mad: f64,
    pub chi2_critical: f64,
}

pub const FIRST_TWO_DIGITS: [PublishedPairTable; 5] = [
    PublishedPairTable {
        label: "PI",
        n: 6768,
        rows: &[
            (10, 264, 0.039007),
            (11, 251, 0.037086),
            (12, 246, 0.036348),
            (20, 162, 0.023936),
            (21, 148, 0.021868),
            (30, 100, 0.014775),
            (50, 56, 0.008274),
            (90, 39, 0.005762),
            (99, 19, 0.002807),
        ],
        chi2: 116.213,
        mad: 0.09418,
        chi2_critical: 113.145,
    },
    PublishedPairTable {
        label: "PI(-)",
        n: 1160,
        rows: &[
            (10, 56, 0.048276),
            (11, 43, 0.037069),
            (12, 46, 0.039655),
            (20, 31, 0.026724),
            (21, 21, 0.018103),
            (30, 18, 0.015517),
            (50, 11, 0.009483),
            (90, 9, 0.007759),
            (99, 4, 0.003448),
        ],
        chi2: 93.989,
        mad: 0.21754,
        chi2_critical: 113.145,
    },
    PublishedPairTable {
        label: "PI(+)",
        n: 5608,
        rows: &[
            (10, 208, 0.037090),
            (11, 208, 0.037090),
            (12, 200, 0.035663),
            (20, 131, 0.023359),
            (21, 127, 0.022646),
            (30, 82, 0.014622),
            (50, 45, 0.008024),
            (90, 30, 0.005350),
            (99, 15, 0.002675),
        ],
        chi2: 128.654,
        mad: 0.11131,
        chi2_critical: 113.145,
    },
    PublishedPairTable {
        label: "TA",
        n: 6811,
        rows: &[
            (10, 308, 0.04522),
            (11, 259, 0.03803),
            (12, 233, 0.03421),
            (20, 144, 0.02114),
            (21, 135, 0.01982),
            (30, 95, 0.01395),
            (50, 63, 0.00925),
            (90, 32, 0.00470),
            (99, 19, 0.00279),
        ],
        chi2: 26.5234,
        mad: 0.04658,
        chi2_critical: 113.145,
    },
    PublishedPairTable {
        label: "PI/TA",
        n: 6765,
        rows: &[
            (10, 343, 0.05070),
            (11, 318, 0.04701),
            (12, 249, 0.03681),
            (20, 154, 0.02276),
            (21, 150, 0.02217),
            (30, 74, 0.01094),
            (50, 44, 0.00650),
            (90, 30, 0.00443),
            (99, 38, 0.00562),
        ],
        chi2: 196.574,
        mad: 0.13625,
        chi2_critical: 113.145,
    },
];

/// Printed expected proportions at 4 decimals, as `(law, bin, value)`.
// 0.3010 is a printed value, not an attempt at log10(2).
#[allow(clippy::approx_constant)]
pub const EXPECTED_PROPORTIONS: [(LawKind, u32, f64); 30] = [
    (FD, 1, 0.3010),
    (FD, 2, 0.1761),
    (FD, 3, 0.1250),
    (FD, 4, 0.0969),
    (FD, 5, 0.0792),
    (FD, 6, 0.0669),
    (FD, 7, 0.0580),
    (FD, 8, 0.0512),
    (FD, 9, 0.0460),
    (SD, 0, 0.1197),
    (SD, 1, 0.1139),
    (SD, 2, 0.1088),
    (SD, 3, 0.1043),
    (SD, 4, 0.1003),
    (SD, 5, 0.0967),
    (SD, 6, 0.0934),
    (SD, 7, 0.0904),
    (SD, 8, 0.0876),
    (SD, 9, 0.0850),
    (LawKind::FirstTwoDigits, 10, 0.0414),
    (LawKind::FirstTwoDigits, 11, 0.0378),
    (LawKind::FirstTwoDigits, 12, 0.0348),
    (LawKind::FirstTwoDigits, 13, 0.0322),
    (LawKind::FirstTwoDigits, 14, 0.0230),
    (LawKind::FirstTwoDigits, 15, 0.0280),
    (LawKind::FirstTwoDigits, 16, 0.0264),
    (LawKind::FirstTwoDigits, 17, 0.0248),
    (LawKind::FirstTwoDigits, 18, 0.0235),
    (LawKind::FirstTwoDigits, 50, 0.0086),
    (LawKind::FirstTwoDigits, 99, 0.0044),
];

/// Printed 5 % critical values as `(degrees of freedom, value)`.
pub const CRITICAL_VALUES: [(usize, f64); 3] = [(8, 15.507), (9, 16.919), (89, 113.145)];

/// Series sizes `(label, N)`.
pub const SERIES_SIZES: [(&str, u64); 7] = [
    ("PI", 6768),
    ("TA", 6811),
    ("PI(-)", 1160),
    ("PI(+)", 5608),
    ("PI/TA", 6765),
    ("PI/TA(-)", 1158),
    ("PI/TA(+)", 5607),
];
