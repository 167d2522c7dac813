//! Run reports and their rendering.
//!
//! Counts and ratios are rendered in two-significant-digit scientific
//! notation (`7.7e5`, `3.3e-1`, `1.0e1`). The CP column drops a trailing
//! `.0` (`2e1` rather than `2.0e1`); plain integers (`L`, `AA`) stay
//! plain. Ratios are computed on exact rationals and only rounded at
//! rendering time.

use std::time::Duration;

use num::{BigInt, BigRational, BigUint, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::conjoin::{filter_product, FilterStats};
use crate::lexicon::{
    enumerate_side, possible_assignments_count, split_coordination, Lexicon, SplitError,
    UnknownWord,
};
use crate::occurrence::Side;
use crate::oracle::coord_derive;
use crate::types::{BasicType, CatType};

/// Render a non-negative rational in scientific notation with two
/// significant digits; exact zero renders as `0`.
pub fn sci2(value: &BigRational) -> String {
    sci2_impl(value, false)
}

/// Like [`sci2`] but with a trailing `.0` dropped: `2e1` instead of
/// `2.0e1`.
pub fn sci2_trimmed(value: &BigRational) -> String {
    sci2_impl(value, true)
}

/// [`sci2`] for integer counts.
pub fn sci2_uint(value: &BigUint) -> String {
    sci2(&BigRational::from_integer(BigInt::from(value.clone())))
}

fn sci2_impl(value: &BigRational, trim: bool) -> String {
    assert!(!value.is_negative(), "sci2: negative value");
    if value.is_zero() {
        return "0".to_string();
    }
    let num = value.numer();
    let den = value.denom();

    // Decimal exponent: the unique e with 10^e <= value < 10^(e+1).
    let mut exp = num.to_string().len() as i64 - den.to_string().len() as i64;
    if !at_least_pow10(num, den, exp) {
        exp -= 1;
    } else if at_least_pow10(num, den, exp + 1) {
        exp += 1;
    }

    // First two significant digits, rounded half-up.
    let (scaled_num, scaled_den) = scale_by_pow10(num, den, 1 - exp);
    let mut digits = round_half_up(&scaled_num, &scaled_den);
    if digits == BigInt::from(100) {
        digits = BigInt::from(10);
        exp += 1;
    }
    let digits = digits.to_string();
    let (lead, second) = (&digits[..1], &digits[1..]);
    if trim && second == "0" {
        format!("{lead}e{exp}")
    } else {
        format!("{lead}.{second}e{exp}")
    }
}

/// value >= 10^exp, i.e. num >= den * 10^exp with the power moved to
/// whichever side keeps it non-negative.
fn at_least_pow10(num: &BigInt, den: &BigInt, exp: i64) -> bool {
    let (n, d) = scale_by_pow10(num, den, -exp);
    n >= d
}

/// (num, den) scaled so that the pair represents value * 10^shift.
fn scale_by_pow10(num: &BigInt, den: &BigInt, shift: i64) -> (BigInt, BigInt) {
    if shift >= 0 {
        (num * BigInt::from(10u32).pow(shift as u32), den.clone())
    } else {
        (num.clone(), den * BigInt::from(10u32).pow((-shift) as u32))
    }
}

fn round_half_up(num: &BigInt, den: &BigInt) -> BigInt {
    (num * 2 + den) / (den * 2)
}

/// Stage wall-clock times in milliseconds.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StageTimings {
    pub load_ms: f64,
    pub split_ms: f64,
    pub enumerate_left_ms: f64,
    pub enumerate_right_ms: f64,
    pub filter_ms: f64,
    pub oracle_ms: Option<f64>,
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

impl StageTimings {
    pub fn total_ms(&self) -> f64 {
        self.load_ms
            + self.split_ms
            + self.enumerate_left_ms
            + self.enumerate_right_ms
            + self.filter_ms
            + self.oracle_ms.unwrap_or(0.0)
    }
}

/// Everything one pruning run reports for one sentence.
#[derive(Debug, Clone)]
pub struct RunReport {
    /// Sentence length in words, coordinator included.
    pub length: usize,
    pub stats: FilterStats,
    /// Surviving pairs confirmed derivable, when the oracle ran.
    pub oracle_confirmed: Option<u64>,
    pub truncated_left: bool,
    pub truncated_right: bool,
    pub timings: StageTimings,
}

pub const TSV_HEADER: &str = "L\tPA\tCP\tCP/PA%\tAA\tAA/CP%\tAA/PA%";

fn pct_cell(value: Option<BigRational>) -> String {
    match value {
        Some(v) => sci2(&v),
        None => "0".to_string(),
    }
}

impl RunReport {
    /// The report row: `L PA CP CP/PA% AA AA/CP% AA/PA%`, tab-separated.
    /// A truncated run grows a trailing marker column.
    pub fn tsv_row(&self) -> String {
        let stats = &self.stats;
        let mut row = format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.length,
            sci2_uint(&stats.pa),
            sci2_trimmed(&BigRational::from_integer(stats.cp.into())),
            pct_cell(stats.cp_pa_pct()),
            stats.aa,
            pct_cell(stats.aa_cp_pct()),
            pct_cell(stats.aa_pa_pct()),
        );
        match (self.truncated_left, self.truncated_right) {
            (false, false) => {}
            (l, r) => {
                let mut sides = Vec::new();
                if l {
                    sides.push("left");
                }
                if r {
                    sides.push("right");
                }
                row.push_str(&format!("\ttruncated={}", sides.join(",")));
            }
        }
        row
    }

    pub fn to_json(&self) -> Value {
        let stats = &self.stats;
        json!({
            "length": self.length,
            "pa": stats.pa.to_string(),
            "ll": stats.ll,
            "rr": stats.rr,
            "cp": stats.cp.to_string(),
            "aa": stats.aa,
            "cp_pa_pct": pct_cell(stats.cp_pa_pct()),
            "aa_cp_pct": pct_cell(stats.aa_cp_pct()),
            "aa_pa_pct": pct_cell(stats.aa_pa_pct()),
            "oracle_confirmed": self.oracle_confirmed,
            "truncated_left": self.truncated_left,
            "truncated_right": self.truncated_right,
            "timings_ms": {
                "load": self.timings.load_ms,
                "split": self.timings.split_ms,
                "enumerate_left": self.timings.enumerate_left_ms,
                "enumerate_right": self.timings.enumerate_right_ms,
                "filter": self.timings.filter_ms,
                "oracle": self.timings.oracle_ms,
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Split(#[from] SplitError),
    #[error(transparent)]
    UnknownWord(#[from] UnknownWord),
}

/// The full pruning pipeline for one sentence: split at the coordinator,
/// enumerate both sides, filter the pair product, and optionally confirm
/// survivors with the derivability oracle.
pub fn run_sentence(
    lex: &Lexicon,
    words: &[String],
    goal: &BasicType,
    coord: &str,
    cap: Option<u64>,
    with_oracle: bool,
) -> Result<RunReport, PipelineError> {
    let mut timings = StageTimings::default();

    let started = std::time::Instant::now();
    let split = split_coordination(words, coord)?;
    timings.split_ms = ms(started.elapsed());

    let started = std::time::Instant::now();
    let left = enumerate_side(&split.left, lex, Side::Left, cap)?;
    timings.enumerate_left_ms = ms(started.elapsed());

    let started = std::time::Instant::now();
    let right = enumerate_side(&split.right, lex, Side::Right, cap)?;
    timings.enumerate_right_ms = ms(started.elapsed());

    let typed_words: Vec<String> = split
        .left
        .iter()
        .chain(split.right.iter())
        .cloned()
        .collect();
    let pa = possible_assignments_count(&typed_words, lex)?;

    let started = std::time::Instant::now();
    let (pairs, stats) = filter_product(&left.survivors, &right.survivors, goal, &pa);
    timings.filter_ms = ms(started.elapsed());

    let oracle_confirmed = if with_oracle {
        let started = std::time::Instant::now();
        let goal_type = CatType::Basic(goal.clone());
        let confirmed = pairs
            .iter()
            .filter(|(i, j)| {
                coord_derive(
                    left.survivors[*i].0.types(),
                    right.survivors[*j].0.types(),
                    &goal_type,
                )
                .is_some()
            })
            .count() as u64;
        timings.oracle_ms = Some(ms(started.elapsed()));
        Some(confirmed)
    } else {
        None
    };

    Ok(RunReport {
        length: words.len(),
        stats,
        oracle_confirmed,
        truncated_left: left.truncated,
        truncated_right: right.truncated,
        timings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::CatType;

    fn rational(num: i64, den: i64) -> BigRational {
        BigRational::new(num.into(), den.into())
    }

    #[test]
    fn sci2_basic_values() {
        assert_eq!(sci2_uint(&BigUint::from(6000u32)), "6.0e3");
        assert_eq!(sci2_uint(&BigUint::from(770_000u32)), "7.7e5");
        assert_eq!(sci2_uint(&BigUint::from(96u32)), "9.6e1");
        assert_eq!(sci2_uint(&BigUint::from(1u32)), "1.0e0");
        assert_eq!(sci2_uint(&BigUint::from(0u32)), "0");
    }

    #[test]
    fn sci2_rounds_half_up_on_exact_rationals() {
        // 1/3 as a percentage of 1: 0.333... -> 3.3e-1
        assert_eq!(sci2(&rational(1, 3)), "3.3e-1");
        // 8/1160 = 0.006896... -> 6.9e-3
        assert_eq!(sci2(&rational(8, 1160)), "6.9e-3");
        // Rounding can carry into the next decade: 0.0995 -> 1.0e-1
        assert_eq!(sci2(&rational(995, 10000)), "1.0e-1");
        assert_eq!(sci2(&rational(999, 10)), "1.0e2");
    }

    #[test]
    fn sci2_trimmed_drops_only_a_zero_second_digit() {
        assert_eq!(sci2_trimmed(&rational(20, 1)), "2e1");
        assert_eq!(sci2_trimmed(&rational(96, 1)), "9.6e1");
        assert_eq!(sci2_trimmed(&rational(22_400, 1)), "2.2e4");
    }

    #[test]
    fn report_row_rendering() {
        let report = RunReport {
            length: 16,
            stats: FilterStats::new(BigUint::from(6000u32), 20, 1, 2),
            oracle_confirmed: None,
            truncated_left: false,
            truncated_right: false,
            timings: StageTimings::default(),
        };
        assert_eq!(report.tsv_row(), "16\t6.0e3\t2e1\t3.3e-1\t2\t1.0e1\t3.3e-2");
    }

    #[test]
    fn zero_survivor_rows_render_zero_ratio_cells() {
        let report = RunReport {
            length: 15,
            stats: FilterStats::new(BigUint::from(2000u32), 24, 1, 0),
            oracle_confirmed: None,
            truncated_left: false,
            truncated_right: false,
            timings: StageTimings::default(),
        };
        assert_eq!(report.tsv_row(), "15\t2.0e3\t2.4e1\t1.2e0\t0\t0\t0");
    }

    #[test]
    fn truncation_adds_a_marker_column() {
        let report = RunReport {
            length: 3,
            stats: FilterStats::new(BigUint::from(8u32), 2, 2, 4),
            oracle_confirmed: None,
            truncated_left: true,
            truncated_right: false,
            timings: StageTimings::default(),
        };
        assert!(report.tsv_row().ends_with("\ttruncated=left"));
    }

    #[test]
    fn json_mirrors_report_fields() {
        let report = RunReport {
            length: 16,
            stats: FilterStats::new(BigUint::from(6000u32), 20, 1, 2),
            oracle_confirmed: Some(1),
            truncated_left: false,
            truncated_right: false,
            timings: StageTimings::default(),
        };
        let value = report.to_json();
        assert_eq!(value["length"], 16);
        assert_eq!(value["pa"], "6000");
        assert_eq!(value["aa"], 2);
        assert_eq!(value["cp_pa_pct"], "3.3e-1");
        assert_eq!(value["oracle_confirmed"], 1);
    }

    #[test]
    fn pipeline_on_a_trivial_sentence() {
        let lex = Lexicon::from_entries([("a", vec!["x".parse::<CatType>().unwrap()])]);
        let words: Vec<String> = ["a", "&", "a"].iter().map(|s| s.to_string()).collect();
        let goal: BasicType = "x".parse().unwrap();
        let report = run_sentence(&lex, &words, &goal, "&", None, true).unwrap();
        assert_eq!(report.length, 3);
        assert_eq!(report.stats.pa, BigUint::from(1u32));
        assert_eq!(report.stats.cp, 1);
        assert_eq!(report.stats.aa, 1);
        assert_eq!(report.oracle_confirmed, Some(1));
    }

    #[test]
    fn pipeline_surfaces_split_errors() {
        let lex = Lexicon::from_entries([("a", vec!["x".parse::<CatType>().unwrap()])]);
        let words: Vec<String> = ["a", "a"].iter().map(|s| s.to_string()).collect();
        let goal: BasicType = "x".parse().unwrap();
        match run_sentence(&lex, &words, &goal, "&", None, false) {
            Err(PipelineError::Split(SplitError::NoCoordinator(_))) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }
}
