//! Confusion counts and background-oriented F-scores.
//!
//! The scores here are built on true negatives: P0 = Tn / (Tn + Fn) and
//! R0 = Tn / (Tn + Fp), with F0 their harmonic mean. This is not the usual
//! foreground precision/recall, and values are dominated by the (large)
//! background area.

use std::fmt::Write;

use crate::error::Result;
use crate::frame::{ensure_dims, Mask};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvalStats {
    pub true_neg: u64,
    pub true_pos: u64,
    pub false_neg: u64,
    pub false_pos: u64,
}

impl EvalStats {
    pub fn new(true_neg: u64, true_pos: u64, false_neg: u64, false_pos: u64) -> Self {
        EvalStats {
            true_neg,
            true_pos,
            false_neg,
            false_pos,
        }
    }

    pub fn total(&self) -> u64 {
        self.true_neg + self.true_pos + self.false_neg + self.false_pos
    }

    /// Adds the per-pixel confusion counts of `predicted` against `truth`.
    pub fn accumulate(&mut self, predicted: &Mask, truth: &Mask) -> Result<()> {
        ensure_dims(truth.dims(), predicted.dims())?;
        for (&p, &t) in predicted.values().iter().zip(truth.values()) {
            match (p, t) {
                (true, true) => self.true_pos += 1,
                (false, false) => self.true_neg += 1,
                (true, false) => self.false_pos += 1,
                (false, true) => self.false_neg += 1,
            }
        }
        Ok(())
    }

    pub fn scores(&self) -> Scores {
        f0_score(self)
    }
}

impl std::ops::Add for EvalStats {
    type Output = EvalStats;

    fn add(self, rhs: EvalStats) -> EvalStats {
        EvalStats {
            true_neg: self.true_neg + rhs.true_neg,
            true_pos: self.true_pos + rhs.true_pos,
            false_neg: self.false_neg + rhs.false_neg,
            false_pos: self.false_pos + rhs.false_pos,
        }
    }
}

impl std::ops::AddAssign for EvalStats {
    fn add_assign(&mut self, rhs: EvalStats) {
        *self = *self + rhs;
    }
}

/// P0, R0 and F0; `None` where a denominator is zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scores {
    pub p0: Option<f64>,
    pub r0: Option<f64>,
    pub f0: Option<f64>,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn f0_score(stats: &EvalStats) -> Scores {
    let p0 = ratio(stats.true_neg, stats.true_neg + stats.false_neg);
    let r0 = ratio(stats.true_neg, stats.true_neg + stats.false_pos);
    let f0 = match (p0, r0) {
        // Harmonic mean of two zeros is zero.
        (Some(p), Some(r)) if p + r == 0.0 => Some(0.0),
        (Some(p), Some(r)) => Some(2.0 * p * r / (p + r)),
        _ => None,
    };
    Scores { p0, r0, f0 }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub method: String,
    pub dataset: String,
    pub stats: EvalStats,
}

impl ReportRow {
    pub fn new(method: impl Into<String>, dataset: impl Into<String>, stats: EvalStats) -> Self {
        ReportRow {
            method: method.into(),
            dataset: dataset.into(),
            stats,
        }
    }
}

pub const REPORT_HEADER: &str = "method,dataset,tn,tp,fn,fp,p0,r0,f0";

fn score_field(score: Option<f64>) -> String {
    score.map_or_else(|| "undefined".to_string(), |s| format!("{s:.6}"))
}

/// Renders rows as CSV in input order, scores to six decimals.
pub fn emit_report(rows: &[ReportRow]) -> String {
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    for row in rows {
        let s = row.stats;
        let scores = f0_score(&s);
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            row.method,
            row.dataset,
            s.true_neg,
            s.true_pos,
            s.false_neg,
            s.false_pos,
            score_field(scores.p0),
            score_field(scores.r0),
            score_field(scores.f0),
        )
        .expect("writing to a String cannot fail");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask(w: u32, h: u32, fg: impl Fn(u32, u32) -> bool) -> Mask {
        let values = (0..h).flat_map(|y| (0..w).map(move |x| (x, y))).map(|(x, y)| fg(x, y)).collect();
        Mask::new(w, h, values).unwrap()
    }

    #[test]
    fn accumulate_examples() {
        let bg = Mask::background(10, 10);
        let mut s = EvalStats::default();
        s.accumulate(&bg, &bg).unwrap();
        assert_eq!(s, EvalStats::new(100, 0, 0, 0));

        let fg = mask(10, 10, |_, _| true);
        let mut s = EvalStats::default();
        s.accumulate(&fg, &bg).unwrap();
        assert_eq!(s, EvalStats::new(0, 0, 0, 100));

        // Truth: 5x5 block at origin. Prediction misses column 4 of the block
        // and adds a spurious 5-pixel row at y = 9.
        let truth = mask(10, 10, |x, y| x < 5 && y < 5);
        let pred = mask(10, 10, |x, y| (x < 4 && y < 5) || (y == 9 && x < 5));
        let mut s = EvalStats::default();
        s.accumulate(&pred, &truth).unwrap();
        assert_eq!(s, EvalStats::new(70, 20, 5, 5));

        assert!(s.accumulate(&Mask::background(9, 10), &truth).is_err());
    }

    #[test]
    fn perfect_prediction() {
        let s = f0_score(&EvalStats::new(50, 7, 0, 0));
        assert_eq!(s, Scores { p0: Some(1.0), r0: Some(1.0), f0: Some(1.0) });
    }

    #[test]
    fn worked_example() {
        let s = f0_score(&EvalStats::new(90, 0, 10, 0));
        assert!((s.p0.unwrap() - 0.9).abs() < 1e-12);
        assert_eq!(s.r0, Some(1.0));
        assert!((s.f0.unwrap() - 0.947368).abs() < 1e-6);
        assert!((s.f0.unwrap() - 1.8 / 1.9).abs() < 1e-12);
    }

    #[test]
    fn degenerate_denominators_are_undefined() {
        // all-foreground prediction against all-background truth
        let s = f0_score(&EvalStats::new(0, 0, 0, 100));
        assert_eq!(s.p0, None);
        assert_eq!(s.r0, Some(0.0));
        assert_eq!(s.f0, None);
        assert_eq!(f0_score(&EvalStats::default()).f0, None);
        let zero = f0_score(&EvalStats::new(0, 0, 3, 4));
        assert_eq!(zero.f0, Some(0.0));
    }

    #[test]
    fn report_format() {
        assert_eq!(emit_report(&[]), "method,dataset,tn,tp,fn,fp,p0,r0,f0\n");
        let rows = [
            ReportRow::new("octree", "perfect", EvalStats::new(10, 2, 0, 0)),
            ReportRow::new("octree", "worked", EvalStats::new(90, 0, 10, 0)),
            ReportRow::new("avg", "degenerate", EvalStats::new(0, 0, 0, 100)),
        ];
        let csv = emit_report(&rows);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[1], "octree,perfect,10,2,0,0,1.000000,1.000000,1.000000");
        assert_eq!(lines[2], "octree,worked,90,0,10,0,0.900000,1.000000,0.947368");
        assert_eq!(lines[3], "avg,degenerate,0,0,0,100,undefined,0.000000,undefined");
    }

    #[test]
    fn additivity() {
        let t1 = mask(4, 4, |x, _| x == 0);
        let p1 = mask(4, 4, |x, y| x == 0 || y == 3);
        let t2 = mask(4, 4, |_, y| y < 2);
        let p2 = mask(4, 4, |x, _| x > 1);
        let mut a = EvalStats::default();
        a.accumulate(&p1, &t1).unwrap();
        let mut b = EvalStats::default();
        b.accumulate(&p2, &t2).unwrap();
        let mut both = EvalStats::default();
        both.accumulate(&p1, &t1).unwrap();
        both.accumulate(&p2, &t2).unwrap();
        assert_eq!(a + b, both);
        assert_eq!(both.total(), 32);
    }
}
