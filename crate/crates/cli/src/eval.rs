//! Precision, recall and F1 of mined patterns against a groundtruth file.
//!
//! Two patterns match when they hold the same object set and the IoU of
//! their time spans exceeds the threshold. Matching is one-to-one, greedy
//! in descending IoU.

use std::fmt;
use std::path::Path;

use comove::dataio::read_patterns_file;
use comove::{CoMovementPattern, Tick};

use crate::{CliError, Result};

pub const DEFAULT_IOU: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub mined: usize,
    pub truth: usize,
    pub matched: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "precision {:.4} recall {:.4} f1 {:.4} (matched {} of {} mined, {} groundtruth)",
            self.precision, self.recall, self.f1, self.matched, self.mined, self.truth
        )
    }
}

/// Intersection over union of two closed tick intervals, measured as
/// lengths on the real line. Two identical points give 1.
pub fn span_iou(a: (Tick, Tick), b: (Tick, Tick)) -> f64 {
    let inter = a.1.min(b.1).saturating_sub(a.0.max(b.0));
    let union = (a.1 - a.0) + (b.1 - b.0) - inter;
    if union == 0 {
        return if a == b { 1.0 } else { 0.0 };
    }
    inter as f64 / union as f64
}

fn span_of(p: &CoMovementPattern, which: &str) -> Result<(Tick, Tick)> {
    p.span.ok_or_else(|| CliError::Data(format!("{which} pattern {p} has no span")))
}

pub fn evaluate(mined: &[CoMovementPattern], truth: &[CoMovementPattern], threshold: f64) -> Result<EvalReport> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(CliError::Usage(format!("iou threshold {threshold} outside [0, 1]")));
    }
    let mspans = mined.iter().map(|p| span_of(p, "mined")).collect::<Result<Vec<_>>>()?;
    let tspans = truth.iter().map(|p| span_of(p, "groundtruth")).collect::<Result<Vec<_>>>()?;

    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, m) in mined.iter().enumerate() {
        for (j, t) in truth.iter().enumerate() {
            if m.objects != t.objects {
                continue;
            }
            let iou = span_iou(mspans[i], tspans[j]);
            if iou > threshold {
                pairs.push((iou, i, j));
            }
        }
    }
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let (mut used_m, mut used_t) = (vec![false; mined.len()], vec![false; truth.len()]);
    let mut matched = 0;
    for (_, i, j) in pairs {
        if !used_m[i] && !used_t[j] {
            used_m[i] = true;
            used_t[j] = true;
            matched += 1;
        }
    }
    // An empty side scores 1 when the other side is empty too.
    let ratio = |num: usize, den: usize| if den == 0 { if mined.len() + truth.len() == 0 { 1.0 } else { 0.0 } } else { num as f64 / den as f64 };
    let precision = ratio(matched, mined.len());
    let recall = ratio(matched, truth.len());
    let f1 = if mined.is_empty() && truth.is_empty() {
        1.0
    } else {
        2.0 * matched as f64 / (mined.len() + truth.len()) as f64
    };
    Ok(EvalReport { mined: mined.len(), truth: truth.len(), matched, precision, recall, f1 })
}

pub fn cmd_eval(mined: &Path, truth: &Path, threshold: f64) -> Result<EvalReport> {
    let m = read_patterns_file(mined).map_err(|e| CliError::Data(format!("{}: {e}", mined.display())))?;
    let t = read_patterns_file(truth).map_err(|e| CliError::Data(format!("{}: {e}", truth.display())))?;
    evaluate(&m, &t, threshold)
}
