//! Detection metrics and multi-run reports.

use std::cmp::Ordering;
use std::fmt::{self, Write as _};

use crate::graph::AnomalyKind;
use crate::{Error, Result};

fn check(scores: &[f64], labels: &[bool]) -> Result<(usize, usize)> {
    if scores.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: scores.len(),
            right: labels.len(),
        });
    }
    let positives = labels.iter().filter(|&&l| l).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::DegenerateLabels {
            positives,
            negatives,
        });
    }
    Ok((positives, negatives))
}

/// Groups of equal scores in the given order, as `(positives, negatives)`.
fn tie_groups(scores: &[f64], labels: &[bool], descending: bool) -> Vec<(u64, u64)> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        let ord = scores[a].total_cmp(&scores[b]);
        if descending { ord.reverse() } else { ord }
    });
    let mut groups: Vec<(u64, u64)> = Vec::new();
    let mut last: Option<f64> = None;
    for i in order {
        if last.is_none_or(|s| s.total_cmp(&scores[i]) != Ordering::Equal) {
            groups.push((0, 0));
            last = Some(scores[i]);
        }
        let g = groups.last_mut().unwrap();
        if labels[i] {
            g.0 += 1;
        } else {
            g.1 += 1;
        }
    }
    groups
}

/// Area under the ROC curve: the chance that a random positive outscores a
/// random negative, ties counting one half.
pub fn auroc(scores: &[f64], labels: &[bool]) -> Result<f64> {
    let (positives, negatives) = check(scores, labels)?;
    // Twice the Mann–Whitney U statistic, kept integral.
    let mut twice_u: u64 = 0;
    let mut negatives_below: u64 = 0;
    for (pos, neg) in tie_groups(scores, labels, false) {
        twice_u += pos * (2 * negatives_below + neg);
        negatives_below += neg;
    }
    Ok(twice_u as f64 / 2.0 / (positives as f64 * negatives as f64))
}

/// Average precision. Equal scores are ranked as one block, with precision
/// taken at the end of the block.
pub fn auprc(scores: &[f64], labels: &[bool]) -> Result<f64> {
    let (positives, _) = check(scores, labels)?;
    let mut seen = 0u64;
    let mut hits = 0u64;
    let mut total = 0.0;
    for (pos, neg) in tie_groups(scores, labels, true) {
        seen += pos + neg;
        hits += pos;
        if pos > 0 {
            total += pos as f64 * (hits as f64 / seen as f64);
        }
    }
    Ok(total / positives as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub auroc: f64,
    pub auprc: f64,
    pub n_pos: usize,
    pub n_neg: usize,
}

impl Metrics {
    pub fn compute(scores: &[f64], labels: &[bool]) -> Result<Self> {
        let (n_pos, n_neg) = check(scores, labels)?;
        Ok(Self {
            auroc: auroc(scores, labels)?,
            auprc: auprc(scores, labels)?,
            n_pos,
            n_neg,
        })
    }
}

/// One scored run to be evaluated.
#[derive(Debug, Clone, Copy)]
pub struct Run<'a> {
    pub seed: u64,
    pub scores: &'a [f64],
    pub labels: &'a [bool],
    pub kinds: Option<&'a [Option<AnomalyKind>]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunMetrics {
    pub seed: u64,
    pub overall: Metrics,
    /// Metrics with only one anomaly type as positives; anomalies of the other
    /// type are left out and every normal node stays a negative.
    pub per_type: Vec<(AnomalyKind, Metrics)>,
}

/// Mean and sample standard deviation (0 for a single value).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        Self { mean, std }
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.4} ± {:.4}", self.mean, self.std)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub runs: Vec<RunMetrics>,
    pub n_pos: usize,
    pub n_neg: usize,
    pub auroc: Summary,
    pub auprc: Summary,
    /// `(kind, auroc, auprc)` for every type present in all runs.
    pub per_type: Vec<(AnomalyKind, Summary, Summary)>,
}

const KINDS: [AnomalyKind; 2] = [AnomalyKind::Structural, AnomalyKind::Contextual];

fn type_metrics(run: &Run<'_>, kind: AnomalyKind) -> Result<Option<Metrics>> {
    let Some(kinds) = run.kinds else {
        return Ok(None);
    };
    if kinds.len() != run.labels.len() {
        return Err(Error::LengthMismatch {
            left: kinds.len(),
            right: run.labels.len(),
        });
    }
    let mut scores = Vec::new();
    let mut labels = Vec::new();
    for (i, (&label, tag)) in run.labels.iter().zip(kinds).enumerate() {
        if !label || *tag == Some(kind) {
            scores.push(run.scores[i]);
            labels.push(label);
        }
    }
    if labels.iter().all(|&l| !l) {
        return Ok(None);
    }
    Metrics::compute(&scores, &labels).map(Some)
}

/// Per-run metrics and their mean ± sample std across runs.
pub fn report(runs: &[Run<'_>]) -> Result<EvalReport> {
    let first = runs
        .first()
        .ok_or_else(|| Error::Config("no runs to evaluate".into()))?;
    let mut out = Vec::with_capacity(runs.len());
    for run in runs {
        if run.scores.len() != first.scores.len() {
            return Err(Error::LengthMismatch {
                left: first.scores.len(),
                right: run.scores.len(),
            });
        }
        let overall = Metrics::compute(run.scores, run.labels)?;
        let mut per_type = Vec::new();
        for kind in KINDS {
            if let Some(m) = type_metrics(run, kind)? {
                per_type.push((kind, m));
            }
        }
        out.push(RunMetrics {
            seed: run.seed,
            overall,
            per_type,
        });
    }
    let collect = |f: &dyn Fn(&Metrics) -> f64| -> Vec<f64> { out.iter().map(|r| f(&r.overall)).collect() };
    let mut per_type = Vec::new();
    for kind in KINDS {
        let found: Vec<Metrics> = out
            .iter()
            .filter_map(|r| r.per_type.iter().find(|(k, _)| *k == kind).map(|(_, m)| *m))
            .collect();
        if !found.is_empty() && found.len() == out.len() {
            let aurocs: Vec<f64> = found.iter().map(|m| m.auroc).collect();
            let auprcs: Vec<f64> = found.iter().map(|m| m.auprc).collect();
            per_type.push((kind, Summary::of(&aurocs), Summary::of(&auprcs)));
        }
    }
    Ok(EvalReport {
        n_pos: out[0].overall.n_pos,
        n_neg: out[0].overall.n_neg,
        auroc: Summary::of(&collect(&|m| m.auroc)),
        auprc: Summary::of(&collect(&|m| m.auprc)),
        per_type,
        runs: out,
    })
}

impl EvalReport {
    /// `metric,run,value` rows: one per run and metric, then `mean` and `std`.
    pub fn to_csv(&self) -> String {
        let mut csv = String::from("metric,run,value\n");
        let mut emit = |metric: &str, values: Vec<(String, f64)>| {
            for (run, value) in values {
                let _ = writeln!(csv, "{metric},{run},{value}");
            }
        };
        let with_summary = |per_run: Vec<(u64, f64)>, summary: Summary| {
            let mut rows: Vec<(String, f64)> = per_run.into_iter().map(|(s, v)| (s.to_string(), v)).collect();
            rows.push(("mean".into(), summary.mean));
            rows.push(("std".into(), summary.std));
            rows
        };
        emit(
            "auroc",
            with_summary(self.runs.iter().map(|r| (r.seed, r.overall.auroc)).collect(), self.auroc),
        );
        emit(
            "auprc",
            with_summary(self.runs.iter().map(|r| (r.seed, r.overall.auprc)).collect(), self.auprc),
        );
        for &(kind, auroc, auprc) in &self.per_type {
            let pick = |f: fn(&Metrics) -> f64| -> Vec<(u64, f64)> {
                self.runs
                    .iter()
                    .map(|r| {
                        let m = r.per_type.iter().find(|(k, _)| *k == kind).unwrap().1;
                        (r.seed, f(&m))
                    })
                    .collect()
            };
            emit(
                &format!("auroc_{}", kind.as_str()),
                with_summary(pick(|m| m.auroc), auroc),
            );
            emit(
                &format!("auprc_{}", kind.as_str()),
                with_summary(pick(|m| m.auprc), auprc),
            );
        }
        csv
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} runs, {} anomalies, {} normal nodes",
            self.runs.len(),
            self.n_pos,
            self.n_neg
        )?;
        for r in &self.runs {
            writeln!(
                f,
                "  seed {:>6}: AUROC {:.4}  AUPRC {:.4}",
                r.seed, r.overall.auroc, r.overall.auprc
            )?;
        }
        writeln!(f, "AUROC {}", self.auroc)?;
        writeln!(f, "AUPRC {}", self.auprc)?;
        for (kind, auroc, auprc) in &self.per_type {
            writeln!(f, "{:<10} AUROC {}  AUPRC {}", kind.as_str(), auroc, auprc)?;
        }
        Ok(())
    }
}
