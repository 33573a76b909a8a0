//! Aggregate tables over trial reports.
//!
//! * `aggregates.csv`: mean, sample std (n − 1), max and min per
//!   (algorithm, M, K, mode, objective).
//! * `improvement.csv`: for each (M, K, mode, objective), the leading
//!   algorithm by mean against the runner-up. For f3 the ratio is the
//!   relative saving.
//! * `cdf.csv`: sorted per-trial values with empirical probabilities.

use std::collections::BTreeMap;
use std::path::Path;

use uavris_core::Algorithm;

use crate::error::{HarnessError, Result};
use crate::report::{fmt_f64, write_atomic, Mode, Objective, TrialReport};

pub const AGGREGATES_FILE: &str = "aggregates.csv";
pub const IMPROVEMENT_FILE: &str = "improvement.csv";
pub const CDF_FILE: &str = "cdf.csv";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct CellKey {
    order: usize,
    m: usize,
    k: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub algorithm: Algorithm,
    pub m: usize,
    pub k: usize,
    pub mode: Mode,
    pub objective: Objective,
    pub mean: f64,
    pub std: f64,
    pub max: f64,
    pub min: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImprovementRow {
    pub m: usize,
    pub k: usize,
    pub mode: Mode,
    pub objective: Objective,
    pub leader: Algorithm,
    pub runner_up: Algorithm,
    pub leader_mean: f64,
    pub runner_up_mean: f64,
    pub improvement: f64,
}

/// Reports grouped by (algorithm, M, K) in a canonical order: algorithms as
/// listed in [`Algorithm::ALL`], then M, then K; trials ascending.
fn group(reports: &[TrialReport]) -> Result<BTreeMap<CellKey, (Algorithm, Vec<&TrialReport>)>> {
    let mut cells: BTreeMap<CellKey, (Algorithm, Vec<&TrialReport>)> = BTreeMap::new();
    for r in reports {
        let alg: Algorithm = r.algorithm.parse()?;
        let order = Algorithm::ALL.iter().position(|&a| a == alg).expect("listed");
        cells
            .entry(CellKey { order, m: r.m, k: r.k })
            .or_insert_with(|| (alg, Vec::new()))
            .1
            .push(r);
    }
    for (_, list) in cells.values_mut() {
        list.sort_by_key(|r| (r.trial, r.seed));
        if list.windows(2).any(|w| w[0].trial == w[1].trial) {
            return Err(HarnessError::Validation(format!(
                "duplicate trial index for {} M={} K={}",
                list[0].algorithm, list[0].m, list[0].k
            )));
        }
    }
    Ok(cells)
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation; zero for a single observation.
pub fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let mu = mean(xs);
    (xs.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

pub fn aggregate(reports: &[TrialReport]) -> Result<Vec<AggregateRow>> {
    let mut rows = Vec::new();
    for (key, (alg, list)) in group(reports)? {
        for mode in Mode::ALL {
            for obj in Objective::ALL {
                let xs: Vec<f64> = list.iter().map(|r| obj.of(r.summary(mode))).collect();
                rows.push(AggregateRow {
                    algorithm: alg,
                    m: key.m,
                    k: key.k,
                    mode,
                    objective: obj,
                    mean: mean(&xs),
                    std: sample_std(&xs),
                    max: xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                    min: xs.iter().copied().fold(f64::INFINITY, f64::min),
                    n: xs.len(),
                });
            }
        }
    }
    Ok(rows)
}

/// Leader against runner-up in every cell that holds at least two
/// algorithms.
pub fn improvements(rows: &[AggregateRow]) -> Vec<ImprovementRow> {
    let mut cells: BTreeMap<(usize, usize, Mode, Objective), Vec<&AggregateRow>> = BTreeMap::new();
    for r in rows {
        cells.entry((r.m, r.k, r.mode, r.objective)).or_default().push(r);
    }
    let mut out = Vec::new();
    for ((m, k, mode, objective), mut list) in cells {
        if list.len() < 2 {
            continue;
        }
        // Stable sort keeps the canonical algorithm order among ties.
        if objective.maximized() {
            list.sort_by(|a, b| b.mean.total_cmp(&a.mean));
        } else {
            list.sort_by(|a, b| a.mean.total_cmp(&b.mean));
        }
        let (lead, second) = (list[0], list[1]);
        let gain = if objective.maximized() {
            lead.mean - second.mean
        } else {
            second.mean - lead.mean
        };
        out.push(ImprovementRow {
            m,
            k,
            mode,
            objective,
            leader: lead.algorithm,
            runner_up: second.algorithm,
            leader_mean: lead.mean,
            runner_up_mean: second.mean,
            improvement: gain / second.mean.abs(),
        });
    }
    out
}

fn to_csv<I>(header: &[&str], rows: I) -> Vec<u8>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("write to memory");
    for r in rows {
        w.write_record(&r).expect("write to memory");
    }
    w.into_inner().expect("flush to memory")
}

pub fn aggregates_csv(rows: &[AggregateRow]) -> Vec<u8> {
    to_csv(
        &[
            "algorithm",
            "m",
            "k",
            "mode",
            "objective",
            "mean",
            "std",
            "max",
            "min",
            "n",
        ],
        rows.iter().map(|r| {
            vec![
                r.algorithm.id().to_string(),
                r.m.to_string(),
                r.k.to_string(),
                r.mode.as_str().to_string(),
                r.objective.column().to_string(),
                fmt_f64(r.mean),
                fmt_f64(r.std),
                fmt_f64(r.max),
                fmt_f64(r.min),
                r.n.to_string(),
            ]
        }),
    )
}

pub fn improvement_csv(rows: &[ImprovementRow]) -> Vec<u8> {
    to_csv(
        &[
            "m",
            "k",
            "mode",
            "objective",
            "leader",
            "runner_up",
            "leader_mean",
            "runner_up_mean",
            "improvement",
        ],
        rows.iter().map(|r| {
            vec![
                r.m.to_string(),
                r.k.to_string(),
                r.mode.as_str().to_string(),
                r.objective.column().to_string(),
                r.leader.id().to_string(),
                r.runner_up.id().to_string(),
                fmt_f64(r.leader_mean),
                fmt_f64(r.runner_up_mean),
                fmt_f64(r.improvement),
            ]
        }),
    )
}

/// Empirical CDF samples: one row per trial, values ascending,
/// `p = rank / n`.
pub fn cdf_csv(reports: &[TrialReport]) -> Result<Vec<u8>> {
    let mut rows = Vec::new();
    for (key, (alg, list)) in group(reports)? {
        for mode in Mode::ALL {
            for obj in Objective::ALL {
                let mut xs: Vec<f64> = list.iter().map(|r| obj.of(r.summary(mode))).collect();
                xs.sort_by(f64::total_cmp);
                let n = xs.len();
                for (i, x) in xs.into_iter().enumerate() {
                    rows.push(vec![
                        alg.id().to_string(),
                        key.m.to_string(),
                        key.k.to_string(),
                        mode.as_str().to_string(),
                        obj.column().to_string(),
                        (i + 1).to_string(),
                        fmt_f64((i + 1) as f64 / n as f64),
                        fmt_f64(x),
                    ]);
                }
            }
        }
    }
    Ok(to_csv(
        &["algorithm", "m", "k", "mode", "objective", "rank", "p", "value"],
        rows,
    ))
}

/// Writes the three tables into `dir`.
pub fn write_tables(reports: &[TrialReport], dir: &Path) -> Result<Vec<AggregateRow>> {
    let rows = aggregate(reports)?;
    write_atomic(&dir.join(AGGREGATES_FILE), &aggregates_csv(&rows))?;
    write_atomic(&dir.join(IMPROVEMENT_FILE), &improvement_csv(&improvements(&rows)))?;
    write_atomic(&dir.join(CDF_FILE), &cdf_csv(reports)?)?;
    Ok(rows)
}

/// Every `*.json` report directly inside `dir`, in file-name order.
pub fn load_reports(dir: &Path) -> Result<Vec<TrialReport>> {
    let entries = std::fs::read_dir(dir).map_err(|e| HarnessError::io(dir, e))?;
    let mut paths = Vec::new();
    for e in entries {
        let p = e.map_err(|e| HarnessError::io(dir, e))?.path();
        if p.extension().is_some_and(|x| x == "json") {
            paths.push(p);
        }
    }
    paths.sort();
    if paths.is_empty() {
        return Err(HarnessError::Validation(format!(
            "no reports found in {}",
            dir.display()
        )));
    }
    paths.iter().map(|p| TrialReport::read_json(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_statistics() {
        let xs = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0];
        assert_eq!(mean(&xs), 5.0);
        // Σ(x − 5)² = 32, n − 1 = 7.
        assert!((sample_std(&xs) - (32.0f64 / 7.0).sqrt()).abs() < 1e-15);
        assert_eq!(sample_std(&[3.0]), 0.0);
    }
}
