//! Per-trial reports and their on-disk formats.
//!
//! A report is one JSON document per trial. The front is also exported as a
//! three-column CSV (`f1_bps,f2_bps,f3_j`). Floats are written as the
//! shortest decimal that parses back to the same `f64`, so
//! export → import → export reproduces the bytes.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use uavris_core::{Candidate, CandidateRecord, ObjectiveRecord, RunResult};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialReport {
    pub algorithm: String,
    pub m: usize,
    pub k: usize,
    pub trial: usize,
    pub seed: u64,
    pub generations: usize,
    pub eval_count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
    /// Per-objective best over the front: max f1, max f2, min f3.
    pub best: ObjectiveRecord,
    /// Per-objective median over the front.
    pub median: ObjectiveRecord,
    pub front: Vec<ObjectiveRecord>,
    pub candidates: Vec<CandidateRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub history: Option<Vec<Vec<ObjectiveRecord>>>,
}

/// Which per-trial summary an aggregate is computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Mode {
    Best,
    Median,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::Best, Mode::Median];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Best => "best",
            Mode::Median => "median",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Objective {
    F1,
    F2,
    F3,
}

impl Objective {
    pub const ALL: [Objective; 3] = [Objective::F1, Objective::F2, Objective::F3];

    pub fn column(self) -> &'static str {
        match self {
            Objective::F1 => "f1_bps",
            Objective::F2 => "f2_bps",
            Objective::F3 => "f3_j",
        }
    }

    pub fn maximized(self) -> bool {
        self != Objective::F3
    }

    pub fn of(self, r: &ObjectiveRecord) -> f64 {
        match self {
            Objective::F1 => r.f1_bps,
            Objective::F2 => r.f2_bps,
            Objective::F3 => r.f3_j,
        }
    }
}

impl TrialReport {
    pub fn from_run(
        run: &RunResult,
        m: usize,
        k: usize,
        trial: usize,
        generations: usize,
        record_timing: bool,
        record_history: bool,
    ) -> Result<Self> {
        let front: Vec<ObjectiveRecord> = run.front_objectives().into_iter().map(Into::into).collect();
        let (best, median) = summaries(&front).ok_or(uavris_core::Error::EmptyFront)?;
        Ok(TrialReport {
            algorithm: run.algorithm.id().to_string(),
            m,
            k,
            trial,
            seed: run.seed,
            generations,
            eval_count: run.eval_count,
            wall_time_s: record_timing.then_some(run.wall_time),
            best,
            median,
            front,
            candidates: run.final_front.iter().map(CandidateRecord::from).collect(),
            history: record_history.then(|| {
                run.history
                    .iter()
                    .map(|g| g.iter().map(|&o| o.into()).collect())
                    .collect()
            }),
        })
    }

    /// File stem shared by the JSON report and the front CSV.
    pub fn stem(&self) -> String {
        format!("{}_m{}_k{}_t{:03}", self.algorithm, self.m, self.k, self.trial)
    }

    pub fn summary(&self, mode: Mode) -> &ObjectiveRecord {
        match mode {
            Mode::Best => &self.best,
            Mode::Median => &self.median,
        }
    }

    pub fn candidates(&self) -> Result<Vec<Candidate>> {
        self.candidates
            .iter()
            .cloned()
            .map(|r| Candidate::try_from(r).map_err(Into::into))
            .collect()
    }

    /// Checks that the stored summaries follow from the stored front and
    /// that the candidate list matches it.
    pub fn check(&self) -> std::result::Result<(), String> {
        let (best, median) = summaries(&self.front).ok_or("report has an empty front")?;
        if best != self.best || median != self.median {
            return Err("stored best/median summaries do not match the front".into());
        }
        if self.candidates.len() != self.front.len() {
            return Err(format!(
                "{} candidates for {} front points",
                self.candidates.len(),
                self.front.len()
            ));
        }
        for (c, f) in self.candidates.iter().zip(&self.front) {
            if c.objectives.as_ref() != Some(f) {
                return Err("candidate objectives differ from the front".into());
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("report serializes");
        out.push(b'\n');
        out
    }

    pub fn from_json(bytes: &[u8]) -> std::result::Result<Self, String> {
        let r: TrialReport = serde_json::from_slice(bytes).map_err(|e| e.to_string())?;
        r.check()?;
        Ok(r)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        write_atomic(path, &self.to_json())
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_json(&bytes).map_err(|m| HarnessError::format(path, m))
    }
}

/// (best, median) over a front, or `None` when it is empty.
pub fn summaries(front: &[ObjectiveRecord]) -> Option<(ObjectiveRecord, ObjectiveRecord)> {
    if front.is_empty() {
        return None;
    }
    let col = |o: Objective| -> Vec<f64> { front.iter().map(|r| o.of(r)).collect() };
    let best = ObjectiveRecord {
        f1_bps: col(Objective::F1).into_iter().fold(f64::NEG_INFINITY, f64::max),
        f2_bps: col(Objective::F2).into_iter().fold(f64::NEG_INFINITY, f64::max),
        f3_j: col(Objective::F3).into_iter().fold(f64::INFINITY, f64::min),
    };
    let median = ObjectiveRecord {
        f1_bps: median(col(Objective::F1)),
        f2_bps: median(col(Objective::F2)),
        f3_j: median(col(Objective::F3)),
    };
    Some((best, median))
}

/// Median; the mean of the two middle values for even lengths.
pub fn median(mut v: Vec<f64>) -> f64 {
    assert!(!v.is_empty(), "median of an empty sample");
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn front_csv(front: &[ObjectiveRecord]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(Objective::ALL.map(Objective::column))
        .expect("write to memory");
    for r in front {
        w.write_record(Objective::ALL.map(|o| fmt_f64(o.of(r))))
            .expect("write to memory");
    }
    w.into_inner().expect("flush to memory")
}

pub fn parse_front_csv(bytes: &[u8]) -> std::result::Result<Vec<ObjectiveRecord>, String> {
    let mut rd = csv::Reader::from_reader(bytes);
    let header = rd.headers().map_err(|e| e.to_string())?;
    if header.iter().ne(Objective::ALL.map(Objective::column)) {
        return Err(format!("unexpected front header {header:?}"));
    }
    let mut out = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        let v: Vec<f64> = rec
            .iter()
            .map(|s| s.parse::<f64>().map_err(|e| format!("{s:?}: {e}")))
            .collect::<std::result::Result<_, _>>()?;
        out.push(ObjectiveRecord {
            f1_bps: v[0],
            f2_bps: v[1],
            f3_j: v[2],
        });
    }
    Ok(out)
}

/// Shortest round-trip decimal.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

/// Writes to a temporary file beside `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| HarnessError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| HarnessError::io(path, e))?;
    tmp.persist(path).map_err(|e| HarnessError::io(path, e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(a: f64, b: f64, c: f64) -> ObjectiveRecord {
        ObjectiveRecord {
            f1_bps: a,
            f2_bps: b,
            f3_j: c,
        }
    }

    #[test]
    fn summaries_of_small_front() {
        let front = [
            rec(1.0, 9.0, 5.0),
            rec(3.0, 4.0, 2.0),
            rec(2.0, 6.0, 8.0),
            rec(0.5, 7.0, 1.0),
        ];
        let (best, med) = summaries(&front).unwrap();
        assert_eq!(best, rec(3.0, 9.0, 1.0));
        assert_eq!(med, rec(1.5, 6.5, 3.5));
        assert!(summaries(&[]).is_none());
    }

    #[test]
    fn csv_shape_and_round_trip() {
        let front = [
            rec(0.1, 1e-300, 1e12),
            rec(123456.789, 2.5, 0.3),
            rec(1.0 / 3.0, 7.0, 9.0),
        ];
        let bytes = front_csv(&front);
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.lines().all(|l| l.split(',').count() == 3));
        let back = parse_front_csv(&bytes).unwrap();
        assert_eq!(back, front);
        assert_eq!(front_csv(&back), bytes);
    }

    #[test]
    fn empty_front_is_header_only() {
        assert_eq!(front_csv(&[]), b"f1_bps,f2_bps,f3_j\n");
    }

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub/x.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }
}
