//! Seeded multi-trial campaigns.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;
use uavris_core::rng::{derive_seed, hash_label};
use uavris_core::{run, Algorithm, Scenario};

use crate::error::{HarnessError, Result};
use crate::report::{front_csv, write_atomic, TrialReport};
use crate::stats;

pub const REPORTS_DIR: &str = "reports";
pub const FRONTS_DIR: &str = "fronts";

/// Campaign file schema. Relative paths are resolved against the directory
/// holding the campaign file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    /// Scenario file. The built-in reference scenario when omitted.
    pub scenario: Option<PathBuf>,
    pub algorithms: Vec<String>,
    pub m_values: Vec<usize>,
    /// Defaults to the scenario's own user count.
    pub k_values: Option<Vec<usize>>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Defaults to the scenario's `rng_seed`.
    pub base_seed: Option<u64>,
    pub output_dir: PathBuf,
    /// Defaults to the number of available cores.
    pub workers: Option<usize>,
    pub generations: Option<usize>,
    pub pop_size: Option<usize>,
    #[serde(default)]
    pub record_timing: bool,
    #[serde(default)]
    pub record_history: bool,
}

fn default_trials() -> usize {
    30
}

#[derive(Debug, Clone)]
pub struct Campaign {
    pub scenario: Scenario,
    pub algorithms: Vec<Algorithm>,
    pub m_values: Vec<usize>,
    pub k_values: Vec<usize>,
    pub trials: usize,
    pub base_seed: u64,
    pub output_dir: PathBuf,
    pub workers: usize,
    pub record_timing: bool,
    pub record_history: bool,
}

/// Seed of one trial. Depends only on the base seed and the cell
/// coordinates, so adding algorithms or cells never shifts existing trials.
pub fn trial_seed(base: u64, algorithm: Algorithm, m: usize, k: usize, trial: usize) -> u64 {
    derive_seed(base, &[hash_label(algorithm.id()), m as u64, k as u64, trial as u64])
}

impl Campaign {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let cfg: CampaignConfig = toml::from_str(&text).map_err(|e| HarnessError::format(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_config(cfg, base)
    }

    pub fn from_config(cfg: CampaignConfig, base_dir: &Path) -> Result<Self> {
        let mut scenario = match &cfg.scenario {
            Some(p) => Scenario::load(base_dir.join(p))?,
            None => Scenario::reference(),
        };
        if let Some(g) = cfg.generations {
            scenario.algo.max_gens = g;
        }
        if let Some(p) = cfg.pop_size {
            scenario.algo.pop_size = p;
        }
        scenario.validate()?;

        let algorithms = cfg
            .algorithms
            .iter()
            .map(|a| a.parse::<Algorithm>())
            .collect::<uavris_core::Result<Vec<_>>>()?;
        let k_values = cfg.k_values.unwrap_or_else(|| vec![scenario.k()]);
        let workers = cfg
            .workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, Into::into));
        let c = Campaign {
            base_seed: cfg.base_seed.unwrap_or(scenario.algo.rng_seed),
            scenario,
            algorithms,
            m_values: cfg.m_values,
            k_values,
            trials: cfg.trials,
            output_dir: base_dir.join(cfg.output_dir),
            workers,
            record_timing: cfg.record_timing,
            record_history: cfg.record_history,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(HarnessError::Validation(m));
        if self.algorithms.is_empty() {
            return fail("campaign lists no algorithms".into());
        }
        if self.trials == 0 {
            return fail("trials must be at least 1".into());
        }
        if self.workers == 0 {
            return fail("workers must be at least 1".into());
        }
        if self.m_values.is_empty() || self.m_values.contains(&0) {
            return fail(format!(
                "M sweep must be non-empty and positive, got {:?}",
                self.m_values
            ));
        }
        if self.k_values.is_empty() || self.k_values.contains(&0) {
            return fail(format!(
                "K sweep must be non-empty and positive, got {:?}",
                self.k_values
            ));
        }
        for w in [&self.m_values, &self.k_values] {
            let mut v = w.clone();
            v.sort_unstable();
            v.dedup();
            if v.len() != w.len() {
                return fail(format!("sweep {w:?} repeats a value"));
            }
        }
        let mut algs = self.algorithms.clone();
        algs.sort_by_key(|a| a.id());
        algs.dedup();
        if algs.len() != self.algorithms.len() {
            return fail("campaign lists an algorithm twice".into());
        }
        for &m in &self.m_values {
            for &k in &self.k_values {
                self.scenario.with_counts(m, k)?;
            }
        }
        Ok(())
    }

    /// Every (algorithm, M, K, trial) cell in canonical order.
    pub fn cells(&self) -> Vec<(Algorithm, usize, usize, usize)> {
        let mut out = Vec::new();
        for &a in &self.algorithms {
            for &m in &self.m_values {
                for &k in &self.k_values {
                    out.extend((0..self.trials).map(|t| (a, m, k, t)));
                }
            }
        }
        out
    }

    /// Runs every trial on a pool of `workers` threads and returns the
    /// reports in cell order. Nothing is written.
    pub fn execute(&self) -> Result<Vec<TrialReport>> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| HarnessError::Validation(format!("thread pool: {e}")))?;
        let cells = self.cells();
        pool.install(|| {
            cells
                .par_iter()
                .map(|&(a, m, k, t)| {
                    let s = self.scenario.with_counts(m, k)?;
                    let seed = trial_seed(self.base_seed, a, m, k, t);
                    let r = run(a, &s, seed)?;
                    TrialReport::from_run(&r, m, k, t, s.algo.max_gens, self.record_timing, self.record_history)
                })
                .collect()
        })
    }

    /// Executes the campaign and writes reports, front CSVs and the
    /// aggregate tables under the output directory.
    pub fn run(&self) -> Result<Vec<TrialReport>> {
        let reports = self.execute()?;
        write_reports(&reports, &self.output_dir)?;
        stats::write_tables(&reports, &self.output_dir)?;
        Ok(reports)
    }
}

/// `reports/<stem>.json` and `fronts/<stem>.csv` for each report.
pub fn write_reports(reports: &[TrialReport], dir: &Path) -> Result<()> {
    for r in reports {
        let stem = r.stem();
        r.write_json(&dir.join(REPORTS_DIR).join(format!("{stem}.json")))?;
        write_atomic(&dir.join(FRONTS_DIR).join(format!("{stem}.csv")), &front_csv(&r.front))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> Result<Campaign> {
        Campaign::from_config(toml::from_str(text).unwrap(), Path::new("/tmp"))
    }

    #[test]
    fn seeds_ignore_unrelated_cells() {
        let a = trial_seed(1, Algorithm::Nsga2, 2, 3, 0);
        assert_eq!(a, trial_seed(1, Algorithm::Nsga2, 2, 3, 0));
        assert_ne!(a, trial_seed(1, Algorithm::Nsga2, 2, 3, 1));
        assert_ne!(a, trial_seed(1, Algorithm::Nsga3, 2, 3, 0));
        assert_ne!(a, trial_seed(2, Algorithm::Nsga2, 2, 3, 0));
    }

    #[test]
    fn rejects_bad_sweeps() {
        let base = "algorithms = [\"nsga2\"]\noutput_dir = \"o\"\n";
        assert!(cfg(&format!("{base}m_values = [2]\ntrials = 0")).is_err());
        assert!(cfg(&format!("{base}m_values = [0]")).is_err());
        assert!(cfg(&format!("{base}m_values = []")).is_err());
        assert!(cfg(&format!("{base}m_values = [2]\nk_values = [11]")).is_err());
        let ok = cfg(&format!("{base}m_values = [2, 4]")).unwrap();
        assert_eq!(ok.trials, 30);
        assert_eq!(ok.k_values, vec![5]);
        assert_eq!(ok.cells().len(), 60);
    }
}
