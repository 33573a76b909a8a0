//! Optimizers and one-shot deployment strategies.

mod decomposed;
mod moead;
mod mopso;
mod nsga2;
mod nsga3;
mod strategies;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use decomposed::run_decomposed;
pub use decomposed::{BeamUpdate, Mechanisms};
use moead::run_moead;
use mopso::run_mopso;
use nsga2::run_nsga2;
pub use nsga3::nsga3_select;
use nsga3::run_nsga3;
pub use strategies::{cdps_optimize, dft_phases, run_strategy, uniform_positions, CdpsScore, CDPS_MAX_PASSES};

use crate::error::{Error, Result};
use crate::evaluation::{random_candidate, Candidate, ObjectiveVector};
use crate::rng::{self, tag};
use crate::scenario::Scenario;

/// Every runnable method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Insga2Cdc,
    Insga2C1,
    Insga2D,
    Insga2C2,
    Nsga2,
    Nsga3,
    Mopso,
    MoeaD,
    Rd,
    Ud,
    Dft,
    Cdps,
}

impl Algorithm {
    pub const ALL: [Algorithm; 12] = [
        Algorithm::Insga2Cdc,
        Algorithm::Insga2C1,
        Algorithm::Insga2D,
        Algorithm::Insga2C2,
        Algorithm::Nsga2,
        Algorithm::Nsga3,
        Algorithm::Mopso,
        Algorithm::MoeaD,
        Algorithm::Rd,
        Algorithm::Ud,
        Algorithm::Dft,
        Algorithm::Cdps,
    ];

    /// Stable identifier used in file names, seeds and reports.
    pub fn id(self) -> &'static str {
        match self {
            Algorithm::Insga2Cdc => "insga2cdc",
            Algorithm::Insga2C1 => "insga2-c1",
            Algorithm::Insga2D => "insga2-d",
            Algorithm::Insga2C2 => "insga2-c2",
            Algorithm::Nsga2 => "nsga2",
            Algorithm::Nsga3 => "nsga3",
            Algorithm::Mopso => "mopso",
            Algorithm::MoeaD => "moead",
            Algorithm::Rd => "rd",
            Algorithm::Ud => "ud",
            Algorithm::Dft => "dft",
            Algorithm::Cdps => "cdps",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Algorithm::Insga2Cdc => "INSGA-II-CDC",
            Algorithm::Insga2C1 => "INSGA-II-C1",
            Algorithm::Insga2D => "INSGA-II-D",
            Algorithm::Insga2C2 => "INSGA-II-C2",
            Algorithm::Nsga2 => "NSGA-II",
            Algorithm::Nsga3 => "NSGA-III",
            Algorithm::Mopso => "MOPSO",
            Algorithm::MoeaD => "MOEA/D",
            Algorithm::Rd => "RD",
            Algorithm::Ud => "UD",
            Algorithm::Dft => "DFT-Design",
            Algorithm::Cdps => "CDPS-Design",
        }
    }

    /// One-shot strategies produce a single candidate and no history.
    pub fn is_strategy(self) -> bool {
        matches!(self, Algorithm::Rd | Algorithm::Ud | Algorithm::Dft | Algorithm::Cdps)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    /// Accepts ids and display names, ignoring case and punctuation.
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(char::is_ascii_alphanumeric)
            .map(|c| c.to_ascii_lowercase())
            .collect();
        let a = match key.as_str() {
            "insga2cdc" | "insgaiicdc" => Algorithm::Insga2Cdc,
            "insga2c1" | "insgaiic1" | "c1" => Algorithm::Insga2C1,
            "insga2d" | "insgaiid" | "d" => Algorithm::Insga2D,
            "insga2c2" | "insgaiic2" | "c2" => Algorithm::Insga2C2,
            "nsga2" | "nsgaii" => Algorithm::Nsga2,
            "nsga3" | "nsgaiii" => Algorithm::Nsga3,
            "mopso" => Algorithm::Mopso,
            "moead" => Algorithm::MoeaD,
            "rd" => Algorithm::Rd,
            "ud" => Algorithm::Ud,
            "dft" | "dftdesign" => Algorithm::Dft,
            "cdps" | "cdpsdesign" => Algorithm::Cdps,
            _ => {
                return Err(Error::Unknown {
                    kind: "algorithm",
                    name: s.to_string(),
                })
            }
        };
        Ok(a)
    }
}

/// Per-generation bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenerationStats {
    /// Offspring created this generation.
    pub offspring: usize,
    /// Candidates entering environmental selection.
    pub pool: usize,
    /// Objective evaluations performed this generation.
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub algorithm: Algorithm,
    pub seed: u64,
    /// Non-dominated set at the end of the run.
    pub final_front: Vec<Candidate>,
    /// First-front objectives after each generation.
    pub history: Vec<Vec<ObjectiveVector>>,
    pub generations: Vec<GenerationStats>,
    pub eval_count: u64,
    /// Seconds. Not part of any deterministic output.
    pub wall_time: f64,
}

impl RunResult {
    pub fn front_objectives(&self) -> Vec<ObjectiveVector> {
        self.final_front.iter().map(Candidate::obj).collect()
    }
}

/// Runs `algorithm` on `scenario` with the algorithm parameters it carries.
pub fn run(algorithm: Algorithm, scenario: &Scenario, seed: u64) -> Result<RunResult> {
    scenario.validate()?;
    let start = Instant::now();
    let mut result = match algorithm {
        Algorithm::Insga2Cdc => run_decomposed(scenario, seed, Mechanisms::FULL)?,
        Algorithm::Insga2C1 => run_decomposed(scenario, seed, Mechanisms::C1)?,
        Algorithm::Insga2D => run_decomposed(scenario, seed, Mechanisms::D)?,
        Algorithm::Insga2C2 => run_decomposed(scenario, seed, Mechanisms::C2)?,
        Algorithm::Nsga2 => run_nsga2(scenario, seed)?,
        Algorithm::Nsga3 => run_nsga3(scenario, seed)?,
        Algorithm::Mopso => run_mopso(scenario, seed)?,
        Algorithm::MoeaD => run_moead(scenario, seed)?,
        Algorithm::Rd | Algorithm::Ud | Algorithm::Dft | Algorithm::Cdps => {
            let (c, evals) = run_strategy(algorithm, scenario, seed)?;
            RunOutput {
                final_front: vec![c],
                history: Vec::new(),
                generations: Vec::new(),
                eval_count: evals,
            }
        }
    };
    let final_front = std::mem::take(&mut result.final_front);
    Ok(RunResult {
        algorithm,
        seed,
        final_front,
        history: result.history,
        generations: result.generations,
        eval_count: result.eval_count,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Full optimizer with all three mechanisms.
pub fn run_insga2cdc(scenario: &Scenario, seed: u64) -> Result<RunResult> {
    run(Algorithm::Insga2Cdc, scenario, seed)
}

/// Single-mechanism variant: `insga2-c1`, `insga2-d` or `insga2-c2`.
pub fn run_ablation(variant: &str, scenario: &Scenario, seed: u64) -> Result<RunResult> {
    match variant.parse()? {
        a @ (Algorithm::Insga2C1 | Algorithm::Insga2D | Algorithm::Insga2C2) => run(a, scenario, seed),
        _ => Err(Error::Unknown {
            kind: "ablation variant",
            name: variant.to_string(),
        }),
    }
}

/// Reference method: `nsga2`, `nsga3`, `mopso` or `moead`.
pub fn run_baseline(name: &str, scenario: &Scenario, seed: u64) -> Result<RunResult> {
    match name.parse()? {
        a @ (Algorithm::Nsga2 | Algorithm::Nsga3 | Algorithm::Mopso | Algorithm::MoeaD) => run(a, scenario, seed),
        _ => Err(Error::Unknown {
            kind: "baseline",
            name: name.to_string(),
        }),
    }
}

/// What each optimizer loop hands back before timing is attached.
#[derive(Debug, Default)]
pub(crate) struct RunOutput {
    pub final_front: Vec<Candidate>,
    pub history: Vec<Vec<ObjectiveVector>>,
    pub generations: Vec<GenerationStats>,
    pub eval_count: u64,
}

/// `n` random candidates, candidate `i` drawn from its own stream.
pub(crate) fn initial_population(scenario: &Scenario, seed: u64, n: usize) -> Vec<Candidate> {
    (0..n)
        .into_par_iter()
        .map(|i| random_candidate(scenario, &mut rng::stream(seed, &[tag::INIT, i as u64])))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.id().parse::<Algorithm>().unwrap(), a);
            assert_eq!(a.display_name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("nsga4".parse::<Algorithm>().is_err());
        assert!(run_ablation("nsga2", &Scenario::toy(), 1).is_err());
        assert!(run_baseline("insga2cdc", &Scenario::toy(), 1).is_err());
    }
}
