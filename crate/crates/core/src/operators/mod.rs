//! Variation and repair operators.
//!
//! Each cohort builder derives one RNG stream per offspring from
//! `(seed, generation, tag, index)`, so cohorts come out the same whether
//! they are built sequentially or in parallel.

mod beam;
mod joint;
mod phase;
mod real;

pub use beam::{
    beam_from_reals, beam_to_reals, beamforming_offspring, normalize_power, normalize_power_with,
    sbx_beamforming_offspring, swarm_step, update_pbest,
};
pub use joint::{joint_variation, vary_positions};
pub use phase::{phase_learning_offspring, random_phase_matrix, random_phase_offspring, select_phase_donor};
pub use real::{binary_tournament, obl_value, polynomial_mutation, sbx_pair, Repair};

use crate::rng::{self, Rng};
use crate::scenario::Scenario;

/// Operator hyper-parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorConfig {
    pub sbx_eta: f64,
    pub mut_eta: f64,
    pub crossover_prob: f64,
    /// Per-gene mutation probability for position genes.
    pub mutation_prob: f64,
    /// Per-gene mutation probability for precoder genes (real and imaginary
    /// parts counted separately).
    pub beam_mutation_prob: f64,
    pub inertia_eps: f64,
    pub learn_c1: f64,
    pub learn_c2: f64,
}

impl OperatorConfig {
    pub fn from_scenario(s: &Scenario) -> Self {
        let a = &s.algo;
        let beam_genes = 2 * s.radio.n_bs * s.k();
        Self {
            sbx_eta: a.sbx_eta,
            mut_eta: a.mut_eta,
            crossover_prob: a.crossover_prob,
            mutation_prob: a.mutation_prob_for(s.m()),
            beam_mutation_prob: 1.0 / beam_genes.max(1) as f64,
            inertia_eps: a.inertia_eps,
            learn_c1: a.learn_c1,
            learn_c2: a.learn_c2,
        }
    }
}

/// Per-generation stream factory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Streams {
    pub seed: u64,
    pub generation: u64,
}

impl Streams {
    pub fn new(seed: u64, generation: u64) -> Self {
        Self { seed, generation }
    }

    /// Stream for offspring `index` of the cohort tagged `tag`.
    pub fn offspring(&self, tag: u64, index: usize) -> Rng {
        rng::stream(self.seed, &[tag, self.generation, index as u64])
    }

    /// Stream for a once-per-generation decision of the cohort tagged `tag`.
    pub fn shared(&self, tag: u64) -> Rng {
        rng::stream(self.seed, &[tag, self.generation, u64::MAX])
    }
}
