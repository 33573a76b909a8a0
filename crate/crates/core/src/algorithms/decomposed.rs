//! Generation loop shared by the full method and its single-mechanism
//! variants. Each generation builds one cohort per variable group from the
//! same parents, evaluates only the new children and keeps `Pop` survivors
//! of parents plus children.

use rayon::prelude::*;

use super::{initial_population, GenerationStats, RunOutput};
use crate::error::Result;
use crate::evaluation::Evaluator;
use crate::moo::RankedPopulation;
use crate::operators::{
    beamforming_offspring, phase_learning_offspring, random_phase_offspring, sbx_beamforming_offspring, update_pbest,
    vary_positions, OperatorConfig, Repair, Streams,
};
use crate::rng::{self, tag};
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeamUpdate {
    /// Precoders crossed and mutated as real genes.
    Sbx,
    /// Velocity update toward personal best and a first-front leader.
    Swarm,
}

/// Which of the three upgraded mechanisms are active.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mechanisms {
    pub position_repair: Repair,
    pub phase_learning: bool,
    pub beam_update: BeamUpdate,
}

impl Mechanisms {
    pub const FULL: Self = Self {
        position_repair: Repair::Opposition,
        phase_learning: true,
        beam_update: BeamUpdate::Swarm,
    };
    pub const C1: Self = Self {
        position_repair: Repair::Opposition,
        phase_learning: false,
        beam_update: BeamUpdate::Sbx,
    };
    pub const D: Self = Self {
        position_repair: Repair::Clamp,
        phase_learning: true,
        beam_update: BeamUpdate::Sbx,
    };
    pub const C2: Self = Self {
        position_repair: Repair::Clamp,
        phase_learning: false,
        beam_update: BeamUpdate::Swarm,
    };

    /// Offspring per generation as a multiple of the population size.
    pub fn cohorts(&self) -> usize {
        if self.phase_learning {
            4
        } else {
            3
        }
    }
}

pub(crate) fn run_decomposed(scenario: &Scenario, seed: u64, mech: Mechanisms) -> Result<RunOutput> {
    let pop = scenario.algo.pop_size;
    let cfg = OperatorConfig::from_scenario(scenario);
    let evaluator = Evaluator::new(scenario);
    let swarm = mech.beam_update == BeamUpdate::Swarm;

    let mut members = initial_population(scenario, seed, pop);
    evaluator.evaluate_all(&mut members)?;
    if swarm {
        members.iter_mut().for_each(|c| c.init_swarm_state());
    }
    let mut ranked = RankedPopulation::rank_all(members);

    let mut out = RunOutput::default();
    for gen in 0..scenario.algo.max_gens {
        let streams = Streams::new(seed, gen as u64);
        let mut offspring = vary_positions(scenario, &ranked, &cfg, mech.position_repair, streams);
        offspring.extend(random_phase_offspring(&ranked.members, streams));
        if mech.phase_learning {
            offspring.extend(phase_learning_offspring(&ranked, streams)?);
        }
        match mech.beam_update {
            BeamUpdate::Swarm => offspring.extend(beamforming_offspring(scenario, &ranked, &cfg, streams)?),
            BeamUpdate::Sbx => offspring.extend(sbx_beamforming_offspring(scenario, &ranked, &cfg, streams)),
        }
        let evaluations = evaluator.evaluate_all(&mut offspring)?;
        if swarm {
            offspring.par_iter_mut().enumerate().for_each(|(j, c)| {
                c.init_swarm_state();
                update_pbest(c, &mut rng::stream(seed, &[tag::PBEST, gen as u64, j as u64]));
            });
        }

        let n_offspring = offspring.len();
        let mut pool = std::mem::take(&mut ranked.members);
        pool.extend(offspring);
        out.generations.push(GenerationStats {
            offspring: n_offspring,
            pool: pool.len(),
            evaluations,
        });
        ranked = crate::moo::elitist_filter(pool, pop);
        out.history.push(ranked.front1_objectives());
    }
    out.final_front = ranked.front1_members();
    out.eval_count = evaluator.count();
    Ok(out)
}
