use rayon::prelude::*;

use super::{initial_population, GenerationStats, RunOutput};
use crate::error::Result;
use crate::evaluation::{Candidate, Evaluator};
use crate::moo::{elitist_filter, RankedPopulation};
use crate::operators::{binary_tournament, joint_variation, OperatorConfig, Streams};
use crate::rng::tag;
use crate::scenario::Scenario;

/// Plain NSGA-II over all continuous genes, with random phases per child.
pub(crate) fn run_nsga2(scenario: &Scenario, seed: u64) -> Result<RunOutput> {
    let pop = scenario.algo.pop_size;
    let cfg = OperatorConfig::from_scenario(scenario);
    let evaluator = Evaluator::new(scenario);

    let mut members = initial_population(scenario, seed, pop);
    evaluator.evaluate_all(&mut members)?;
    let mut ranked = RankedPopulation::rank_all(members);

    let mut out = RunOutput::default();
    for gen in 0..scenario.algo.max_gens {
        let streams = Streams::new(seed, gen as u64);
        let mut offspring: Vec<Candidate> = (0..pop.div_ceil(2))
            .into_par_iter()
            .flat_map_iter(|pair| {
                let mut rng = streams.offspring(tag::JOINT, pair);
                let a = binary_tournament(&ranked.rank, &ranked.crowding, &mut rng);
                let b = binary_tournament(&ranked.rank, &ranked.crowding, &mut rng);
                joint_variation(scenario, &ranked.members[a], &ranked.members[b], &cfg, &mut rng)
            })
            .collect();
        offspring.truncate(pop);
        let evaluations = evaluator.evaluate_all(&mut offspring)?;
        let n_offspring = offspring.len();
        let mut pool = std::mem::take(&mut ranked.members);
        pool.extend(offspring);
        out.generations.push(GenerationStats {
            offspring: n_offspring,
            pool: pool.len(),
            evaluations,
        });
        ranked = elitist_filter(pool, pop);
        out.history.push(ranked.front1_objectives());
    }
    out.final_front = ranked.front1_members();
    out.eval_count = evaluator.count();
    Ok(out)
}
