use rand::seq::SliceRandom;
use rand::Rng;

use super::nsga3::{front_members, front_objectives};
use super::{initial_population, GenerationStats, RunOutput};
use crate::error::Result;
use crate::evaluation::{Candidate, Evaluator, ObjectiveVector};
use crate::moo::{das_dennis, das_dennis_count, das_dennis_divisions};
use crate::operators::{joint_variation, OperatorConfig, Streams};
use crate::rng::tag;
use crate::scenario::Scenario;

const NEIGHBOURS: usize = 10;
const MAX_REPLACEMENTS: usize = 2;
const NEIGHBOUR_MATING_PROB: f64 = 0.9;

/// Tchebycheff value of `f` for weight `w` on objectives shifted by the
/// ideal point and divided by `scale`.
fn tchebycheff(f: &ObjectiveVector, w: &[f64], ideal: &[f64; 3], scale: &[f64; 3]) -> f64 {
    (0..3)
        .map(|j| w[j] * (f.0[j] - ideal[j]) / scale[j])
        .fold(f64::NEG_INFINITY, f64::max)
}

fn neighbourhoods(weights: &[Vec<f64>], t: usize) -> Vec<Vec<usize>> {
    weights
        .iter()
        .map(|wi| {
            let mut order: Vec<usize> = (0..weights.len()).collect();
            let dist = |j: usize| -> f64 { wi.iter().zip(&weights[j]).map(|(a, b)| (a - b).powi(2)).sum() };
            order.sort_by(|&a, &b| dist(a).total_cmp(&dist(b)));
            order.truncate(t);
            order
        })
        .collect()
}

fn nadir(members: &[Candidate]) -> [f64; 3] {
    std::array::from_fn(|j| members.iter().map(|c| c.obj().0[j]).fold(f64::NEG_INFINITY, f64::max))
}

/// MOEA/D with Tchebycheff decomposition and neighbourhood mating.
pub(crate) fn run_moead(scenario: &Scenario, seed: u64) -> Result<RunOutput> {
    let pop = scenario.algo.pop_size;
    let p = das_dennis_divisions(3, pop);
    let n = das_dennis_count(3, p);
    let weights: Vec<Vec<f64>> = das_dennis(3, p)
        .into_iter()
        .map(|w| w.into_iter().map(|x| if x == 0.0 { 1e-6 } else { x }).collect())
        .collect();
    let hood = neighbourhoods(&weights, NEIGHBOURS.min(n));
    let cfg = OperatorConfig::from_scenario(scenario);
    let evaluator = Evaluator::new(scenario);

    let mut members = initial_population(scenario, seed, n);
    evaluator.evaluate_all(&mut members)?;
    let mut ideal: [f64; 3] =
        std::array::from_fn(|j| members.iter().map(|c| c.obj().0[j]).fold(f64::INFINITY, f64::min));

    let mut out = RunOutput::default();
    for gen in 0..scenario.algo.max_gens {
        let streams = Streams::new(seed, gen as u64);
        let before = evaluator.count();
        let worst = nadir(&members);
        for i in 0..n {
            let mut rng = streams.offspring(tag::DECOMPOSITION, i);
            let mut pool: Vec<usize> = if rng.gen::<f64>() < NEIGHBOUR_MATING_PROB {
                hood[i].clone()
            } else {
                (0..n).collect()
            };
            let a = pool[rng.gen_range(0..pool.len())];
            let b = pool[rng.gen_range(0..pool.len())];
            let [mut child, _] = joint_variation(scenario, &members[a], &members[b], &cfg, &mut rng);
            let f = evaluator.evaluate(&mut child)?;
            for j in 0..3 {
                ideal[j] = ideal[j].min(f.0[j]);
            }
            let scale: [f64; 3] = std::array::from_fn(|j| (worst[j] - ideal[j]).max(1e-12));
            pool.shuffle(&mut rng);
            let mut replaced = 0;
            for &k in &pool {
                if replaced == MAX_REPLACEMENTS {
                    break;
                }
                let w = &weights[k];
                if tchebycheff(&f, w, &ideal, &scale) < tchebycheff(&members[k].obj(), w, &ideal, &scale) {
                    members[k] = child.clone();
                    replaced += 1;
                }
            }
        }
        let evaluations = evaluator.count() - before;
        out.generations.push(GenerationStats {
            offspring: n,
            pool: n,
            evaluations,
        });
        out.history.push(front_objectives(&members));
    }
    out.final_front = front_members(&members);
    out.eval_count = evaluator.count();
    Ok(out)
}
