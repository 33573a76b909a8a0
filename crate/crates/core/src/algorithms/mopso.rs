use rand::Rng;
use rayon::prelude::*;

use super::{initial_population, GenerationStats, RunOutput};
use crate::error::Result;
use crate::evaluation::{Candidate, Evaluator, ObjectiveVector};
use crate::moo::{crowding_distance, dominates, elitist_select, non_dominated_front, roulette_index};
use crate::operators::{
    beam_from_reals, beam_to_reals, normalize_power, random_phase_matrix, OperatorConfig, Repair, Streams,
};
use crate::rng::{self, tag};
use crate::scenario::Scenario;

struct Particle {
    current: Candidate,
    velocity: Vec<f64>,
    best: Candidate,
}

fn genes(c: &Candidate) -> Vec<f64> {
    let mut x: Vec<f64> = c.positions().iter().flatten().copied().collect();
    x.extend(beam_to_reals(c.beamforming()));
    x
}

/// Non-dominated members of `pool`, cut to `cap` by crowding distance.
fn update_repository(pool: Vec<Candidate>, cap: usize) -> Vec<Candidate> {
    let objs: Vec<ObjectiveVector> = pool.iter().map(Candidate::obj).collect();
    let nd = non_dominated_front(&objs);
    let keep: Vec<usize> = if nd.len() > cap {
        let front: Vec<ObjectiveVector> = nd.iter().map(|&i| objs[i]).collect();
        elitist_select(&front, cap).indices.into_iter().map(|w| nd[w]).collect()
    } else {
        nd
    };
    let mut slots: Vec<Option<Candidate>> = pool.into_iter().map(Some).collect();
    keep.iter()
        .map(|&i| slots[i].take().expect("index kept twice"))
        .collect()
}

/// Particle swarm over positions and precoder reals. Leaders come from the
/// non-dominated set (capped at `Pop`) by crowding roulette; phases are
/// redrawn every move.
pub(crate) fn run_mopso(scenario: &Scenario, seed: u64) -> Result<RunOutput> {
    let pop = scenario.algo.pop_size;
    let cfg = OperatorConfig::from_scenario(scenario);
    let evaluator = Evaluator::new(scenario);
    let g = &scenario.geometry;
    let m = g.m_uavs;
    let (n_bs, users) = (scenario.radio.n_bs, scenario.k());
    let (rows, cols, levels) = (m, scenario.radio.n_ris(), scenario.radio.phase_levels());
    let p_max = scenario.radio.p_max_w;

    let mut members = initial_population(scenario, seed, pop);
    evaluator.evaluate_all(&mut members)?;
    let mut swarm: Vec<Particle> = members
        .iter()
        .map(|c| Particle {
            current: c.clone(),
            velocity: vec![0.0; genes(c).len()],
            best: c.clone(),
        })
        .collect();
    let mut repo = update_repository(members, pop);

    let mut out = RunOutput::default();
    for gen in 0..scenario.algo.max_gens {
        let streams = Streams::new(seed, gen as u64);
        let repo_objs: Vec<ObjectiveVector> = repo.iter().map(Candidate::obj).collect();
        let repo_cd = crowding_distance(&repo_objs);
        swarm.par_iter_mut().enumerate().for_each(|(i, p)| {
            let mut rng = streams.offspring(tag::SWARM, i);
            let leader = genes(&repo[roulette_index(&repo_cd, &mut rng)]);
            let best = genes(&p.best);
            let mut x = genes(&p.current);
            for d in 0..x.len() {
                let (r1, r2): (f64, f64) = (rng.gen(), rng.gen());
                p.velocity[d] = cfg.inertia_eps * p.velocity[d]
                    + cfg.learn_c1 * r1 * (best[d] - x[d])
                    + cfg.learn_c2 * r2 * (leader[d] - x[d]);
                x[d] += p.velocity[d];
            }
            let mut positions: Vec<[f64; 3]> = x[..3 * m].chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
            Repair::Clamp.apply(&mut positions, g);
            let mut w = beam_from_reals(&x[3 * m..], n_bs, users);
            normalize_power(w.stacked_mut(), p_max, &mut rng);
            let phases = random_phase_matrix(rows, cols, levels, &mut rng);
            p.current = Candidate::new(positions, phases, w);
        });
        let mut moved: Vec<Candidate> = swarm.iter().map(|p| p.current.clone()).collect();
        let evaluations = evaluator.evaluate_all(&mut moved)?;
        for (i, (p, c)) in swarm.iter_mut().zip(&moved).enumerate() {
            p.current = c.clone();
            let (now, prev) = (c.obj(), p.best.obj());
            let replace = if dominates(&now.0, &prev.0) {
                true
            } else if dominates(&prev.0, &now.0) {
                false
            } else {
                rng::stream(seed, &[tag::PBEST, gen as u64, i as u64]).gen_bool(0.5)
            };
            if replace {
                p.best = c.clone();
            }
        }
        let pool_size = repo.len() + moved.len();
        repo.extend(moved);
        repo = update_repository(repo, pop);
        out.generations.push(GenerationStats {
            offspring: pop,
            pool: pool_size,
            evaluations,
        });
        out.history.push(repo.iter().map(Candidate::obj).collect());
    }
    out.final_front = repo;
    out.eval_count = evaluator.count();
    Ok(out)
}
