use num_complex::Complex64;
use rand::distributions::Open01;
use rand::Rng;
use rayon::prelude::*;

use super::real::{binary_tournament, polynomial_mutation, sbx_pair};
use super::{OperatorConfig, Streams};
use crate::channel::Beamforming;
use crate::error::{Error, Result};
use crate::evaluation::{Candidate, PersonalBest};
use crate::moo::{dominates, roulette_index, RankedPopulation};
use crate::rng::tag;
use crate::scenario::Scenario;

fn sq_norm(w: &[Complex64]) -> f64 {
    w.iter().map(Complex64::norm_sqr).sum()
}

/// Scales `w` into the power budget when `‖w‖² > p_max`, drawing the shrink
/// factor `r₃ ∈ (0, 1)` from `rng`. Returns whether a rescale happened.
pub fn normalize_power<R: Rng + ?Sized>(w: &mut [Complex64], p_max: f64, rng: &mut R) -> bool {
    if sq_norm(w) <= p_max {
        return false;
    }
    let r3: f64 = rng.sample(Open01);
    normalize_power_with(w, p_max, r3);
    true
}

/// `w ← √p_max · w / (‖w‖ (1 + r₃))` when infeasible; otherwise unchanged.
/// A triggered rescale always ends strictly inside the budget.
pub fn normalize_power_with(w: &mut [Complex64], p_max: f64, r3: f64) {
    let power = sq_norm(w);
    if power <= p_max {
        return;
    }
    let scale = p_max.sqrt() / (power.sqrt() * (1.0 + r3));
    for z in w.iter_mut() {
        *z *= scale;
    }
    // r₃ close to zero can round back onto the boundary.
    while sq_norm(w) >= p_max {
        for z in w.iter_mut() {
            *z *= 1.0 - 1e-12;
        }
    }
}

/// Velocity and position update of the particle-style precoder step. `draw`
/// yields the `(r₁, r₂)` pair for each complex entry.
#[allow(clippy::too_many_arguments)]
pub fn swarm_step<F: FnMut() -> (f64, f64)>(
    w: &mut [Complex64],
    velocity: &mut [Complex64],
    pbest: &[Complex64],
    gbest: &[Complex64],
    eps: f64,
    c1: f64,
    c2: f64,
    mut draw: F,
) {
    for i in 0..w.len() {
        let (r1, r2) = draw();
        velocity[i] = velocity[i] * eps + (pbest[i] - w[i]) * (c1 * r1) + (gbest[i] - w[i]) * (c2 * r2);
        w[i] += velocity[i];
    }
}

/// One child per parent with its precoder moved toward its personal best and
/// a first-front leader chosen by crowding roulette, then renormalized.
pub fn beamforming_offspring(
    scenario: &Scenario,
    parents: &RankedPopulation,
    cfg: &OperatorConfig,
    streams: Streams,
) -> Result<Vec<Candidate>> {
    let front = parents.front1();
    if front.is_empty() {
        return Err(Error::EmptyFront);
    }
    let crowding: Vec<f64> = front.iter().map(|&i| parents.crowding[i]).collect();
    let p_max = scenario.radio.p_max_w;
    Ok(parents
        .members
        .par_iter()
        .enumerate()
        .map(|(i, parent)| {
            let mut rng = streams.offspring(tag::BEAMFORMING, i);
            let leader = &parents.members[front[roulette_index(&crowding, &mut rng)]];
            let mut child = parent.clone();
            child.init_swarm_state();
            let pbest = child
                .pbest
                .as_ref()
                .map_or_else(|| parent.beamforming().clone(), |p| p.beamforming.clone());
            let mut velocity = child.velocity.take().unwrap_or_default();
            let w = child.beamforming_mut().stacked_mut();
            velocity.resize(w.len(), Complex64::new(0.0, 0.0));
            swarm_step(
                w,
                &mut velocity,
                pbest.stacked(),
                leader.beamforming().stacked(),
                cfg.inertia_eps,
                cfg.learn_c1,
                cfg.learn_c2,
                || (rng.gen(), rng.gen()),
            );
            normalize_power(w, p_max, &mut rng);
            child.velocity = Some(velocity);
            child
        })
        .collect())
}

/// Precoder flattened to `[re₀, im₀, re₁, im₁, …]`.
pub fn beam_to_reals(w: &Beamforming) -> Vec<f64> {
    w.stacked().iter().flat_map(|z| [z.re, z.im]).collect()
}

/// Inverse of [`beam_to_reals`].
pub fn beam_from_reals(reals: &[f64], n_bs: usize, users: usize) -> Beamforming {
    let mut w = Beamforming::zeros(n_bs, users);
    for (z, pair) in w.stacked_mut().iter_mut().zip(reals.chunks_exact(2)) {
        *z = Complex64::new(pair[0], pair[1]);
    }
    w
}

/// Pairs of tournament-selected parents whose precoders, read as real genes,
/// are crossed and mutated, then renormalized. Positions, phases and swarm
/// state come from the first parent of each pair.
pub fn sbx_beamforming_offspring(
    scenario: &Scenario,
    parents: &RankedPopulation,
    cfg: &OperatorConfig,
    streams: Streams,
) -> Vec<Candidate> {
    let n = parents.len();
    let p_max = scenario.radio.p_max_w;
    let span = 2.0 * p_max.sqrt();
    let mut out: Vec<Candidate> = (0..n.div_ceil(2))
        .into_par_iter()
        .flat_map_iter(|pair| {
            let mut rng = streams.offspring(tag::BEAMFORMING, pair);
            let a = binary_tournament(&parents.rank, &parents.crowding, &mut rng);
            let b = binary_tournament(&parents.rank, &parents.crowding, &mut rng);
            let first = &parents.members[a];
            let (n_bs, users) = (first.beamforming().n_bs(), first.beamforming().users());
            let mut xa = beam_to_reals(first.beamforming());
            let mut xb = beam_to_reals(parents.members[b].beamforming());
            let spans = vec![span; xa.len()];
            sbx_pair(&mut xa, &mut xb, cfg.sbx_eta, cfg.crossover_prob, &mut rng);
            polynomial_mutation(&mut xa, &spans, cfg.mut_eta, cfg.beam_mutation_prob, &mut rng);
            polynomial_mutation(&mut xb, &spans, cfg.mut_eta, cfg.beam_mutation_prob, &mut rng);
            [xa, xb]
                .into_iter()
                .map(|x| {
                    let mut child = first.clone();
                    let mut w = beam_from_reals(&x, n_bs, users);
                    normalize_power(w.stacked_mut(), p_max, &mut rng);
                    *child.beamforming_mut() = w;
                    child
                })
                .collect::<Vec<_>>()
        })
        .collect();
    out.truncate(n);
    out
}

/// Refreshes the personal best of an evaluated candidate: replaced when the
/// current objectives dominate it, kept when dominated by it, and replaced
/// with probability ½ otherwise. Returns whether it was replaced.
///
/// # Panics
/// If the candidate has not been evaluated.
pub fn update_pbest<R: Rng + ?Sized>(c: &mut Candidate, rng: &mut R) -> bool {
    let current = c.obj();
    let replace = match &c.pbest {
        None => true,
        Some(pb) => {
            if dominates(&current.0, &pb.objectives.0) {
                true
            } else if dominates(&pb.objectives.0, &current.0) {
                false
            } else {
                rng.gen_bool(0.5)
            }
        }
    };
    if replace {
        c.pbest = Some(Box::new(PersonalBest {
            beamforming: c.beamforming().clone(),
            objectives: current,
        }));
    }
    replace
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn feasible_input_is_untouched() {
        let mut w = vec![c(5.0, 5.0)];
        let before = w.clone();
        assert!(!normalize_power(&mut w, 100.0, &mut rng::stream(0, &[])));
        assert_eq!(w, before);
    }

    #[test]
    fn rescale_with_fixed_r3() {
        let mut w = vec![c(20.0, 0.0)];
        normalize_power_with(&mut w, 100.0, 0.5);
        assert!((w[0].norm() - 10.0 / 1.5).abs() < 1e-12);
    }

    #[test]
    fn tiny_r3_still_strictly_feasible() {
        let mut w = vec![c(3.0, 4.0), c(-1.0, 2.0)];
        normalize_power_with(&mut w, 2.0, 1e-300);
        assert!(sq_norm(&w) < 2.0);
    }

    #[test]
    fn swarm_step_collapses() {
        let mut w = vec![c(1.0, -2.0)];
        let mut v = vec![c(0.3, 0.3)];
        swarm_step(&mut w, &mut v, &[c(9.0, 9.0)], &[c(-4.0, 1.0)], 0.0, 0.0, 0.0, || {
            (0.7, 0.2)
        });
        assert_eq!(w, vec![c(1.0, -2.0)]);
        assert_eq!(v, vec![c(0.0, 0.0)]);
    }

    #[test]
    fn reals_round_trip() {
        let w =
            Beamforming::from_columns(vec![vec![c(1.0, 2.0), c(3.0, 4.0)], vec![c(5.0, 6.0), c(7.0, 8.0)]]).unwrap();
        let r = beam_to_reals(&w);
        assert_eq!(r, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]);
        assert_eq!(beam_from_reals(&r, 2, 2), w);
    }
}
