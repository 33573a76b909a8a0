use rand::Rng;
use rayon::prelude::*;

use super::beam::{beam_from_reals, beam_to_reals, normalize_power};
use super::phase::random_phase_matrix;
use super::real::{binary_tournament, polynomial_mutation, sbx_pair, Repair};
use super::{OperatorConfig, Streams};
use crate::evaluation::Candidate;
use crate::moo::RankedPopulation;
use crate::rng::tag;
use crate::scenario::{Geometry, Scenario};

fn flatten(positions: &[[f64; 3]]) -> Vec<f64> {
    positions.iter().flatten().copied().collect()
}

fn unflatten(x: &[f64]) -> Vec<[f64; 3]> {
    x.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect()
}

fn position_spans(g: &Geometry, m: usize) -> Vec<f64> {
    (0..3 * m)
        .map(|i| {
            let (lo, hi) = g.axis_bounds(i % 3);
            hi - lo
        })
        .collect()
}

/// Position cohort: tournament-selected pairs, SBX and polynomial mutation
/// on the `3M` position genes, then boundary repair. Both children keep the
/// phases, precoder and swarm state of the first parent of their pair.
pub fn vary_positions(
    scenario: &Scenario,
    parents: &RankedPopulation,
    cfg: &OperatorConfig,
    repair: Repair,
    streams: Streams,
) -> Vec<Candidate> {
    let n = parents.len();
    let g = &scenario.geometry;
    let spans = position_spans(g, g.m_uavs);
    let mut out: Vec<Candidate> = (0..n.div_ceil(2))
        .into_par_iter()
        .flat_map_iter(|pair| {
            let mut rng = streams.offspring(tag::POSITIONS, pair);
            let a = binary_tournament(&parents.rank, &parents.crowding, &mut rng);
            let b = binary_tournament(&parents.rank, &parents.crowding, &mut rng);
            let first = &parents.members[a];
            let mut xa = flatten(first.positions());
            let mut xb = flatten(parents.members[b].positions());
            sbx_pair(&mut xa, &mut xb, cfg.sbx_eta, cfg.crossover_prob, &mut rng);
            polynomial_mutation(&mut xa, &spans, cfg.mut_eta, cfg.mutation_prob, &mut rng);
            polynomial_mutation(&mut xb, &spans, cfg.mut_eta, cfg.mutation_prob, &mut rng);
            [xa, xb]
                .into_iter()
                .map(|x| {
                    let mut child = first.clone();
                    let pos = child.positions_mut();
                    *pos = unflatten(&x);
                    repair.apply(pos, g);
                    child
                })
                .collect::<Vec<_>>()
        })
        .collect();
    out.truncate(n);
    out
}

/// Joint variation of all continuous genes (positions and precoder reals)
/// of two parents. Positions are clamped, precoders renormalized and every
/// child gets freshly drawn phases. Children carry no swarm state.
pub fn joint_variation<R: Rng + ?Sized>(
    scenario: &Scenario,
    a: &Candidate,
    b: &Candidate,
    cfg: &OperatorConfig,
    rng: &mut R,
) -> [Candidate; 2] {
    let g = &scenario.geometry;
    let m = g.m_uavs;
    let p_max = scenario.radio.p_max_w;
    let (n_bs, users) = (a.beamforming().n_bs(), a.beamforming().users());
    let genes = |c: &Candidate| {
        let mut x = flatten(c.positions());
        x.extend(beam_to_reals(c.beamforming()));
        x
    };
    let mut xa = genes(a);
    let mut xb = genes(b);
    sbx_pair(&mut xa, &mut xb, cfg.sbx_eta, cfg.crossover_prob, rng);
    let pos_spans = position_spans(g, m);
    let beam_spans = vec![2.0 * p_max.sqrt(); xa.len() - 3 * m];
    let mutate = |x: &mut Vec<f64>, rng: &mut R| {
        let (pos, beam) = x.split_at_mut(3 * m);
        polynomial_mutation(pos, &pos_spans, cfg.mut_eta, cfg.mutation_prob, rng);
        polynomial_mutation(beam, &beam_spans, cfg.mut_eta, cfg.beam_mutation_prob, rng);
    };
    mutate(&mut xa, rng);
    mutate(&mut xb, rng);
    let levels = scenario.radio.phase_levels();
    let cols = scenario.radio.n_ris();
    [xa, xb].map(|x| {
        let mut positions = unflatten(&x[..3 * m]);
        Repair::Clamp.apply(&mut positions, g);
        let mut w = beam_from_reals(&x[3 * m..], n_bs, users);
        normalize_power(w.stacked_mut(), p_max, rng);
        let phases = random_phase_matrix(m, cols, levels, rng);
        Candidate::new(positions, phases, w)
    })
}
