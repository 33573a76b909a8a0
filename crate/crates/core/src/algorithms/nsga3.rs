use rand::Rng;
use rayon::prelude::*;

use super::{initial_population, GenerationStats, RunOutput};
use crate::error::Result;
use crate::evaluation::{Candidate, Evaluator, ObjectiveVector};
use crate::moo::{das_dennis, das_dennis_divisions, non_dominated_front, non_dominated_sort};
use crate::operators::{joint_variation, OperatorConfig, Streams};
use crate::rng::tag;
use crate::scenario::Scenario;

/// Solves a 3×3 system by Gaussian elimination with partial pivoting.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let s: f64 = (row + 1..3).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Hyperplane intercepts through the extreme points of translated
/// objectives, falling back to per-axis maxima when degenerate.
fn intercepts(translated: &[[f64; 3]]) -> [f64; 3] {
    let mut extreme = [[0.0; 3]; 3];
    for (axis, e) in extreme.iter_mut().enumerate() {
        let asf = |p: &[f64; 3]| {
            (0..3)
                .map(|j| p[j] / if j == axis { 1.0 } else { 1e-6 })
                .fold(f64::NEG_INFINITY, f64::max)
        };
        *e = *translated
            .iter()
            .min_by(|a, b| asf(a).total_cmp(&asf(b)))
            .expect("non-empty");
    }
    let maxima: [f64; 3] = std::array::from_fn(|j| translated.iter().map(|p| p[j]).fold(0.0, f64::max));
    let plane = solve3(extreme, [1.0; 3]);
    std::array::from_fn(|j| {
        let a = plane.map_or(f64::NAN, |b| 1.0 / b[j]);
        let a = if a.is_finite() && a > 1e-10 { a } else { maxima[j] };
        if a > 1e-10 {
            a
        } else {
            1.0
        }
    })
}

/// Reference-point environmental selection. Returns `n` pool indices.
pub fn nsga3_select<R: Rng + ?Sized>(objs: &[ObjectiveVector], n: usize, refs: &[Vec<f64>], rng: &mut R) -> Vec<usize> {
    let mut chosen = Vec::with_capacity(n);
    let mut last = Vec::new();
    for front in non_dominated_sort(objs) {
        if chosen.len() + front.len() <= n {
            chosen.extend(front);
            if chosen.len() == n {
                return chosen;
            }
        } else {
            last = front;
            break;
        }
    }
    let considered: Vec<usize> = chosen.iter().chain(&last).copied().collect();
    let ideal: [f64; 3] =
        std::array::from_fn(|j| considered.iter().map(|&i| objs[i].0[j]).fold(f64::INFINITY, f64::min));
    let translated: Vec<[f64; 3]> = considered
        .iter()
        .map(|&i| std::array::from_fn(|j| objs[i].0[j] - ideal[j]))
        .collect();
    let icpt = intercepts(&translated);
    // (reference index, perpendicular distance) per considered member.
    let assoc: Vec<(usize, f64)> = translated
        .iter()
        .map(|p| {
            let f: [f64; 3] = std::array::from_fn(|j| p[j] / icpt[j]);
            refs.iter()
                .enumerate()
                .map(|(r, w)| {
                    let ww: f64 = w.iter().map(|x| x * x).sum();
                    let t = (0..3).map(|j| f[j] * w[j]).sum::<f64>() / ww;
                    let d2: f64 = (0..3).map(|j| (f[j] - t * w[j]).powi(2)).sum();
                    (r, d2.sqrt())
                })
                .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
        })
        .collect();
    let mut niche = vec![0usize; refs.len()];
    for &(r, _) in &assoc[..chosen.len()] {
        niche[r] += 1;
    }
    let offset = chosen.len();
    let mut pending: Vec<usize> = (0..last.len()).collect();
    let mut excluded = vec![false; refs.len()];
    while chosen.len() < n {
        let min = (0..refs.len())
            .filter(|&r| !excluded[r])
            .map(|r| niche[r])
            .min()
            .expect("reference points exhausted before selection completed");
        let tied: Vec<usize> = (0..refs.len()).filter(|&r| !excluded[r] && niche[r] == min).collect();
        let r = tied[rng.gen_range(0..tied.len())];
        let members: Vec<usize> = pending.iter().copied().filter(|&k| assoc[offset + k].0 == r).collect();
        if members.is_empty() {
            excluded[r] = true;
            continue;
        }
        let pick = if niche[r] == 0 {
            *members
                .iter()
                .min_by(|&&a, &&b| assoc[offset + a].1.total_cmp(&assoc[offset + b].1))
                .expect("non-empty")
        } else {
            members[rng.gen_range(0..members.len())]
        };
        pending.retain(|&k| k != pick);
        chosen.push(last[pick]);
        niche[r] += 1;
    }
    chosen
}

/// NSGA-III with Das–Dennis reference points and random mating.
pub(crate) fn run_nsga3(scenario: &Scenario, seed: u64) -> Result<RunOutput> {
    let pop = scenario.algo.pop_size;
    let cfg = OperatorConfig::from_scenario(scenario);
    let evaluator = Evaluator::new(scenario);
    let refs = das_dennis(3, das_dennis_divisions(3, pop));

    let mut members = initial_population(scenario, seed, pop);
    evaluator.evaluate_all(&mut members)?;

    let mut out = RunOutput::default();
    for gen in 0..scenario.algo.max_gens {
        let streams = Streams::new(seed, gen as u64);
        let mut offspring: Vec<Candidate> = (0..pop.div_ceil(2))
            .into_par_iter()
            .flat_map_iter(|pair| {
                let mut rng = streams.offspring(tag::JOINT, pair);
                let a = rng.gen_range(0..members.len());
                let b = rng.gen_range(0..members.len());
                joint_variation(scenario, &members[a], &members[b], &cfg, &mut rng)
            })
            .collect();
        offspring.truncate(pop);
        let evaluations = evaluator.evaluate_all(&mut offspring)?;
        let n_offspring = offspring.len();
        let mut pool = std::mem::take(&mut members);
        pool.extend(offspring);
        out.generations.push(GenerationStats {
            offspring: n_offspring,
            pool: pool.len(),
            evaluations,
        });
        let objs: Vec<ObjectiveVector> = pool.iter().map(Candidate::obj).collect();
        let keep = nsga3_select(&objs, pop, &refs, &mut streams.shared(tag::NICHE));
        let mut slots: Vec<Option<Candidate>> = pool.into_iter().map(Some).collect();
        members = keep
            .iter()
            .map(|&i| slots[i].take().expect("index selected twice"))
            .collect();
        out.history.push(front_objectives(&members));
    }
    out.final_front = front_members(&members);
    out.eval_count = evaluator.count();
    Ok(out)
}

pub(crate) fn front_objectives(members: &[Candidate]) -> Vec<ObjectiveVector> {
    let objs: Vec<ObjectiveVector> = members.iter().map(Candidate::obj).collect();
    non_dominated_front(&objs).into_iter().map(|i| objs[i]).collect()
}

pub(crate) fn front_members(members: &[Candidate]) -> Vec<Candidate> {
    let objs: Vec<ObjectiveVector> = members.iter().map(Candidate::obj).collect();
    non_dominated_front(&objs)
        .into_iter()
        .map(|i| members[i].clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn solver_recovers_known_plane() {
        let a = [[2.0, 0.0, 0.0], [0.0, 4.0, 0.0], [0.0, 0.0, 5.0]];
        let b = solve3(a, [1.0; 3]).unwrap();
        assert_eq!(b.map(|x| 1.0 / x), [2.0, 4.0, 5.0]);
        assert!(solve3([[1.0, 1.0, 1.0]; 3], [1.0; 3]).is_none());
    }

    #[test]
    fn selection_has_requested_size_and_keeps_first_fronts() {
        let mut r = rng::stream(3, &[]);
        let objs: Vec<ObjectiveVector> = (0..40).map(|_| ObjectiveVector([r.gen(), r.gen(), r.gen()])).collect();
        let refs = das_dennis(3, 4);
        let keep = nsga3_select(&objs, 20, &refs, &mut r);
        assert_eq!(keep.len(), 20);
        let mut sorted = keep.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 20);
        for i in non_dominated_front(&objs) {
            if non_dominated_front(&objs).len() <= 20 {
                assert!(keep.contains(&i));
            }
        }
    }
}
