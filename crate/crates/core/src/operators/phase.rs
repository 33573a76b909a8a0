use rand::Rng;
use rayon::prelude::*;

use super::Streams;
use crate::channel::PhaseMatrix;
use crate::error::{Error, Result};
use crate::evaluation::Candidate;
use crate::moo::RankedPopulation;
use crate::rng::tag;

/// Uniform phase indices in `{0, …, levels − 1}`.
pub fn random_phase_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, levels: usize, rng: &mut R) -> PhaseMatrix {
    let mut p = PhaseMatrix::zeros(rows, cols, levels);
    for idx in p.as_mut_slice() {
        *idx = rng.gen_range(0..levels) as u16;
    }
    p
}

/// One child per parent with the whole phase matrix redrawn; positions,
/// precoders and swarm state are copied.
pub fn random_phase_offspring(parents: &[Candidate], streams: Streams) -> Vec<Candidate> {
    parents
        .par_iter()
        .enumerate()
        .map(|(i, parent)| {
            let mut rng = streams.offspring(tag::RANDOM_PHASE, i);
            let mut child = parent.clone();
            let p = child.phases_mut();
            let (rows, cols, levels) = (p.rows(), p.cols(), p.levels());
            *p = random_phase_matrix(rows, cols, levels, &mut rng);
            child
        })
        .collect()
}

/// Picks one of the positions attaining the maximum crowding distance,
/// uniformly when several tie.
///
/// # Panics
/// If `crowding` is empty.
pub fn select_phase_donor<R: Rng + ?Sized>(crowding: &[f64], rng: &mut R) -> usize {
    let best = crowding.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ties: Vec<usize> = (0..crowding.len()).filter(|&i| crowding[i] == best).collect();
    match ties.len() {
        0 => panic!("donor selection over an empty front"),
        1 => ties[0],
        n => ties[rng.gen_range(0..n)],
    }
}

/// One child per parent carrying the phase matrix of a single donor from
/// the first front (maximum crowding distance).
pub fn phase_learning_offspring(parents: &RankedPopulation, streams: Streams) -> Result<Vec<Candidate>> {
    let front = parents.front1();
    if front.is_empty() {
        return Err(Error::EmptyFront);
    }
    let crowding: Vec<f64> = front.iter().map(|&i| parents.crowding[i]).collect();
    let donor = front[select_phase_donor(&crowding, &mut streams.shared(tag::PHASE_LEARNING))];
    let phases = parents.members[donor].phases();
    Ok(parents
        .members
        .iter()
        .map(|parent| {
            let mut child = parent.clone();
            *child.phases_mut() = phases.clone();
            child
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn single_level_gives_zero_phases() {
        let p = random_phase_matrix(2, 5, 1, &mut rng::stream(0, &[]));
        assert!(p.as_slice().iter().all(|&i| i == 0));
    }

    #[test]
    fn unique_maximum_is_chosen() {
        let mut r = rng::stream(0, &[]);
        assert_eq!(select_phase_donor(&[0.2, f64::INFINITY, 0.5], &mut r), 1);
        assert_eq!(select_phase_donor(&[0.7], &mut r), 0);
    }
}
