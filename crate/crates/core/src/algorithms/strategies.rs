use std::f64::consts::PI;

use super::Algorithm;
use crate::channel::{quantize_phase, PhaseMatrix};
use crate::error::{Error, Result};
use crate::evaluation::{random_beamforming, random_candidate, Candidate, Evaluator};
use crate::rng::{self, tag};
use crate::scenario::{Geometry, Scenario};

/// Upper limit on full sweeps of the dimension-by-dimension phase search.
pub const CDPS_MAX_PASSES: usize = 10;

/// Scalar score maximized by the dimension-by-dimension phase search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CdpsScore {
    MinRate,
    #[default]
    SumRate,
}

/// Horizontal grid of `⌈√M⌉` columns and as many rows as needed, each
/// UAV-RIS at a cell centre, all at mid altitude.
pub fn uniform_positions(g: &Geometry) -> Vec<[f64; 3]> {
    let m = g.m_uavs;
    let cols = (m as f64).sqrt().ceil().max(1.0) as usize;
    let rows = m.div_ceil(cols).max(1);
    let width = g.l_max - g.l_min;
    let z = (g.z_max + g.z_min) / 2.0;
    (0..m)
        .map(|i| {
            let (r, c) = (i / cols, i % cols);
            [
                g.l_min + (c as f64 + 0.5) * width / cols as f64,
                g.l_min + (r as f64 + 0.5) * width / rows as f64,
                z,
            ]
        })
        .collect()
}

/// RIS `m` takes the element phases of DFT column `m mod N` (N elements),
/// `2π·n·col/N`, rounded to the nearest level.
pub fn dft_phases(rows: usize, n_ris: usize, levels: usize) -> PhaseMatrix {
    let mut p = PhaseMatrix::zeros(rows, n_ris, levels);
    for m in 0..rows {
        let col = m % n_ris;
        for n in 0..n_ris {
            let theta = 2.0 * PI * ((n * col) % n_ris) as f64 / n_ris as f64;
            p.set(m, n, quantize_phase(theta, levels));
        }
    }
    p
}

/// Coordinate search over phase indices: each gene in turn is set to the
/// level that most improves `score`, until a full pass changes nothing or
/// `max_passes` passes have run. Returns the evaluated result and the number
/// of evaluations spent.
pub fn cdps_optimize(
    scenario: &Scenario,
    mut c: Candidate,
    score: CdpsScore,
    max_passes: usize,
) -> Result<(Candidate, u64)> {
    let evaluator = Evaluator::new(scenario);
    let value = |c: &mut Candidate| -> Result<f64> {
        let o = evaluator.evaluate(c)?;
        Ok(match score {
            CdpsScore::MinRate => o.f1(),
            CdpsScore::SumRate => o.f2(),
        })
    };
    let mut best = value(&mut c)?;
    let (rows, cols, levels) = (c.phases().rows(), c.phases().cols(), c.phases().levels());
    for _ in 0..max_passes {
        let mut changed = false;
        for m in 0..rows {
            for n in 0..cols {
                let current = c.phases().index(m, n);
                let mut winner = (current, best, None);
                for level in 0..levels as u16 {
                    if level == current {
                        continue;
                    }
                    let mut trial = c.clone();
                    trial.phases_mut().set(m, n, level);
                    let v = value(&mut trial)?;
                    if v > winner.1 {
                        winner = (level, v, Some(trial));
                    }
                }
                if let (_, v, Some(trial)) = winner {
                    c = trial;
                    best = v;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok((c, evaluator.count()))
}

/// Builds and evaluates one candidate with the named strategy. Returns the
/// candidate and the number of evaluations spent.
pub fn run_strategy(algorithm: Algorithm, scenario: &Scenario, seed: u64) -> Result<(Candidate, u64)> {
    let mut rng = rng::stream(seed, &[tag::STRATEGY]);
    let g = &scenario.geometry;
    let r = &scenario.radio;
    let mut c = match algorithm {
        Algorithm::Rd => random_candidate(scenario, &mut rng),
        Algorithm::Ud => {
            if g.m_uavs == 0 {
                return Err(Error::Validation("uniform deployment needs M > 0".into()));
            }
            let mut phases = PhaseMatrix::zeros(g.m_uavs, r.n_ris(), r.phase_levels());
            let pi = quantize_phase(PI, r.phase_levels());
            phases.as_mut_slice().iter_mut().for_each(|i| *i = pi);
            Candidate::new(uniform_positions(g), phases, random_beamforming(scenario, &mut rng))
        }
        Algorithm::Dft => {
            let mut c = random_candidate(scenario, &mut rng);
            *c.phases_mut() = dft_phases(g.m_uavs, r.n_ris(), r.phase_levels());
            c
        }
        Algorithm::Cdps => {
            let c = random_candidate(scenario, &mut rng);
            return cdps_optimize(scenario, c, CdpsScore::default(), CDPS_MAX_PASSES);
        }
        other => {
            return Err(Error::Unknown {
                kind: "strategy",
                name: other.id().to_string(),
            })
        }
    };
    c.evaluate(scenario)?;
    Ok((c, 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_inside_and_distinct() {
        let mut g = Scenario::reference().geometry;
        for m in 1..=9 {
            g.m_uavs = m;
            let p = uniform_positions(&g);
            assert_eq!(p.len(), m);
            assert!(p.iter().all(|q| g.contains(q) && q[2] == 125.0));
            for i in 0..m {
                for j in i + 1..m {
                    assert_ne!(p[i], p[j]);
                }
            }
        }
        g.m_uavs = 4;
        assert_eq!(
            uniform_positions(&g),
            vec![
                [50.0, 50.0, 125.0],
                [150.0, 50.0, 125.0],
                [50.0, 150.0, 125.0],
                [150.0, 150.0, 125.0]
            ]
        );
    }

    #[test]
    fn dft_column_one_of_four() {
        let p = dft_phases(2, 4, 8);
        assert_eq!(p.row(0), &[0, 0, 0, 0]);
        assert_eq!(p.row(1), &[0, 2, 4, 6]);
    }

    #[test]
    fn ud_phases_are_pi() {
        let s = Scenario::reference();
        let (c, _) = run_strategy(Algorithm::Ud, &s, 1).unwrap();
        assert!(c.phases().as_slice().iter().all(|&i| i == 4));
    }
}
