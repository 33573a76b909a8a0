//! Mixed-encoding candidates and their objective vectors.

use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{effective_channels, sinr_and_rates, Beamforming, PhaseMatrix};
use crate::energy::{energy_breakdown, EnergyBreakdown, INFEASIBLE_ENERGY_J};
use crate::error::{Error, Result};
use crate::operators::{normalize_power, random_phase_matrix};
use crate::scenario::Scenario;

/// Relative slack on the power budget check; absorbs rounding in `‖w‖²`.
const POWER_SLACK: f64 = 1e-12;

/// `⟨−f₁, −f₂, f₃⟩`, all to be minimized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveVector(pub [f64; 3]);

impl ObjectiveVector {
    pub fn from_metrics(min_rate: f64, sum_rate: f64, energy: f64) -> Self {
        Self([-min_rate, -sum_rate, energy])
    }

    /// Minimum user rate, bit/s.
    pub fn f1(&self) -> f64 {
        -self.0[0]
    }

    /// Sum rate, bit/s.
    pub fn f2(&self) -> f64 {
        -self.0[1]
    }

    /// Total energy, J.
    pub fn f3(&self) -> f64 {
        self.0[2]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Personal-best snapshot carried for the swarm-style precoder update.
#[derive(Debug, Clone, PartialEq)]
pub struct PersonalBest {
    pub beamforming: Beamforming,
    pub objectives: ObjectiveVector,
}

/// One solution: UAV-RIS positions, RIS phase indices and BS precoders.
///
/// Mutating any decision field through the `*_mut` accessors drops the
/// cached objective vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    positions: Vec<[f64; 3]>,
    phases: PhaseMatrix,
    beamforming: Beamforming,
    objectives: Option<ObjectiveVector>,
    /// Precoder velocity, stacked like [`Beamforming::stacked`].
    pub velocity: Option<Vec<Complex64>>,
    pub pbest: Option<Box<PersonalBest>>,
}

impl Candidate {
    pub fn new(positions: Vec<[f64; 3]>, phases: PhaseMatrix, beamforming: Beamforming) -> Self {
        Self {
            positions,
            phases,
            beamforming,
            objectives: None,
            velocity: None,
            pbest: None,
        }
    }

    pub fn positions(&self) -> &[[f64; 3]] {
        &self.positions
    }

    pub fn phases(&self) -> &PhaseMatrix {
        &self.phases
    }

    pub fn beamforming(&self) -> &Beamforming {
        &self.beamforming
    }

    pub fn objectives(&self) -> Option<ObjectiveVector> {
        self.objectives
    }

    /// Objectives of an evaluated candidate.
    ///
    /// # Panics
    /// If the candidate has not been evaluated.
    pub fn obj(&self) -> ObjectiveVector {
        self.objectives.expect("candidate has not been evaluated")
    }

    pub fn positions_mut(&mut self) -> &mut Vec<[f64; 3]> {
        self.objectives = None;
        &mut self.positions
    }

    pub fn phases_mut(&mut self) -> &mut PhaseMatrix {
        self.objectives = None;
        &mut self.phases
    }

    pub fn beamforming_mut(&mut self) -> &mut Beamforming {
        self.objectives = None;
        &mut self.beamforming
    }

    /// Evaluates if needed and returns the objectives.
    pub fn evaluate(&mut self, scenario: &Scenario) -> Result<ObjectiveVector> {
        if let Some(o) = self.objectives {
            return Ok(o);
        }
        let o = evaluate(scenario, self)?;
        self.objectives = Some(o);
        Ok(o)
    }

    /// Seeds the swarm companion state: zero velocity, self as personal best.
    pub fn init_swarm_state(&mut self) {
        if self.velocity.is_none() {
            self.velocity = Some(vec![Complex64::new(0.0, 0.0); self.beamforming.stacked().len()]);
        }
        if self.pbest.is_none() {
            if let Some(o) = self.objectives {
                self.pbest = Some(Box::new(PersonalBest {
                    beamforming: self.beamforming.clone(),
                    objectives: o,
                }));
            }
        }
    }
}

/// Checks bounds, phase range and power budget.
pub fn check_constraints(scenario: &Scenario, c: &Candidate) -> Result<()> {
    let g = &scenario.geometry;
    if c.positions.len() != g.m_uavs {
        return Err(Error::Dimension(format!(
            "{} positions for M = {}",
            c.positions.len(),
            g.m_uavs
        )));
    }
    if let Some((m, p)) = c.positions.iter().enumerate().find(|(_, p)| !g.contains(p)) {
        return Err(Error::Constraint(format!(
            "UAV-RIS {m} at {p:?} outside the flight box"
        )));
    }
    let r = &scenario.radio;
    if c.phases.rows() != g.m_uavs || c.phases.cols() != r.n_ris() {
        return Err(Error::Dimension("phase matrix shape".into()));
    }
    if c.phases.levels() != r.phase_levels() || !c.phases.in_range() {
        return Err(Error::Constraint("phase index outside the discrete set".into()));
    }
    if c.beamforming.n_bs() != r.n_bs || c.beamforming.users() != g.k_users() {
        return Err(Error::Dimension("beamforming shape".into()));
    }
    let p = c.beamforming.power();
    if !(p <= r.p_max_w * (1.0 + POWER_SLACK)) {
        return Err(Error::Constraint(format!(
            "transmit power {p} W exceeds {} W",
            r.p_max_w
        )));
    }
    Ok(())
}

/// Full intermediate results of one evaluation.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub sinr: Vec<f64>,
    pub rates: Vec<f64>,
    pub energy: EnergyBreakdown,
    pub objectives: ObjectiveVector,
}

pub fn evaluate_detailed(scenario: &Scenario, c: &Candidate) -> Result<Evaluation> {
    check_constraints(scenario, c)?;
    let state = effective_channels(scenario, &c.positions, &c.phases)?;
    let (sinr, rates) = sinr_and_rates(scenario, &state, &c.beamforming)?;
    let energy = energy_breakdown(scenario, &c.positions, &rates, &c.beamforming)?;
    let min_rate = rates.iter().copied().fold(f64::INFINITY, f64::min);
    let sum_rate: f64 = rates.iter().sum();
    let f3 = energy.total().min(INFEASIBLE_ENERGY_J);
    Ok(Evaluation {
        sinr,
        rates,
        energy,
        objectives: ObjectiveVector::from_metrics(min_rate, sum_rate, f3),
    })
}

/// Objective vector of a feasible candidate. Pure; does not touch the cache.
pub fn evaluate(scenario: &Scenario, c: &Candidate) -> Result<ObjectiveVector> {
    evaluate_detailed(scenario, c).map(|e| e.objectives)
}

/// Draws a feasible candidate: uniform positions in the flight box, uniform
/// phase indices, precoder entries with real and imaginary parts uniform in
/// `[−1, 1]` scaled into the power budget.
pub fn random_candidate<R: Rng + ?Sized>(scenario: &Scenario, rng: &mut R) -> Candidate {
    let g = &scenario.geometry;
    let positions = (0..g.m_uavs)
        .map(|_| {
            [
                rng.gen_range(g.l_min..=g.l_max),
                rng.gen_range(g.l_min..=g.l_max),
                rng.gen_range(g.z_min..=g.z_max),
            ]
        })
        .collect();
    let phases = random_phase_matrix(g.m_uavs, scenario.radio.n_ris(), scenario.radio.phase_levels(), rng);
    Candidate::new(positions, phases, random_beamforming(scenario, rng))
}

pub fn random_beamforming<R: Rng + ?Sized>(scenario: &Scenario, rng: &mut R) -> Beamforming {
    let mut w = Beamforming::zeros(scenario.radio.n_bs, scenario.k());
    for z in w.stacked_mut() {
        *z = Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
    }
    normalize_power(w.stacked_mut(), scenario.radio.p_max_w, rng);
    w
}

/// Evaluates candidates in parallel and counts objective computations.
#[derive(Debug)]
pub struct Evaluator<'a> {
    scenario: &'a Scenario,
    count: AtomicU64,
}

impl<'a> Evaluator<'a> {
    pub fn new(scenario: &'a Scenario) -> Self {
        Self {
            scenario,
            count: AtomicU64::new(0),
        }
    }

    pub fn scenario(&self) -> &'a Scenario {
        self.scenario
    }

    pub fn count(&self) -> u64 {
        self.count.load(Ordering::Relaxed)
    }

    pub fn evaluate(&self, c: &mut Candidate) -> Result<ObjectiveVector> {
        if c.objectives.is_none() {
            self.count.fetch_add(1, Ordering::Relaxed);
        }
        c.evaluate(self.scenario)
    }

    /// Evaluates every unevaluated candidate. Returns how many were computed.
    pub fn evaluate_all(&self, cands: &mut [Candidate]) -> Result<u64> {
        let fresh = cands.iter().filter(|c| c.objectives.is_none()).count() as u64;
        cands
            .par_iter_mut()
            .try_for_each(|c| c.evaluate(self.scenario).map(|_| ()))?;
        self.count.fetch_add(fresh, Ordering::Relaxed);
        Ok(fresh)
    }
}

// ---------------------------------------------------------------------------
// JSON shape
// ---------------------------------------------------------------------------

/// Serialized candidate. Precoders are listed per user as `[re, im]` pairs;
/// objectives are reported in their natural orientation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub positions: Vec<[f64; 3]>,
    pub phase_levels: usize,
    pub phase_indices: Vec<Vec<u16>>,
    pub beamforming: Vec<Vec<[f64; 2]>>,
    pub objectives: Option<ObjectiveRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveRecord {
    pub f1_bps: f64,
    pub f2_bps: f64,
    pub f3_j: f64,
}

impl From<ObjectiveVector> for ObjectiveRecord {
    fn from(o: ObjectiveVector) -> Self {
        Self {
            f1_bps: o.f1(),
            f2_bps: o.f2(),
            f3_j: o.f3(),
        }
    }
}

impl From<ObjectiveRecord> for ObjectiveVector {
    fn from(r: ObjectiveRecord) -> Self {
        ObjectiveVector::from_metrics(r.f1_bps, r.f2_bps, r.f3_j)
    }
}

impl From<&Candidate> for CandidateRecord {
    fn from(c: &Candidate) -> Self {
        Self {
            positions: c.positions.clone(),
            phase_levels: c.phases.levels(),
            phase_indices: c.phases.to_rows(),
            beamforming: c
                .beamforming
                .columns()
                .map(|col| col.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            objectives: c.objectives.map(Into::into),
        }
    }
}

impl TryFrom<CandidateRecord> for Candidate {
    type Error = Error;

    fn try_from(r: CandidateRecord) -> Result<Self> {
        let phases = PhaseMatrix::from_rows(r.phase_indices, r.phase_levels)?;
        let beamforming = Beamforming::from_columns(
            r.beamforming
                .into_iter()
                .map(|col| col.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
                .collect(),
        )?;
        let mut c = Candidate::new(r.positions, phases, beamforming);
        c.objectives = r.objectives.map(Into::into);
        Ok(c)
    }
}
