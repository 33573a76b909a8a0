//! Rotary-wing propulsion, deployment, hovering and communication energy.

use crate::channel::Beamforming;
use crate::error::{Error, Result};
use crate::scenario::{Scenario, UavParams};

/// Energy assigned to a configuration in which some user has zero rate
/// (infinite hover time). Also the cap on `f₃`.
pub const INFEASIBLE_ENERGY_J: f64 = 1e12;

/// Rotary-wing propulsion power at forward speed `v` (m/s).
///
/// Blade profile, induced and parasite terms. At `v = 0` this is exactly
/// `P_B + P_I`, the hovering power.
pub fn propulsion_power(uav: &UavParams, v: f64) -> f64 {
    let v2 = v * v;
    let v0_2 = uav.mean_rotor_velocity_mps * uav.mean_rotor_velocity_mps;
    let blade = uav.blade_power_w * (1.0 + 3.0 * v2 / (uav.tip_speed_mps * uav.tip_speed_mps));
    let induced = if v == 0.0 {
        uav.induced_power_w
    } else {
        uav.induced_power_w * ((1.0 + v2 * v2 / (4.0 * v0_2 * v0_2)).sqrt() - v2 / (2.0 * v0_2)).sqrt()
    };
    let parasite =
        0.5 * uav.fuselage_drag_ratio * uav.air_density_kgpm3 * uav.rotor_solidity * uav.rotor_disc_area_m2 * v2 * v;
    blade + induced + parasite
}

/// Energy to fly every UAV-RIS from the start point to its hover position
/// at cruise speed, including potential-energy and kinetic terms.
pub fn deployment_energy(scenario: &Scenario, positions: &[[f64; 3]]) -> Result<f64> {
    let uav = &scenario.uav;
    let speed = uav.cruise_speed_mps;
    if speed <= 0.0 {
        return Err(Error::Validation("cruise speed must be > 0".into()));
    }
    let start = scenario.geometry.uav_start;
    let p_pro = propulsion_power(uav, speed);
    let weight = uav.mass_kg * uav.gravity_mps2;
    let mut total = 0.0;
    for p in positions {
        let dist = ((p[0] - start[0]).powi(2) + (p[1] - start[1]).powi(2) + (p[2] - start[2]).powi(2)).sqrt();
        total += p_pro * (dist / speed) + weight * (p[2] - uav.initial_height_m);
    }
    let v0 = uav.initial_speed_mps;
    total += positions.len() as f64 * uav.mass_kg * (speed * speed - v0 * v0) / 2.0;
    Ok(total)
}

/// Hover-time communication power: BS transmit (through the amplifier),
/// BS circuit, GU circuits and RIS elements.
pub fn comm_power(scenario: &Scenario, beamforming: &Beamforming) -> f64 {
    let r = &scenario.radio;
    beamforming.power() / r.amp_efficiency
        + r.p_bs_circuit_w
        + scenario.k() as f64 * r.p_gu_circuit_w
        + (scenario.m() * r.n_ris()) as f64 * r.p_ris_element_w
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyBreakdown {
    pub e_deploy: f64,
    pub e_hover: f64,
    pub p_comm: f64,
    pub t_hover: f64,
    pub per_gu_tx_time: Vec<f64>,
}

impl EnergyBreakdown {
    pub fn total(&self) -> f64 {
        self.e_deploy + self.e_hover
    }

    pub fn is_infeasible(&self) -> bool {
        !self.t_hover.is_finite()
    }
}

/// Hover-phase energy given per-user rates. `e_deploy` is left at zero.
///
/// The hover lasts until the slowest user has received `Q` bits. A zero rate
/// makes that time infinite; the energy is then [`INFEASIBLE_ENERGY_J`].
pub fn hover_energy(scenario: &Scenario, rates: &[f64], beamforming: &Beamforming) -> EnergyBreakdown {
    let q = scenario.radio.data_size_bits;
    let per_gu_tx_time: Vec<f64> = rates
        .iter()
        .map(|&r| if r > 0.0 { q / r } else { f64::INFINITY })
        .collect();
    let t_hover = per_gu_tx_time.iter().copied().fold(0.0, f64::max);
    let p_comm = comm_power(scenario, beamforming);
    let hover_power = propulsion_power(&scenario.uav, 0.0);
    let e_hover = if t_hover.is_finite() {
        (scenario.m() as f64 * hover_power + p_comm) * t_hover
    } else {
        INFEASIBLE_ENERGY_J
    };
    EnergyBreakdown {
        e_deploy: 0.0,
        e_hover,
        p_comm,
        t_hover,
        per_gu_tx_time,
    }
}

/// Deployment plus hover energy.
pub fn energy_breakdown(
    scenario: &Scenario,
    positions: &[[f64; 3]],
    rates: &[f64],
    beamforming: &Beamforming,
) -> Result<EnergyBreakdown> {
    let mut e = hover_energy(scenario, rates, beamforming);
    e.e_deploy = deployment_energy(scenario, positions)?;
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn hover_power_is_blade_plus_induced() {
        let s = Scenario::reference();
        let p0 = propulsion_power(&s.uav, 0.0);
        assert_eq!(p0, s.uav.blade_power_w + s.uav.induced_power_w);
        assert!((p0 - 168.4842).abs() < 1e-9);
    }

    #[test]
    fn power_is_finite_and_positive_on_grid() {
        let s = Scenario::reference();
        for i in 0..=300 {
            let p = propulsion_power(&s.uav, i as f64 * 0.1);
            assert!(p.is_finite() && p > 0.0);
        }
    }

    #[test]
    fn parked_fleet_costs_nothing() {
        let mut s = Scenario::toy();
        s.uav.initial_speed_mps = s.uav.cruise_speed_mps;
        let e = deployment_energy(&s, &[[0.0; 3], [0.0; 3]]).unwrap();
        assert_eq!(e, 0.0);
    }

    #[test]
    fn level_flight_has_no_potential_term() {
        let mut s = Scenario::toy();
        s.geometry.m_uavs = 1;
        s.uav.initial_height_m = 80.0;
        s.geometry.uav_start = [0.0, 0.0, 80.0];
        let e = deployment_energy(&s, &[[30.0, 40.0, 80.0]]).unwrap();
        let v = s.uav.cruise_speed_mps;
        let want = propulsion_power(&s.uav, v) * 50.0 / v + s.uav.mass_kg * v * v / 2.0;
        assert!((e - want).abs() < 1e-9);
    }

    #[test]
    fn zero_cruise_speed_is_an_error() {
        let mut s = Scenario::toy();
        s.uav.cruise_speed_mps = 0.0;
        assert!(deployment_energy(&s, &[[1.0, 1.0, 60.0]]).is_err());
    }

    #[test]
    fn comm_power_reference_values() {
        let s = Scenario::reference().with_counts(4, 5).unwrap();
        let p = comm_power(&s, &Beamforming::zeros(32, 5));
        assert!((p - 10.553_282_347_242_81).abs() < 1e-9, "{p}");

        let mut w = Beamforming::zeros(1, 5);
        // ‖w‖² = 80 → 100 W through μ = 0.8.
        w.stacked_mut()[0] = Complex64::new(80f64.sqrt(), 0.0);
        assert!((comm_power(&s, &w) - comm_power(&s, &Beamforming::zeros(1, 5)) - 100.0).abs() < 1e-9);
    }

    #[test]
    fn hover_energy_examples() {
        let s = Scenario::toy();
        let w = Beamforming::zeros(4, 3);
        let e = hover_energy(&s, &[2e6, 2e6, 2e6], &w);
        assert!((e.t_hover - 5.0).abs() < 1e-12);

        let e0 = hover_energy(&s, &[2e6, 0.0, 2e6], &w);
        assert!(e0.is_infeasible());
        assert_eq!(e0.e_hover, INFEASIBLE_ENERGY_J);

        // M = 2, T = 10 s, P_com = 50 W → (2·168.4842 + 50)·10.
        let pc = comm_power(&s, &w);
        let mut w50 = Beamforming::zeros(1, 3);
        w50.stacked_mut()[0] = Complex64::new(((50.0 - pc) * 0.8f64).sqrt(), 0.0);
        let e = hover_energy(&s, &[1e6, 1e6, 1e6], &w50);
        assert!((e.p_comm - 50.0).abs() < 1e-9);
        assert!((e.e_hover - 3869.684).abs() < 1e-6);
    }
}
