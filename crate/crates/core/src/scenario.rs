//! Physical constants, geometry, and optimizer hyperparameters.
//!
//! A [`Scenario`] is built once, validated, and then shared read-only. All
//! quantities are held in SI linear units; decibel values only appear in the
//! on-disk [`ScenarioConfig`] and are converted by [`Scenario::from_config`].

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Watts to dBm.
pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

/// dB to a linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadioParams {
    pub bandwidth_hz: f64,
    pub p_max_w: f64,
    pub p_bs_circuit_w: f64,
    pub noise_power_w: f64,
    pub p_gu_circuit_w: f64,
    pub p_ris_element_w: f64,
    /// Reference channel gain at 1 m (linear).
    pub beta0: f64,
    /// Rician factor (linear).
    pub rician_factor: f64,
    pub amp_efficiency: f64,
    pub data_size_bits: f64,
    pub n_bs: usize,
    /// Elements along the y axis.
    pub n_r: usize,
    /// Elements along the x axis.
    pub n_c: usize,
    pub quant_bits: u32,
    /// Element spacing over wavelength; only 1/2 is supported.
    pub element_spacing_ratio: f64,
}

impl RadioParams {
    pub fn n_ris(&self) -> usize {
        self.n_r * self.n_c
    }

    /// Number of discrete phase levels, `2^c`.
    pub fn phase_levels(&self) -> usize {
        1usize << self.quant_bits
    }

    /// Common LoS amplitude factor `sqrt(A / (1 + A))`.
    pub fn los_factor(&self) -> f64 {
        (self.rician_factor / (1.0 + self.rician_factor)).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UavParams {
    pub mass_kg: f64,
    pub gravity_mps2: f64,
    pub cruise_speed_mps: f64,
    pub initial_speed_mps: f64,
    pub initial_height_m: f64,
    pub blade_power_w: f64,
    pub induced_power_w: f64,
    pub tip_speed_mps: f64,
    pub mean_rotor_velocity_mps: f64,
    pub fuselage_drag_ratio: f64,
    pub air_density_kgpm3: f64,
    pub rotor_solidity: f64,
    pub rotor_disc_area_m2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub bs_position: [f64; 3],
    pub gu_positions: Vec<[f64; 3]>,
    pub l_min: f64,
    pub l_max: f64,
    pub z_min: f64,
    pub z_max: f64,
    pub m_uavs: usize,
    pub uav_start: [f64; 3],
}

impl Geometry {
    pub fn k_users(&self) -> usize {
        self.gu_positions.len()
    }

    /// `(lower, upper)` for coordinate axis `axis` (0 = x, 1 = y, 2 = z).
    pub fn axis_bounds(&self, axis: usize) -> (f64, f64) {
        if axis == 2 {
            (self.z_min, self.z_max)
        } else {
            (self.l_min, self.l_max)
        }
    }

    pub fn contains(&self, p: &[f64; 3]) -> bool {
        (0..3).all(|a| {
            let (lo, hi) = self.axis_bounds(a);
            p[a] >= lo && p[a] <= hi
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgoParams {
    pub pop_size: usize,
    pub max_gens: usize,
    pub sbx_eta: f64,
    pub mut_eta: f64,
    pub crossover_prob: f64,
    /// Per-gene mutation probability; `None` means `1 / (3M)`.
    pub mutation_prob: Option<f64>,
    pub inertia_eps: f64,
    pub learn_c1: f64,
    pub learn_c2: f64,
    pub rng_seed: u64,
    pub trials: usize,
}

impl AlgoParams {
    pub fn mutation_prob_for(&self, m_uavs: usize) -> f64 {
        self.mutation_prob.unwrap_or(1.0 / (3.0 * m_uavs.max(1) as f64))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub radio: RadioParams,
    pub uav: UavParams,
    pub geometry: Geometry,
    pub algo: AlgoParams,
}

/// Ten ground users spread over the default 200 m square. Scenarios with
/// `K < 10` use a prefix of this list.
pub const DEFAULT_GU_LAYOUT: [[f64; 3]; 10] = [
    [40.0, 160.0, 0.0],
    [90.0, 185.0, 0.0],
    [150.0, 170.0, 0.0],
    [180.0, 110.0, 0.0],
    [130.0, 60.0, 0.0],
    [60.0, 90.0, 0.0],
    [20.0, 40.0, 0.0],
    [100.0, 120.0, 0.0],
    [170.0, 20.0, 0.0],
    [75.0, 15.0, 0.0],
];

impl Scenario {
    /// The full-size reference setup: 32 BS antennas, 8×8 RIS, M = 4, K = 5.
    pub fn reference() -> Self {
        Self::from_config(ScenarioConfig::default()).expect("built-in defaults are valid")
    }

    /// Desk-scale instance: M = 2, K = 3, 2×2 RIS, 4 BS antennas,
    /// Pop = 20, 100 generations.
    pub fn toy() -> Self {
        let mut cfg = ScenarioConfig::default();
        cfg.radio.n_bs = 4;
        cfg.radio.n_r = 2;
        cfg.radio.n_c = 2;
        cfg.geometry.m_uavs = 2;
        cfg.geometry.gu_positions_m = DEFAULT_GU_LAYOUT[..3].to_vec();
        cfg.algorithm.pop_size = 20;
        cfg.algorithm.max_gens = 100;
        Self::from_config(cfg).expect("toy defaults are valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_config(cfg)
    }

    pub fn from_config(cfg: ScenarioConfig) -> Result<Self> {
        let r = &cfg.radio;
        let radio = RadioParams {
            bandwidth_hz: r.bandwidth_hz,
            p_max_w: dbm_to_watts(r.p_max_dbm),
            p_bs_circuit_w: dbm_to_watts(r.p_bs_circuit_dbm),
            noise_power_w: dbm_to_watts(r.noise_power_dbm),
            p_gu_circuit_w: dbm_to_watts(r.p_gu_circuit_dbm),
            p_ris_element_w: dbm_to_watts(r.p_ris_element_dbm),
            beta0: db_to_linear(r.beta0_db),
            rician_factor: db_to_linear(r.rician_factor_db),
            amp_efficiency: r.amp_efficiency,
            data_size_bits: r.data_size_bits,
            n_bs: r.n_bs,
            n_r: r.n_r,
            n_c: r.n_c,
            quant_bits: r.quant_bits,
            element_spacing_ratio: r.element_spacing_ratio,
        };
        let u = &cfg.uav;
        let uav = UavParams {
            mass_kg: u.mass_kg,
            gravity_mps2: u.gravity_mps2,
            cruise_speed_mps: u.cruise_speed_mps,
            initial_speed_mps: u.initial_speed_mps,
            initial_height_m: u.initial_height_m,
            blade_power_w: u.blade_power_w,
            induced_power_w: u.induced_power_w,
            tip_speed_mps: u.tip_speed_mps,
            mean_rotor_velocity_mps: u.mean_rotor_velocity_mps,
            fuselage_drag_ratio: u.fuselage_drag_ratio,
            air_density_kgpm3: u.air_density_kgpm3,
            rotor_solidity: u.rotor_solidity,
            rotor_disc_area_m2: u.rotor_disc_area_m2,
        };
        let g = &cfg.geometry;
        let geometry = Geometry {
            bs_position: g.bs_position_m,
            gu_positions: g.gu_positions_m.clone(),
            l_min: g.l_min_m,
            l_max: g.l_max_m,
            z_min: g.z_min_m,
            z_max: g.z_max_m,
            m_uavs: g.m_uavs,
            uav_start: g.uav_start_m,
        };
        let a = &cfg.algorithm;
        let algo = AlgoParams {
            pop_size: a.pop_size,
            max_gens: a.max_gens,
            sbx_eta: a.sbx_eta,
            mut_eta: a.mut_eta,
            crossover_prob: a.crossover_prob,
            mutation_prob: a.mutation_prob,
            inertia_eps: a.inertia_eps,
            learn_c1: a.learn_c1,
            learn_c2: a.learn_c2,
            rng_seed: a.rng_seed,
            trials: a.trials,
        };
        let scenario = Scenario {
            radio,
            uav,
            geometry,
            algo,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    /// Copy with `M` UAV-RISs and the first `K` ground users of this
    /// scenario's user list.
    pub fn with_counts(&self, m_uavs: usize, k_users: usize) -> Result<Self> {
        if k_users > self.geometry.gu_positions.len() {
            return Err(Error::Validation(format!(
                "K = {k_users} requested but the scenario lists only {} ground users",
                self.geometry.gu_positions.len()
            )));
        }
        let mut s = self.clone();
        s.geometry.m_uavs = m_uavs;
        s.geometry.gu_positions.truncate(k_users);
        s.validate()?;
        Ok(s)
    }

    pub fn m(&self) -> usize {
        self.geometry.m_uavs
    }

    pub fn k(&self) -> usize {
        self.geometry.k_users()
    }

    pub fn validate(&self) -> Result<()> {
        fn check(ok: bool, msg: &str) -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::Validation(msg.to_string()))
            }
        }
        let finite_pos = |x: f64| x.is_finite() && x > 0.0;
        let r = &self.radio;
        check(finite_pos(r.bandwidth_hz), "bandwidth must be > 0")?;
        check(finite_pos(r.p_max_w), "p_max must be > 0 W")?;
        check(finite_pos(r.p_bs_circuit_w), "BS circuit power must be > 0 W")?;
        check(finite_pos(r.noise_power_w), "noise power must be > 0 W")?;
        check(finite_pos(r.p_gu_circuit_w), "GU circuit power must be > 0 W")?;
        check(finite_pos(r.p_ris_element_w), "RIS element power must be > 0 W")?;
        check(finite_pos(r.beta0), "beta0 must be > 0")?;
        check(finite_pos(r.rician_factor), "Rician factor must be > 0")?;
        check(
            r.amp_efficiency > 0.0 && r.amp_efficiency <= 1.0,
            "amplifier efficiency must lie in (0, 1]",
        )?;
        check(finite_pos(r.data_size_bits), "data size must be > 0")?;
        check(r.n_bs >= 1, "n_bs must be >= 1")?;
        check(r.n_r >= 1 && r.n_c >= 1, "n_r and n_c must be >= 1")?;
        check(
            (1..=16).contains(&r.quant_bits),
            "quant_bits must be in 1..=16 (C = 2^c >= 2)",
        )?;
        check(
            r.element_spacing_ratio == 0.5,
            "element_spacing_ratio must be 0.5 (half-wavelength arrays)",
        )?;

        let u = &self.uav;
        for (v, name) in [
            (u.mass_kg, "mass"),
            (u.gravity_mps2, "gravity"),
            (u.cruise_speed_mps, "cruise speed"),
            (u.blade_power_w, "blade profile power"),
            (u.induced_power_w, "induced power"),
            (u.tip_speed_mps, "rotor tip speed"),
            (u.mean_rotor_velocity_mps, "mean rotor induced velocity"),
            (u.fuselage_drag_ratio, "fuselage drag ratio"),
            (u.air_density_kgpm3, "air density"),
            (u.rotor_solidity, "rotor solidity"),
            (u.rotor_disc_area_m2, "rotor disc area"),
        ] {
            check(finite_pos(v), &format!("{name} must be > 0"))?;
        }
        check(
            u.initial_speed_mps >= 0.0 && u.initial_speed_mps.is_finite(),
            "initial speed must be >= 0",
        )?;
        check(
            u.initial_height_m >= 0.0 && u.initial_height_m.is_finite(),
            "initial height must be >= 0",
        )?;

        let g = &self.geometry;
        check(g.l_min < g.l_max, "l_min must be < l_max")?;
        check(g.z_min > 0.0, "z_min must be > 0")?;
        check(g.z_min < g.z_max, "z_min must be < z_max")?;
        check(!g.gu_positions.is_empty(), "at least one ground user (K >= 1)")?;
        check(g.m_uavs >= 1, "at least one UAV-RIS (M >= 1)")?;
        check(g.bs_position[2] == 0.0, "BS must be on the ground (z = 0)")?;
        check(
            g.gu_positions.iter().all(|p| p[2] == 0.0),
            "ground users must be on the ground (z = 0)",
        )?;
        check(
            g.bs_position
                .iter()
                .chain(g.uav_start.iter())
                .chain(g.gu_positions.iter().flatten())
                .all(|x| x.is_finite()),
            "positions must be finite",
        )?;

        let a = &self.algo;
        check(
            a.pop_size >= 4 && a.pop_size.is_multiple_of(2),
            "pop_size must be >= 4 and even",
        )?;
        let prob = |p: f64| (0.0..=1.0).contains(&p);
        check(prob(a.crossover_prob), "crossover_prob must be in [0, 1]")?;
        check(a.mutation_prob.is_none_or(prob), "mutation_prob must be in [0, 1]")?;
        check(
            a.sbx_eta >= 0.0 && a.mut_eta >= 0.0,
            "distribution indices must be >= 0",
        )?;
        check(a.trials >= 1, "trials must be >= 1")?;
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// On-disk schema. Units live in the key names.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub radio: RadioConfig,
    pub uav: UavConfig,
    pub geometry: GeometryConfig,
    pub algorithm: AlgorithmConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadioConfig {
    pub bandwidth_hz: f64,
    pub p_max_dbm: f64,
    pub p_bs_circuit_dbm: f64,
    pub noise_power_dbm: f64,
    pub p_gu_circuit_dbm: f64,
    pub p_ris_element_dbm: f64,
    pub beta0_db: f64,
    pub rician_factor_db: f64,
    pub amp_efficiency: f64,
    pub data_size_bits: f64,
    pub n_bs: usize,
    pub n_r: usize,
    pub n_c: usize,
    pub quant_bits: u32,
    pub element_spacing_ratio: f64,
}

impl Default for RadioConfig {
    fn default() -> Self {
        Self {
            bandwidth_hz: 1e6,
            p_max_dbm: 50.0,
            p_bs_circuit_dbm: 39.0,
            noise_power_dbm: -104.0,
            p_gu_circuit_dbm: 10.0,
            p_ris_element_dbm: 10.0,
            beta0_db: -30.0,
            rician_factor_db: 20.0,
            amp_efficiency: 0.8,
            data_size_bits: 10e6,
            n_bs: 32,
            n_r: 8,
            n_c: 8,
            quant_bits: 3,
            element_spacing_ratio: 0.5,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct UavConfig {
    pub mass_kg: f64,
    pub gravity_mps2: f64,
    pub cruise_speed_mps: f64,
    pub initial_speed_mps: f64,
    pub initial_height_m: f64,
    pub blade_power_w: f64,
    pub induced_power_w: f64,
    pub tip_speed_mps: f64,
    pub mean_rotor_velocity_mps: f64,
    pub fuselage_drag_ratio: f64,
    pub air_density_kgpm3: f64,
    pub rotor_solidity: f64,
    pub rotor_disc_area_m2: f64,
}

impl Default for UavConfig {
    fn default() -> Self {
        // Rotary-wing constants from the standard blade-element energy model.
        Self {
            mass_kg: 2.0,
            gravity_mps2: 9.8,
            cruise_speed_mps: 10.0,
            initial_speed_mps: 0.0,
            initial_height_m: 0.0,
            blade_power_w: 79.8563,
            induced_power_w: 88.6279,
            tip_speed_mps: 120.0,
            mean_rotor_velocity_mps: 4.03,
            fuselage_drag_ratio: 0.6,
            air_density_kgpm3: 1.225,
            rotor_solidity: 0.05,
            rotor_disc_area_m2: 0.503,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometryConfig {
    pub bs_position_m: [f64; 3],
    pub gu_positions_m: Vec<[f64; 3]>,
    pub l_min_m: f64,
    pub l_max_m: f64,
    pub z_min_m: f64,
    pub z_max_m: f64,
    pub m_uavs: usize,
    pub uav_start_m: [f64; 3],
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self {
            bs_position_m: [0.0; 3],
            gu_positions_m: DEFAULT_GU_LAYOUT[..5].to_vec(),
            l_min_m: 0.0,
            l_max_m: 200.0,
            z_min_m: 50.0,
            z_max_m: 200.0,
            m_uavs: 4,
            uav_start_m: [0.0; 3],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AlgorithmConfig {
    pub pop_size: usize,
    pub max_gens: usize,
    pub sbx_eta: f64,
    pub mut_eta: f64,
    pub crossover_prob: f64,
    pub mutation_prob: Option<f64>,
    pub inertia_eps: f64,
    pub learn_c1: f64,
    pub learn_c2: f64,
    pub rng_seed: u64,
    pub trials: usize,
}

impl Default for AlgorithmConfig {
    fn default() -> Self {
        Self {
            pop_size: 50,
            max_gens: 200,
            sbx_eta: 20.0,
            mut_eta: 20.0,
            crossover_prob: 0.9,
            mutation_prob: None,
            inertia_eps: 0.4,
            learn_c1: 2.0,
            learn_c2: 2.0,
            rng_seed: 2025,
            trials: 30,
        }
    }
}
