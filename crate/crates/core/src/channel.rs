//! LoS channel model for the BS → UAV-RIS → ground-user cascade.
//!
//! The BS carries a half-wavelength uniform linear array; each RIS is a
//! half-wavelength uniform planar array of `n_r × n_c` elements. Only the LoS
//! component of the Rician channel is kept and free-space (exponent 2) path
//! loss applies on both hops, so every quantity here is deterministic.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::Scenario;

const ANGLE_TOL: f64 = 1e-12;

/// Progressive-phase steering vector. Entries have unit modulus and the
/// first entry is exactly `1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayResponse(pub Vec<Complex64>);

impl ArrayResponse {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Planar-array response `[e^{jπ p φ}]_p ⊗ [e^{jπ q Ω}]_q`, element
/// `p·n_r + q` for `p < n_c`, `q < n_r`.
pub fn planar_response(phi: f64, omega: f64, n_c: usize, n_r: usize) -> Result<ArrayResponse> {
    if !(phi.abs() <= 1.0 + ANGLE_TOL && omega.abs() <= 1.0 + ANGLE_TOL) {
        return Err(Error::Geometry(format!(
            "planar angle parameters out of range: phi = {phi}, omega = {omega}"
        )));
    }
    let mut out = Vec::with_capacity(n_c * n_r);
    for p in 0..n_c {
        for q in 0..n_r {
            out.push(Complex64::cis(PI * (p as f64 * phi + q as f64 * omega)));
        }
    }
    Ok(ArrayResponse(out))
}

/// Linear-array response `[e^{jπ p sinϑ}]_p`.
pub fn linear_response(sin_theta: f64, n: usize) -> Result<ArrayResponse> {
    if !(sin_theta.abs() <= 1.0 + ANGLE_TOL) {
        return Err(Error::Geometry(format!("sin(theta) out of range: {sin_theta}")));
    }
    Ok(ArrayResponse(
        (0..n).map(|p| Complex64::cis(PI * p as f64 * sin_theta)).collect(),
    ))
}

/// Zenith and azimuth of the link from `from` to `to` as used by the model.
///
/// `azimuth_from_x` selects `arccos(|Δx| / ‖Δw‖)` (BS → RIS arrival);
/// otherwise `arcsin(|Δy| / ‖Δw‖)` (RIS → GU departure). When the two points
/// share a horizontal position both angles are 0.
fn link_angles(from: &[f64; 3], to: &[f64; 3], azimuth_from_x: bool) -> Result<(f64, f64, f64)> {
    let dx = to[0] - from[0];
    let dy = to[1] - from[1];
    let dz = to[2] - from[2];
    let horiz = dx.hypot(dy);
    let dist = (dx * dx + dy * dy + dz * dz).sqrt();
    if dist == 0.0 {
        return Err(Error::Geometry("zero link distance".into()));
    }
    if horiz == 0.0 {
        return Ok((dist, 0.0, 0.0));
    }
    let zenith = (horiz / dist).clamp(-1.0, 1.0).asin();
    let azimuth = if azimuth_from_x {
        (dx.abs() / horiz).clamp(-1.0, 1.0).acos()
    } else {
        (dy.abs() / horiz).clamp(-1.0, 1.0).asin()
    };
    Ok((dist, zenith, azimuth))
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
}

/// `G_m`: BS → RIS channel, `N_RIS × N_BS`, rank one.
pub fn bs_to_ris_channel(scenario: &Scenario, uav_pos: &[f64; 3]) -> Result<CMatrix> {
    let radio = &scenario.radio;
    if uav_pos[2] <= 0.0 {
        return Err(Error::Geometry("UAV-RIS must be above ground".into()));
    }
    let (dist, zenith, azimuth) = link_angles(&scenario.geometry.bs_position, uav_pos, true)?;
    let phi = zenith.sin() * azimuth.cos();
    let omega = zenith.sin() * azimuth.sin();
    let a_r = planar_response(phi, omega, radio.n_c, radio.n_r)?;
    let a_t = linear_response(zenith.sin(), radio.n_bs)?;
    let gain = (radio.beta0 / (dist * dist)).sqrt() * radio.los_factor();

    let mut g = CMatrix::zeros(a_r.len(), a_t.len());
    for (n, ar) in a_r.0.iter().enumerate() {
        for (i, at) in a_t.0.iter().enumerate() {
            g.data[n * g.cols + i] = ar * at.conj() * gain;
        }
    }
    Ok(g)
}

/// `h_{k,m}`: RIS → GU channel as a column of length `N_RIS`. Entries are
/// the unconjugated departure response; the conjugate transpose is applied
/// where the received signal is formed.
pub fn ris_to_gu_channel(scenario: &Scenario, uav_pos: &[f64; 3], gu_pos: &[f64; 3]) -> Result<Vec<Complex64>> {
    let radio = &scenario.radio;
    if uav_pos[2] <= 0.0 {
        return Err(Error::Geometry("UAV-RIS must be above ground".into()));
    }
    let (dist, zenith, azimuth) = link_angles(gu_pos, uav_pos, false)?;
    let phi = zenith.sin() * azimuth.cos();
    let omega = zenith.sin() * azimuth.sin();
    let a_t = planar_response(phi, omega, radio.n_c, radio.n_r)?;
    let gain = (radio.beta0 / (dist * dist)).sqrt() * radio.los_factor();
    Ok(a_t.0.into_iter().map(|a| a * gain).collect())
}

/// Discrete phase indices, one row per RIS. Phase of element `(m, n)` is
/// `2π·index/C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseMatrix {
    rows: usize,
    cols: usize,
    levels: usize,
    indices: Vec<u16>,
}

impl PhaseMatrix {
    /// All-zero phases.
    pub fn zeros(rows: usize, cols: usize, levels: usize) -> Self {
        assert!(levels >= 1 && levels <= usize::from(u16::MAX) + 1);
        Self {
            rows,
            cols,
            levels,
            indices: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<u16>>, levels: usize) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged phase matrix".into()));
        }
        let indices: Vec<u16> = rows.into_iter().flatten().collect();
        if indices.iter().any(|&i| usize::from(i) >= levels) {
            return Err(Error::Constraint(format!("phase index outside 0..{levels}")));
        }
        Ok(Self {
            rows: r,
            cols: c,
            levels,
            indices,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    #[inline]
    pub fn index(&self, m: usize, n: usize) -> u16 {
        self.indices[m * self.cols + n]
    }

    #[inline]
    pub fn set(&mut self, m: usize, n: usize, idx: u16) {
        debug_assert!(usize::from(idx) < self.levels);
        self.indices[m * self.cols + n] = idx;
    }

    pub fn row(&self, m: usize) -> &[u16] {
        &self.indices[m * self.cols..(m + 1) * self.cols]
    }

    pub fn row_mut(&mut self, m: usize) -> &mut [u16] {
        &mut self.indices[m * self.cols..(m + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[u16] {
        &self.indices
    }

    pub fn as_mut_slice(&mut self) -> &mut [u16] {
        &mut self.indices
    }

    pub fn to_rows(&self) -> Vec<Vec<u16>> {
        self.indices.chunks(self.cols.max(1)).map(<[u16]>::to_vec).collect()
    }

    /// Phase in radians of element `(m, n)`.
    pub fn phase(&self, m: usize, n: usize) -> f64 {
        phase_of_index(self.index(m, n), self.levels)
    }

    pub fn in_range(&self) -> bool {
        self.indices.iter().all(|&i| usize::from(i) < self.levels)
    }
}

/// `2π·index/C`.
pub fn phase_of_index(index: u16, levels: usize) -> f64 {
    2.0 * PI * f64::from(index) / levels as f64
}

/// Nearest level to `theta` (radians, any real) on a `C`-level grid.
pub fn quantize_phase(theta: f64, levels: usize) -> u16 {
    let step = 2.0 * PI / levels as f64;
    let k = (theta.rem_euclid(2.0 * PI) / step).round() as usize % levels;
    k as u16
}

/// BS precoders `w_k`, one column of length `N_BS` per user.
#[derive(Debug, Clone, PartialEq)]
pub struct Beamforming {
    n_bs: usize,
    users: usize,
    data: Vec<Complex64>,
}

impl Beamforming {
    pub fn zeros(n_bs: usize, users: usize) -> Self {
        Self {
            n_bs,
            users,
            data: vec![Complex64::new(0.0, 0.0); n_bs * users],
        }
    }

    pub fn from_columns(columns: Vec<Vec<Complex64>>) -> Result<Self> {
        let users = columns.len();
        let n_bs = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != n_bs) {
            return Err(Error::Dimension("ragged beamforming matrix".into()));
        }
        Ok(Self {
            n_bs,
            users,
            data: columns.into_iter().flatten().collect(),
        })
    }

    pub fn n_bs(&self) -> usize {
        self.n_bs
    }

    pub fn users(&self) -> usize {
        self.users
    }

    /// `w_k`.
    pub fn column(&self, k: usize) -> &[Complex64] {
        &self.data[k * self.n_bs..(k + 1) * self.n_bs]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.n_bs.max(1))
    }

    /// Stacked vector `w = [w_1; …; w_K]`.
    pub fn stacked(&self) -> &[Complex64] {
        &self.data
    }

    pub fn stacked_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    /// `wᴴw`.
    pub fn power(&self) -> f64 {
        self.data.iter().map(Complex64::norm_sqr).sum()
    }
}

/// Per-candidate channel quantities.
#[derive(Debug, Clone)]
pub struct ChannelState {
    /// `G_m` for each RIS.
    pub bs_to_ris: Vec<CMatrix>,
    /// `h_{k,m}` indexed `[k][m]`.
    pub ris_to_gu: Vec<Vec<Vec<Complex64>>>,
    /// Effective rows `H_k = Σ_m h_{k,m}ᴴ Θ_m G_m`, each of length `N_BS`.
    pub effective: Vec<Vec<Complex64>>,
}

/// Builds every per-link channel and the effective per-user rows.
pub fn effective_channels(scenario: &Scenario, positions: &[[f64; 3]], phases: &PhaseMatrix) -> Result<ChannelState> {
    let radio = &scenario.radio;
    let n_ris = radio.n_ris();
    if phases.rows() != positions.len() || phases.cols() != n_ris {
        return Err(Error::Dimension(format!(
            "phase matrix is {}×{}, expected {}×{}",
            phases.rows(),
            phases.cols(),
            positions.len(),
            n_ris
        )));
    }
    let levels = phases.levels();
    let rotor: Vec<Complex64> = (0..levels)
        .map(|l| Complex64::cis(phase_of_index(l as u16, levels)))
        .collect();

    let bs_to_ris = positions
        .iter()
        .map(|p| bs_to_ris_channel(scenario, p))
        .collect::<Result<Vec<_>>>()?;

    let gus = &scenario.geometry.gu_positions;
    let mut ris_to_gu = Vec::with_capacity(gus.len());
    let mut effective = Vec::with_capacity(gus.len());
    let mut weights = vec![Complex64::new(0.0, 0.0); n_ris];
    for gu in gus {
        let mut row = vec![Complex64::new(0.0, 0.0); radio.n_bs];
        let mut per_ris = Vec::with_capacity(positions.len());
        for (m, pos) in positions.iter().enumerate() {
            let h = ris_to_gu_channel(scenario, pos, gu)?;
            for (n, w) in weights.iter_mut().enumerate() {
                *w = h[n].conj() * rotor[usize::from(phases.index(m, n))];
            }
            let g = &bs_to_ris[m];
            for (n, w) in weights.iter().enumerate() {
                for (acc, gv) in row.iter_mut().zip(g.row(n)) {
                    *acc += w * gv;
                }
            }
            per_ris.push(h);
        }
        ris_to_gu.push(per_ris);
        effective.push(row);
    }
    Ok(ChannelState {
        bs_to_ris,
        ris_to_gu,
        effective,
    })
}

/// Per-user SINR and Shannon rate (bit/s).
pub fn sinr_and_rates(
    scenario: &Scenario,
    state: &ChannelState,
    beamforming: &Beamforming,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let k_users = state.effective.len();
    if beamforming.users() != k_users || beamforming.n_bs() != scenario.radio.n_bs {
        return Err(Error::Dimension(format!(
            "beamforming is {}×{}, expected {}×{}",
            beamforming.n_bs(),
            beamforming.users(),
            scenario.radio.n_bs,
            k_users
        )));
    }
    let noise = scenario.radio.noise_power_w;
    let bw = scenario.radio.bandwidth_hz;
    let mut sinr = Vec::with_capacity(k_users);
    for (k, hk) in state.effective.iter().enumerate() {
        let mut signal = 0.0;
        let mut interference = 0.0;
        for (i, wi) in beamforming.columns().enumerate() {
            let gain: Complex64 = hk.iter().zip(wi).map(|(h, w)| h * w).sum();
            if i == k {
                signal = gain.norm_sqr();
            } else {
                interference += gain.norm_sqr();
            }
        }
        sinr.push(signal / (interference + noise));
    }
    let rates = sinr.iter().map(|s| bw * (1.0 + s).log2()).collect();
    Ok((sinr, rates))
}
