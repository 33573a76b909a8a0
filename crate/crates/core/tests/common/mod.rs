//! Naive reference implementations used as test oracles. Written directly
//! from the model definitions with explicit matrices and loops; they share
//! nothing with the library beyond the scenario parameters.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64 as C;
use uavris_core::scenario::Scenario;
use uavris_core::ObjectiveVector;

type Mat = Vec<Vec<C>>;

fn matmul(a: &Mat, b: &Mat) -> Mat {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![C::new(0.0, 0.0); m]; n];
    for i in 0..n {
        for j in 0..m {
            for t in 0..k {
                out[i][j] += a[i][t] * b[t][j];
            }
        }
    }
    out
}

fn kron(a: &[C], b: &[C]) -> Vec<C> {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// `[1, e^{j2π d x / λ}, …]` with `d = λ/2`.
fn progression(n: usize, x: f64) -> Vec<C> {
    (0..n)
        .map(|i| C::from_polar(1.0, 2.0 * PI * i as f64 * 0.5 * x))
        .collect()
}

fn upa(s: &Scenario, zenith: f64, azimuth: f64) -> Vec<C> {
    let phi = zenith.sin() * azimuth.cos();
    let omega = zenith.sin() * azimuth.sin();
    kron(&progression(s.radio.n_c, phi), &progression(s.radio.n_r, omega))
}

fn horiz(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn los_scale(s: &Scenario, d: f64) -> f64 {
    let a = s.radio.rician_factor;
    (s.radio.beta0 / (d * d)).sqrt() * (a / (1.0 + a)).sqrt()
}

/// `G_m` as an explicit `N_RIS × N_BS` matrix.
pub fn g_matrix(s: &Scenario, q: &[f64; 3]) -> Mat {
    let b = &s.geometry.bs_position;
    let d = dist(q, b);
    let w = horiz(q, b);
    let zen = (w / d).asin();
    let azi = if w == 0.0 {
        0.0
    } else {
        ((q[0] - b[0]).abs() / w).acos()
    };
    let a_r = upa(s, zen, azi);
    let a_t: Vec<C> = (0..s.radio.n_bs)
        .map(|i| C::from_polar(1.0, PI * i as f64 * zen.sin()))
        .collect();
    let scale = los_scale(s, d);
    a_r.iter()
        .map(|r| a_t.iter().map(|t| r * t.conj() * scale).collect())
        .collect()
}

/// `h_{k,m}` as a column vector.
pub fn h_vector(s: &Scenario, q: &[f64; 3], gu: &[f64; 3]) -> Vec<C> {
    let d = dist(q, gu);
    let w = horiz(q, gu);
    let zen = (w / d).asin();
    let azi = if w == 0.0 {
        0.0
    } else {
        ((q[1] - gu[1]).abs() / w).asin()
    };
    let scale = los_scale(s, d);
    upa(s, zen, azi).into_iter().map(|z| z * scale).collect()
}

/// `H_k = Σ_m h_{k,m}ᴴ Θ_m G_m` by explicit matrix products, one row per user.
pub fn effective_rows(s: &Scenario, positions: &[[f64; 3]], phase_idx: &[Vec<u16>]) -> Vec<Vec<C>> {
    let levels = s.radio.phase_levels() as f64;
    let n = s.radio.n_ris();
    s.geometry
        .gu_positions
        .iter()
        .map(|gu| {
            let mut row = vec![C::new(0.0, 0.0); s.radio.n_bs];
            for (m, q) in positions.iter().enumerate() {
                let h_h: Mat = vec![h_vector(s, q, gu).iter().map(|z| z.conj()).collect()];
                let mut theta = vec![vec![C::new(0.0, 0.0); n]; n];
                for (i, t) in theta.iter_mut().enumerate() {
                    t[i] = C::from_polar(1.0, 2.0 * PI * f64::from(phase_idx[m][i]) / levels);
                }
                let prod = matmul(&matmul(&h_h, &theta), &g_matrix(s, q));
                for (acc, v) in row.iter_mut().zip(&prod[0]) {
                    *acc += v;
                }
            }
            row
        })
        .collect()
}

/// Per-user `(SINR, rate)` from effective rows and precoder columns.
pub fn sinr_rates(s: &Scenario, rows: &[Vec<C>], w: &[Vec<C>]) -> (Vec<f64>, Vec<f64>) {
    let k = rows.len();
    let mut sinr = vec![0.0; k];
    for u in 0..k {
        let mut power = vec![0.0; k];
        for i in 0..k {
            let mut acc = C::new(0.0, 0.0);
            for n in 0..rows[u].len() {
                acc += rows[u][n] * w[i][n];
            }
            power[i] = acc.norm_sqr();
        }
        let interference: f64 = (0..k).filter(|&i| i != u).map(|i| power[i]).sum();
        sinr[u] = power[u] / (interference + s.radio.noise_power_w);
    }
    let rates = sinr
        .iter()
        .map(|x| s.radio.bandwidth_hz * (1.0 + x).ln() / 2f64.ln())
        .collect();
    (sinr, rates)
}

/// Rotary-wing propulsion power, term by term.
pub fn propulsion(s: &Scenario, v: f64) -> f64 {
    let u = &s.uav;
    let blade = u.blade_power_w + u.blade_power_w * 3.0 * v.powi(2) / u.tip_speed_mps.powi(2);
    let inner = (1.0 + v.powi(4) / (4.0 * u.mean_rotor_velocity_mps.powi(4))).sqrt()
        - v.powi(2) / (2.0 * u.mean_rotor_velocity_mps.powi(2));
    let induced = u.induced_power_w * inner.sqrt();
    let parasite =
        u.fuselage_drag_ratio * u.air_density_kgpm3 * u.rotor_solidity * u.rotor_disc_area_m2 * v.powi(3) / 2.0;
    blade + induced + parasite
}

pub fn deployment(s: &Scenario, positions: &[[f64; 3]]) -> f64 {
    let u = &s.uav;
    let v = u.cruise_speed_mps;
    let start = s.geometry.uav_start;
    let mut e = 0.0;
    for q in positions {
        let t = dist(q, &start) / v;
        e += propulsion(s, v) * t;
        e += u.mass_kg * u.gravity_mps2 * (q[2] - u.initial_height_m);
    }
    for _ in positions {
        e += u.mass_kg * (v * v - u.initial_speed_mps * u.initial_speed_mps) / 2.0;
    }
    e
}

pub fn comm_power(s: &Scenario, w: &[Vec<C>]) -> f64 {
    let r = &s.radio;
    let mut p = 0.0;
    for col in w {
        let mut wh_w = 0.0;
        for z in col {
            wh_w += (z.conj() * z).re;
        }
        p += wh_w / r.amp_efficiency;
    }
    p += r.p_bs_circuit_w;
    for _ in 0..w.len() {
        p += r.p_gu_circuit_w;
    }
    for _ in 0..s.m() {
        p += r.n_ris() as f64 * r.p_ris_element_w;
    }
    p
}

pub fn hover(s: &Scenario, rates: &[f64], w: &[Vec<C>]) -> f64 {
    let t = rates.iter().map(|r| s.radio.data_size_bits / r).fold(0.0, f64::max);
    let mut p = comm_power(s, w);
    for _ in 0..s.m() {
        p += s.uav.blade_power_w + s.uav.induced_power_w;
    }
    p * t
}

/// Minimization dominance, written out.
pub fn dominates_naive(a: &[f64; 3], b: &[f64; 3]) -> bool {
    a[0] <= b[0] && a[1] <= b[1] && a[2] <= b[2] && (a[0] < b[0] || a[1] < b[1] || a[2] < b[2])
}

/// Fronts by repeated peeling of the non-dominated remainder.
pub fn brute_fronts(objs: &[ObjectiveVector]) -> Vec<Vec<usize>> {
    let mut left: Vec<usize> = (0..objs.len()).collect();
    let mut fronts = Vec::new();
    while !left.is_empty() {
        let front: Vec<usize> = left
            .iter()
            .copied()
            .filter(|&i| !left.iter().any(|&j| dominates_naive(&objs[j].0, &objs[i].0)))
            .collect();
        left.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}

/// Crowding distance for fronts with pairwise distinct values per
/// objective: each member's gap between its nearest lower and upper
/// neighbours, over the span.
pub fn crowding_by_hand(front: &[ObjectiveVector]) -> Vec<f64> {
    let n = front.len();
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    (0..n)
        .map(|i| {
            let mut total = 0.0;
            for j in 0..3 {
                let v = front[i].0[j];
                let lower = front
                    .iter()
                    .map(|o| o.0[j])
                    .filter(|&x| x < v)
                    .fold(f64::NEG_INFINITY, f64::max);
                let upper = front
                    .iter()
                    .map(|o| o.0[j])
                    .filter(|&x| x > v)
                    .fold(f64::INFINITY, f64::min);
                if lower.is_infinite() || upper.is_infinite() {
                    return f64::INFINITY;
                }
                let lo = front.iter().map(|o| o.0[j]).fold(f64::INFINITY, f64::min);
                let hi = front.iter().map(|o| o.0[j]).fold(f64::NEG_INFINITY, f64::max);
                total += (upper - lower) / (hi - lo);
            }
            total
        })
        .collect()
}

/// Monte-Carlo hypervolume estimate with `samples` uniform points in the
/// box spanned by the component-wise minimum and the reference.
pub fn monte_carlo_hv<R: rand::Rng>(pts: &[[f64; 3]], reference: [f64; 3], samples: usize, rng: &mut R) -> f64 {
    let lo: [f64; 3] = std::array::from_fn(|j| pts.iter().map(|p| p[j]).fold(reference[j], f64::min));
    let vol: f64 = (0..3).map(|j| reference[j] - lo[j]).product();
    let mut hit = 0usize;
    for _ in 0..samples {
        let x: [f64; 3] = std::array::from_fn(|j| rng.gen_range(lo[j]..reference[j]));
        if pts.iter().any(|p| (0..3).all(|j| p[j] <= x[j])) {
            hit += 1;
        }
    }
    vol * hit as f64 / samples as f64
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
