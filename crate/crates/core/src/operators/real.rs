use rand::Rng;

use crate::scenario::Geometry;

/// Simulated binary crossover on two real vectors, in place.
///
/// The pair is crossed with probability `prob`; each gene is then exchanged
/// with probability ½. No bounds are applied; repair is a separate step.
pub fn sbx_pair<R: Rng + ?Sized>(a: &mut [f64], b: &mut [f64], eta: f64, prob: f64, rng: &mut R) {
    debug_assert_eq!(a.len(), b.len());
    if rng.gen::<f64>() >= prob {
        return;
    }
    let exp = 1.0 / (eta + 1.0);
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        if rng.gen::<f64>() >= 0.5 || (*x - *y).abs() <= 1e-14 {
            continue;
        }
        let u: f64 = rng.gen();
        let beta = if u <= 0.5 {
            (2.0 * u).powf(exp)
        } else {
            (1.0 / (2.0 * (1.0 - u))).powf(exp)
        };
        let (p, q) = (*x, *y);
        *x = 0.5 * ((1.0 + beta) * p + (1.0 - beta) * q);
        *y = 0.5 * ((1.0 - beta) * p + (1.0 + beta) * q);
    }
}

/// Polynomial mutation, in place. Gene `i` moves by at most `spans[i]`.
pub fn polynomial_mutation<R: Rng + ?Sized>(x: &mut [f64], spans: &[f64], eta: f64, prob: f64, rng: &mut R) {
    debug_assert_eq!(x.len(), spans.len());
    let exp = 1.0 / (eta + 1.0);
    for (v, span) in x.iter_mut().zip(spans) {
        if rng.gen::<f64>() >= prob {
            continue;
        }
        let u: f64 = rng.gen();
        let delta = if u < 0.5 {
            (2.0 * u).powf(exp) - 1.0
        } else {
            1.0 - (2.0 * (1.0 - u)).powf(exp)
        };
        *v += delta * span;
    }
}

/// Opposition-based boundary repair of one coordinate.
///
/// Above the box the value is reflected about the upper bound; below it the
/// value becomes `lo − x`. Anything still outside is clamped. Values on a
/// bound are left alone, so the repair is idempotent.
pub fn obl_value(x: f64, lo: f64, hi: f64) -> f64 {
    let y = if x > hi {
        2.0 * hi - x
    } else if x < lo {
        lo - x
    } else {
        return x;
    };
    y.clamp(lo, hi)
}

/// Boundary handling for UAV-RIS positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Repair {
    Clamp,
    Opposition,
}

impl Repair {
    pub fn apply(self, positions: &mut [[f64; 3]], geometry: &Geometry) {
        for p in positions {
            for (axis, x) in p.iter_mut().enumerate() {
                let (lo, hi) = geometry.axis_bounds(axis);
                *x = match self {
                    Repair::Clamp => x.clamp(lo, hi),
                    Repair::Opposition => obl_value(*x, lo, hi),
                };
            }
        }
    }
}

/// Binary tournament on (rank ascending, crowding descending). Returns an
/// index into `rank`.
pub fn binary_tournament<R: Rng + ?Sized>(rank: &[usize], crowding: &[f64], rng: &mut R) -> usize {
    let n = rank.len();
    let i = rng.gen_range(0..n);
    let j = rng.gen_range(0..n);
    if rank[j] < rank[i] || (rank[j] == rank[i] && crowding[j] > crowding[i]) {
        j
    } else {
        i
    }
}
