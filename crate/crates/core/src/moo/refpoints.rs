/// Number of Das–Dennis points for `m` objectives and `p` divisions,
/// `C(p + m − 1, m − 1)`.
pub fn das_dennis_count(m: usize, p: usize) -> usize {
    let (n, k) = (p + m - 1, m - 1);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Largest `p ≥ 1` whose point count does not exceed `limit`.
pub fn das_dennis_divisions(m: usize, limit: usize) -> usize {
    let mut p = 1;
    while das_dennis_count(m, p + 1) <= limit {
        p += 1;
    }
    p
}

/// Uniform simplex lattice with `p` divisions per axis.
pub fn das_dennis(m: usize, p: usize) -> Vec<Vec<f64>> {
    fn rec(m: usize, left: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if cur.len() == m - 1 {
            cur.push(left);
            out.push(cur.iter().map(|&c| c as f64 / p as f64).collect());
            cur.pop();
            return;
        }
        for i in 0..=left {
            cur.push(i);
            rec(m, left - i, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::with_capacity(das_dennis_count(m, p));
    rec(m, p, p, &mut Vec::with_capacity(m), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(das_dennis_count(3, 8), 45);
        assert_eq!(das_dennis_count(3, 12), 91);
        assert_eq!(das_dennis(3, 8).len(), 45);
        assert_eq!(das_dennis_divisions(3, 50), 8);
        assert_eq!(das_dennis_divisions(3, 20), 4);
    }

    #[test]
    fn points_lie_on_simplex() {
        for w in das_dennis(3, 5) {
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(w.iter().all(|&x| x >= 0.0));
        }
    }
}
