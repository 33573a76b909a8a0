use crate::error::{Error, Result};

/// Area dominated by 2-D points with respect to `reference` (minimization).
/// Points not strictly better than the reference in both coordinates add
/// nothing.
pub fn hypervolume_2d(points: &[[f64; 2]], reference: [f64; 2]) -> f64 {
    let mut pts: Vec<[f64; 2]> = points
        .iter()
        .copied()
        .filter(|p| p[0] < reference[0] && p[1] < reference[1])
        .collect();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut area = 0.0;
    let mut best_y = reference[1];
    for (i, p) in pts.iter().enumerate() {
        if p[1] < best_y {
            best_y = p[1];
        }
        let next_x = pts.get(i + 1).map_or(reference[0], |q| q[0]);
        area += (next_x - p[0]) * (reference[1] - best_y);
    }
    area
}

/// Exact 3-objective hypervolume by slicing along the third objective.
///
/// Every point must be weakly better than `reference` in each objective.
pub fn hypervolume(points: &[[f64; 3]], reference: [f64; 3]) -> Result<f64> {
    if let Some(p) = points.iter().find(|p| (0..3).any(|j| !(p[j] <= reference[j]))) {
        return Err(Error::Validation(format!(
            "point {p:?} lies beyond the reference point {reference:?}"
        )));
    }
    let mut pts: Vec<[f64; 3]> = points.to_vec();
    pts.sort_by(|a, b| a[2].total_cmp(&b[2]));
    let mut volume = 0.0;
    let mut slice: Vec<[f64; 2]> = Vec::with_capacity(pts.len());
    for (i, p) in pts.iter().enumerate() {
        slice.push([p[0], p[1]]);
        let next_z = pts.get(i + 1).map_or(reference[2], |q| q[2]);
        let depth = next_z - p[2];
        if depth > 0.0 {
            volume += depth * hypervolume_2d(&slice, [reference[0], reference[1]]);
        }
    }
    Ok(volume)
}
