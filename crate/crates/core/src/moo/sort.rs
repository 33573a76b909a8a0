use rand::Rng;

use crate::evaluation::{Candidate, ObjectiveVector};

/// `a` Pareto-dominates `b`: no worse everywhere, strictly better somewhere.
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

/// Fast non-dominated sort. Fronts are returned best first; members of each
/// front are in ascending input order.
pub fn non_dominated_sort(objs: &[ObjectiveVector]) -> Vec<Vec<usize>> {
    let n = objs.len();
    let mut dominated_by_me: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if dominates(&objs[i].0, &objs[j].0) {
                dominated_by_me[i].push(j);
                domination_count[j] += 1;
            } else if dominates(&objs[j].0, &objs[i].0) {
                dominated_by_me[j].push(i);
                domination_count[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| domination_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by_me[i] {
                domination_count[j] -= 1;
                if domination_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }
    fronts
}

/// Indices of the first front only.
pub fn non_dominated_front(objs: &[ObjectiveVector]) -> Vec<usize> {
    (0..objs.len())
        .filter(|&i| !objs.iter().any(|o| dominates(&o.0, &objs[i].0)))
        .collect()
}

/// Crowding distance of each member of one front.
///
/// Per objective the members are ordered by value (ties by position); the two
/// ends get `+∞` and each interior member accumulates the span-normalized gap
/// between its neighbours. Objectives with zero span add nothing.
pub fn crowding_distance(front: &[ObjectiveVector]) -> Vec<f64> {
    let n = front.len();
    let mut dist = vec![0.0; n];
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let mut order: Vec<usize> = (0..n).collect();
    for obj in 0..3 {
        order.sort_by(|&a, &b| front[a].0[obj].total_cmp(&front[b].0[obj]));
        let lo = front[order[0]].0[obj];
        let hi = front[order[n - 1]].0[obj];
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        let span = hi - lo;
        if span <= 0.0 {
            continue;
        }
        for w in 1..n - 1 {
            let i = order[w];
            if dist[i].is_finite() {
                dist[i] += (front[order[w + 1]].0[obj] - front[order[w - 1]].0[obj]) / span;
            }
        }
    }
    dist
}

/// Result of environmental selection over a pool of objective vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    /// Pool indices of the survivors, grouped by front.
    pub indices: Vec<usize>,
    /// Front index (0 = first front) of each survivor.
    pub rank: Vec<usize>,
    /// Crowding distance of each survivor within its surviving front.
    pub crowding: Vec<f64>,
}

/// Keeps exactly `pop_size` members: whole fronts in order, and the front
/// that overflows truncated by descending crowding distance (ties by pool
/// order). Crowding annotations are recomputed among the survivors.
pub fn elitist_select(objs: &[ObjectiveVector], pop_size: usize) -> Selection {
    assert!(objs.len() >= pop_size, "pool smaller than population size");
    let mut indices = Vec::with_capacity(pop_size);
    let mut rank = Vec::with_capacity(pop_size);
    let mut crowding = Vec::with_capacity(pop_size);
    for (r, front) in non_dominated_sort(objs).into_iter().enumerate() {
        let room = pop_size - indices.len();
        if room == 0 {
            break;
        }
        let kept: Vec<usize> = if front.len() <= room {
            front
        } else {
            let members: Vec<ObjectiveVector> = front.iter().map(|&i| objs[i]).collect();
            let cd = crowding_distance(&members);
            let mut order: Vec<usize> = (0..front.len()).collect();
            order.sort_by(|&a, &b| cd[b].total_cmp(&cd[a]));
            let mut chosen: Vec<usize> = order[..room].iter().map(|&w| front[w]).collect();
            chosen.sort_unstable();
            chosen
        };
        let members: Vec<ObjectiveVector> = kept.iter().map(|&i| objs[i]).collect();
        crowding.extend(crowding_distance(&members));
        rank.extend(std::iter::repeat_n(r, kept.len()));
        indices.extend(kept);
    }
    Selection {
        indices,
        rank,
        crowding,
    }
}

/// Candidates annotated with front rank and crowding distance.
#[derive(Debug, Clone)]
pub struct RankedPopulation {
    pub members: Vec<Candidate>,
    pub rank: Vec<usize>,
    pub crowding: Vec<f64>,
}

impl RankedPopulation {
    /// Ranks evaluated candidates without discarding any.
    pub fn rank_all(members: Vec<Candidate>) -> Self {
        let n = members.len();
        elitist_filter(members, n)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Member indices of the first front.
    pub fn front1(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.rank[i] == 0).collect()
    }

    pub fn front1_objectives(&self) -> Vec<ObjectiveVector> {
        self.front1().into_iter().map(|i| self.members[i].obj()).collect()
    }

    pub fn front1_members(&self) -> Vec<Candidate> {
        self.front1().into_iter().map(|i| self.members[i].clone()).collect()
    }
}

/// Environmental selection over evaluated candidates.
///
/// # Panics
/// If any candidate is unevaluated or the pool is smaller than `pop_size`.
pub fn elitist_filter(pool: Vec<Candidate>, pop_size: usize) -> RankedPopulation {
    let objs: Vec<ObjectiveVector> = pool.iter().map(Candidate::obj).collect();
    let sel = elitist_select(&objs, pop_size);
    let mut slots: Vec<Option<Candidate>> = pool.into_iter().map(Some).collect();
    let members = sel
        .indices
        .iter()
        .map(|&i| slots[i].take().expect("index selected twice"))
        .collect();
    RankedPopulation {
        members,
        rank: sel.rank,
        crowding: sel.crowding,
    }
}

/// Roulette weights from crowding distances: `+∞` becomes twice the largest
/// finite distance. `None` means "select uniformly" (no finite distance, or
/// all weights zero).
pub fn roulette_weights(crowding: &[f64]) -> Option<Vec<f64>> {
    let max_finite = crowding
        .iter()
        .copied()
        .filter(|d| d.is_finite())
        .fold(None, |acc: Option<f64>, d| Some(acc.map_or(d, |a| a.max(d))))?;
    let w: Vec<f64> = crowding
        .iter()
        .map(|&d| if d.is_finite() { d } else { 2.0 * max_finite })
        .collect();
    if w.iter().sum::<f64>() > 0.0 {
        Some(w)
    } else {
        None
    }
}

/// Crowding-weighted roulette over a front; returns a position in `crowding`.
///
/// # Panics
/// If `crowding` is empty.
pub fn roulette_index<R: Rng + ?Sized>(crowding: &[f64], rng: &mut R) -> usize {
    assert!(!crowding.is_empty(), "roulette over an empty front");
    match roulette_weights(crowding) {
        None => rng.gen_range(0..crowding.len()),
        Some(w) => {
            let total: f64 = w.iter().sum();
            let mut ticket = rng.gen::<f64>() * total;
            for (i, wi) in w.iter().enumerate() {
                if ticket < *wi {
                    return i;
                }
                ticket -= wi;
            }
            // Rounding can leave a sliver past the last bucket.
            w.iter().rposition(|&x| x > 0.0).unwrap_or(w.len() - 1)
        }
    }
}
