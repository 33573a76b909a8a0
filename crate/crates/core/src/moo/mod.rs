//! Pareto dominance, non-dominated sorting, crowding, environmental
//! selection and front quality metrics. Minimization throughout.

mod hypervolume;
mod refpoints;
mod sort;

pub use hypervolume::{hypervolume, hypervolume_2d};
pub use refpoints::{das_dennis, das_dennis_count, das_dennis_divisions};
pub use sort::{
    crowding_distance, dominates, elitist_filter, elitist_select, non_dominated_front, non_dominated_sort,
    roulette_index, roulette_weights, RankedPopulation, Selection,
};
