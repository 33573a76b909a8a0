//! Multi-objective deployment of UAV-mounted reconfigurable intelligent
//! surfaces: channel and energy models, the objective evaluator, Pareto
//! machinery, variation operators and the optimizers built from them.

pub mod algorithms;
pub mod channel;
pub mod energy;
pub mod error;
pub mod evaluation;
pub mod moo;
pub mod operators;
pub mod rng;
pub mod scenario;

pub use algorithms::{run, Algorithm, RunResult};
pub use error::{Error, Result};
pub use evaluation::{Candidate, CandidateRecord, ObjectiveRecord, ObjectiveVector};
pub use scenario::Scenario;
