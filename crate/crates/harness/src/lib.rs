//! Experiment harness for `uavris-core`: campaigns of seeded trials,
//! per-trial JSON/CSV reports, aggregate statistics and the `uavris` CLI.

pub mod campaign;
pub mod cli;
pub mod error;
pub mod report;
pub mod stats;

pub use campaign::{trial_seed, Campaign, CampaignConfig};
pub use error::{HarnessError, Result};
pub use report::{Mode, Objective, TrialReport};
