//! Experiment harness (under construction).
pub mod fixtures;
