//! Reward and evaluation toolkit for structured information extraction.
//!
//! - [`codec`] parses model generations (NER slots, RE pairs, EE trigger
//!   groups) and extracts the structural unit sets everything else compares.
//! - [`reward`] computes the stepwise fine-grained reward for each task.
//! - [`grpo`] turns a group of candidate rewards into group-relative advantages.
//! - [`eval`] holds dataset-level metrics.
//! - [`data`] prepares training targets and mixtures.
//! - [`service`] serves rewards to a trainer over newline-delimited JSON.

pub mod codec;
pub mod data;
pub mod eval;
pub mod grpo;
pub mod reward;
pub mod service;

pub use codec::{StructuredOutput, Task, TaskSchema, UnitSets};
pub use reward::{score, RewardBreakdown, SfrConfig};
