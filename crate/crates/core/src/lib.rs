//! Random assignment with exact arithmetic.
//!
//! Mechanisms (serial dictatorship, random serial dictatorship, probabilistic
//! serial), efficiency tests (stochastic dominance, trading cycles, Pareto
//! optimality, ex post decompositions) and an exhaustive checker for the
//! characterization "RSD is SD-inefficient iff some ex post efficient
//! assignment is SD-inefficient".

pub mod assignment;
pub mod cli;
pub mod efficiency;
pub mod error;
pub mod lp;
pub mod mechanisms;
pub mod profile;
pub mod rational;
pub mod report;
pub mod verify;

pub use assignment::{
    upper_contour_sum, CycleStep, DiscreteAssignment, Permutation, RandomAssignment, TradingCycle,
};
pub use error::{Error, Result};
pub use profile::{
    all_profiles, format_profile, parse_profile, AgentId, ObjectId, PreferenceProfile, ProfileSpace,
};
pub use rational::Rational;
