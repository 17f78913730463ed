//! Microscopic Markov chain dynamics of competing awareness (layer A) and
//! epidemic (layer B) SIR processes.
//!
//! Every node carries a probability vector over the nine joint states
//! (twelve once immunized states are enabled). One step computes, for every
//! node, the probabilities of escaping awareness and infection from its
//! neighbors' current marginals, and pushes the node's row through the
//! transition kernel. Updates are synchronous: the t + 1 buffer is built
//! from the t buffer only, and each node's row is computed sequentially in
//! neighbor-list order, so results do not depend on the worker count.

mod initial;
mod kernel;
mod params;
mod state;

use thiserror::Error;

pub use initial::{apply_immunization, ImmunizationPlan, InitialCondition, SeedRule, Strategy};
pub use kernel::{
    compute_exposures, mmca_step, run_to_steady_state, transition_row, Engine, Exposure,
    ExposureProbabilities, SteadyStateSummary, Successors, CLAMP_TOL, CLOSURE_TOL, DRIFT_LIMIT,
    NORMALIZATION_LIMIT,
};
pub use params::ModelParams;
pub use state::{JointState, JointStateDistribution, Mode, ALL_STATES, BASE_STATES};

#[derive(Debug, Error, PartialEq)]
pub enum EngineError {
    #[error("invalid parameter {field}: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
    #[error("invalid initial condition: {0}")]
    InvalidInitial(String),
    #[error("invalid immunization: {0}")]
    InvalidImmunization(String),
    #[error("transition row of {state} does not close: self-transition {stay}")]
    Closure { state: JointState, stay: f64 },
    #[error("node {node}: probability of {state} drifted to {value}")]
    OutOfRange {
        node: usize,
        state: JointState,
        value: f64,
    },
    #[error("node {node}: row sums to {sum}")]
    Normalization { node: usize, sum: f64 },
}
