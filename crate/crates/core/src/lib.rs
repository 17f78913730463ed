//! Competing awareness and epidemic SIR spreading on two-layer multiplex
//! networks.
//!
//! Layer A carries awareness between virtual contacts, layer B carries the
//! disease between physical contacts. Aware individuals are less likely to
//! be infected, infected individuals may become aware on their own. The
//! [`engine`] evolves per-node joint-state probabilities (microscopic
//! Markov chain approach); [`oracle`] samples the same state machine
//! stochastically; [`analysis`] builds thresholds and phase diagrams on top;
//! [`cli`] drives experiments from flat config files.

pub mod analysis;
pub mod cli;
pub mod engine;
pub mod network;
pub mod oracle;
pub mod seeding;
