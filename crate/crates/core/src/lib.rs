//! Density-matrix simulation of end-to-end quantum communication links.
//!
//! Classical symbols are mapped to qubit states by a [`modulation`]
//! codebook, sent one state at a time through one of six [`channels`],
//! detected with a pretty-good measurement built from the same codebook
//! ([`detection`]) and scored by hard-decision BER/SER ([`metrics`]).
//! [`pipeline`] orchestrates seeded multi-channel comparisons and writes
//! reports, state dumps and [`visualization`] figures.

pub mod channels;
pub mod detection;
pub mod error;
pub mod metrics;
pub mod modulation;
pub mod pipeline;
pub mod rng;
pub mod state;
pub mod visualization;

pub use channels::{Channel, ChannelConfig};
pub use detection::{build_pgm, decide, decide_sampled, DecisionMode, Povm, Receiver};
pub use error::{Error, Result};
pub use modulation::{DetectorCodebook, Modulation, ERASURE_LABEL};
pub use pipeline::{run_comparison, run_simulation, SimulationConfig, SimulationReport};
pub use state::{BlochVector, DensityMatrix, PureStateVector};
