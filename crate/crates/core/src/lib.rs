//! Noise channels, consolidated Hebbian recurrent networks and neural clique
//! associative memories.
//!
//! - [`noise`]: synaptic and interference noise reduced to insertion and
//!   erasure probabilities, plus a Monte Carlo sampler of the same model.
//! - [`dynamics`]: the recurrent network with the consolidation sigmoid,
//!   winner-take-all energy limits, learning and recall.
//! - [`clique`]: the binary reference memory the network converges to.
//! - [`experiments`]: learning under noise compared against the reference,
//!   error-rate curves and analytic edge counts.
//! - [`io`]: spec files, network serialization, CSV output and run manifests.

pub mod activity;
pub mod bits;
pub mod clique;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod io;
pub mod message;
pub mod noise;
pub mod seed;

pub use activity::ActivityVector;
pub use clique::CliqueNetwork;
pub use dynamics::{HebbianNetwork, NetworkConfig, TiePolicy, WeightMatrix};
pub use error::{Error, ParamError, Result};
pub use message::Message;
pub use noise::NoiseChannel;
