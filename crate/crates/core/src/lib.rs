//! Periodic fractional Brownian motion, periodic grey Brownian motion and
//! periodic generalized grey Brownian motion on a circle of length `L`.
//!
//! The crate provides the exact second-order structure of the three process
//! classes, their form factors (Debye functions) with asymptotics and
//! gyration relations, the special functions these need, and a
//! deterministic path sampler used to cross-check every closed form by
//! Monte Carlo.

pub mod error;
pub mod formfactor;
pub mod io;
pub mod process;
pub mod sampler;
pub mod specfn;
pub mod stats;

pub use error::{Error, Result};
