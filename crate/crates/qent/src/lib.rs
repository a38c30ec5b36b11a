//! Finite-dimensional toolkit for quantum compound states, entangled
//! mutual entropy and channel-capacity estimation.
//!
//! The crate builds compound states on a probe/system pair G (x) H from
//! amplitude operators and from the standard / c / d / o constructions,
//! evaluates entropy functionals on them (von Neumann, relative, entangled
//! mutual entropy, q-entropy, disentanglement degree), applies channels in
//! Kraus form, and estimates the q-, d- and o-information of a channel at
//! a fixed input as well as the corresponding capacities by seeded
//! derivative-free search.
//!
//! See the `examples/` directory for one runnable walkthrough per major
//! capability, and the `qent` binary for the JSON/CSV command-line front
//! end.

pub mod capacity;
pub mod channels;
pub mod entangle;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
