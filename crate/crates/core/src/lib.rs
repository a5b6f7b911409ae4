//! Reinforcement learning of the unitary that maps the computational basis
//! onto the fixed-point basis of a unitary quantum operation.
//!
//! The crate is organised bottom-up:
//!
//! - [`quantum`]: dense complex linear algebra, Hermitian eigendecomposition,
//!   unitary evolution, two-level rotations and Born-rule sampling.
//! - [`hamiltonians`]: random, transverse-field Ising and pairing models,
//!   spectral rescaling and Hamming-weight sectors.
//! - [`agent`]: the reward/punishment learning loop and its reset schedule.
//! - [`metrics`]: fidelities, energies, fluctuations, post-selection and
//!   cross-realization aggregation.
//!
//! Basis index convention: for `N` qubits, qubit `q` is bit `N - 1 - q` of the
//! index, so the binary string of the index reads qubit 0 leftmost.

pub mod agent;
pub mod error;
pub mod hamiltonians;
pub mod metrics;
pub mod quantum;
pub mod rng;
pub mod tolerance;

pub use error::{Error, Result};
