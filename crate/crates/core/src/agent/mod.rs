//! The reward/punishment learning loop.
//!
//! One iteration propagates every qudit `|j⟩` through `D† U(τ) D`, measures
//! it once in the computational basis, and then updates every pair `(j, l)`:
//!
//! | outcome                            | `w` update          | rotation |
//! |------------------------------------|---------------------|----------|
//! | `m_j != l` and `m_l != j`          | `r² w`              | identity |
//! | exactly one of `m_j = l`, `m_l = j`| `min(r p w, 1)`     | random   |
//! | `m_j = l` and `m_l = j`            | `min(p² w, 1)`      | random   |
//!
//! Random rotation angles are uniform in `[-π w, π w]` using the value of `w`
//! before the update. `D` is right-multiplied by the pair rotations in
//! lexicographic pair order.
//!
//! Qudits are simulated as pure states: the channel is unitary, so each
//! factor of the product state stays pure and resetting a mis-measured qudit
//! to `|j⟩` is implied by restarting from the basis state next iteration.

mod config;
mod pairs;
mod run;
mod state;

pub use config::AgentConfig;
pub use pairs::{PairCase, PairTable};
pub use run::{run_realization, run_realization_with, Realization};
pub use state::{AgentState, Convergence, IterationRecord};
