//! Accuracy and convergence diagnostics.

mod aggregate;
mod energy;
mod fidelity;
mod select;

pub use aggregate::{aggregate, plateau_means, AggregateResult, Aggregator, RealizationResult, PLATEAU_FRACTION};
pub use energy::{energy_expectation, energy_fluctuation, energy_moments};
pub use fidelity::{fidelities, fidelity, subspace_fidelity};
pub use select::{mean_with_std_error, nearest_distance, nearest_eigenvalue_distance, post_select, Selected};
