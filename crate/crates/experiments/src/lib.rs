//! Experiment harness for fixed-point basis learning.
//!
//! An [`ExperimentConfig`] describes one study: the Hamiltonian family, the
//! agent's learning parameters and the number of realizations. [`run_experiment`]
//! fans the realizations out over a worker pool, merges them in realization
//! order and writes CSV tables plus a metadata document. The output of a run
//! depends only on the configuration, never on the worker count.
//!
//! Output directory layout:
//!
//! | file                 | columns                                     |
//! |----------------------|---------------------------------------------|
//! | `fidelity.csv`       | `iteration,state_index,mean_fidelity`       |
//! | `exploration.csv`    | `iteration,mean_w_max`                      |
//! | `energies.csv`       | `realization,state_index,energy,sigma`      |
//! | `spectrum.csv`       | `alpha,exact_energy,degeneracy_cluster`     |
//! | `selected.csv`       | `realization,state_index,energy,sigma`      |
//! | `distance_sweep.csv` | `sigma_th,mean_distance,std_error,count`    |
//! | `metadata.json`      | configuration echo, version, timings        |
//! | `config.txt`         | the configuration in `key = value` form     |

pub mod config;
mod error;
pub mod output;
pub mod plot;
pub mod postselect;
pub mod runner;
pub mod sectors;

pub use config::{ExperimentConfig, PRESETS};
pub use error::{ExperimentError, Result};
pub use plot::emit_plots;
pub use postselect::{post_select_report, PostSelectReport, SIGMA_SWEEP};
pub use runner::{run_experiment, simulate, ExperimentOutcome, FinalStates, RunSummary};
pub use sectors::{run_sector_suite, simulate_sector_suite, SuiteOutcome};
