//! Experiment harness for the buffer-aided cognitive relay rate analysis:
//! configuration parsing, parameter sweeps, figure datasets, CSV emission
//! and the validation suites wired into the `cogrelay` binary.

pub mod checks;
pub mod config;
pub mod csvio;
pub mod figures;
pub mod sweep;

pub use checks::{CheckResult, Tolerances};
pub use config::{parse_config, ExperimentConfig, McConfig, SchemeSet};
pub use figures::{reproduce_figure, FigureDataset};
pub use sweep::{run_sweep, write_csv, McRates, SweepRow};
