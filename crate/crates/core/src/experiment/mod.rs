//! Experiment runners: windowed-PSD convergence, PSD-guided subsampling,
//! and the PSD vs generalized-PSD timing comparison.

mod bench;
mod config;
mod fig1;
mod fig2;

pub use bench::{run_bench, BenchRow};
pub use config::{BandwidthSource, ExperimentConfig, ProfileSpec};
pub use fig1::{run_fig1, Fig1Output};
pub use fig2::{run_fig2, Fig2Output, Fig2Summary};
