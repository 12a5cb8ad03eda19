//! Experiment configs, datasets, artifact writers, and the run harness.

pub mod check;
pub mod config;
pub mod data;
pub mod output;
pub mod run;

pub use config::{preset, presets, ExperimentConfig, ModelKind, Preset, Task};
pub use output::{compare_table, emit_plot, render_svg, CompareRow, PlotSpec, Series, SeriesStyle};
pub use run::{build_model, run_experiment, run_preset, train_experiment, ExperimentRecord};
