//! Configuration-driven runs of the solvers and checks, reported as CSV.

mod commands;
pub mod config;
pub mod report;

pub use commands::{fitted_order, identity_tolerance, run, run_file, SATURATION_FLOOR};
pub use config::{Command, ConvergeSpec, ConvergeTarget, DataSpec, GridSpec, Oracle, Overrides, ProbeSpec, QuadratureOverrides, RunConfig};
pub use report::{Check, Provenance, Relation, Report, Row, Summary, CHECK_COLUMNS};
