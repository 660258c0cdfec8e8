pub mod error;
pub mod geometry;
pub mod harness;
pub mod kernel;
pub mod solvers;

pub use error::{Result, WaveError};
