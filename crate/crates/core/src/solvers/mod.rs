//! Solvers for `u_tt = Δu`, `u(·,0) = φ`, `u_t(·,0) = ψ` on `ℝⁿ`.

pub mod field;
pub mod io;
pub mod means;
mod point;
mod residual;
mod spectral;

pub use field::{CauchyProblem, FieldKind, HarmonicPoly, ScalarField, Support, DATA_FLOOR};
pub use means::{spherical_mean, weighted_ball_mean, MeanRules};
pub use point::{
    default_spec, solve_dalembert_point, solve_even_point, solve_odd_point, Method, PointSolver,
    SolutionSample, DALEMBERT_TOL, MIN_STEPS_PER_TIME,
};
pub use residual::{wave_residual, Slab};
pub use spectral::{spectral_solve, spectral_solve_from, PeriodicGrid, SolutionGrid, SpectralState};
