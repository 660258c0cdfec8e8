//! Dimensional constants, one-dimensional reductions of ball and sphere
//! integrals, and quadrature over spheres in `ℝⁿ`.

mod dimension;
pub mod gauss;
mod gegenbauer;
mod monte_carlo;
mod reduction;
mod sphere;

use std::ops::{Add, Mul};

use num_traits::Zero;

pub use dimension::{
    gamma_half, unit_ball_volume, unit_sphere_area, Dimension, GeomConstants, Parity, MAX_DIM,
};
pub(crate) use dimension::sphere_area_unchecked;
pub use gegenbauer::{oscillatory_points, GegenbauerRule};
pub use monte_carlo::{MonteCarlo, MonteCarloEstimate};
pub use reduction::{
    bessel_j, reduce_ball_integral, reduce_ball_integral_with, reduce_sphere_integral,
    reduce_sphere_integral_with, Profile, ReductionPoints,
};
pub use sphere::{integrate_on_sphere, SphereQuadrature};

/// Values a quadrature can accumulate: `f64` and `Complex64`.
pub trait Scalar: Copy + Send + Sync + Zero + Add<Output = Self> + Mul<f64, Output = Self> {}

impl<T> Scalar for T where T: Copy + Send + Sync + Zero + Add<Output = T> + Mul<f64, Output = T> {}
