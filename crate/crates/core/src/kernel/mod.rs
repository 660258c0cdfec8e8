//! The kernel `sin(R|ξ|)/|ξ|` and its two representations as iterated
//! radial derivatives of averaged exponentials.

mod averages;
mod distribution;
mod identity;
pub mod radial;
mod sinc;

pub use averages::{
    ball_weighted_exponential_average, ball_weighted_exponential_average_via,
    sphere_exponential_average, sphere_exponential_average_with, BallRoute, KernelQuery,
    BASE_POINTS,
};
pub use distribution::{distribution_fourier_check, DistributionCheck, DistributionFunctional, FourierBox};
pub use identity::{
    identity_spec, normalized_kernel_constant, verify_even_identity, verify_identity,
    verify_odd_identity, IdentityResidual, BASE_STEP_FRACTION,
};
pub use radial::{iterated_radial_derivative, RadialDerivativeSpec, RadialOperator};
pub use sinc::{sinc_kernel, sinc_radial, SERIES_THRESHOLD};
