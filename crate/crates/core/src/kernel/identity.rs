use num_complex::Complex64;

use super::averages::{ball_weighted_exponential_average_via, gegenbauer_exponential, sphere_exponential_average_with, BallRoute, KernelQuery, BASE_POINTS};
use super::radial::{evaluate_operator, RadialDerivativeSpec, RadialOperator};
use super::sinc::sinc_radial;
use crate::error::{Result, WaveError};
use crate::geometry::{oscillatory_points, Dimension, GeomConstants, Parity};

/// Stencil step for `m = 1` in units of `min(R, 1/|ξ|)`; doubled with each
/// further stage, where rounding in the higher derivatives takes over first.
pub const BASE_STEP_FRACTION: f64 = 0.025;

/// One evaluation of a kernel identity.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityResidual {
    pub n: usize,
    pub radius: f64,
    pub xi_norm: f64,
    /// `sin(R|ξ|)/|ξ|`
    pub lhs: f64,
    /// Constant times the iterated derivative of the average.
    pub rhs: Complex64,
    pub residual_real: f64,
    pub residual_imag: f64,
    pub h: f64,
    /// Quadrature nodes per average evaluation.
    pub nodes: usize,
    /// `h` fell below `1e-6 R`; the residual is still reported.
    pub ill_conditioned: bool,
}

/// Stencil for an identity check at `(R, |ξ|)`.
pub fn identity_spec(dim: Dimension, radius: f64, xi_norm: f64) -> Result<RadialDerivativeSpec> {
    let m = dim
        .radial_order()
        .ok_or_else(|| WaveError::Usage(format!("no kernel identity in dimension {dim}")))?;
    let length = if xi_norm > 0.0 { radius.min(1.0 / xi_norm) } else { radius };
    let fraction = BASE_STEP_FRACTION * 2f64.powi(m as i32 - 1);
    RadialDerivativeSpec::new(m, fraction * length)
}

fn check_spec(dim: Dimension, spec: &RadialDerivativeSpec) -> Result<usize> {
    let m = dim
        .radial_order()
        .ok_or_else(|| WaveError::Usage(format!("no kernel identity in dimension {dim}")))?;
    if spec.m != m {
        return Err(WaveError::Usage(format!(
            "n = {dim} needs m = {m} derivative stages, spec has {}",
            spec.m
        )));
    }
    Ok(m)
}

fn residual<F>(q: &KernelQuery, spec: &RadialDerivativeSpec, constant: f64, nodes: usize, average: F) -> Result<IdentityResidual>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let m = spec.m;
    let op = RadialOperator::iterated(m);
    let rhs = evaluate_operator(&op, average, spec, q.radius)? * constant;
    let lhs = sinc_radial(q.xi_norm(), q.radius);
    Ok(IdentityResidual {
        n: q.dim.n(),
        radius: q.radius,
        xi_norm: q.xi_norm(),
        lhs,
        rhs,
        residual_real: (lhs - rhs.re).abs(),
        residual_imag: rhs.im.abs(),
        h: spec.h,
        nodes,
        ill_conditioned: m > 0 && spec.is_ill_conditioned(q.radius),
    })
}

/// `|sin(R|ξ|)/|ξ| - c_n (1/R d/dR)^m A(R)|` with `A` the sphere exponential
/// average, odd `n >= 3`.
pub fn verify_odd_identity(q: &KernelQuery, spec: &RadialDerivativeSpec) -> Result<IdentityResidual> {
    if q.dim.parity() != Parity::Odd || q.dim.n() < 3 {
        return Err(WaveError::Usage(format!("the odd identity needs odd n >= 3, got {}", q.dim)));
    }
    check_spec(q.dim, spec)?;
    let c_n = GeomConstants::new(q.dim).kernel_constant()?;
    let nodes = oscillatory_points(BASE_POINTS, q.radius + spec.half_width(), q.xi_norm());
    residual(q, spec, c_n, nodes, |r| {
        sphere_exponential_average_with(&q.with_radius(r)?, BASE_POINTS)
    })
}

/// `|sin(R|ξ|)/|ξ| - d_n (1/R d/dR)^{m'} B(R)|` with `B` the weighted ball
/// exponential average, even `n`.
pub fn verify_even_identity(q: &KernelQuery, spec: &RadialDerivativeSpec) -> Result<IdentityResidual> {
    if q.dim.parity() != Parity::Even {
        return Err(WaveError::Usage(format!("the even identity needs even n, got {}", q.dim)));
    }
    check_spec(q.dim, spec)?;
    let d_n = GeomConstants::new(q.dim).kernel_constant()?;
    let nodes = oscillatory_points(BASE_POINTS, q.radius + spec.half_width(), q.xi_norm());
    residual(q, spec, d_n, nodes, |r| {
        ball_weighted_exponential_average_via(&q.with_radius(r)?, BallRoute::Descent, BASE_POINTS)
    })
}

/// Parity dispatch with the default stencil.
pub fn verify_identity(q: &KernelQuery) -> Result<IdentityResidual> {
    let spec = identity_spec(q.dim, q.radius, q.xi_norm())?;
    match q.dim.parity() {
        Parity::Odd => verify_odd_identity(q, &spec),
        Parity::Even => verify_even_identity(q, &spec),
    }
}

/// The kernel constant recovered from the `ξ = 0` normalization: both sides
/// of the identity reduce to `R`, so the constant is `R` over the iterated
/// derivative of the average at `ξ = 0`.
pub fn normalized_kernel_constant(dim: Dimension) -> Result<f64> {
    let n = dim.n();
    let m = dim
        .radial_order()
        .ok_or_else(|| WaveError::Usage(format!("no kernel constant in dimension {dim}")))?;
    let radius = 1.0;
    let spec = RadialDerivativeSpec::for_radius(m, radius)?;
    let a = match dim.parity() {
        Parity::Odd => (n as f64 - 3.0) / 2.0,
        Parity::Even => (n as f64 - 2.0) / 2.0,
    };
    let q = KernelQuery::on_axis(dim, 0.0, radius)?;
    let average = |r: f64| -> Result<Complex64> {
        match dim.parity() {
            Parity::Odd => sphere_exponential_average_with(&q.with_radius(r)?, BASE_POINTS),
            Parity::Even => Ok(gegenbauer_exponential(a, 0.0, r, BASE_POINTS)? * (n as f64 / 2.0)),
        }
    };
    let derivative = evaluate_operator(&RadialOperator::iterated(m), average, &spec, radius)?;
    Ok(radius / derivative.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn check(n: usize, w: f64, r: f64) -> IdentityResidual {
        verify_identity(&KernelQuery::on_axis(dim(n), w, r).unwrap()).unwrap()
    }

    #[test]
    fn odd_examples() {
        assert!(check(5, 0.0, 1.0).residual_real <= 1e-10);
        for (w, r) in [(0.3, 1.0), (5.0, 2.0), (20.0, 1.0), (2.0, 0.1)] {
            assert!(check(3, w, r).residual_real <= 1e-10);
        }
        let res = check(5, 2.0, 1.0);
        assert!(res.residual_real <= 1e-8, "{res:?}");
        assert!(res.residual_imag <= 1e-12);
    }

    #[test]
    fn residual_converges_at_the_fit_order() {
        // m = 1 with a degree-6 fit: order at least 6 - 1
        let q = KernelQuery::on_axis(dim(5), 2.0, 1.0).unwrap();
        let res: Vec<f64> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&h| {
                let spec = RadialDerivativeSpec::new(1, h).unwrap();
                verify_odd_identity(&q, &spec).unwrap().residual_real
            })
            .collect();
        for pair in res.windows(2) {
            assert!((pair[0] / pair[1]).log2() >= 5.0, "{res:?}");
        }
    }

    #[test]
    fn even_examples() {
        for (w, r) in [(0.3, 1.0), (5.0, 2.0), (20.0, 1.0)] {
            assert!(check(2, w, r).residual_real <= 1e-8);
        }
        assert!(check(4, 0.0, 1.0).residual_real <= 1e-8);
        let res = check(4, 3.0, 1.0);
        assert!(res.residual_real <= 1e-6, "{res:?}");
    }

    #[test]
    fn spec_and_parity_are_validated() {
        let q = KernelQuery::on_axis(dim(5), 1.0, 1.0).unwrap();
        let wrong = RadialDerivativeSpec::new(2, 0.01).unwrap();
        assert!(matches!(verify_odd_identity(&q, &wrong), Err(WaveError::Usage(_))));
        let spec = RadialDerivativeSpec::new(1, 0.01).unwrap();
        assert!(matches!(verify_even_identity(&q, &spec), Err(WaveError::Usage(_))));
        let tiny = RadialDerivativeSpec::new(1, 1e-7).unwrap();
        assert!(verify_odd_identity(&q, &tiny).unwrap().ill_conditioned);
    }

    #[test]
    fn constants_from_normalization() {
        for (n, c) in [(3, 1.0), (5, 1.0 / 3.0), (7, 1.0 / 15.0), (2, 0.5), (4, 0.125), (6, 1.0 / 48.0)] {
            assert_relative_eq!(normalized_kernel_constant(dim(n)).unwrap(), c, max_relative = 1e-10);
        }
    }
}
