//! Normalized averages of `e^{-i x·ξ}` over spheres and weighted balls.
//!
//! Both are radial in `ξ`, so `ξ` is rotated onto the `x_n` axis and the
//! integral collapses to one variable:
//!
//! ```text
//! (1/(ω_n R)) ∫_{∂B(0,R)} e^{-ix·ξ} dσ        = (ω_{n-1}/ω_n) ∫_{-R}^{R} e^{is|ξ|} (R² - s²)^{(n-3)/2} ds
//! (1/v_n) ∫_{B(0,R)} (R² - |x|²)^{-1/2} e^{-ix·ξ} dx = (n/2)     ∫_{-R}^{R} e^{is|ξ|} (R² - s²)^{(n-2)/2} ds
//! ```
//!
//! The second line comes from lifting the ball to the upper and lower
//! hemispheres of `∂B(0,R) ⊂ ℝ^{n+1}`, whose surface measure projects to
//! `R (R² - |x|²)^{-1/2} dx`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Result, WaveError};
use crate::geometry::{gauss::gauss_legendre, oscillatory_points, sphere_area_unchecked, Dimension, GegenbauerRule, GeomConstants, Parity};

/// Gauss nodes used before the oscillation rule takes over.
pub const BASE_POINTS: usize = 64;

/// Frequency `ξ` and radius `R` at which a kernel identity is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelQuery {
    pub xi: Vec<f64>,
    pub radius: f64,
    pub dim: Dimension,
}

impl KernelQuery {
    pub fn new(xi: Vec<f64>, radius: f64) -> Result<Self> {
        let dim = Dimension::new(xi.len())?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(WaveError::Domain(format!("radius must be positive, got {radius}")));
        }
        if xi.iter().any(|v| !v.is_finite()) {
            return Err(WaveError::Domain(format!("frequency {xi:?} is not finite")));
        }
        Ok(KernelQuery { xi, radius, dim })
    }

    /// Query with `ξ = (0, …, 0, |ξ|)`.
    pub fn on_axis(dim: Dimension, xi_norm: f64, radius: f64) -> Result<Self> {
        let mut xi = vec![0.0; dim.n()];
        xi[dim.n() - 1] = xi_norm;
        Self::new(xi, radius)
    }

    pub fn xi_norm(&self) -> f64 {
        self.xi.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn with_radius(&self, radius: f64) -> Result<Self> {
        Self::new(self.xi.clone(), radius)
    }
}

/// Which quadrature computes the weighted ball average.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallRoute {
    /// Hemisphere lift to `ℝ^{n+1}` and a one-dimensional Gegenbauer rule.
    Descent,
    /// Polar coordinates in `ℝⁿ` with `r = R sin α`.
    Direct,
}

fn require_parity(dim: Dimension, parity: Parity, what: &str) -> Result<()> {
    if dim.parity() != parity {
        return Err(WaveError::Usage(format!("{what} needs {parity} n, got n = {dim}")));
    }
    Ok(())
}

/// `∫_{-R}^{R} e^{is ω} (R² - s²)^a ds` for integer or half-integer `a`.
/// Real by symmetry; the imaginary part is kept as a quadrature check.
pub(crate) fn gegenbauer_exponential(a: f64, omega: f64, radius: f64, base: usize) -> Result<Complex64> {
    let rule = GegenbauerRule::with_exponent(radius, a, oscillatory_points(base, radius, omega))?;
    Ok(rule.integrate(|s| Complex64::from_polar(1.0, s * omega)))
}

/// `(1/(ω_n R)) ∫_{∂B(0,R)} e^{-ix·ξ} dσ(x)`, odd `n >= 3`.
pub fn sphere_exponential_average(q: &KernelQuery) -> Result<Complex64> {
    sphere_exponential_average_with(q, BASE_POINTS)
}

pub fn sphere_exponential_average_with(q: &KernelQuery, base: usize) -> Result<Complex64> {
    require_parity(q.dim, Parity::Odd, "the sphere exponential average")?;
    let n = q.dim.n();
    if n < 3 {
        return Err(WaveError::Usage("the sphere exponential average needs n >= 3".into()));
    }
    let a = (n as f64 - 3.0) / 2.0;
    let ratio = sphere_area_unchecked(n - 1) / sphere_area_unchecked(n);
    Ok(gegenbauer_exponential(a, q.xi_norm(), q.radius, base)? * ratio)
}

/// `(1/v_n) ∫_{B(0,R)} (R² - |x|²)^{-1/2} e^{-ix·ξ} dx`, even `n`.
pub fn ball_weighted_exponential_average(q: &KernelQuery) -> Result<Complex64> {
    ball_weighted_exponential_average_via(q, BallRoute::Descent, BASE_POINTS)
}

pub fn ball_weighted_exponential_average_via(q: &KernelQuery, route: BallRoute, base: usize) -> Result<Complex64> {
    require_parity(q.dim, Parity::Even, "the weighted ball average")?;
    match route {
        BallRoute::Descent => descent(q, base),
        BallRoute::Direct => direct(q, base),
    }
}

fn descent(q: &KernelQuery, base: usize) -> Result<Complex64> {
    let n = q.dim.n() as f64;
    let a = (n - 2.0) / 2.0;
    Ok(gegenbauer_exponential(a, q.xi_norm(), q.radius, base)? * (n / 2.0))
}

fn direct(q: &KernelQuery, base: usize) -> Result<Complex64> {
    let n = q.dim.n();
    let omega = q.xi_norm();
    let r_max = q.radius;
    let points = oscillatory_points(base, r_max, omega);
    let (alphas, wa) = gauss_legendre(points)?.mapped(0.0, FRAC_PI_2);
    let (phis, wp) = gauss_legendre(points)?.mapped(0.0, PI);
    // ∫_{S^{n-1}} g(θ_n) dσ = ω_{n-1} ∫_0^π g(cos φ) sin^{n-2} φ dφ
    let polar: Vec<(f64, f64)> = phis
        .iter()
        .zip(&wp)
        .map(|(&p, &w)| (p.cos(), w * p.sin().powi(n as i32 - 2)))
        .collect();
    let omega_prev = sphere_area_unchecked(n - 1);
    let mut total = Complex64::new(0.0, 0.0);
    for (&alpha, &w) in alphas.iter().zip(&wa) {
        let r = r_max * alpha.sin();
        let shell: Complex64 = polar
            .iter()
            .map(|&(c, wc)| Complex64::from_polar(wc, -r * omega * c))
            .sum();
        total += shell * (w * omega_prev * r.powi(n as i32 - 1));
    }
    Ok(total / GeomConstants::new(q.dim).v_n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::sinc_radial;
    use approx::assert_relative_eq;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn sphere_average_examples() {
        let q = KernelQuery::on_axis(dim(3), 0.0, 2.0).unwrap();
        assert_relative_eq!(sphere_exponential_average(&q).unwrap().re, 2.0, max_relative = 1e-14);
        let q = KernelQuery::on_axis(dim(3), PI, 1.0).unwrap();
        assert!(sphere_exponential_average(&q).unwrap().re.abs() < 1e-14);
        for n in [3, 5, 7, 9] {
            let q = KernelQuery::new(vec![0.3; n], 1.7).unwrap();
            let v = sphere_exponential_average(&q).unwrap();
            assert!(v.im.abs() < 1e-12, "{v}");
            let zero = KernelQuery::on_axis(dim(n), 0.0, 1.7).unwrap();
            let v0 = sphere_exponential_average(&zero).unwrap().re;
            assert_relative_eq!(v0, 1.7f64.powi(n as i32 - 2), max_relative = 1e-13);
        }
        assert!(matches!(
            sphere_exponential_average(&KernelQuery::on_axis(dim(4), 1.0, 1.0).unwrap()),
            Err(WaveError::Usage(_))
        ));
    }

    #[test]
    fn n3_sphere_average_is_the_sinc() {
        for (w, r) in [(0.5, 1.0), (3.0, 2.0), (19.0, 1.0), (60.0, 1.0)] {
            let q = KernelQuery::on_axis(dim(3), w, r).unwrap();
            let v = sphere_exponential_average(&q).unwrap().re;
            assert!((v - sinc_radial(w, r)).abs() < 1e-13, "{w} {r}");
        }
    }

    #[test]
    fn ball_average_examples() {
        let q = KernelQuery::on_axis(dim(2), 0.0, 1.0).unwrap();
        assert_relative_eq!(ball_weighted_exponential_average(&q).unwrap().re, 2.0, max_relative = 1e-14);
        let q = KernelQuery::on_axis(dim(2), PI, 1.0).unwrap();
        assert!(ball_weighted_exponential_average(&q).unwrap().norm() < 1e-14);
        assert!(matches!(
            ball_weighted_exponential_average(&KernelQuery::on_axis(dim(3), 1.0, 1.0).unwrap()),
            Err(WaveError::Usage(_))
        ));
    }

    #[test]
    fn descent_and_direct_routes_agree() {
        for n in [2, 4, 6, 8] {
            for (w, r) in [(0.0, 1.0), (0.7, 0.5), (3.0, 1.0), (9.0, 2.0)] {
                let q = KernelQuery::on_axis(dim(n), w, r).unwrap();
                let a = ball_weighted_exponential_average_via(&q, BallRoute::Descent, 64).unwrap();
                let b = ball_weighted_exponential_average_via(&q, BallRoute::Direct, 64).unwrap();
                let scale = ball_weighted_exponential_average_via(
                    &KernelQuery::on_axis(dim(n), 0.0, r).unwrap(),
                    BallRoute::Descent,
                    64,
                )
                .unwrap()
                .re;
                assert!((a - b).norm() < 1e-12 * scale, "n={n} w={w} r={r}: {a} {b}");
                assert!(b.im.abs() < 1e-10 * scale);
            }
        }
    }
}
