//! Spherical means `M_t` and weighted ball means `𝓜_t`.
//!
//! ```text
//! M_t g(x) = 1/(ω_n t^{n-1}) ∫_{∂B(x,t)} g dσ
//! 𝓜_t g(x) = 1/(v_n t^n)     ∫_{B(x,t)} g(y) (t² - |x-y|²)^{-1/2} dy
//! ```
//!
//! The ball mean is computed in polar form about `x` with `r = t sin α`,
//! which turns the inverse square-root weight into `dα`:
//!
//! ```text
//! ∫_{B(x,t)} g(y) (t² - |x-y|²)^{-1/2} dy = ∫_0^{π/2} (t sin α)^{n-1} ∫_{S^{n-1}} g(x + t sin α θ) dσ(θ) dα
//! ```

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use super::field::ScalarField;
use crate::error::{Result, WaveError};
use crate::geometry::{gauss::gauss_legendre, integrate_on_sphere, Dimension, GeomConstants, Parity, Scalar, SphereQuadrature};

/// Quadrature used by both mean operators.
#[derive(Debug, Clone)]
pub struct MeanRules {
    pub sphere: Arc<SphereQuadrature>,
    /// Gauss–Legendre nodes in the ball-mean angle `α`.
    pub radial_points: usize,
}

impl MeanRules {
    pub fn new(sphere: SphereQuadrature, radial_points: usize) -> Self {
        MeanRules {
            sphere: Arc::new(sphere),
            radial_points,
        }
    }

    pub fn with_defaults(dim: Dimension) -> Result<Self> {
        let radial = if dim.n() <= 2 { 64 } else { 32 };
        Ok(Self::new(SphereQuadrature::with_defaults(dim)?, radial))
    }

    pub fn dim(&self) -> Dimension {
        self.sphere.dim
    }
}

fn check_point(dim: Dimension, x: &[f64], t: f64) -> Result<()> {
    if x.len() != dim.n() {
        return Err(WaveError::Usage(format!(
            "point has {} components, expected {dim}",
            x.len()
        )));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(WaveError::Domain(format!("radius must be positive, got {t}")));
    }
    Ok(())
}

/// `M_t g(x)` for any accumulable `g`.
pub fn sphere_average<T, G>(g: G, x: &[f64], t: f64, q: &SphereQuadrature) -> Result<T>
where
    T: Scalar,
    G: Fn(&[f64]) -> T,
{
    check_point(q.dim, x, t)?;
    let total: T = integrate_on_sphere(g, x, t, q)?;
    Ok(total * (1.0 / (q.exact_area() * t.powi(q.dim.n() as i32 - 1))))
}

/// `𝓜_t g(x)`, with the radial integral restricted to `[r_lo, r_hi]` when
/// `g` is known to vanish outside that shell about `x`.
pub fn ball_weighted_average<T, G>(
    g: G,
    x: &[f64],
    t: f64,
    rules: &MeanRules,
    shell: Option<(f64, f64)>,
) -> Result<T>
where
    T: Scalar,
    G: Fn(&[f64]) -> T,
{
    let q = &rules.sphere;
    let dim = q.dim;
    check_point(dim, x, t)?;
    let n = dim.n();
    let (a_lo, a_hi) = match shell {
        Some((lo, hi)) => {
            let lo = lo.max(0.0);
            if lo >= t || hi <= lo {
                return Ok(T::zero());
            }
            ((lo / t).asin(), (hi / t).min(1.0).asin())
        }
        None => (0.0, FRAC_PI_2),
    };
    let (alphas, weights) = gauss_legendre(rules.radial_points)?.mapped(a_lo, a_hi);
    let mut acc = T::zero();
    for (&alpha, &w) in alphas.iter().zip(&weights) {
        let r = t * alpha.sin();
        if r == 0.0 {
            continue;
        }
        // integrate_on_sphere already carries the r^{n-1} factor
        let s: T = integrate_on_sphere(&g, x, r, q)?;
        acc = acc + s * w;
    }
    let v_n = GeomConstants::new(dim).v_n;
    Ok(acc * (1.0 / (v_n * t.powi(n as i32))))
}

/// Radial shell about `x` outside which `psi` vanishes.
pub(crate) fn support_shell(psi: &ScalarField, x: &[f64]) -> Option<(f64, f64)> {
    let a = psi.support_radius()?;
    let d = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    Some((d - a, d + a))
}

/// Average of `psi` over the sphere `∂B(x, t)`.
pub fn spherical_mean(psi: &ScalarField, x: &[f64], t: f64, q: &SphereQuadrature) -> Result<f64> {
    if psi.dim != q.dim {
        return Err(WaveError::Usage(format!(
            "field is on ℝ^{} but the quadrature is for n = {}",
            psi.dim, q.dim
        )));
    }
    if psi.is_zero() {
        check_point(q.dim, x, t)?;
        return Ok(0.0);
    }
    if let Some((lo, hi)) = support_shell(psi, x) {
        if t < lo || t > hi {
            check_point(q.dim, x, t)?;
            return Ok(0.0);
        }
    }
    sphere_average(|y| psi.eval(y), x, t, q)
}

/// Weighted average of `psi` over the ball `B(x, t)` with weight
/// `(t² - |x-y|²)^{-1/2}`; even dimensions only.
pub fn weighted_ball_mean(psi: &ScalarField, x: &[f64], t: f64, rules: &MeanRules) -> Result<f64> {
    if psi.dim.parity() == Parity::Odd {
        return Err(WaveError::Usage(format!(
            "weighted ball means are for even dimensions, got n = {}",
            psi.dim
        )));
    }
    if psi.dim != rules.dim() {
        return Err(WaveError::Usage(format!(
            "field is on ℝ^{} but the quadrature is for n = {}",
            psi.dim,
            rules.dim()
        )));
    }
    if psi.is_zero() {
        check_point(psi.dim, x, t)?;
        return Ok(0.0);
    }
    ball_weighted_average(|y| psi.eval(y), x, t, rules, support_shell(psi, x))
}
