//! Integrals of functions of `x_n` alone over balls and spheres, reduced to
//! one dimension:
//!
//! ```text
//! ∫_{B(0,R)} f(x_n) dx     = ω_{n-1} ∫_0^R ρ ∫_{-ρ}^{ρ} f(s) (ρ² - s²)^{(n-3)/2} ds dρ
//! ∫_{∂B(0,R)} f(x_n) dσ(x) = ω_{n-1} R ∫_{-R}^{R} f(s) (R² - s²)^{(n-3)/2} ds
//! ```

use std::f64::consts::PI;

use super::dimension::{gamma_half, sphere_area_unchecked, Dimension};
use super::gauss::{gauss_gegenbauer, gauss_legendre};
use super::gegenbauer::GegenbauerRule;
use crate::error::{Result, WaveError};

/// Node counts for the nested rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionPoints {
    /// Gegenbauer nodes in `s`.
    pub inner: usize,
    /// Gauss–Legendre nodes in `ρ` (ball only).
    pub outer: usize,
}

impl Default for ReductionPoints {
    fn default() -> Self {
        ReductionPoints {
            inner: 64,
            outer: 64,
        }
    }
}

fn check_args(radius: f64, n: usize) -> Result<Dimension> {
    let dim = Dimension::new(n)?;
    if n < 3 {
        return Err(WaveError::Usage(format!("reduction formulas need n >= 3, got {n}")));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(WaveError::Domain(format!("radius must be positive, got {radius}")));
    }
    Ok(dim)
}

fn finite(v: f64, s: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(WaveError::Evaluation(format!("f({s}) = {v} is not finite")))
    }
}

pub fn reduce_ball_integral<F: Fn(f64) -> f64>(f: F, radius: f64, n: usize) -> Result<f64> {
    reduce_ball_integral_with(f, radius, n, ReductionPoints::default())
}

pub fn reduce_ball_integral_with<F: Fn(f64) -> f64>(
    f: F,
    radius: f64,
    n: usize,
    points: ReductionPoints,
) -> Result<f64> {
    check_args(radius, n)?;
    let a = (n as f64 - 3.0) / 2.0;
    let inner = gauss_gegenbauer(points.inner, a)?;
    let (rhos, rho_weights) = gauss_legendre(points.outer)?.mapped(0.0, radius);
    let mut total = 0.0;
    for (&rho, &wr) in rhos.iter().zip(&rho_weights) {
        let mut s_sum = 0.0;
        for (&z, &wz) in inner.nodes.iter().zip(&inner.weights) {
            let s = rho * z;
            s_sum += wz * finite(f(s), s)?;
        }
        // ∫_{-ρ}^{ρ} f(s)(ρ²-s²)^a ds = ρ^{2a+1} ∫_{-1}^{1} f(ρζ)(1-ζ²)^a dζ
        total += wr * rho * rho.powf(2.0 * a + 1.0) * s_sum;
    }
    Ok(sphere_area_unchecked(n - 1) * total)
}

pub fn reduce_sphere_integral<F: Fn(f64) -> f64>(f: F, radius: f64, n: usize) -> Result<f64> {
    reduce_sphere_integral_with(f, radius, n, ReductionPoints::default())
}

pub fn reduce_sphere_integral_with<F: Fn(f64) -> f64>(
    f: F,
    radius: f64,
    n: usize,
    points: ReductionPoints,
) -> Result<f64> {
    let dim = check_args(radius, n)?;
    let rule = GegenbauerRule::new(dim, radius, points.inner)?;
    let mut sum = 0.0;
    for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
        sum += w * finite(f(s), s)?;
    }
    Ok(sphere_area_unchecked(n - 1) * radius * sum)
}

/// The test profiles `f(s)` the reduction checks are run on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Profile {
    One,
    Square,
    Cos,
}

impl Profile {
    pub const ALL: [Profile; 3] = [Profile::One, Profile::Square, Profile::Cos];

    pub fn eval(self, s: f64) -> f64 {
        match self {
            Profile::One => 1.0,
            Profile::Square => s * s,
            Profile::Cos => s.cos(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Profile::One => "one",
            Profile::Square => "s2",
            Profile::Cos => "cos",
        }
    }

    pub fn parse(s: &str) -> Option<Profile> {
        match s.trim() {
            "one" | "1" => Some(Profile::One),
            "s2" | "s^2" | "square" => Some(Profile::Square),
            "cos" => Some(Profile::Cos),
            _ => None,
        }
    }

    /// Closed form of `∫_{B(0,R)} f(x_n) dx`.
    pub fn ball_closed_form(self, radius: f64, n: usize) -> f64 {
        let nf = n as f64;
        let omega = sphere_area_unchecked(n);
        match self {
            Profile::One => omega / nf * radius.powi(n as i32),
            // ∫ x_n² = (1/n) ∫ |x|²
            Profile::Square => omega * radius.powi(n as i32 + 2) / (nf * (nf + 2.0)),
            // Fourier transform of the ball indicator at |ξ| = 1
            Profile::Cos => (2.0 * PI * radius).powf(nf / 2.0) * bessel_j(n, radius),
        }
    }

    /// Closed form of `∫_{∂B(0,R)} f(x_n) dσ`.
    pub fn sphere_closed_form(self, radius: f64, n: usize) -> f64 {
        let nf = n as f64;
        let omega = sphere_area_unchecked(n);
        match self {
            Profile::One => omega * radius.powi(n as i32 - 1),
            Profile::Square => omega * radius.powi(n as i32 + 1) / nf,
            Profile::Cos => (2.0 * PI * radius).powf(nf / 2.0) * bessel_j(n - 2, radius),
        }
    }
}

/// Bessel function `J_{k/2}(x)` by its power series. Accurate for the
/// moderate arguments (`x <~ 10`) the reference values use.
pub fn bessel_j(k: usize, x: f64) -> f64 {
    let nu = k as f64 / 2.0;
    let half = 0.5 * x;
    let mut sum = 0.0;
    let mut j = 0usize;
    loop {
        // (-1)^j (x/2)^{2j+ν} / (j! Γ(j+ν+1))
        let mut term = half.powf(2.0 * j as f64 + nu) / gamma_half(2 * j + k + 2);
        for i in 1..=j {
            term /= i as f64;
        }
        if j % 2 == 1 {
            term = -term;
        }
        sum += term;
        if j > 4 && term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
        j += 1;
        if j > 200 {
            break;
        }
    }
    sum
}
