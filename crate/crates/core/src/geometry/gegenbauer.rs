use super::dimension::Dimension;
use super::gauss::{gauss_gegenbauer, gegenbauer_mass};
use crate::error::{Result, WaveError};

/// Quadrature for `∫_{-R}^{R} f(s) (R² - s²)^a ds`.
///
/// For the reduction formulas `a = (n-3)/2`. Nodes are `R ζ_i` where `ζ_i`
/// are Gauss nodes for the weight `(1 - ζ²)^a`, so the rule is exact for
/// polynomial `f` of degree `< 2k` whether `a` is integral or half-integral.
#[derive(Debug, Clone, PartialEq)]
pub struct GegenbauerRule {
    pub radius: f64,
    pub exponent: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GegenbauerRule {
    /// Rule for the reduction weight of dimension `n >= 3`.
    pub fn new(dim: Dimension, radius: f64, points: usize) -> Result<Self> {
        if dim.n() < 3 {
            return Err(WaveError::Usage(format!(
                "reduction weight needs n >= 3, got {dim}"
            )));
        }
        Self::with_exponent(radius, (dim.n() as f64 - 3.0) / 2.0, points)
    }

    pub fn with_exponent(radius: f64, exponent: f64, points: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(WaveError::Domain(format!("radius must be positive, got {radius}")));
        }
        let base = gauss_gegenbauer(points, exponent)?;
        let scale = radius.powf(2.0 * exponent + 1.0);
        Ok(GegenbauerRule {
            radius,
            exponent,
            nodes: base.nodes.iter().map(|z| radius * z).collect(),
            weights: base.weights.iter().map(|w| scale * w).collect(),
        })
    }

    /// `∫_{-R}^{R} (R² - s²)^a ds`, which the weights must sum to.
    pub fn exact_mass(&self) -> f64 {
        self.radius.powf(2.0 * self.exponent + 1.0) * gegenbauer_mass(self.exponent)
    }

    pub fn integrate<T, F>(&self, f: F) -> T
    where
        T: crate::geometry::Scalar,
        F: Fn(f64) -> T,
    {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&s, &w)| acc + f(s) * w)
    }
}

/// Node count for an integrand oscillating at angular frequency `omega`
/// over `[-R, R]`: `base` until `R·omega > 30`, then at least ten nodes per period.
pub fn oscillatory_points(base: usize, radius: f64, omega: f64) -> usize {
    let phase = radius * omega.abs();
    if phase > 30.0 {
        base.max((10.0 * phase / std::f64::consts::PI).ceil() as usize)
    } else {
        base
    }
}
