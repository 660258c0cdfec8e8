use std::fmt;
use std::sync::Arc;

use crate::error::{Result, WaveError};
use crate::geometry::Dimension;

/// `|data| < DATA_FLOOR` defines the numerical support of decaying data.
pub const DATA_FLOOR: f64 = 1e-14;

/// Where a field is (numerically) non-zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support {
    /// Below `DATA_FLOOR` outside the ball of this radius about the origin.
    Ball(f64),
    /// Periodic on the spectral lattice; never wraps around.
    Periodic,
    Unbounded,
}

/// Harmonic polynomials available as built-in data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HarmonicPoly {
    /// `x_1`
    Linear,
    /// `1 + 2 x_1 - x_n`
    Affine,
    /// `x_1 x_2`
    Product,
    /// `x_1² - x_2²`
    Saddle,
    /// `x_1³ - 3 x_1 x_2²`
    Cubic,
    /// `x_1 x_2 x_3`
    Triple,
}

impl HarmonicPoly {
    pub const ALL: [HarmonicPoly; 6] = [
        HarmonicPoly::Linear,
        HarmonicPoly::Affine,
        HarmonicPoly::Product,
        HarmonicPoly::Saddle,
        HarmonicPoly::Cubic,
        HarmonicPoly::Triple,
    ];

    pub fn name(self) -> &'static str {
        match self {
            HarmonicPoly::Linear => "linear",
            HarmonicPoly::Affine => "affine",
            HarmonicPoly::Product => "product",
            HarmonicPoly::Saddle => "saddle",
            HarmonicPoly::Cubic => "cubic",
            HarmonicPoly::Triple => "triple",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s.trim())
    }

    pub fn min_dim(self) -> usize {
        match self {
            HarmonicPoly::Linear | HarmonicPoly::Affine => 1,
            HarmonicPoly::Product | HarmonicPoly::Saddle | HarmonicPoly::Cubic => 2,
            HarmonicPoly::Triple => 3,
        }
    }

    pub fn degree(self) -> usize {
        match self {
            HarmonicPoly::Linear | HarmonicPoly::Affine => 1,
            HarmonicPoly::Product | HarmonicPoly::Saddle => 2,
            HarmonicPoly::Cubic | HarmonicPoly::Triple => 3,
        }
    }

    pub fn eval(self, x: &[f64]) -> f64 {
        match self {
            HarmonicPoly::Linear => x[0],
            HarmonicPoly::Affine => 1.0 + 2.0 * x[0] - x[x.len() - 1],
            HarmonicPoly::Product => x[0] * x[1],
            HarmonicPoly::Saddle => x[0] * x[0] - x[1] * x[1],
            HarmonicPoly::Cubic => x[0] * x[0] * x[0] - 3.0 * x[0] * x[1] * x[1],
            HarmonicPoly::Triple => x[0] * x[1] * x[2],
        }
    }
}

type Evaluator = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum FieldKind {
    Zero,
    Constant(f64),
    /// `exp(-|x - center|² / (2σ²))`
    Gaussian { sigma: f64, center: Vec<f64> },
    /// `exp(1 - 1/(1 - |x - center|²/a²))` inside the ball of radius `a`, zero outside.
    Bump { radius: f64, center: Vec<f64> },
    Harmonic(HarmonicPoly),
    Custom(Evaluator),
}

impl fmt::Debug for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Zero => write!(f, "Zero"),
            FieldKind::Constant(c) => write!(f, "Constant({c})"),
            FieldKind::Gaussian { sigma, center } => write!(f, "Gaussian({sigma}, {center:?})"),
            FieldKind::Bump { radius, center } => write!(f, "Bump({radius}, {center:?})"),
            FieldKind::Harmonic(p) => write!(f, "Harmonic({})", p.name()),
            FieldKind::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// Initial datum `φ` or `ψ` on `ℝⁿ`.
#[derive(Debug, Clone)]
pub struct ScalarField {
    pub dim: Dimension,
    pub kind: FieldKind,
    pub scale: f64,
    pub support: Support,
    pub smoothness: &'static str,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

impl ScalarField {
    pub fn zero(dim: Dimension) -> Self {
        ScalarField {
            dim,
            kind: FieldKind::Zero,
            scale: 1.0,
            support: Support::Ball(0.0),
            smoothness: "analytic",
        }
    }

    /// Constant data live on the spectral lattice as the zero mode.
    pub fn constant(dim: Dimension, c: f64) -> Self {
        ScalarField {
            dim,
            kind: FieldKind::Constant(c),
            scale: 1.0,
            support: Support::Periodic,
            smoothness: "analytic",
        }
    }

    pub fn gaussian(dim: Dimension, sigma: f64, center: Vec<f64>) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(WaveError::Domain(format!("gaussian width must be positive, got {sigma}")));
        }
        check_len(dim, &center)?;
        let reach = sigma * (2.0 * (1.0 / DATA_FLOOR).ln()).sqrt();
        Ok(ScalarField {
            dim,
            support: Support::Ball(norm(&center) + reach),
            kind: FieldKind::Gaussian { sigma, center },
            scale: 1.0,
            smoothness: "analytic",
        })
    }

    pub fn bump(dim: Dimension, radius: f64, center: Vec<f64>) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(WaveError::Domain(format!("bump radius must be positive, got {radius}")));
        }
        check_len(dim, &center)?;
        Ok(ScalarField {
            dim,
            support: Support::Ball(norm(&center) + radius),
            kind: FieldKind::Bump { radius, center },
            scale: 1.0,
            smoothness: "C-infinity, compact support",
        })
    }

    pub fn harmonic(dim: Dimension, poly: HarmonicPoly) -> Result<Self> {
        if dim.n() < poly.min_dim() {
            return Err(WaveError::Usage(format!(
                "harmonic polynomial {} needs n >= {}",
                poly.name(),
                poly.min_dim()
            )));
        }
        Ok(ScalarField {
            dim,
            kind: FieldKind::Harmonic(poly),
            scale: 1.0,
            support: Support::Unbounded,
            smoothness: "polynomial",
        })
    }

    pub fn custom<F>(dim: Dimension, support: Support, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        ScalarField {
            dim,
            kind: FieldKind::Custom(Arc::new(f)),
            scale: 1.0,
            support,
            smoothness: "user supplied",
        }
    }

    pub fn scaled(mut self, a: f64) -> Self {
        self.scale *= a;
        self
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.kind, FieldKind::Zero) || self.scale == 0.0
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let v = match &self.kind {
            FieldKind::Zero => 0.0,
            FieldKind::Constant(c) => *c,
            FieldKind::Gaussian { sigma, center } => {
                let r2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                (-r2 / (2.0 * sigma * sigma)).exp()
            }
            FieldKind::Bump { radius, center } => {
                let r2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                let q = r2 / (radius * radius);
                if q < 1.0 {
                    (1.0 - 1.0 / (1.0 - q)).exp()
                } else {
                    0.0
                }
            }
            FieldKind::Harmonic(p) => p.eval(x),
            FieldKind::Custom(f) => f(x),
        };
        self.scale * v
    }

    /// Support radius about the origin, if finite.
    pub fn support_radius(&self) -> Option<f64> {
        match self.support {
            Support::Ball(r) => Some(r),
            _ => None,
        }
    }
}

fn check_len(dim: Dimension, center: &[f64]) -> Result<()> {
    if center.len() != dim.n() {
        return Err(WaveError::Usage(format!(
            "center has {} components, expected {}",
            center.len(),
            dim
        )));
    }
    Ok(())
}

/// Initial displacement `φ` and velocity `ψ`.
#[derive(Debug, Clone)]
pub struct CauchyProblem {
    pub dim: Dimension,
    pub phi: ScalarField,
    pub psi: ScalarField,
}

impl CauchyProblem {
    pub fn new(phi: ScalarField, psi: ScalarField) -> Result<Self> {
        if phi.dim != psi.dim {
            return Err(WaveError::Usage(format!(
                "φ is on ℝ^{} but ψ is on ℝ^{}",
                phi.dim, psi.dim
            )));
        }
        Ok(CauchyProblem {
            dim: phi.dim,
            phi,
            psi,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn support_radius_is_respected() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let fields = [
            ScalarField::gaussian(dim(3), 0.4, vec![0.2, 0.0, -0.1]).unwrap(),
            ScalarField::bump(dim(3), 0.5, vec![0.0, 0.3, 0.0]).unwrap(),
        ];
        for f in &fields {
            let r = f.support_radius().unwrap();
            for _ in 0..1000 {
                let mut x: Vec<f64> = (0..3).map(|_| rng.random::<f64>() - 0.5).collect();
                let s = (r + rng.random::<f64>() * 2.0) / norm(&x);
                x.iter_mut().for_each(|v| *v *= s);
                assert!(f.eval(&x).abs() <= DATA_FLOOR, "{f:?} at {x:?}");
            }
        }
    }

    #[test]
    fn harmonic_polys_have_zero_laplacian() {
        let h = 1e-3;
        let x = [0.3, -0.7, 1.1];
        for p in HarmonicPoly::ALL {
            let mut lap = 0.0;
            for k in 0..3 {
                let mut xp = x;
                let mut xm = x;
                xp[k] += h;
                xm[k] -= h;
                lap += (p.eval(&xp) - 2.0 * p.eval(&x) + p.eval(&xm)) / (h * h);
            }
            assert!(lap.abs() < 1e-8, "{} {lap}", p.name());
        }
    }

    #[test]
    fn constructors_validate() {
        assert!(ScalarField::gaussian(dim(2), 0.0, vec![0.0, 0.0]).is_err());
        assert!(ScalarField::bump(dim(2), 1.0, vec![0.0]).is_err());
        assert!(ScalarField::harmonic(dim(2), HarmonicPoly::Triple).is_err());
        let p = CauchyProblem::new(ScalarField::zero(dim(2)), ScalarField::zero(dim(3)));
        assert!(matches!(p, Err(WaveError::Usage(_))));
    }

    #[test]
    fn bump_peak_and_scaling() {
        let b = ScalarField::bump(dim(2), 0.5, vec![0.0, 0.0]).unwrap().scaled(3.0);
        assert_eq!(b.eval(&[0.0, 0.0]), 3.0);
        assert_eq!(b.eval(&[0.5, 0.0]), 0.0);
    }
}
