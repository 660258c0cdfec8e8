//! The compactly supported distribution `T_R` whose Fourier transform is
//! `sin(R|ξ|)/|ξ|`, represented only through its action on test functions.
//!
//! ```text
//! odd n:   T_R(g) = c_n (1/R d/dR)^m  [ R^{n-2} M_R g(0) ]
//! even n:  T_R(g) = d_n (1/R d/dR)^m' [ R^n    𝓜_R g(0) ]
//! ```

use num_complex::Complex64;
use rayon::prelude::*;

use super::radial::{evaluate_operator, FiniteCheck, RadialDerivativeSpec, RadialOperator};
use super::sinc::sinc_kernel;
use crate::error::{Result, WaveError};
use crate::geometry::{gauss::gauss_legendre, Dimension, GeomConstants, Parity, Scalar, SphereQuadrature};
use crate::solvers::means::{ball_weighted_average, sphere_average, MeanRules};

/// Test-function values below `TAIL_FLOOR` times the peak count as zero.
pub const TAIL_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Core {
    SphereAverage,
    WeightedBall,
}

#[derive(Debug, Clone)]
pub struct DistributionFunctional {
    pub radius: f64,
    pub dim: Dimension,
    /// Number of `(1/R d/dR)` stages, `m` or `m'`.
    pub order: usize,
    /// `c_n` or `d_n`.
    pub constant: f64,
    core: Core,
    rules: MeanRules,
    spec: RadialDerivativeSpec,
}

impl DistributionFunctional {
    pub fn new(dim: Dimension, radius: f64) -> Result<Self> {
        let rules = match dim.n() {
            2 => MeanRules::new(SphereQuadrature::new(dim, 0, 96)?, 48),
            3 => MeanRules::new(SphereQuadrature::new(dim, 24, 48)?, 32),
            _ => MeanRules::with_defaults(dim)?,
        };
        let m = dim
            .radial_order()
            .ok_or_else(|| WaveError::Usage(format!("no kernel distribution in dimension {dim}")))?;
        let spec = RadialDerivativeSpec::for_radius(m, radius)?;
        Self::with_rules(dim, radius, rules, spec)
    }

    pub fn with_rules(dim: Dimension, radius: f64, rules: MeanRules, spec: RadialDerivativeSpec) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(WaveError::Domain(format!("radius must be positive, got {radius}")));
        }
        if rules.dim() != dim {
            return Err(WaveError::Usage(format!(
                "quadrature is for n = {}, distribution for n = {dim}",
                rules.dim()
            )));
        }
        let order = dim
            .radial_order()
            .ok_or_else(|| WaveError::Usage(format!("no kernel distribution in dimension {dim}")))?;
        if spec.m != order {
            return Err(WaveError::Usage(format!(
                "n = {dim} needs m = {order}, spec has {}",
                spec.m
            )));
        }
        let core = match dim.parity() {
            Parity::Odd => Core::SphereAverage,
            Parity::Even => Core::WeightedBall,
        };
        Ok(DistributionFunctional {
            radius,
            dim,
            order,
            constant: GeomConstants::new(dim).kernel_constant()?,
            core,
            rules,
            spec,
        })
    }

    /// Radius beyond which the action ignores `g`: `R` plus the stencil reach.
    pub fn reach(&self) -> f64 {
        if self.order == 0 {
            self.radius
        } else {
            self.radius + self.spec.half_width()
        }
    }

    /// `T_R(g)`.
    pub fn action<T, G>(&self, g: G) -> Result<T>
    where
        T: Scalar + FiniteCheck,
        G: Fn(&[f64]) -> T,
    {
        let n = self.dim.n();
        let origin = vec![0.0; n];
        let op = RadialOperator::iterated(self.order);
        let core = |tau: f64| -> Result<T> {
            Ok(match self.core {
                Core::SphereAverage => {
                    sphere_average(&g, &origin, tau, &self.rules.sphere)? * tau.powi(n as i32 - 2)
                }
                Core::WeightedBall => {
                    ball_weighted_average(&g, &origin, tau, &self.rules, None)? * tau.powi(n as i32)
                }
            })
        };
        Ok(evaluate_operator(&op, core, &self.spec, self.radius)? * self.constant)
    }
}

/// Cube `[-L, L]ⁿ` outside which the test function is negligible, with a
/// tensor Gauss–Legendre rule on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierBox {
    pub half_width: f64,
    pub nodes_per_axis: usize,
}

impl FourierBox {
    pub fn new(half_width: f64) -> Self {
        FourierBox {
            half_width,
            nodes_per_axis: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionCheck {
    /// `Re T(φ̂)`
    pub lhs: f64,
    pub lhs_imag: f64,
    /// `∫ sin(R|ξ|)/|ξ| φ(ξ) dξ`
    pub rhs: f64,
}

impl DistributionCheck {
    pub fn relative_difference(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.rhs.abs()
    }
}

/// Multi-index of flat position `i`, last axis fastest.
fn unflatten(mut i: usize, n: usize, k: usize, out: &mut [usize]) {
    for slot in out[..n].iter_mut().rev() {
        *slot = i % k;
        i /= k;
    }
}

/// Compare `T(φ̂)` with `∫ sinc·φ`, both by quadrature on `fbox`.
pub fn distribution_fourier_check<P>(t: &DistributionFunctional, phi: P, fbox: &FourierBox) -> Result<DistributionCheck>
where
    P: Fn(&[f64]) -> f64 + Sync,
{
    let n = t.dim.n();
    let k = fbox.nodes_per_axis;
    if !(fbox.half_width > 0.0) {
        return Err(WaveError::config("fourier_box", format!("half-width must be positive, got {}", fbox.half_width)));
    }
    let (nodes, weights) = gauss_legendre(k)?.mapped(-fbox.half_width, fbox.half_width);
    let total = k.pow(n as u32);

    // (φ(ξ_j), W_j, sinc(ξ_j)) on the tensor grid
    let samples: Vec<(f64, f64, f64)> = (0..total)
        .into_par_iter()
        .map(|i| {
            let mut idx = [0usize; crate::geometry::MAX_DIM];
            unflatten(i, n, k, &mut idx);
            let xi: Vec<f64> = idx[..n].iter().map(|&j| nodes[j]).collect();
            let w: f64 = idx[..n].iter().map(|&j| weights[j]).product();
            (phi(&xi), w, sinc_kernel(&xi, t.radius))
        })
        .collect();
    if samples.iter().any(|s| !s.0.is_finite()) {
        return Err(WaveError::Evaluation("test function is not finite on the Fourier box".into()));
    }
    let peak = samples.iter().map(|s| s.0.abs()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(DistributionCheck {
            lhs: 0.0,
            lhs_imag: 0.0,
            rhs: 0.0,
        });
    }
    let face = face_maximum(&phi, n, fbox.half_width, &nodes);
    if face > TAIL_FLOOR * peak {
        return Err(WaveError::config(
            "fourier_box",
            format!(
                "test function reaches {face:.3e} on the box boundary, above {TAIL_FLOOR:e} of its peak {peak:.3e}"
            ),
        ));
    }

    let rhs: f64 = samples.iter().map(|&(v, w, s)| v * w * s).sum();
    let weighted: Vec<Complex64> = samples.iter().map(|&(v, w, _)| Complex64::new(v * w, 0.0)).collect();
    let phi_hat = |x: &[f64]| -> Complex64 { fourier_contract(&weighted, &nodes, x, k) };
    let lhs: Complex64 = t.action(phi_hat)?;
    Ok(DistributionCheck {
        lhs: lhs.re,
        lhs_imag: lhs.im,
        rhs,
    })
}

/// `Σ_j v_j e^{-i x·ξ_j}`, contracting one axis at a time from the last.
fn fourier_contract(values: &[Complex64], nodes: &[f64], x: &[f64], k: usize) -> Complex64 {
    let mut cur: Vec<Complex64> = values.to_vec();
    for &xa in x.iter().rev() {
        let phase: Vec<Complex64> = nodes.iter().map(|&s| Complex64::from_polar(1.0, -xa * s)).collect();
        cur = cur
            .chunks_exact(k)
            .map(|row| row.iter().zip(&phase).map(|(v, e)| v * e).sum())
            .collect();
    }
    cur[0]
}

fn face_maximum<P: Fn(&[f64]) -> f64>(phi: &P, n: usize, half_width: f64, nodes: &[f64]) -> f64 {
    let k = nodes.len();
    let mut worst = 0.0f64;
    let mut idx = [0usize; crate::geometry::MAX_DIM];
    let mut x = vec![0.0; n];
    for axis in 0..n {
        for side in [-half_width, half_width] {
            for i in 0..k.pow(n as u32 - 1) {
                unflatten(i, n - 1, k, &mut idx);
                let mut it = idx[..n - 1].iter();
                for (a, xa) in x.iter_mut().enumerate() {
                    *xa = if a == axis { side } else { nodes[*it.next().unwrap()] };
                }
                worst = worst.max(phi(&x).abs());
            }
        }
    }
    worst
}
