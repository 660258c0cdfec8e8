//! The operator `(1/t d/dt)^m`, optionally followed by one more `d/dt`,
//! applied to a function known only through samples.
//!
//! The samples are taken on an equally spaced stencil `t + j h`,
//! `j = -K..=K`, and fitted by a local polynomial. Rather than composing
//! numerical derivatives stage by stage, the operator is expanded as
//!
//! ```text
//! (1/t d/dt)^m = Σ_k  a_{m,k} t^{k-2m} d^k/dt^k
//! ```
//!
//! and every `d^k/dt^k` is taken analytically from the fit at the stencil
//! centre, where it is most accurate. The result is exact whenever the
//! sampled function is a polynomial of degree `<= stencil_degree`.

use nalgebra::DMatrix;

use crate::error::{Result, WaveError};
use crate::geometry::Scalar;

/// Below `h / t` of this size the stencil is flagged as ill-conditioned.
pub const MIN_RELATIVE_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialDerivativeSpec {
    /// Number of `(1/t d/dt)` applications.
    pub m: usize,
    /// Stencil spacing.
    pub h: f64,
    /// Degree of the local polynomial, at least `m + 2`.
    pub stencil_degree: usize,
}

impl RadialDerivativeSpec {
    /// `2m + 5` point interpolating stencil.
    pub fn new(m: usize, h: f64) -> Result<Self> {
        Self::with_degree(m, h, 2 * m + 4)
    }

    pub fn with_degree(m: usize, h: f64, stencil_degree: usize) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(WaveError::Domain(format!("stencil spacing must be positive, got {h}")));
        }
        if stencil_degree < m + 2 {
            return Err(WaveError::Usage(format!(
                "stencil degree {stencil_degree} is below m + 2 = {}",
                m + 2
            )));
        }
        Ok(RadialDerivativeSpec { m, h, stencil_degree })
    }

    /// Default spacing for evaluation at radius `t`: `t / (4(m+3))`, which
    /// keeps the widest stencil the solvers use inside `(t/2, 3t/2)`.
    pub fn for_radius(m: usize, t: f64) -> Result<Self> {
        Self::new(m, t / (4.0 * (m as f64 + 3.0)))
    }

    /// Stencil half-width in points.
    pub fn half_points(&self) -> usize {
        self.stencil_degree.div_ceil(2).max(1)
    }

    pub fn half_width(&self) -> f64 {
        self.half_points() as f64 * self.h
    }

    /// The same operator with one extra `d/dt` needs two more stencil points.
    pub fn widened(&self) -> Self {
        RadialDerivativeSpec {
            stencil_degree: self.stencil_degree + 2,
            ..*self
        }
    }

    pub fn halved(&self) -> Self {
        RadialDerivativeSpec {
            h: 0.5 * self.h,
            ..*self
        }
    }

    pub fn is_ill_conditioned(&self, t: f64) -> bool {
        self.h < MIN_RELATIVE_STEP * t
    }

    /// Radii at which the function must be sampled.
    pub fn radii(&self, t: f64) -> Result<Vec<f64>> {
        let k = self.half_points() as i64;
        let w = self.half_width();
        if t - w <= 0.0 {
            return Err(WaveError::Stencil { t, half_width: w });
        }
        Ok((-k..=k).map(|j| t + j as f64 * self.h).collect())
    }
}

/// `Σ coef · t^power · d^order/dt^order`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialOperator {
    terms: Vec<(f64, i32, usize)>,
}

impl RadialOperator {
    pub fn identity() -> Self {
        RadialOperator {
            terms: vec![(1.0, 0, 0)],
        }
    }

    /// `(1/t d/dt)^m`.
    pub fn iterated(m: usize) -> Self {
        (0..m).fold(Self::identity(), |op, _| op.compose(|c, p, k, out| {
            // (1/t) d/dt (c t^p D^k) = c p t^{p-2} D^k + c t^{p-1} D^{k+1}
            if p != 0 {
                out.push((c * p as f64, p - 2, k));
            }
            out.push((c, p - 1, k + 1));
        }))
    }

    /// `d/dt ∘ self`.
    pub fn then_derivative(&self) -> Self {
        self.compose(|c, p, k, out| {
            if p != 0 {
                out.push((c * p as f64, p - 1, k));
            }
            out.push((c, p, k + 1));
        })
    }

    fn compose<F>(&self, rule: F) -> Self
    where
        F: Fn(f64, i32, usize, &mut Vec<(f64, i32, usize)>),
    {
        let mut raw = Vec::new();
        for &(c, p, k) in &self.terms {
            rule(c, p, k, &mut raw);
        }
        let mut merged: Vec<(f64, i32, usize)> = Vec::new();
        for (c, p, k) in raw {
            match merged.iter_mut().find(|t| t.1 == p && t.2 == k) {
                Some(t) => t.0 += c,
                None => merged.push((c, p, k)),
            }
        }
        merged.retain(|t| t.0 != 0.0);
        merged.sort_by_key(|t| t.2);
        RadialOperator { terms: merged }
    }

    pub fn max_order(&self) -> usize {
        self.terms.iter().map(|t| t.2).max().unwrap_or(0)
    }

    pub fn terms(&self) -> &[(f64, i32, usize)] {
        &self.terms
    }

    /// Evaluate at `t` given `derivatives[k] = F^{(k)}(t)`.
    pub fn apply<T: Scalar>(&self, t: f64, derivatives: &[T]) -> T {
        self.terms
            .iter()
            .fold(T::zero(), |acc, &(c, p, k)| acc + derivatives[k] * (c * t.powi(p)))
    }
}

/// Finite-difference weights for derivatives `0..=max_order` at `z`, from
/// the interpolating polynomial through `nodes` (Fornberg's recursion).
pub fn fornberg_weights(z: f64, nodes: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let np = nodes.len();
    let mut c = vec![vec![0.0; max_order + 1]; np];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for i in 1..np {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    // transpose to weights[k][j]
    (0..=max_order)
        .map(|k| (0..np).map(|j| c[j][k]).collect())
        .collect()
}

/// Weights `W[k][j]` such that `F^{(k)}(t) ≈ h^{-k} Σ_j W[k][j] F(t + j h)`
/// for a degree-`degree` least-squares fit on `2K+1` integer nodes.
fn stencil_weights(half_points: usize, degree: usize, max_order: usize) -> Result<Vec<Vec<f64>>> {
    let k = half_points as i64;
    let nodes: Vec<f64> = (-k..=k).map(|j| j as f64).collect();
    if max_order > degree {
        return Err(WaveError::Usage(format!(
            "derivative order {max_order} exceeds the stencil degree {degree}"
        )));
    }
    if degree + 1 == nodes.len() {
        return Ok(fornberg_weights(0.0, &nodes, max_order));
    }
    if degree + 1 > nodes.len() {
        return Err(WaveError::Usage(format!(
            "degree {degree} needs at least {} stencil points",
            degree + 1
        )));
    }
    // Least squares in u = s/K for conditioning: F ≈ Σ b_i u^i, so
    // d^k/ds^k at 0 is k! b_k / K^k.
    let scale = half_points as f64;
    let v = DMatrix::from_fn(nodes.len(), degree + 1, |r, c| (nodes[r] / scale).powi(c as i32));
    let pinv = v
        .pseudo_inverse(1e-13)
        .map_err(|e| WaveError::Evaluation(format!("stencil fit failed: {e}")))?;
    Ok((0..=max_order)
        .map(|order| {
            let fact: f64 = (1..=order).map(|i| i as f64).product();
            let f = fact / scale.powi(order as i32);
            (0..nodes.len()).map(|j| f * pinv[(order, j)]).collect()
        })
        .collect())
}

/// Apply `op` at `t` to the samples `samples[j] = F(t + (j - K) h)`.
pub fn apply_to_samples<T: Scalar>(
    op: &RadialOperator,
    spec: &RadialDerivativeSpec,
    t: f64,
    samples: &[T],
) -> Result<T> {
    let kp = spec.half_points();
    if samples.len() != 2 * kp + 1 {
        return Err(WaveError::Usage(format!(
            "expected {} samples, got {}",
            2 * kp + 1,
            samples.len()
        )));
    }
    let max_order = op.max_order();
    let weights = stencil_weights(kp, spec.stencil_degree, max_order)?;
    let derivatives: Vec<T> = weights
        .iter()
        .enumerate()
        .map(|(k, w)| {
            let hk = spec.h.powi(k as i32);
            w.iter()
                .zip(samples)
                .fold(T::zero(), |acc, (&wj, &fj)| acc + fj * (wj / hk))
        })
        .collect();
    Ok(op.apply(t, &derivatives))
}

/// `(1/t d/dt)^m F` at `t`, sampling `F` on the stencil of `spec`.
pub fn iterated_radial_derivative<F>(f: F, spec: &RadialDerivativeSpec, t: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let op = RadialOperator::iterated(spec.m);
    evaluate_operator(&op, |tau| Ok(f(tau)), spec, t)
}

/// Sample `f` on the stencil and apply `op`. Zero-order operators only
/// need `f(t)` itself.
pub fn evaluate_operator<T, F>(op: &RadialOperator, f: F, spec: &RadialDerivativeSpec, t: f64) -> Result<T>
where
    T: Scalar + FiniteCheck,
    F: Fn(f64) -> Result<T>,
{
    if op.max_order() == 0 {
        let v = f(t)?;
        v.check_finite(t)?;
        return Ok(op.apply(t, &[v]));
    }
    let radii = spec.radii(t)?;
    let samples = radii
        .iter()
        .map(|&tau| {
            let v = f(tau)?;
            v.check_finite(tau)?;
            Ok(v)
        })
        .collect::<Result<Vec<T>>>()?;
    apply_to_samples(op, spec, t, &samples)
}

pub trait FiniteCheck {
    fn check_finite(&self, at: f64) -> Result<()>;
}

impl FiniteCheck for f64 {
    fn check_finite(&self, at: f64) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(WaveError::Evaluation(format!("sample at t = {at} is {self}")))
        }
    }
}

impl FiniteCheck for num_complex::Complex64 {
    fn check_finite(&self, at: f64) -> Result<()> {
        if self.re.is_finite() && self.im.is_finite() {
            Ok(())
        } else {
            Err(WaveError::Evaluation(format!("sample at t = {at} is {self}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn operator_expansion_small_cases() {
        // (1/t D)^2 = t^{-2} D² - t^{-3} D
        let op = RadialOperator::iterated(2);
        assert_eq!(op.terms(), &[(-1.0, -3, 1), (1.0, -2, 2)]);
        // D (1/t D) = t^{-1} D² - t^{-2} D
        let op = RadialOperator::iterated(1).then_derivative();
        assert_eq!(op.terms(), &[(-1.0, -2, 1), (1.0, -1, 2)]);
        assert_eq!(RadialOperator::iterated(0), RadialOperator::identity());
    }

    #[test]
    fn polynomial_examples_are_exact() {
        let spec = RadialDerivativeSpec::new(1, 0.1).unwrap();
        for t in [0.7, 1.0, 3.0] {
            let v = iterated_radial_derivative(|s| s * s, &spec, t).unwrap();
            assert_relative_eq!(v, 2.0, max_relative = 1e-12);
        }
        let spec = RadialDerivativeSpec::new(2, 0.05).unwrap();
        let v = iterated_radial_derivative(|s| s.powi(4), &spec, 1.3).unwrap();
        assert_relative_eq!(v, 8.0, max_relative = 1e-11);
        let spec = RadialDerivativeSpec::new(1, 0.1).unwrap();
        let v = iterated_radial_derivative(|s| s.powi(3), &spec, 2.0).unwrap();
        assert_relative_eq!(v, 6.0, max_relative = 1e-12);
    }

    #[test]
    fn fornberg_reproduces_central_differences() {
        let w = fornberg_weights(0.0, &[-1.0, 0.0, 1.0], 2);
        assert_eq!(w[0], vec![0.0, 1.0, 0.0]);
        assert_eq!(w[1], vec![-0.5, 0.0, 0.5]);
        assert_eq!(w[2], vec![1.0, -2.0, 1.0]);
    }

    #[test]
    fn least_squares_fit_is_exact_on_low_degree() {
        let spec = RadialDerivativeSpec::with_degree(1, 0.1, 5).unwrap();
        assert_eq!(spec.half_points(), 3);
        let v = iterated_radial_derivative(|s| s.powi(5) - s * s, &spec, 1.5).unwrap();
        assert_relative_eq!(v, 5.0 * 1.5f64.powi(3) - 2.0, max_relative = 1e-10);
    }

    #[test]
    fn smooth_function_converges() {
        // (1/t D) sin t = cos t / t
        let exact = 2.0f64.cos() / 2.0;
        let err = |h| {
            let spec = RadialDerivativeSpec::new(1, h).unwrap();
            (iterated_radial_derivative(f64::sin, &spec, 2.0).unwrap() - exact).abs()
        };
        let (e1, e2) = (err(0.2), err(0.1));
        assert!(e2 < e1 / 30.0, "{e1} {e2}");
    }

    #[test]
    fn stencil_and_evaluation_errors() {
        let spec = RadialDerivativeSpec::new(1, 0.5).unwrap();
        assert!(matches!(
            iterated_radial_derivative(|s| s, &spec, 1.0),
            Err(WaveError::Stencil { .. })
        ));
        let spec = RadialDerivativeSpec::new(1, 0.01).unwrap();
        assert!(matches!(
            iterated_radial_derivative(|s| if s > 1.0 { f64::NAN } else { s }, &spec, 1.0),
            Err(WaveError::Evaluation(_))
        ));
        assert!(RadialDerivativeSpec::with_degree(3, 0.1, 4).is_err());
        assert!(RadialDerivativeSpec::new(0, 0.0).is_err());
    }

    #[test]
    fn zero_order_skips_the_stencil() {
        // would violate t - W > 0 if sampled
        let spec = RadialDerivativeSpec::new(0, 10.0).unwrap();
        assert_eq!(iterated_radial_derivative(|s| 3.0 * s, &spec, 1.0).unwrap(), 3.0);
    }
}
