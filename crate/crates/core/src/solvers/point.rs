use std::fmt;

use super::field::{CauchyProblem, FieldKind, ScalarField};
use super::means::{spherical_mean, weighted_ball_mean, MeanRules};
use crate::error::{Result, WaveError};
use crate::geometry::gauss::adaptive_integrate;
use crate::geometry::{Dimension, GeomConstants, Parity};
use crate::kernel::radial::{evaluate_operator, RadialDerivativeSpec, RadialOperator};

/// Stencil evaluation needs `t >= MIN_STEPS_PER_TIME · h`.
pub const MIN_STEPS_PER_TIME: f64 = 10.0;

/// Tolerance of the adaptive integral in the one-dimensional formula.
pub const DALEMBERT_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    SphericalMeans,
    WeightedMeans,
    DAlembert,
    Spectral,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::SphericalMeans => "spherical_means",
            Method::WeightedMeans => "weighted_means",
            Method::DAlembert => "dalembert",
            Method::Spectral => "spectral",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Method::SphericalMeans, Method::WeightedMeans, Method::DAlembert, Method::Spectral]
            .into_iter()
            .find(|m| m.name() == s.trim())
    }

    /// The point method matching the dimension.
    pub fn for_dim(dim: Dimension) -> Self {
        match (dim.n(), dim.parity()) {
            (1, _) => Method::DAlembert,
            (_, Parity::Odd) => Method::SphericalMeans,
            (_, Parity::Even) => Method::WeightedMeans,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSample {
    pub x: Vec<f64>,
    pub t: f64,
    pub u: f64,
    pub method: Method,
    /// `|u(h) - u(h/2)|` for the means methods, the quadrature error
    /// estimate for d'Alembert, the imaginary residue for the spectral grid.
    pub error_estimate: f64,
}

fn check_point(p: &CauchyProblem, x: &[f64], t: f64) -> Result<()> {
    if x.len() != p.dim.n() {
        return Err(WaveError::Usage(format!(
            "point has {} components, expected {}",
            x.len(),
            p.dim
        )));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(WaveError::Domain(format!("time must be non-negative, got {t}")));
    }
    Ok(())
}

fn initial_value(p: &CauchyProblem, x: &[f64], method: Method) -> SolutionSample {
    SolutionSample {
        x: x.to_vec(),
        t: 0.0,
        u: p.phi.eval(x),
        method,
        error_estimate: 0.0,
    }
}

/// Length over which the data vary, when the data say so.
fn length_scale(f: &ScalarField) -> Option<f64> {
    match &f.kind {
        FieldKind::Gaussian { sigma, .. } => Some(*sigma),
        FieldKind::Bump { radius, .. } => Some(0.5 * radius),
        _ => None,
    }
}

/// Stencil for a point solve at time `t`: `t / (4(m+3))`, refined to an
/// eighth of the data length scale when that is smaller.
pub fn default_spec(p: &CauchyProblem, t: f64) -> Result<RadialDerivativeSpec> {
    let m = p
        .dim
        .radial_order()
        .ok_or_else(|| WaveError::Usage(format!("no radial operator in dimension {}", p.dim)))?;
    let mut h = t / (4.0 * (m as f64 + 3.0));
    for f in [&p.phi, &p.psi] {
        if let Some(l) = length_scale(f) {
            h = h.min(l / 8.0);
        }
    }
    RadialDerivativeSpec::new(m, h)
}

/// `c ∂_t L^m (t^k A_t φ) + c L^m (t^k A_t ψ)` with `A` a mean operator.
fn means_formula<A>(p: &CauchyProblem, t: f64, spec: &RadialDerivativeSpec, power: i32, constant: f64, mean: A) -> Result<f64>
where
    A: Fn(&ScalarField, f64) -> Result<f64>,
{
    let psi_op = RadialOperator::iterated(spec.m);
    let phi_op = psi_op.then_derivative();
    let mut u = 0.0;
    if !p.psi.is_zero() {
        u += evaluate_operator(&psi_op, |tau| Ok(tau.powi(power) * mean(&p.psi, tau)?), spec, t)?;
    }
    if !p.phi.is_zero() {
        let wide = spec.widened();
        u += evaluate_operator(&phi_op, |tau| Ok(tau.powi(power) * mean(&p.phi, tau)?), &wide, t)?;
    }
    Ok(constant * u)
}

fn solve_with_means<A>(
    p: &CauchyProblem,
    x: &[f64],
    t: f64,
    spec: &RadialDerivativeSpec,
    method: Method,
    power: i32,
    mean: A,
) -> Result<SolutionSample>
where
    A: Fn(&ScalarField, f64) -> Result<f64>,
{
    check_point(p, x, t)?;
    if t == 0.0 {
        return Ok(initial_value(p, x, method));
    }
    let m = p.dim.radial_order().unwrap_or(0);
    if spec.m != m {
        return Err(WaveError::Usage(format!(
            "n = {} needs m = {m} derivative stages, spec has {}",
            p.dim, spec.m
        )));
    }
    if t < MIN_STEPS_PER_TIME * spec.h {
        return Err(WaveError::Stencil {
            t,
            half_width: spec.widened().half_width(),
        });
    }
    let constant = GeomConstants::new(p.dim).kernel_constant()?;
    let u = means_formula(p, t, spec, power, constant, &mean)?;
    let coarse = means_formula(p, t, &spec.halved(), power, constant, &mean)?;
    Ok(SolutionSample {
        x: x.to_vec(),
        t,
        u,
        method,
        error_estimate: (u - coarse).abs(),
    })
}

/// Odd `n >= 3`: `u = c_n ∂_t L^m (t^{n-2} M_t φ) + c_n L^m (t^{n-2} M_t ψ)`
/// with `L = (1/t) ∂_t`, `m = (n-3)/2`.
pub fn solve_odd_point(
    p: &CauchyProblem,
    x: &[f64],
    t: f64,
    spec: &RadialDerivativeSpec,
    rules: &MeanRules,
) -> Result<SolutionSample> {
    let n = p.dim.n();
    if p.dim.parity() != Parity::Odd || n < 3 {
        return Err(WaveError::Usage(format!("spherical means need odd n >= 3, got {n}")));
    }
    solve_with_means(p, x, t, spec, Method::SphericalMeans, n as i32 - 2, |f, tau| {
        spherical_mean(f, x, tau, &rules.sphere)
    })
}

/// Even `n`: `u = d_n ∂_t L^{m'} (t^n 𝓜_t φ) + d_n L^{m'} (t^n 𝓜_t ψ)`,
/// `m' = (n-2)/2`.
pub fn solve_even_point(
    p: &CauchyProblem,
    x: &[f64],
    t: f64,
    spec: &RadialDerivativeSpec,
    rules: &MeanRules,
) -> Result<SolutionSample> {
    let n = p.dim.n();
    if p.dim.parity() != Parity::Even {
        return Err(WaveError::Usage(format!("weighted means need even n, got {n}")));
    }
    solve_with_means(p, x, t, spec, Method::WeightedMeans, n as i32, |f, tau| {
        weighted_ball_mean(f, x, tau, rules)
    })
}

/// `u = (φ(x-t) + φ(x+t))/2 + (1/2) ∫_{x-t}^{x+t} ψ`.
pub fn solve_dalembert_point(p: &CauchyProblem, x: f64, t: f64) -> Result<SolutionSample> {
    if p.dim.n() != 1 {
        return Err(WaveError::Usage(format!("d'Alembert's formula is for n = 1, got {}", p.dim)));
    }
    check_point(p, &[x], t)?;
    if t == 0.0 {
        return Ok(initial_value(p, &[x], Method::DAlembert));
    }
    let travelling = 0.5 * (p.phi.eval(&[x - t]) + p.phi.eval(&[x + t]));
    let (integral, err) = if p.psi.is_zero() {
        (0.0, 0.0)
    } else {
        adaptive_integrate(|s| p.psi.eval(&[s]), x - t, x + t, DALEMBERT_TOL)?
    };
    let u = travelling + 0.5 * integral;
    if !u.is_finite() {
        return Err(WaveError::Evaluation(format!("u({x}, {t}) = {u}")));
    }
    Ok(SolutionSample {
        x: vec![x],
        t,
        u,
        method: Method::DAlembert,
        error_estimate: 0.5 * err,
    })
}

/// A problem with its quadrature, solving at points by the method the
/// dimension calls for.
#[derive(Debug, Clone)]
pub struct PointSolver {
    pub problem: CauchyProblem,
    pub rules: Option<MeanRules>,
}

impl PointSolver {
    pub fn new(problem: CauchyProblem) -> Result<Self> {
        let rules = if problem.dim.n() >= 2 {
            Some(MeanRules::with_defaults(problem.dim)?)
        } else {
            None
        };
        Ok(PointSolver { problem, rules })
    }

    pub fn with_rules(problem: CauchyProblem, rules: MeanRules) -> Result<Self> {
        if rules.dim() != problem.dim {
            return Err(WaveError::Usage(format!(
                "quadrature is for n = {}, problem for n = {}",
                rules.dim(),
                problem.dim
            )));
        }
        Ok(PointSolver {
            problem,
            rules: Some(rules),
        })
    }

    pub fn method(&self) -> Method {
        Method::for_dim(self.problem.dim)
    }

    pub fn solve(&self, x: &[f64], t: f64) -> Result<SolutionSample> {
        let p = &self.problem;
        if p.dim.n() == 1 {
            check_point(p, x, t)?;
            return solve_dalembert_point(p, x[0], t);
        }
        let rules = self.rules.as_ref().expect("rules exist for n >= 2");
        if t == 0.0 {
            check_point(p, x, t)?;
            return Ok(initial_value(p, x, self.method()));
        }
        let spec = default_spec(p, t)?;
        match p.dim.parity() {
            Parity::Odd => solve_odd_point(p, x, t, &spec, rules),
            Parity::Even => solve_even_point(p, x, t, &spec, rules),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SphereQuadrature;
    use crate::solvers::field::{HarmonicPoly, Support};
    use approx::assert_relative_eq;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn problem(phi: ScalarField, psi: ScalarField) -> CauchyProblem {
        CauchyProblem::new(phi, psi).unwrap()
    }

    #[test]
    fn constant_velocity_gives_u_equal_t() {
        for n in [2, 3, 4, 5] {
            let p = problem(ScalarField::zero(dim(n)), ScalarField::constant(dim(n), 1.0));
            let solver = PointSolver::new(p).unwrap();
            for t in [0.5, 1.0, 2.0] {
                let s = solver.solve(&vec![0.2; n], t).unwrap();
                assert_relative_eq!(s.u, t, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn harmonic_data_odd() {
        for n in [3, 5, 7] {
            let phi = ScalarField::harmonic(dim(n), HarmonicPoly::Saddle).unwrap();
            let psi = ScalarField::harmonic(dim(n), HarmonicPoly::Cubic).unwrap();
            let solver = PointSolver::new(problem(phi.clone(), psi.clone())).unwrap();
            let x: Vec<f64> = (0..n).map(|i| 0.3 * i as f64 - 0.4).collect();
            for t in [0.5, 1.0, 2.0] {
                let s = solver.solve(&x, t).unwrap();
                let exact = phi.eval(&x) + t * psi.eval(&x);
                assert!((s.u - exact).abs() <= 1e-9 * exact.abs().max(1.0), "n={n} t={t} {} {exact}", s.u);
                assert_eq!(s.method, Method::SphericalMeans);
            }
        }
    }

    #[test]
    fn harmonic_data_even() {
        for n in [2, 4] {
            let phi = ScalarField::harmonic(dim(n), HarmonicPoly::Affine).unwrap();
            let psi = ScalarField::harmonic(dim(n), HarmonicPoly::Product).unwrap();
            let solver = PointSolver::new(problem(phi.clone(), psi.clone())).unwrap();
            let x: Vec<f64> = (0..n).map(|i| 0.5 - 0.2 * i as f64).collect();
            for t in [0.5, 1.0, 2.0] {
                let s = solver.solve(&x, t).unwrap();
                let exact = phi.eval(&x) + t * psi.eval(&x);
                assert!((s.u - exact).abs() <= 1e-9 * exact.abs().max(1.0), "n={n} t={t}");
            }
        }
    }

    #[test]
    fn dalembert_examples() {
        let d1 = dim(1);
        let lin = ScalarField::harmonic(d1, HarmonicPoly::Linear).unwrap();
        let p = problem(lin, ScalarField::zero(d1));
        assert_relative_eq!(solve_dalembert_point(&p, 0.7, 2.0).unwrap().u, 0.7, max_relative = 1e-15);
        let p = problem(ScalarField::zero(d1), ScalarField::constant(d1, 1.0));
        assert_relative_eq!(solve_dalembert_point(&p, 0.7, 2.0).unwrap().u, 2.0, max_relative = 1e-14);
        let sin = ScalarField::custom(d1, Support::Unbounded, |x| x[0].sin());
        let p = problem(sin, ScalarField::zero(d1));
        for (x, t) in [(0.3, 0.5), (1.0, 2.0), (-2.0, 3.3)] {
            let u = solve_dalembert_point(&p, x, t).unwrap().u;
            assert!((u - f64::sin(x) * f64::cos(t)).abs() < 1e-15);
        }
        let p3 = problem(ScalarField::zero(dim(3)), ScalarField::zero(dim(3)));
        assert!(matches!(solve_dalembert_point(&p3, 0.0, 1.0), Err(WaveError::Usage(_))));
    }

    #[test]
    fn time_zero_returns_initial_displacement() {
        let d = dim(3);
        let phi = ScalarField::gaussian(d, 0.5, vec![0.0; 3]).unwrap();
        let solver = PointSolver::new(problem(phi.clone(), ScalarField::zero(d))).unwrap();
        let x = [0.1, 0.2, 0.3];
        assert_eq!(solver.solve(&x, 0.0).unwrap().u, phi.eval(&x));
    }

    #[test]
    fn stencil_and_parity_errors() {
        let d = dim(3);
        let p = problem(ScalarField::constant(d, 1.0), ScalarField::zero(d));
        let rules = MeanRules::new(SphereQuadrature::new(d, 4, 8).unwrap(), 8);
        let spec = RadialDerivativeSpec::new(0, 0.2).unwrap();
        assert!(matches!(solve_odd_point(&p, &[0.0; 3], 1.0, &spec, &rules), Err(WaveError::Stencil { .. })));
        assert!(matches!(solve_even_point(&p, &[0.0; 3], 1.0, &spec, &rules), Err(WaveError::Usage(_))));
        let spec = RadialDerivativeSpec::new(1, 0.01).unwrap();
        assert!(matches!(solve_odd_point(&p, &[0.0; 3], 1.0, &spec, &rules), Err(WaveError::Usage(_))));
    }

    #[test]
    fn huygens_in_three_dimensions() {
        let d = dim(3);
        let psi = ScalarField::bump(d, 0.5, vec![0.0; 3]).unwrap();
        let solver = PointSolver::new(problem(ScalarField::zero(d), psi)).unwrap();
        let x = [3.0, 0.0, 0.0];
        for t in [1.0, 2.0, 4.0, 5.0] {
            assert!(solver.solve(&x, t).unwrap().u.abs() <= 1e-6);
        }
        assert!(solver.solve(&x, 3.0).unwrap().u > 1e-3);
    }
}
