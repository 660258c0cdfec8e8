//! Fourier-multiplier solution on a periodic box:
//! `û(ξ,t) = φ̂(ξ) cos(t|ξ|) + ψ̂(ξ) sin(t|ξ|)/|ξ|`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{FftDirection, FftPlanner};

use super::field::{CauchyProblem, ScalarField, Support};
use super::point::{Method, SolutionSample};
use crate::error::{Result, WaveError};
use crate::geometry::Dimension;
use crate::kernel::sinc_radial;

/// `N` points per axis on `[-L, L)ⁿ`, last axis fastest in flat storage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicGrid {
    pub dim: Dimension,
    pub points: usize,
    pub half_width: f64,
}

impl PeriodicGrid {
    pub fn new(dim: Dimension, points: usize, half_width: f64) -> Result<Self> {
        if points < 2 {
            return Err(WaveError::Usage(format!("need at least 2 grid points per axis, got {points}")));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(WaveError::Domain(format!("half-width must be positive, got {half_width}")));
        }
        Ok(PeriodicGrid {
            dim,
            points,
            half_width,
        })
    }

    pub fn len(&self) -> usize {
        self.points.pow(self.dim.n() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    pub fn coordinate(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.spacing()
    }

    /// Angular wavenumber of index `j` along one axis.
    pub fn wavenumber(&self, j: usize) -> f64 {
        let signed = if j <= self.points / 2 {
            j as f64
        } else {
            j as f64 - self.points as f64
        };
        signed * PI / self.half_width
    }

    pub fn indices(&self, mut flat: usize) -> Vec<usize> {
        let n = self.dim.n();
        let mut idx = vec![0; n];
        for slot in idx.iter_mut().rev() {
            *slot = flat % self.points;
            flat /= self.points;
        }
        idx
    }

    pub fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &j| acc * self.points + j)
    }

    pub fn point(&self, flat: usize) -> Vec<f64> {
        self.indices(flat).into_iter().map(|j| self.coordinate(j)).collect()
    }

    /// Flat index of the grid node nearest to `x`, wrapping periodically.
    pub fn nearest(&self, x: &[f64]) -> Result<usize> {
        if x.len() != self.dim.n() {
            return Err(WaveError::Usage(format!(
                "point has {} components, grid is {}-dimensional",
                x.len(),
                self.dim
            )));
        }
        let h = self.spacing();
        let idx: Vec<usize> = x
            .iter()
            .map(|&v| (((v + self.half_width) / h).round() as i64).rem_euclid(self.points as i64) as usize)
            .collect();
        Ok(self.flat(&idx))
    }

    /// `|ξ|` at flat frequency index `i`.
    pub fn frequency_norm(&self, flat: usize) -> f64 {
        self.indices(flat)
            .into_iter()
            .map(|j| self.wavenumber(j).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Flat index of `-ξ`.
    fn mirror(&self, flat: usize) -> usize {
        let idx: Vec<usize> = self
            .indices(flat)
            .into_iter()
            .map(|j| (self.points - j) % self.points)
            .collect();
        self.flat(&idx)
    }
}

fn transform(grid: &PeriodicGrid, data: &mut [Complex64], direction: FftDirection) {
    let n = grid.dim.n();
    let k = grid.points;
    let fft = FftPlanner::new().plan_fft(k, direction);
    for axis in 0..n {
        let stride = k.pow((n - 1 - axis) as u32);
        let block = stride * k;
        data.par_chunks_mut(block).for_each(|chunk| {
            let mut line = vec![Complex64::new(0.0, 0.0); k];
            let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
            for inner in 0..stride {
                for (j, v) in line.iter_mut().enumerate() {
                    *v = chunk[inner + j * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (j, v) in line.iter().enumerate() {
                    chunk[inner + j * stride] = *v;
                }
            }
        });
    }
}

fn check_guard(field: &ScalarField, grid: &PeriodicGrid, t: f64) -> Result<()> {
    match field.support {
        Support::Ball(r) if field.is_zero() || grid.half_width > r + t => Ok(()),
        Support::Ball(r) => Err(WaveError::DomainSize(format!(
            "half-width {} must exceed support radius {r} plus t = {t}",
            grid.half_width
        ))),
        Support::Periodic => Ok(()),
        Support::Unbounded => Err(WaveError::DomainSize(
            "data without bounded support cannot be placed on a periodic grid".into(),
        )),
    }
}

/// Spectra of the initial data.
#[derive(Debug, Clone)]
pub struct SpectralState {
    pub grid: PeriodicGrid,
    pub phi_hat: Vec<Complex64>,
    pub psi_hat: Vec<Complex64>,
}

impl SpectralState {
    pub fn new(p: &CauchyProblem, grid: PeriodicGrid) -> Result<Self> {
        if grid.dim != p.dim {
            return Err(WaveError::Usage(format!(
                "grid is {}-dimensional, problem is {}-dimensional",
                grid.dim, p.dim
            )));
        }
        check_guard(&p.phi, &grid, 0.0)?;
        check_guard(&p.psi, &grid, 0.0)?;
        let sample = |f: &ScalarField| -> Result<Vec<Complex64>> {
            let mut data: Vec<Complex64> = (0..grid.len())
                .into_par_iter()
                .map(|i| Complex64::new(f.eval(&grid.point(i)), 0.0))
                .collect();
            if data.iter().any(|v| !v.re.is_finite()) {
                return Err(WaveError::Evaluation("initial data are not finite on the grid".into()));
            }
            transform(&grid, &mut data, FftDirection::Forward);
            Ok(data)
        };
        Ok(SpectralState {
            grid,
            phi_hat: sample(&p.phi)?,
            psi_hat: sample(&p.psi)?,
        })
    }

    /// `max |F(ξ) - conj F(-ξ)| / max |F|` over both spectra.
    pub fn hermitian_defect(&self) -> f64 {
        [&self.phi_hat, &self.psi_hat]
            .iter()
            .map(|spec| {
                let peak = spec.iter().map(|v| v.norm()).fold(0.0, f64::max);
                if peak == 0.0 {
                    return 0.0;
                }
                (0..spec.len())
                    .map(|i| (spec[i] - spec[self.grid.mirror(i)].conj()).norm())
                    .fold(0.0, f64::max)
                    / peak
            })
            .fold(0.0, f64::max)
    }

    /// `(û(t), û_t(t))`.
    pub fn evolve(&self, t: f64) -> (Vec<Complex64>, Vec<Complex64>) {
        (0..self.grid.len())
            .into_par_iter()
            .map(|i| {
                let k = self.grid.frequency_norm(i);
                let (s, c) = (t * k).sin_cos();
                let u = self.phi_hat[i] * c + self.psi_hat[i] * sinc_radial(k, t);
                let ut = -self.phi_hat[i] * (k * s) + self.psi_hat[i] * c;
                (u, ut)
            })
            .unzip()
    }

    /// `∫ (u_t² + |∇u|²) dx` by Parseval on the grid.
    pub fn energy(&self, t: f64) -> f64 {
        let (u, ut) = self.evolve(t);
        let sum: f64 = (0..self.grid.len())
            .map(|i| ut[i].norm_sqr() + self.grid.frequency_norm(i).powi(2) * u[i].norm_sqr())
            .sum();
        let n = self.grid.dim.n() as i32;
        sum * (2.0 * self.grid.half_width).powi(n) / (self.grid.len() as f64).powi(2)
    }
}

/// Solution values on every grid node at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionGrid {
    pub grid: PeriodicGrid,
    pub t: f64,
    pub values: Vec<f64>,
    /// Largest imaginary part left by the inverse transform.
    pub error_estimate: f64,
}

impl SolutionGrid {
    pub fn at(&self, x: &[f64]) -> Result<f64> {
        Ok(self.values[self.grid.nearest(x)?])
    }

    pub fn samples(&self) -> impl Iterator<Item = SolutionSample> + '_ {
        self.values.iter().enumerate().map(|(i, &u)| SolutionSample {
            x: self.grid.point(i),
            t: self.t,
            u,
            method: Method::Spectral,
            error_estimate: self.error_estimate,
        })
    }
}

pub fn spectral_solve(p: &CauchyProblem, grid: &PeriodicGrid, t: f64) -> Result<SolutionGrid> {
    let state = SpectralState::new(p, *grid)?;
    spectral_solve_from(&state, p, t)
}

/// Several times from one transform of the data.
pub fn spectral_solve_from(state: &SpectralState, p: &CauchyProblem, t: f64) -> Result<SolutionGrid> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(WaveError::Domain(format!("time must be non-negative, got {t}")));
    }
    check_guard(&p.phi, &state.grid, t)?;
    check_guard(&p.psi, &state.grid, t)?;
    let (mut u, _) = state.evolve(t);
    transform(&state.grid, &mut u, FftDirection::Inverse);
    let scale = 1.0 / state.grid.len() as f64;
    Ok(SolutionGrid {
        grid: state.grid,
        t,
        values: u.iter().map(|v| v.re * scale).collect(),
        error_estimate: u.iter().map(|v| (v.im * scale).abs()).fold(0.0, f64::max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::point::solve_dalembert_point;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn single_mode() {
        let d = dim(2);
        let grid = PeriodicGrid::new(d, 32, PI).unwrap();
        let (k1, k2) = (3.0, -2.0);
        let phi = ScalarField::custom(d, Support::Periodic, move |x| (k1 * x[0] + k2 * x[1]).cos());
        let p = CauchyProblem::new(phi, ScalarField::zero(d)).unwrap();
        let t = 0.9;
        let sol = spectral_solve(&p, &grid, t).unwrap();
        let knorm = (k1 * k1 + k2 * k2).sqrt();
        for (i, &u) in sol.values.iter().enumerate() {
            let x = grid.point(i);
            let exact = (k1 * x[0] + k2 * x[1]).cos() * (knorm * t).cos();
            assert!((u - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn constant_velocity() {
        let d = dim(3);
        let grid = PeriodicGrid::new(d, 8, 1.0).unwrap();
        let p = CauchyProblem::new(ScalarField::zero(d), ScalarField::constant(d, 2.5)).unwrap();
        let sol = spectral_solve(&p, &grid, 1.7).unwrap();
        assert!(sol.values.iter().all(|u| (u - 2.5 * 1.7).abs() < 1e-13));
    }

    #[test]
    fn gaussian_matches_dalembert() {
        let d = dim(1);
        let phi = ScalarField::gaussian(d, 0.3, vec![0.2]).unwrap();
        let psi = ScalarField::gaussian(d, 0.5, vec![-0.3]).unwrap().scaled(0.7);
        let p = CauchyProblem::new(phi, psi).unwrap();
        let grid = PeriodicGrid::new(d, 1024, 12.0).unwrap();
        let sol = spectral_solve(&p, &grid, 2.0).unwrap();
        for i in (0..1024).step_by(17) {
            let x = grid.coordinate(i);
            if x.abs() > 8.0 {
                continue;
            }
            let exact = solve_dalembert_point(&p, x, 2.0).unwrap().u;
            assert!((sol.values[i] - exact).abs() < 1e-6, "{x}");
        }
    }

    #[test]
    fn guard_and_invariants() {
        let d = dim(1);
        let psi = ScalarField::gaussian(d, 0.5, vec![0.0]).unwrap();
        let p = CauchyProblem::new(ScalarField::zero(d), psi).unwrap();
        let grid = PeriodicGrid::new(d, 256, 6.0).unwrap();
        assert!(matches!(spectral_solve(&p, &grid, 3.0), Err(WaveError::DomainSize(_))));
        let state = SpectralState::new(&p, grid).unwrap();
        assert!(state.hermitian_defect() < 1e-12);
        let e0 = state.energy(0.0);
        for t in [0.5, 1.0, 1.5] {
            assert!((state.energy(t) - e0).abs() < 1e-12 * e0);
        }
        let lin = ScalarField::harmonic(d, crate::solvers::HarmonicPoly::Linear).unwrap();
        let p = CauchyProblem::new(lin, ScalarField::zero(d)).unwrap();
        assert!(matches!(spectral_solve(&p, &grid, 0.1), Err(WaveError::DomainSize(_))));
    }

    #[test]
    fn nearest_node_wraps() {
        let grid = PeriodicGrid::new(dim(2), 8, 1.0).unwrap();
        let i = grid.nearest(&[0.0, 0.25]).unwrap();
        assert_eq!(grid.point(i), vec![0.0, 0.25]);
        assert_eq!(grid.nearest(&[1.0, 0.0]).unwrap(), grid.nearest(&[-1.0, 0.0]).unwrap());
    }
}
