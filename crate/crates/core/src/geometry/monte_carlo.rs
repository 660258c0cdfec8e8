//! Fixed-seed Monte Carlo integration over balls and spheres, used as an
//! oracle independent of the quadrature rules.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::dimension::{sphere_area_unchecked, Dimension};
use crate::error::{Result, WaveError};

const CHUNK: usize = 1 << 15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub value: f64,
    /// One standard deviation of the estimator.
    pub std_error: f64,
    pub samples: usize,
}

impl MonteCarloEstimate {
    /// `|value - reference|` in units of the standard error.
    pub fn z_score(&self, reference: f64) -> f64 {
        let d = (self.value - reference).abs();
        if self.std_error > 0.0 {
            d / self.std_error
        } else if d <= 1e-12 * reference.abs().max(1e-300) {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonteCarlo {
    pub samples: usize,
    pub seed: u64,
}

impl Default for MonteCarlo {
    fn default() -> Self {
        MonteCarlo {
            samples: 1_000_000,
            seed: 0x5eed,
        }
    }
}

impl MonteCarlo {
    pub fn new(samples: usize, seed: u64) -> Self {
        MonteCarlo { samples, seed }
    }

    /// Sum and sum of squares of `sample(rng)` over `samples` draws, split into
    /// independently seeded chunks so the result does not depend on threading.
    fn accumulate<S>(&self, sample: S) -> (f64, f64)
    where
        S: Fn(&mut ChaCha8Rng, &mut Vec<f64>) -> f64 + Sync,
    {
        let chunks = self.samples.div_ceil(CHUNK);
        let partial: Vec<(f64, f64)> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(c as u64);
                let count = CHUNK.min(self.samples - c * CHUNK);
                let mut buf = Vec::new();
                let (mut s, mut s2) = (0.0, 0.0);
                for _ in 0..count {
                    let v = sample(&mut rng, &mut buf);
                    s += v;
                    s2 += v * v;
                }
                (s, s2)
            })
            .collect();
        partial
            .into_iter()
            .fold((0.0, 0.0), |(a, b), (s, s2)| (a + s, b + s2))
    }

    fn estimate(&self, scale: f64, (s, s2): (f64, f64)) -> MonteCarloEstimate {
        let n = self.samples as f64;
        let mean = s / n;
        let var = ((s2 / n - mean * mean) * n / (n - 1.0)).max(0.0);
        MonteCarloEstimate {
            value: scale * mean,
            std_error: scale * (var / n).sqrt(),
            samples: self.samples,
        }
    }

    fn check(&self, n: usize, radius: f64) -> Result<()> {
        Dimension::new(n)?;
        if self.samples < 2 {
            return Err(WaveError::Usage("Monte Carlo needs at least two samples".into()));
        }
        if !(radius > 0.0) {
            return Err(WaveError::Domain(format!("radius must be positive, got {radius}")));
        }
        Ok(())
    }

    /// `∫_{B(0,R)} f dx` by uniform draws in the cube `[-R, R]^n`, rejecting
    /// those outside the ball (hit-or-miss: rejected draws contribute zero).
    pub fn ball_integral<F>(&self, f: F, n: usize, radius: f64) -> Result<MonteCarloEstimate>
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        self.check(n, radius)?;
        let sums = self.accumulate(|rng, buf| {
            buf.resize(n, 0.0);
            let mut r2 = 0.0;
            for x in buf.iter_mut() {
                *x = radius * (2.0 * rng.random::<f64>() - 1.0);
                r2 += *x * *x;
            }
            if r2 < radius * radius {
                f(buf)
            } else {
                0.0
            }
        });
        Ok(self.estimate((2.0 * radius).powi(n as i32), sums))
    }

    /// `∫_{∂B(0,R)} f dσ` from normalized Gaussian directions.
    pub fn sphere_integral<F>(&self, f: F, n: usize, radius: f64) -> Result<MonteCarloEstimate>
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        self.check(n, radius)?;
        let sums = self.accumulate(|rng, buf| {
            buf.resize(n, 0.0);
            let mut norm = 0.0;
            while norm == 0.0 {
                norm = 0.0;
                for x in buf.iter_mut() {
                    *x = rng.sample(StandardNormal);
                    norm += *x * *x;
                }
            }
            let scale = radius / norm.sqrt();
            buf.iter_mut().for_each(|x| *x *= scale);
            f(buf)
        });
        Ok(self.estimate(
            sphere_area_unchecked(n) * radius.powi(n as i32 - 1),
            sums,
        ))
    }
}
