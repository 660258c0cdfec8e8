use rayon::prelude::*;

use crate::error::{Result, WaveError};

/// Solution values on a cube of `points` nodes per axis at consecutive time
/// levels, last axis fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Slab {
    pub dim: usize,
    pub points: usize,
    pub levels: Vec<Vec<f64>>,
}

impl Slab {
    /// Sample `u` on `center + hx·(j - (P-1)/2)` at times
    /// `t0 + ht·(k - (levels-1)/2)`.
    pub fn sample<U>(center: &[f64], t0: f64, points: usize, levels: usize, hx: f64, ht: f64, u: U) -> Result<Self>
    where
        U: Fn(&[f64], f64) -> Result<f64> + Sync,
    {
        let n = center.len();
        let mid_x = (points as f64 - 1.0) / 2.0;
        let mid_t = (levels as f64 - 1.0) / 2.0;
        let per_level = points.pow(n as u32);
        let flat: Vec<f64> = (0..levels * per_level)
            .into_par_iter()
            .map(|i| {
                let (level, mut rest) = (i / per_level, i % per_level);
                let mut x = vec![0.0; n];
                for a in (0..n).rev() {
                    x[a] = center[a] + hx * ((rest % points) as f64 - mid_x);
                    rest /= points;
                }
                u(&x, t0 + ht * (level as f64 - mid_t))
            })
            .collect::<Result<_>>()?;
        Ok(Slab {
            dim: n,
            points,
            levels: flat.chunks(per_level).map(<[f64]>::to_vec).collect(),
        })
    }
}

/// `max |δ_t² u / h_t² - Σ_a δ_a² u / h_x²|` over interior nodes.
pub fn wave_residual(slab: &Slab, hx: f64, ht: f64) -> Result<f64> {
    let n = slab.dim;
    let p = slab.points;
    if slab.levels.len() < 3 || p < 3 || n == 0 {
        return Err(WaveError::Usage(format!(
            "slab needs at least 3 time levels and 3 points per axis, got {} and {p}",
            slab.levels.len()
        )));
    }
    if !(hx > 0.0 && ht > 0.0) {
        return Err(WaveError::Domain(format!("steps must be positive, got {hx}, {ht}")));
    }
    let per_level = p.pow(n as u32);
    if slab.levels.iter().any(|l| l.len() != per_level) {
        return Err(WaveError::Usage(format!("every level must hold {per_level} values")));
    }
    let strides: Vec<usize> = (0..n).map(|a| p.pow((n - 1 - a) as u32)).collect();
    let mut worst = 0.0f64;
    for k in 1..slab.levels.len() - 1 {
        let (prev, cur, next) = (&slab.levels[k - 1], &slab.levels[k], &slab.levels[k + 1]);
        for i in 0..per_level {
            let interior = strides.iter().all(|&s| {
                let j = (i / s) % p;
                j > 0 && j < p - 1
            });
            if !interior {
                continue;
            }
            let utt = (next[i] - 2.0 * cur[i] + prev[i]) / (ht * ht);
            let lap: f64 = strides
                .iter()
                .map(|&s| (cur[i + s] - 2.0 * cur[i] + cur[i - s]) / (hx * hx))
                .sum();
            worst = worst.max((utt - lap).abs());
        }
    }
    Ok(worst)
}
