//! Product quadrature on the unit sphere `S^{n-1}` in the polar coordinates
//!
//! ```text
//! x_1     = sin φ_1 ··· sin φ_{n-2} sin φ_{n-1}
//! x_2     = sin φ_1 ··· sin φ_{n-2} cos φ_{n-1}
//! x_3     = sin φ_1 ··· cos φ_{n-2}
//! ...
//! x_n     = cos φ_1
//! ```
//!
//! with surface element `sin^{n-2} φ_1 ··· sin φ_{n-2} dφ`. Each latitude
//! `φ_k` is integrated by a Gauss rule in `ζ = cos φ_k` for the weight
//! `(1 - ζ²)^{(n-2-k)/2}`, which absorbs the `sin^{n-1-k}` Jacobian factor
//! exactly; the azimuth `φ_{n-1}` uses the uniform trapezoid rule.

use std::f64::consts::PI;

use super::dimension::{sphere_area_unchecked, Dimension};
use super::gauss::gauss_gegenbauer;
use super::Scalar;
use crate::error::{Result, WaveError};

#[derive(Debug, Clone, PartialEq)]
pub struct SphereQuadrature {
    pub dim: Dimension,
    /// Row-major `count × n` unit vectors.
    nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Polynomial degree integrated exactly.
    pub order: usize,
    pub latitude_points: usize,
    pub azimuth_points: usize,
}

impl SphereQuadrature {
    /// Latitude and azimuth node counts used when none are given. The
    /// product grows like `latitude^{n-2}`, so higher dimensions get coarser
    /// per-angle rules.
    pub fn default_sizes(n: usize) -> (usize, usize) {
        match n {
            0..=3 => (64, 128),
            4 => (20, 40),
            5 => (16, 32),
            6 => (10, 20),
            7 => (6, 12),
            _ => (4, 8),
        }
    }

    pub fn with_defaults(dim: Dimension) -> Result<Self> {
        let (lat, az) = Self::default_sizes(dim.n());
        Self::new(dim, lat, az)
    }

    /// `latitude_points` Gauss nodes per latitude angle and
    /// `azimuth_points` (even) trapezoid nodes in the azimuth.
    pub fn new(dim: Dimension, latitude_points: usize, azimuth_points: usize) -> Result<Self> {
        let n = dim.n();
        if n == 1 {
            return Ok(SphereQuadrature {
                dim,
                nodes: vec![-1.0, 1.0],
                weights: vec![1.0, 1.0],
                order: usize::MAX,
                latitude_points: 0,
                azimuth_points: 0,
            });
        }
        if azimuth_points < 2 || azimuth_points % 2 != 0 {
            return Err(WaveError::Usage(format!(
                "azimuth node count must be even and >= 2, got {azimuth_points}"
            )));
        }
        if n >= 3 && latitude_points == 0 {
            return Err(WaveError::Usage("latitude node count must be positive".into()));
        }

        let latitudes = n - 2;
        let rules = (1..=latitudes)
            .map(|k| gauss_gegenbauer(latitude_points, (n - 2 - k) as f64 / 2.0))
            .collect::<Result<Vec<_>>>()?;
        let az_weight = 2.0 * PI / azimuth_points as f64;
        let azimuth: Vec<(f64, f64)> = (0..azimuth_points)
            .map(|j| (2.0 * PI * j as f64 / azimuth_points as f64).sin_cos())
            .collect();

        let count = latitude_points.pow(latitudes as u32) * azimuth_points;
        let mut nodes = Vec::with_capacity(count * n);
        let mut weights = Vec::with_capacity(count);
        let mut index = vec![0usize; latitudes];
        let mut point = vec![0.0; n];
        loop {
            let mut sin_prod = 1.0;
            let mut w = az_weight;
            for (k, (rule, &i)) in rules.iter().zip(&index).enumerate() {
                let zeta = rule.nodes[i];
                point[n - 1 - k] = sin_prod * zeta;
                sin_prod *= (1.0 - zeta * zeta).max(0.0).sqrt();
                w *= rule.weights[i];
            }
            for &(s, c) in &azimuth {
                point[0] = sin_prod * s;
                point[1] = sin_prod * c;
                nodes.extend_from_slice(&point);
                weights.push(w);
            }
            // odometer over latitude indices
            let mut k = 0;
            while k < latitudes {
                index[k] += 1;
                if index[k] < latitude_points {
                    break;
                }
                index[k] = 0;
                k += 1;
            }
            if k == latitudes {
                break;
            }
        }

        let order = if latitudes == 0 {
            azimuth_points - 1
        } else {
            (2 * latitude_points - 1).min(azimuth_points - 1)
        };
        Ok(SphereQuadrature {
            dim,
            nodes,
            weights,
            order,
            latitude_points,
            azimuth_points,
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        let n = self.dim.n();
        &self.nodes[i * n..(i + 1) * n]
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.nodes
            .chunks_exact(self.dim.n())
            .zip(self.weights.iter().copied())
    }

    /// Total measure of `S^{n-1}` the weights should reproduce.
    pub fn exact_area(&self) -> f64 {
        sphere_area_unchecked(self.dim.n())
    }
}

/// `Σ_i w_i R^{n-1} g(center + R·node_i)`, the rule's approximation of
/// `∫_{∂B(center,R)} g dσ`.
pub fn integrate_on_sphere<T, G>(g: G, center: &[f64], radius: f64, q: &SphereQuadrature) -> Result<T>
where
    T: Scalar,
    G: Fn(&[f64]) -> T,
{
    let n = q.dim.n();
    if center.len() != n {
        return Err(WaveError::Usage(format!(
            "center has {} components but the quadrature is for n = {n}",
            center.len()
        )));
    }
    if !(radius > 0.0) {
        return Err(WaveError::Domain(format!("radius must be positive, got {radius}")));
    }
    let mut y = vec![0.0; n];
    let mut acc = T::zero();
    for (node, w) in q.nodes() {
        for ((yi, ci), ni) in y.iter_mut().zip(center).zip(node) {
            *yi = ci + radius * ni;
        }
        acc = acc + g(&y) * w;
    }
    Ok(acc * radius.powi(n as i32 - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::dimension::gamma_half;
    use approx::assert_relative_eq;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    /// `∫_{S^{n-1}} x^α dσ = 2 Π Γ(β_i) / Γ(Σ β_i)`, `β_i = (α_i + 1)/2`,
    /// zero unless every `α_i` is even.
    fn monomial_integral(alpha: &[usize]) -> f64 {
        if alpha.iter().any(|a| a % 2 == 1) {
            return 0.0;
        }
        let num: f64 = alpha.iter().map(|&a| gamma_half(a + 1)).product();
        let total: usize = alpha.iter().map(|a| a + 1).sum();
        2.0 * num / gamma_half(total)
    }

    #[test]
    fn weights_sum_to_area_and_nodes_are_unit() {
        for n in 1..=7 {
            let q = SphereQuadrature::new(dim(n), 5, 10).unwrap();
            let s: f64 = q.weights.iter().sum();
            assert_relative_eq!(s, q.exact_area(), max_relative = 1e-12);
            for (x, w) in q.nodes() {
                assert!(w > 0.0);
                let norm: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                assert!((norm - 1.0).abs() < 1e-14);
            }
            for k in 0..n {
                let first: f64 = q.nodes().map(|(x, w)| w * x[k]).sum();
                assert!(first.abs() < 1e-12, "n={n} k={k} {first}");
            }
        }
    }

    #[test]
    fn default_rules_have_the_right_area() {
        for n in 2..=4 {
            let q = SphereQuadrature::with_defaults(dim(n)).unwrap();
            let s: f64 = q.weights.iter().sum();
            assert_relative_eq!(s, q.exact_area(), max_relative = 1e-12);
        }
    }

    #[test]
    fn exact_on_monomials_up_to_order() {
        for n in 2..=5 {
            let q = SphereQuadrature::new(dim(n), 4, 8).unwrap();
            assert_eq!(q.order, 7);
            // every multi-index with |α| <= 7
            let mut alpha = vec![0usize; n];
            loop {
                let deg: usize = alpha.iter().sum();
                if deg <= q.order {
                    let v: f64 = q
                        .nodes()
                        .map(|(x, w)| {
                            w * x.iter().zip(&alpha).map(|(xi, &a)| xi.powi(a as i32)).product::<f64>()
                        })
                        .sum();
                    let exact = monomial_integral(&alpha);
                    assert!(
                        (v - exact).abs() <= 1e-10 * exact.abs().max(1.0),
                        "n={n} alpha={alpha:?} {v} vs {exact}"
                    );
                }
                let mut k = 0;
                while k < n {
                    alpha[k] += 1;
                    if alpha[k] <= q.order {
                        break;
                    }
                    alpha[k] = 0;
                    k += 1;
                }
                if k == n {
                    break;
                }
            }
        }
    }

    #[test]
    fn integrate_examples() {
        let q = SphereQuadrature::new(dim(3), 8, 16).unwrap();
        let one: f64 = integrate_on_sphere(|_| 1.0, &[0.3, -1.0, 2.0], 1.5, &q).unwrap();
        assert_relative_eq!(one, 4.0 * PI * 1.5 * 1.5, max_relative = 1e-13);
        let x3sq: f64 = integrate_on_sphere(|x| x[2] * x[2], &[0.0; 3], 1.0, &q).unwrap();
        assert_relative_eq!(x3sq, 4.0 * PI / 3.0, max_relative = 1e-13);
        let x1: f64 = integrate_on_sphere(|x| x[0], &[0.0; 3], 2.0, &q).unwrap();
        assert!(x1.abs() < 1e-13);
    }

    #[test]
    fn usage_errors() {
        let q = SphereQuadrature::new(dim(3), 4, 8).unwrap();
        let r: Result<f64> = integrate_on_sphere(|_| 1.0, &[0.0, 0.0], 1.0, &q);
        assert!(matches!(r, Err(WaveError::Usage(_))));
        assert!(SphereQuadrature::new(dim(3), 4, 7).is_err());
        assert!(SphereQuadrature::new(dim(3), 0, 8).is_err());
    }
}
