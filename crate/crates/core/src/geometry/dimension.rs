use std::f64::consts::PI;
use std::fmt;

use crate::error::{Result, WaveError};

/// Largest supported spatial dimension.
pub const MAX_DIM: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Odd,
    Even,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Odd => f.write_str("odd"),
            Parity::Even => f.write_str("even"),
        }
    }
}

/// Spatial dimension `n` of the wave equation, `1 <= n <= MAX_DIM`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dimension(usize);

impl Dimension {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(WaveError::Domain("dimension must be at least 1".into()));
        }
        if n > MAX_DIM {
            return Err(WaveError::Domain(format!(
                "dimension {n} exceeds the supported maximum {MAX_DIM}"
            )));
        }
        Ok(Dimension(n))
    }

    #[inline]
    pub fn n(self) -> usize {
        self.0
    }

    pub fn parity(self) -> Parity {
        if self.0 % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    /// Number of `(1/t d/dt)` applications in the solution operator:
    /// `(n-3)/2` for odd `n >= 3`, `(n-2)/2` for even `n >= 2`, `None` for `n = 1`.
    pub fn radial_order(self) -> Option<usize> {
        match (self.parity(), self.0) {
            (_, 1) => None,
            (Parity::Odd, n) => Some((n - 3) / 2),
            (Parity::Even, n) => Some((n - 2) / 2),
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `Γ(k/2)` for a positive integer `k`, by the recursion `Γ(x+1) = xΓ(x)`
/// from `Γ(1/2) = √π` and `Γ(1) = 1`. Exact to rounding for every argument
/// the dimensional constants need.
pub fn gamma_half(k: usize) -> f64 {
    assert!(k > 0, "Γ(0) is a pole");
    let (mut value, mut x) = if k % 2 == 0 {
        (1.0, 1.0)
    } else {
        (PI.sqrt(), 0.5)
    };
    let target = k as f64 / 2.0;
    while x < target {
        value *= x;
        x += 1.0;
    }
    value
}

/// Surface area `ω_n = 2π^{n/2}/Γ(n/2)` of the unit sphere in `ℝⁿ`.
pub fn unit_sphere_area(n: usize) -> Result<f64> {
    let dim = Dimension::new(n)?;
    Ok(sphere_area_unchecked(dim.n()))
}

/// Volume `v_n = π^{n/2}/Γ(n/2 + 1)` of the unit ball in `ℝⁿ`.
pub fn unit_ball_volume(n: usize) -> Result<f64> {
    let dim = Dimension::new(n)?;
    Ok(PI.powf(dim.n() as f64 / 2.0) / gamma_half(dim.n() + 2))
}

// Internal callers sometimes need ω_{n+1} for descent with n = MAX_DIM.
pub(crate) fn sphere_area_unchecked(n: usize) -> f64 {
    2.0 * PI.powf(n as f64 / 2.0) / gamma_half(n)
}

fn double_factorial(k: usize) -> f64 {
    (1..=k).rev().step_by(2).map(|j| j as f64).product()
}

/// Dimensional constants shared by the identities and the solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeomConstants {
    pub dim: Dimension,
    /// `ω_n`
    pub omega_n: f64,
    /// `v_n`
    pub v_n: f64,
    /// `1 / ((n-2)(n-4)···1)` for odd `n >= 3`.
    pub c_n: Option<f64>,
    /// `1 / (n(n-2)···2)` for even `n >= 2`.
    pub d_n: Option<f64>,
}

impl GeomConstants {
    pub fn new(dim: Dimension) -> Self {
        let n = dim.n();
        let omega_n = sphere_area_unchecked(n);
        let v_n = PI.powf(n as f64 / 2.0) / gamma_half(n + 2);
        let (c_n, d_n) = match dim.parity() {
            Parity::Odd if n >= 3 => (Some(1.0 / double_factorial(n - 2)), None),
            Parity::Even => (None, Some(1.0 / double_factorial(n))),
            _ => (None, None),
        };
        GeomConstants {
            dim,
            omega_n,
            v_n,
            c_n,
            d_n,
        }
    }

    /// `c_n` for odd dimensions, `d_n` for even ones.
    pub fn kernel_constant(&self) -> Result<f64> {
        self.c_n.or(self.d_n).ok_or_else(|| {
            WaveError::Usage(format!("no kernel constant in dimension {}", self.dim))
        })
    }

    /// The same constant written through sphere areas instead of the
    /// double-factorial product:
    /// `c_n = ω_n / (2 ω_{n-1} 2^m m!)` and `d_n = 1 / (n 2^{m'} m'!)`.
    pub fn kernel_constant_from_areas(&self) -> Result<f64> {
        let n = self.dim.n();
        let m = self.dim.radial_order().ok_or_else(|| {
            WaveError::Usage(format!("no kernel constant in dimension {}", self.dim))
        })?;
        let two_m_fact = (1..=m).map(|j| 2.0 * j as f64).product::<f64>();
        Ok(match self.dim.parity() {
            Parity::Odd => {
                self.omega_n / (2.0 * sphere_area_unchecked(n - 1) * two_m_fact)
            }
            Parity::Even => 1.0 / (n as f64 * two_m_fact),
        })
    }
}
