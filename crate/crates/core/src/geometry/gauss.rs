//! One-dimensional Gauss rules.
//!
//! `gauss_gegenbauer(k, a)` integrates `f(x) (1 - x²)^a` on `[-1, 1]` exactly
//! for polynomials `f` of degree `<= 2k - 1`. Nodes come from the
//! Golub–Welsch eigenvalue problem and are polished by Newton steps on the
//! orthonormal recurrence; weights are Christoffel numbers evaluated from
//! the same recurrence. Legendre is the case `a = 0`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::{DMatrix, SymmetricEigen};

use super::dimension::gamma_half;
use crate::error::{Result, WaveError};

#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    /// Exponent `a` of the weight `(1 - x²)^a`.
    pub exponent: f64,
    /// Ascending nodes in `(-1, 1)`.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫_a^b f`, valid for a Legendre rule only.
    pub fn integrate<F: Fn(f64) -> f64>(&self, lo: f64, hi: f64, f: F) -> f64 {
        debug_assert!(self.exponent == 0.0);
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
    }

    /// Nodes and weights affinely mapped to `[lo, hi]`, Legendre only.
    pub fn mapped(&self, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        (
            self.nodes.iter().map(|x| mid + half * x).collect(),
            self.weights.iter().map(|w| half * w).collect(),
        )
    }
}

/// `∫_{-1}^{1} (1 - x²)^a dx = √π Γ(a+1) / Γ(a+3/2)` for `2a` a non-negative integer.
pub fn gegenbauer_mass(a: f64) -> f64 {
    let two_a = (2.0 * a).round() as usize;
    gamma_half(1) * gamma_half(two_a + 2) / gamma_half(two_a + 3)
}

fn off_diagonal(k: usize, a: f64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let k = k as f64;
    (k * (k + 2.0 * a) / ((2.0 * k + 2.0 * a + 1.0) * (2.0 * k + 2.0 * a - 1.0))).sqrt()
}

/// Orthonormal recurrence at `x`: returns `(p_k(x), p_k'(x), Σ_{j<k} p_j(x)²)`.
fn recurrence(k: usize, a: f64, mass: f64, x: f64) -> (f64, f64, f64) {
    let mut p_prev = 0.0;
    let mut p = 1.0 / mass.sqrt();
    let mut dp_prev = 0.0;
    let mut dp = 0.0;
    let mut sum_sq = 0.0;
    for j in 0..k {
        sum_sq += p * p;
        let b_next = off_diagonal(j + 1, a);
        let b_here = off_diagonal(j, a);
        let p_next = (x * p - b_here * p_prev) / b_next;
        let dp_next = (p + x * dp - b_here * dp_prev) / b_next;
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
    }
    (p, dp, sum_sq)
}

fn build(k: usize, a: f64) -> GaussRule {
    let mass = gegenbauer_mass(a);
    let jacobi = DMatrix::from_fn(k, k, |i, j| {
        if i + 1 == j {
            off_diagonal(j, a)
        } else if j + 1 == i {
            off_diagonal(i, a)
        } else {
            0.0
        }
    });
    let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    nodes.sort_by(|x, y| x.total_cmp(y));

    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (p, dp, _) = recurrence(k, a, mass, *x);
            if dp == 0.0 {
                break;
            }
            *x -= p / dp;
        }
    }
    // The rule is symmetric; enforce it exactly.
    for i in 0..k / 2 {
        let x = 0.5 * (nodes[k - 1 - i] - nodes[i]);
        nodes[i] = -x;
        nodes[k - 1 - i] = x;
    }
    if k % 2 == 1 {
        nodes[k / 2] = 0.0;
    }
    let mut weights: Vec<f64> = nodes
        .iter()
        .map(|&x| 1.0 / recurrence(k, a, mass, x).2)
        .collect();
    for i in 0..k / 2 {
        let w = 0.5 * (weights[i] + weights[k - 1 - i]);
        weights[i] = w;
        weights[k - 1 - i] = w;
    }
    GaussRule {
        exponent: a,
        nodes,
        weights,
    }
}

type RuleCache = RwLock<HashMap<(usize, u64), Arc<GaussRule>>>;

fn cache() -> &'static RuleCache {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Gauss rule for the weight `(1 - x²)^a` on `[-1, 1]` with `k` nodes.
/// `2a` must be a non-negative integer. Rules are memoized.
pub fn gauss_gegenbauer(k: usize, a: f64) -> Result<Arc<GaussRule>> {
    if k == 0 {
        return Err(WaveError::Usage("a Gauss rule needs at least one node".into()));
    }
    if a < 0.0 || (2.0 * a).fract() != 0.0 {
        return Err(WaveError::Domain(format!(
            "weight exponent {a} must be a non-negative multiple of 1/2"
        )));
    }
    let key = (k, a.to_bits());
    if let Some(rule) = cache().read().expect("rule cache poisoned").get(&key) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(build(k, a));
    cache()
        .write()
        .expect("rule cache poisoned")
        .entry(key)
        .or_insert_with(|| rule.clone());
    Ok(rule)
}

pub fn gauss_legendre(k: usize) -> Result<Arc<GaussRule>> {
    gauss_gegenbauer(k, 0.0)
}

const KRONROD_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const GAUSS7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let center = f(mid);
    let mut kronrod = KRONROD_WEIGHTS[7] * center;
    let mut gauss = GAUSS7_WEIGHTS[3] * center;
    for j in 0..7 {
        let dx = half * KRONROD_NODES[j];
        let pair = f(mid - dx) + f(mid + dx);
        kronrod += KRONROD_WEIGHTS[j] * pair;
        if j % 2 == 1 {
            gauss += GAUSS7_WEIGHTS[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive Gauss–Kronrod (7/15) integration by recursive bisection.
/// Returns the value and the accumulated error estimate.
pub fn adaptive_integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)> {
    fn recurse<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, whole: (f64, f64), tol: f64, depth: u32) -> (f64, f64) {
        if whole.1 <= tol.max(f64::EPSILON * whole.0.abs()) || depth == 0 {
            return whole;
        }
        let mid = 0.5 * (lo + hi);
        let left = kronrod15(f, lo, mid);
        let right = kronrod15(f, mid, hi);
        let l = recurse(f, lo, mid, left, 0.5 * tol, depth - 1);
        let r = recurse(f, mid, hi, right, 0.5 * tol, depth - 1);
        (l.0 + r.0, l.1 + r.1)
    }
    if lo == hi {
        return Ok((0.0, 0.0));
    }
    let whole = kronrod15(&f, lo, hi);
    let (value, err) = recurse(&f, lo, hi, whole, tol, 40);
    if !value.is_finite() {
        return Err(WaveError::Evaluation(format!(
            "integrand is not finite on [{lo}, {hi}]"
        )));
    }
    Ok((value, err))
}
