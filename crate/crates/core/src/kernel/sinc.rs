/// Below this value of `R|ξ|` the kernel switches to its Taylor series.
pub const SERIES_THRESHOLD: f64 = 1e-4;

/// `sin(R|ξ|)/|ξ|`, equal to `R` at `ξ = 0`.
pub fn sinc_kernel(xi: &[f64], radius: f64) -> f64 {
    let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
    sinc_radial(norm, radius)
}

/// `sin(R r)/r` for `r = |ξ| >= 0`.
pub fn sinc_radial(r: f64, radius: f64) -> f64 {
    let x = radius * r;
    if x.abs() < SERIES_THRESHOLD {
        let x2 = x * x;
        // sin(x)/x through x^6
        radius * (1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0)))
    } else {
        x.sin() / r
    }
}
