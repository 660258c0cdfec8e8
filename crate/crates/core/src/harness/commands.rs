use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::config::{Command, ConvergeSpec, ConvergeTarget, Oracle, Overrides, RunConfig};
use super::report::{num, Check, Provenance, Report};
use crate::error::{Result, WaveError};
use crate::geometry::{
    reduce_ball_integral_with, reduce_sphere_integral_with, Dimension, GeomConstants, MonteCarlo, Parity,
    ReductionPoints, SphereQuadrature,
};
use crate::kernel::{
    ball_weighted_exponential_average_via, normalized_kernel_constant, verify_even_identity, verify_identity,
    verify_odd_identity, BallRoute, KernelQuery, RadialDerivativeSpec, BASE_POINTS,
};
use crate::solvers::{
    io::write_grid_binary, solve_even_point, solve_odd_point, spectral_solve, wave_residual, CauchyProblem,
    MeanRules, Method, PeriodicGrid, PointSolver, ScalarField, Slab, SolutionGrid, SolutionSample,
};

/// Residuals at or below this are treated as rounding noise by `converge`.
pub const SATURATION_FLOOR: f64 = 1e-12;

/// Load, apply the command-line overrides, run, and save.
pub fn run_file(path: &std::path::Path, overrides: &Overrides) -> Result<Report> {
    let cfg = RunConfig::load(path)?.with_overrides(overrides)?;
    run(&cfg)
}

/// Dispatch on the configured command. The report is written to the output
/// path when one is set.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    let report = match cfg.command {
        Command::Constants => constants(cfg)?,
        Command::VerifyReduction => verify_reduction(cfg)?,
        Command::VerifyIdentities => verify_identities(cfg)?,
        Command::Solve => solve(cfg)?,
        Command::Converge => converge(cfg)?,
    };
    if let Some(path) = &cfg.output {
        report.save(path)?;
    }
    Ok(report)
}

fn provenance(cfg: &RunConfig) -> Provenance {
    Provenance {
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: cfg.command,
        config_sha256: cfg.source_hash.clone(),
        seed: cfg.seed,
    }
}

fn tol(cfg: &RunConfig, default: f64) -> f64 {
    cfg.tolerance.unwrap_or(default)
}

fn relative(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }
}

fn mean_rules(cfg: &RunConfig, dim: Dimension) -> Result<MeanRules> {
    let q = &cfg.quadrature;
    let defaults = MeanRules::with_defaults(dim)?;
    if q.nodes.is_none() && q.latitude.is_none() && q.azimuth.is_none() && q.radial.is_none() {
        return Ok(defaults);
    }
    let (lat, az) = SphereQuadrature::default_sizes(dim.n());
    let lat = q.latitude.or(q.nodes).unwrap_or(lat);
    let az = q.azimuth.or(q.nodes.map(|k| 2 * k)).unwrap_or(az);
    let radial = q.radial.or(q.nodes).unwrap_or(defaults.radial_points);
    Ok(MeanRules::new(SphereQuadrature::new(dim, lat, az)?, radial))
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn unit_vector(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| r.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

fn constants(cfg: &RunConfig) -> Result<Report> {
    let mut report = Report::new(
        provenance(cfg),
        &["n", "name", "product", "from_areas", "normalized", "reciprocal"],
    );
    let bound = tol(cfg, 1e-10);
    for &n in &cfg.dims {
        let dim = Dimension::new(n)?;
        let g = GeomConstants::new(dim);
        let product = g.kernel_constant()?;
        let areas = g.kernel_constant_from_areas()?;
        let normalized = normalized_kernel_constant(dim)?;
        let name = match dim.parity() {
            Parity::Odd => format!("c_{n}"),
            Parity::Even => format!("d_{n}"),
        };
        let worst = relative(areas, product).max(relative(normalized, product));
        report.push(
            vec![n.to_string(), name, num(product), num(areas), num(normalized), format!("{:.0}", 1.0 / product)],
            Check::at_most("relative_disagreement", worst, bound),
        );
    }
    Ok(report)
}

fn verify_reduction(cfg: &RunConfig) -> Result<Report> {
    let mut report = Report::new(
        provenance(cfg),
        &["n", "radius", "profile", "measure", "reference", "quadrature", "reference_value", "std_error"],
    );
    let points = cfg
        .quadrature
        .nodes
        .map_or_else(ReductionPoints::default, |k| ReductionPoints { inner: k, outer: k });
    let samples = cfg.quadrature.mc_samples.unwrap_or(1_000_000);
    let closed_tol = tol(cfg, 1e-10);
    let mut stream = 0u64;
    for &n in &cfg.dims {
        for &radius in &cfg.radii {
            for &profile in &cfg.profiles {
                let f = |s: f64| profile.eval(s);
                let on_last = |x: &[f64]| profile.eval(x[n - 1]);
                for measure in ["ball", "sphere"] {
                    let (quad, closed) = if measure == "ball" {
                        (reduce_ball_integral_with(f, radius, n, points)?, profile.ball_closed_form(radius, n))
                    } else {
                        (reduce_sphere_integral_with(f, radius, n, points)?, profile.sphere_closed_form(radius, n))
                    };
                    let mc = MonteCarlo::new(samples, cfg.seed.wrapping_add(stream));
                    stream += 1;
                    let est = if measure == "ball" {
                        mc.ball_integral(on_last, n, radius)?
                    } else {
                        mc.sphere_integral(on_last, n, radius)?
                    };
                    let head = |reference: &str, value: f64, err: f64| {
                        vec![
                            n.to_string(),
                            num(radius),
                            profile.name().to_string(),
                            measure.to_string(),
                            reference.to_string(),
                            num(quad),
                            num(value),
                            num(err),
                        ]
                    };
                    report.push(
                        head("closed_form", closed, 0.0),
                        Check::at_most("relative_error", relative(quad, closed), closed_tol),
                    );
                    report.push(
                        head("monte_carlo", est.value, est.std_error),
                        Check::at_most("z_score", est.z_score(quad), cfg.sigma_limit),
                    );
                }
            }
        }
    }
    Ok(report)
}

/// Identity residual bounds by dimension.
pub fn identity_tolerance(n: usize) -> f64 {
    match n {
        3 => 1e-10,
        _ if n % 2 == 1 => 1e-8,
        _ => 1e-6,
    }
}

struct Draw {
    n: usize,
    index: usize,
    xi: Vec<f64>,
    radius: f64,
}

fn identity_row(d: &Draw, q: &KernelQuery) -> Result<Vec<(Vec<String>, &'static str, f64)>> {
    let r = verify_identity(q)?;
    let mut base = vec![
        d.n.to_string(),
        d.index.to_string(),
        num(d.radius),
        num(r.xi_norm),
        num(d.radius * r.xi_norm),
    ];
    let mut rows = Vec::new();
    let mut identity = base.clone();
    identity.extend([
        "identity".to_string(),
        num(r.lhs),
        num(r.rhs.re),
        num(r.rhs.im),
        num(r.h),
        r.ill_conditioned.to_string(),
    ]);
    rows.push((identity, "identity_residual", r.residual_real.max(r.residual_imag)));
    if q.dim.parity() == Parity::Even {
        let descent = ball_weighted_exponential_average_via(q, BallRoute::Descent, BASE_POINTS)?;
        let direct = ball_weighted_exponential_average_via(q, BallRoute::Direct, BASE_POINTS)?;
        let scale = ball_weighted_exponential_average_via(&KernelQuery::on_axis(q.dim, 0.0, d.radius)?, BallRoute::Descent, BASE_POINTS)?.norm();
        base.extend([
            "descent".to_string(),
            num(direct.re),
            num(descent.re),
            num(descent.im),
            num(0.0),
            false.to_string(),
        ]);
        rows.push((base, "descent_vs_direct", (descent - direct).norm() / scale));
    }
    Ok(rows)
}

fn verify_identities(cfg: &RunConfig) -> Result<Report> {
    let mut report = Report::new(
        provenance(cfg),
        &["n", "draw", "radius", "xi_norm", "phase", "kind", "lhs", "rhs_re", "rhs_im", "h", "ill_conditioned"],
    );
    let (r_lo, r_hi) = cfg.radius_range;
    let mut draws = Vec::new();
    for &n in &cfg.dims {
        let dim = Dimension::new(n)?;
        if dim.radial_order().is_none() {
            return Err(WaveError::Usage(format!("no kernel identity in dimension {n}")));
        }
        let mut r = rng(cfg.seed, n as u64);
        for index in 0..cfg.draws {
            let radius = r_lo + (r_hi - r_lo) * r.random::<f64>();
            let norm = cfg.max_phase / radius * r.random::<f64>();
            let xi = unit_vector(&mut r, n).into_iter().map(|v| v * norm).collect();
            draws.push(Draw { n, index, xi, radius });
        }
    }
    let rows: Vec<_> = draws
        .par_iter()
        .map(|d| identity_row(d, &KernelQuery::new(d.xi.clone(), d.radius)?))
        .collect::<Result<_>>()?;
    for (d, group) in draws.iter().zip(rows) {
        for (values, check, value) in group {
            let bound = match check {
                "descent_vs_direct" => cfg.tolerance.unwrap_or(cfg.descent_tolerance),
                _ => tol(cfg, identity_tolerance(d.n)),
            };
            report.push(values, Check::at_most(check, value, bound));
        }
    }
    Ok(report)
}

fn probes(cfg: &RunConfig, n: usize) -> Vec<Vec<f64>> {
    let mut out = cfg.probes.points.clone();
    let mut r = rng(cfg.seed, 1 << 32);
    for _ in 0..cfg.probes.random {
        let dir = unit_vector(&mut r, n);
        let rho = cfg.probes.radius * r.random::<f64>().powf(1.0 / n as f64);
        out.push(dir.into_iter().map(|v| v * rho).collect());
    }
    out
}

fn build_problem(cfg: &RunConfig, dim: Dimension) -> Result<CauchyProblem> {
    CauchyProblem::new(cfg.phi.build(dim)?, cfg.psi.build(dim)?)
}

fn solve(cfg: &RunConfig) -> Result<Report> {
    if cfg.dims.len() != 1 {
        return Err(WaveError::config("run.dim", "solve takes a single dimension"));
    }
    let dim = cfg.dim()?;
    let n = dim.n();
    let problem = build_problem(cfg, dim)?;
    let grid = cfg
        .grid
        .map(|g| PeriodicGrid::new(dim, g.points, g.half_width))
        .transpose()?;
    let spectral_method = cfg.method == Some(Method::Spectral);
    if let Some(m) = cfg.method {
        if m != Method::Spectral && m != Method::for_dim(dim) {
            return Err(WaveError::config("solve.method", format!("{m} does not apply in dimension {n}")));
        }
    }
    let oracle = match cfg.oracle {
        Oracle::None if cfg.phi.is_harmonic() && cfg.psi.is_harmonic() => Oracle::Harmonic,
        o => o,
    };
    if oracle == Oracle::Spectral && spectral_method {
        return Err(WaveError::config("solve.oracle", "the spectral oracle needs a point method"));
    }
    let mut x_probes = probes(cfg, n);
    if let Some(g) = &grid {
        // Spectral values live on nodes; compare there.
        for x in &mut x_probes {
            *x = g.point(g.nearest(x)?);
        }
    }
    let solver = if spectral_method {
        None
    } else {
        let rules = if n >= 2 { Some(mean_rules(cfg, dim)?) } else { None };
        Some(match rules {
            Some(r) => PointSolver::with_rules(problem.clone(), r)?,
            None => PointSolver::new(problem.clone())?,
        })
    };

    let mut columns: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    columns.extend(["t", "u", "method", "error_estimate", "oracle", "oracle_value"].map(String::from));
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut report = Report::new(provenance(cfg), &cols);

    let mut cases: Vec<(SolutionSample, Option<f64>)> = Vec::new();
    let mut last_grid: Option<SolutionGrid> = None;
    for &t in &cfg.times {
        let spectral = match (&grid, spectral_method || oracle == Oracle::Spectral) {
            (Some(g), true) => Some(spectral_solve(&problem, g, t)?),
            _ => None,
        };
        let samples: Vec<SolutionSample> = match (&solver, &spectral) {
            (Some(s), _) => x_probes.par_iter().map(|x| s.solve(x, t)).collect::<Result<_>>()?,
            (None, Some(sg)) => x_probes
                .iter()
                .map(|x| {
                    Ok(SolutionSample {
                        x: x.clone(),
                        t,
                        u: sg.at(x)?,
                        method: Method::Spectral,
                        error_estimate: sg.error_estimate,
                    })
                })
                .collect::<Result<_>>()?,
            (None, None) => unreachable!("spectral solves require a grid"),
        };
        for s in samples {
            let o = match oracle {
                Oracle::None => None,
                Oracle::Harmonic => Some(problem.phi.eval(&s.x) + t * problem.psi.eval(&s.x)),
                Oracle::Spectral => Some(spectral.as_ref().expect("grid present").at(&s.x)?),
            };
            cases.push((s, o));
        }
        if spectral_method {
            last_grid = spectral;
        }
    }
    if let (Some(path), Some(g)) = (&cfg.grid_output, &last_grid) {
        let file = std::fs::File::create(path).map_err(|e| WaveError::Io(format!("{}: {e}", path.display())))?;
        write_grid_binary(std::io::BufWriter::new(file), g)?;
    }

    // Relative L∞: errors scaled by the largest oracle magnitude.
    let scale = cases
        .iter()
        .filter_map(|(_, o)| o.map(f64::abs))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    for (s, o) in cases {
        let mut values: Vec<String> = s.x.iter().map(|&v| num(v)).collect();
        values.extend([num(s.t), num(s.u), s.method.name().to_string(), num(s.error_estimate)]);
        let check = match o {
            None => {
                values.extend(["none".to_string(), String::new()]);
                Check::at_most("error_estimate", s.error_estimate, tol(cfg, 1e-6))
            }
            Some(v) => {
                let name = if oracle == Oracle::Harmonic { "harmonic" } else { "spectral" };
                values.extend([name.to_string(), num(v)]);
                let default = if oracle == Oracle::Harmonic { 1e-8 } else { 1e-3 };
                Check::at_most("relative_linf_error", (s.u - v).abs() / scale, tol(cfg, default))
            }
        };
        report.push(values, check);
    }
    Ok(report)
}

/// Least-squares slope of `ln r` against `ln h`.
pub fn fitted_order(levels: &[f64], residuals: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = levels.iter().zip(residuals).map(|(h, r)| (h.ln(), r.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn level_residual(cfg: &RunConfig, c: &ConvergeSpec, dim: Dimension, h: f64) -> Result<f64> {
    let n = dim.n();
    let t0 = cfg.times[0];
    let x0 = cfg.probes.points.first().cloned().unwrap_or_else(|| vec![0.3; n]);
    match c.target {
        ConvergeTarget::WaveResidual => {
            let slab = Slab::sample(&vec![0.4; n], 0.8, 3, 3, h, 0.5 * h, |x, t| Ok(x[0].cos() * t.cos()))?;
            wave_residual(&slab, h, 0.5 * h)
        }
        ConvergeTarget::MeansResidual => {
            let solver = PointSolver::with_rules(build_problem(cfg, dim)?, mean_rules(cfg, dim)?)?;
            let slab = Slab::sample(&x0, t0, 3, 3, h, 0.5 * h, |x, t| Ok(solver.solve(x, t)?.u))?;
            wave_residual(&slab, h, 0.5 * h)
        }
        ConvergeTarget::OddIdentity | ConvergeTarget::EvenIdentity => {
            let q = KernelQuery::on_axis(dim, c.xi, c.radius)?;
            let m = dim.radial_order().unwrap_or(0);
            let spec = RadialDerivativeSpec::new(m, h)?;
            let r = match dim.parity() {
                Parity::Odd => verify_odd_identity(&q, &spec)?,
                Parity::Even => verify_even_identity(&q, &spec)?,
            };
            Ok(r.residual_real.max(r.residual_imag))
        }
        ConvergeTarget::Constant => {
            let p = CauchyProblem::new(ScalarField::constant(dim, 1.0), ScalarField::constant(dim, 1.0))?;
            let rules = mean_rules(cfg, dim)?;
            let m = dim.radial_order().unwrap_or(0);
            let spec = RadialDerivativeSpec::new(m, h)?;
            let s = match dim.parity() {
                Parity::Odd => solve_odd_point(&p, &x0, t0, &spec, &rules)?,
                Parity::Even => solve_even_point(&p, &x0, t0, &spec, &rules)?,
            };
            Ok((s.u - (1.0 + t0)).abs())
        }
    }
}

fn converge(cfg: &RunConfig) -> Result<Report> {
    let c = cfg
        .converge
        .as_ref()
        .ok_or_else(|| WaveError::Usage("converge needs a [converge] section".into()))?;
    if c.levels.len() < 3 {
        return Err(WaveError::Usage(format!(
            "a refinement ladder needs at least 3 levels, got {}",
            c.levels.len()
        )));
    }
    let dim = cfg.dim()?;
    let residuals: Vec<f64> = c
        .levels
        .iter()
        .map(|&h| level_residual(cfg, c, dim, h))
        .collect::<Result<_>>()?;
    let mut report = Report::new(provenance(cfg), &["target", "n", "level", "h", "residual", "ratio", "local_order"]);
    for (i, (&h, &r)) in c.levels.iter().zip(&residuals).enumerate() {
        let (ratio, order) = if i == 0 {
            (String::new(), String::new())
        } else {
            let ratio = residuals[i - 1] / r;
            (num(ratio), num(ratio.ln() / (c.levels[i - 1] / h).ln()))
        };
        report.push(
            vec![c.target.name().into(), dim.to_string(), i.to_string(), num(h), num(r), ratio, order],
            Check::at_most("finite_residual", r, f64::INFINITY),
        );
    }
    let saturated = residuals.iter().all(|&r| r <= SATURATION_FLOOR);
    let order = if saturated { f64::NAN } else { fitted_order(&c.levels, &residuals) };
    let expected = c.expected_order.or(match c.target {
        ConvergeTarget::WaveResidual | ConvergeTarget::MeansResidual => Some(2.0),
        _ => None,
    });
    let max_r = residuals.iter().copied().fold(0.0, f64::max);
    let fit_row = |label: &str| {
        vec![
            c.target.name().into(),
            dim.to_string(),
            label.to_string(),
            String::new(),
            num(max_r),
            String::new(),
            if saturated { "saturated".to_string() } else { num(order) },
        ]
    };
    if saturated {
        report.notes.push("order: saturated".into());
        report.push(fit_row("fit"), Check::at_most("saturated", max_r, SATURATION_FLOOR));
    } else if let Some(e) = expected {
        report.notes.push(format!("order: {}", num(order)));
        report.push(
            fit_row("fit"),
            Check::at_most(format!("|order-{e}|"), (order - e).abs(), c.order_tol),
        );
    } else {
        report.notes.push(format!("order: {}", num(order)));
        let worst = residuals.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
        report.push(fit_row("fit"), Check::below("strictly_decreasing", worst, 1.0));
    }
    Ok(report)
}
