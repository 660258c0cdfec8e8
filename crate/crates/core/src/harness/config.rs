//! Run configuration: `[section]` headers with `key = value` lines, lists
//! comma-separated, probe points as whitespace-separated components.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use ini::Ini;

use crate::error::{Result, WaveError};
use crate::geometry::{Dimension, Profile, MAX_DIM};
use crate::solvers::{HarmonicPoly, Method, ScalarField};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    VerifyIdentities,
    VerifyReduction,
    Constants,
    Converge,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::Solve,
        Command::VerifyIdentities,
        Command::VerifyReduction,
        Command::Constants,
        Command::Converge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::VerifyIdentities => "verify-identities",
            Command::VerifyReduction => "verify-reduction",
            Command::Constants => "constants",
            Command::Converge => "converge",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s.trim())
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Built-in initial data.
#[derive(Debug, Clone, PartialEq)]
pub enum DataSpec {
    Zero,
    Constant(f64),
    Gaussian { sigma: f64, center: Option<Vec<f64>> },
    Bump { radius: f64, center: Option<Vec<f64>> },
    Harmonic(HarmonicPoly),
}

impl DataSpec {
    pub fn parse(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        let (name, args) = match s.find('(') {
            Some(open) => {
                let close = s
                    .rfind(')')
                    .filter(|&c| c > open && c == s.len() - 1)
                    .ok_or_else(|| format!("unbalanced parentheses in `{s}`"))?;
                let inner = &s[open + 1..close];
                let args: Vec<&str> = inner.split(',').map(str::trim).filter(|a| !a.is_empty()).collect();
                (s[..open].trim(), args)
            }
            None => (s, Vec::new()),
        };
        let numbers = || -> std::result::Result<Vec<f64>, String> {
            args.iter()
                .map(|a| a.parse::<f64>().map_err(|_| format!("`{a}` is not a number in `{s}`")))
                .collect()
        };
        let arity = |lo: usize, hi: usize| -> std::result::Result<(), String> {
            if args.len() < lo || args.len() > hi {
                Err(format!("`{name}` takes {lo} to {hi} arguments, got {}", args.len()))
            } else {
                Ok(())
            }
        };
        match name {
            "zero" => {
                arity(0, 0)?;
                Ok(DataSpec::Zero)
            }
            "constant" => {
                arity(1, 1)?;
                Ok(DataSpec::Constant(numbers()?[0]))
            }
            "gaussian" | "bump" => {
                arity(1, 1 + MAX_DIM)?;
                let v = numbers()?;
                let center = (v.len() > 1).then(|| v[1..].to_vec());
                if name == "gaussian" {
                    Ok(DataSpec::Gaussian { sigma: v[0], center })
                } else {
                    Ok(DataSpec::Bump { radius: v[0], center })
                }
            }
            "harmonic" => {
                arity(1, 1)?;
                HarmonicPoly::parse(args[0])
                    .map(DataSpec::Harmonic)
                    .ok_or_else(|| format!("unknown harmonic polynomial `{}`", args[0]))
            }
            other => Err(format!("unknown built-in field `{other}`")),
        }
    }

    pub fn build(&self, dim: Dimension) -> Result<ScalarField> {
        let origin = || vec![0.0; dim.n()];
        match self {
            DataSpec::Zero => Ok(ScalarField::zero(dim)),
            DataSpec::Constant(c) => Ok(ScalarField::constant(dim, *c)),
            DataSpec::Gaussian { sigma, center } => {
                ScalarField::gaussian(dim, *sigma, center.clone().unwrap_or_else(origin))
            }
            DataSpec::Bump { radius, center } => {
                ScalarField::bump(dim, *radius, center.clone().unwrap_or_else(origin))
            }
            DataSpec::Harmonic(p) => ScalarField::harmonic(dim, *p),
        }
    }

    /// Constant and harmonic data, for which `u = φ + tψ` exactly.
    pub fn is_harmonic(&self) -> bool {
        matches!(self, DataSpec::Zero | DataSpec::Constant(_) | DataSpec::Harmonic(_))
    }
}

impl fmt::Display for DataSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |c: &Option<Vec<f64>>| {
            c.as_ref()
                .map(|v| v.iter().map(|x| format!(", {x}")).collect::<String>())
                .unwrap_or_default()
        };
        match self {
            DataSpec::Zero => write!(f, "zero"),
            DataSpec::Constant(c) => write!(f, "constant({c})"),
            DataSpec::Gaussian { sigma, center } => write!(f, "gaussian({sigma}{})", list(center)),
            DataSpec::Bump { radius, center } => write!(f, "bump({radius}{})", list(center)),
            DataSpec::Harmonic(p) => write!(f, "harmonic({})", p.name()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Oracle {
    None,
    Harmonic,
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvergeTarget {
    /// Discrete wave operator applied to `cos(x_1) cos(t)`.
    WaveResidual,
    /// Discrete wave operator applied to the means solution of `[data]`.
    MeansResidual,
    OddIdentity,
    EvenIdentity,
    /// Constant data, whose solution the stencils reproduce exactly.
    Constant,
}

impl ConvergeTarget {
    pub fn name(self) -> &'static str {
        match self {
            ConvergeTarget::WaveResidual => "wave-residual",
            ConvergeTarget::MeansResidual => "means-residual",
            ConvergeTarget::OddIdentity => "odd-identity",
            ConvergeTarget::EvenIdentity => "even-identity",
            ConvergeTarget::Constant => "constant",
        }
    }

    pub fn default_dim(self) -> usize {
        match self {
            ConvergeTarget::WaveResidual => 1,
            ConvergeTarget::MeansResidual | ConvergeTarget::Constant => 3,
            ConvergeTarget::OddIdentity => 5,
            ConvergeTarget::EvenIdentity => 4,
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [
            ConvergeTarget::WaveResidual,
            ConvergeTarget::MeansResidual,
            ConvergeTarget::OddIdentity,
            ConvergeTarget::EvenIdentity,
            ConvergeTarget::Constant,
        ]
        .into_iter()
        .find(|t| t.name() == s.trim())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub points: usize,
    pub half_width: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSpec {
    pub points: Vec<Vec<f64>>,
    /// Extra probes drawn uniformly from the ball of `radius`.
    pub random: usize,
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QuadratureOverrides {
    /// Base node count: Gegenbauer and radial rules, sphere latitudes.
    pub nodes: Option<usize>,
    pub latitude: Option<usize>,
    pub azimuth: Option<usize>,
    pub radial: Option<usize>,
    pub mc_samples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergeSpec {
    pub target: ConvergeTarget,
    pub levels: Vec<f64>,
    pub expected_order: Option<f64>,
    pub order_tol: f64,
    pub radius: f64,
    pub xi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub dims: Vec<usize>,
    pub phi: DataSpec,
    pub psi: DataSpec,
    pub probes: ProbeSpec,
    pub times: Vec<f64>,
    /// Overrides every per-case tolerance when set.
    pub tolerance: Option<f64>,
    pub descent_tolerance: f64,
    pub sigma_limit: f64,
    pub quadrature: QuadratureOverrides,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub method: Option<Method>,
    pub oracle: Oracle,
    pub grid: Option<GridSpec>,
    pub grid_output: Option<PathBuf>,
    pub radii: Vec<f64>,
    pub profiles: Vec<Profile>,
    pub draws: usize,
    pub max_phase: f64,
    pub radius_range: (f64, f64),
    pub converge: Option<ConvergeSpec>,
    /// SHA-256 of the configuration text.
    pub source_hash: String,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub quad_nodes: Option<usize>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
}

const KNOWN_KEYS: &[(&str, &[&str])] = &[
    ("run", &["command", "dim", "dims", "seed", "output"]),
    ("data", &["phi", "psi"]),
    ("probes", &["points", "random", "radius"]),
    ("times", &["t"]),
    ("tolerance", &["value", "descent", "sigma"]),
    ("quadrature", &["nodes", "latitude", "azimuth", "radial", "mc_samples"]),
    ("solve", &["method", "oracle", "grid_output"]),
    ("grid", &["points", "half_width"]),
    ("reduction", &["radii", "profiles"]),
    ("identities", &["draws", "max_phase", "min_radius", "max_radius"]),
    ("converge", &["target", "levels", "expected_order", "order_tol", "radius", "xi"]),
];

/// Flattened `section.key -> value` view with error collection.
struct Table {
    values: BTreeMap<String, String>,
    errors: Vec<(String, String)>,
}

impl Table {
    fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn fail(&mut self, key: &str, msg: impl Into<String>) {
        self.errors.push((key.to_string(), msg.into()));
    }

    fn parsed<T: std::str::FromStr>(&mut self, key: &str) -> Option<T> {
        let raw = self.raw(key)?.to_string();
        match raw.trim().parse::<T>() {
            Ok(v) => Some(v),
            Err(_) => {
                self.fail(key, format!("cannot parse `{raw}`"));
                None
            }
        }
    }

    fn list<T: std::str::FromStr>(&mut self, key: &str) -> Option<Vec<T>> {
        let raw = self.raw(key)?.to_string();
        let mut out = Vec::new();
        for item in raw.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item.parse::<T>() {
                Ok(v) => out.push(v),
                Err(_) => {
                    self.fail(key, format!("cannot parse list item `{item}`"));
                    return None;
                }
            }
        }
        Some(out)
    }

    fn positive(&mut self, key: &str, default: f64) -> f64 {
        match self.parsed::<f64>(key) {
            Some(v) if v > 0.0 && v.is_finite() => v,
            Some(v) => {
                self.fail(key, format!("must be positive, got {v}"));
                default
            }
            None => default,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&Self::read(path)?)
    }

    /// Load for a command given elsewhere; `[run] command` may then be
    /// omitted but must agree when present.
    pub fn load_for(path: &Path, command: Command) -> Result<Self> {
        Self::parse_for(&Self::read(path)?, command)
    }

    fn read(path: &Path) -> Result<String> {
        std::fs::read_to_string(path).map_err(|e| WaveError::Io(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_inner(text, None)
    }

    pub fn parse_for(text: &str, command: Command) -> Result<Self> {
        Self::parse_inner(text, Some(command))
    }

    fn parse_inner(text: &str, forced: Option<Command>) -> Result<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| WaveError::config("syntax", e.to_string()))?;
        let mut values = BTreeMap::new();
        let mut errors = Vec::new();
        for (section, props) in ini.iter() {
            let Some(section) = section else {
                if props.iter().next().is_some() {
                    errors.push(("(top level)".to_string(), "keys must sit under a [section]".to_string()));
                }
                continue;
            };
            let section = section.trim().to_lowercase();
            let known = KNOWN_KEYS.iter().find(|(s, _)| *s == section);
            for (key, value) in props.iter() {
                let key = key.trim().to_lowercase();
                let full = format!("{section}.{key}");
                match known {
                    None => errors.push((format!("[{section}]"), "unknown section".to_string())),
                    Some((_, keys)) if !keys.contains(&key.as_str()) => {
                        errors.push((full.clone(), "unknown key".to_string()))
                    }
                    _ => {}
                }
                if values.insert(full.clone(), value.trim().to_string()).is_some() {
                    errors.push((full, "given more than once".to_string()));
                }
            }
        }
        errors.dedup();
        let mut t = Table { values, errors };
        let config = Self::from_table(&mut t, text, forced);
        if !t.errors.is_empty() {
            let keys = t.errors.iter().map(|(k, _)| k.clone()).collect();
            let message = t
                .errors
                .iter()
                .map(|(k, m)| format!("{k}: {m}"))
                .collect::<Vec<_>>()
                .join("; ");
            return Err(WaveError::Config { keys, message });
        }
        Ok(config)
    }

    fn from_table(t: &mut Table, text: &str, forced: Option<Command>) -> Self {
        let command = match (t.raw("run.command").map(str::to_string), forced) {
            (Some(c), forced) => match (Command::parse(&c), forced) {
                (None, f) => {
                    t.fail("run.command", format!("unknown command `{c}`"));
                    f.unwrap_or(Command::Constants)
                }
                (Some(parsed), Some(f)) if parsed != f => {
                    t.fail("run.command", format!("config is for `{parsed}`, not `{f}`"));
                    f
                }
                (Some(parsed), _) => parsed,
            },
            (None, Some(f)) => f,
            (None, None) => {
                t.fail("run.command", "missing");
                Command::Constants
            }
        };
        let mut dims: Vec<usize> = match (t.list::<usize>("run.dims"), t.parsed::<usize>("run.dim")) {
            (Some(d), None) => d,
            (None, Some(d)) => vec![d],
            (Some(_), Some(_)) => {
                t.fail("run.dim", "give either dim or dims, not both");
                Vec::new()
            }
            (None, None) => Vec::new(),
        };
        if dims.is_empty() {
            dims = match command {
                Command::Constants => (2..=7).collect(),
                Command::VerifyReduction => vec![3, 4, 5, 7],
                Command::VerifyIdentities => vec![2, 3, 4, 5, 6, 7],
                Command::Converge => Vec::new(),
                Command::Solve => {
                    t.fail("run.dim", "solve needs a dimension");
                    vec![3]
                }
            };
        }
        let explicit_dims = !dims.is_empty();
        for &n in &dims {
            if Dimension::new(n).is_err() {
                t.fail("run.dims", format!("dimension {n} is outside 1..={MAX_DIM}"));
            }
        }
        let mut data = |key: &str| match t.raw(key).map(str::to_string) {
            Some(s) => DataSpec::parse(&s).unwrap_or_else(|e| {
                t.fail(key, e);
                DataSpec::Zero
            }),
            None => DataSpec::Zero,
        };
        let phi = data("data.phi");
        let psi = data("data.psi");

        let mut points = Vec::new();
        if let Some(raw) = t.raw("probes.points").map(str::to_string) {
            for item in raw.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                match item.split_whitespace().map(str::parse::<f64>).collect::<std::result::Result<Vec<_>, _>>() {
                    Ok(p) => points.push(p),
                    Err(_) => t.fail("probes.points", format!("cannot parse point `{item}`")),
                }
            }
        }
        if command == Command::Solve {
            if let Some(&n) = dims.first() {
                if points.iter().any(|p| p.len() != n) {
                    t.fail("probes.points", format!("every point needs {n} components"));
                }
            }
        }
        let random = t.parsed::<usize>("probes.random").unwrap_or(0);
        let probe_radius = t.positive("probes.radius", 1.0);
        if command == Command::Solve && points.is_empty() && random == 0 {
            points.push(vec![0.0; dims.first().copied().unwrap_or(1)]);
        }

        let times = t.list::<f64>("times.t").unwrap_or_else(|| vec![1.0]);
        if times.is_empty() || times.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            t.fail("times.t", "times must be positive");
        }
        let tolerance = t.raw("tolerance.value").is_some().then(|| t.positive("tolerance.value", 1e-8));
        let descent_tolerance = t.positive("tolerance.descent", 1e-8);
        let sigma_limit = t.positive("tolerance.sigma", 3.0);

        let quadrature = QuadratureOverrides {
            nodes: t.parsed("quadrature.nodes"),
            latitude: t.parsed("quadrature.latitude"),
            azimuth: t.parsed("quadrature.azimuth"),
            radial: t.parsed("quadrature.radial"),
            mc_samples: t.parsed("quadrature.mc_samples"),
        };
        for (key, v) in [
            ("quadrature.nodes", quadrature.nodes),
            ("quadrature.azimuth", quadrature.azimuth),
            ("quadrature.radial", quadrature.radial),
            ("quadrature.mc_samples", quadrature.mc_samples),
        ] {
            if v == Some(0) {
                t.fail(key, "must be positive");
            }
        }

        let method = match t.raw("solve.method").map(str::to_string) {
            None => None,
            Some(m) if m == "auto" => None,
            Some(m) => Method::parse(&m).or_else(|| {
                t.fail("solve.method", format!("unknown method `{m}`"));
                None
            }),
        };
        let oracle = match t.raw("solve.oracle").map(str::to_string).as_deref() {
            None | Some("none") => Oracle::None,
            Some("harmonic") => Oracle::Harmonic,
            Some("spectral") => Oracle::Spectral,
            Some(o) => {
                t.fail("solve.oracle", format!("unknown oracle `{o}`"));
                Oracle::None
            }
        };
        if oracle == Oracle::Harmonic && !(phi.is_harmonic() && psi.is_harmonic()) {
            t.fail("solve.oracle", "the harmonic oracle needs constant or harmonic data");
        }
        let grid = match (t.parsed::<usize>("grid.points"), t.raw("grid.half_width").is_some()) {
            (Some(points), true) => Some(GridSpec {
                points,
                half_width: t.positive("grid.half_width", 1.0),
            }),
            (None, false) => None,
            _ => {
                t.fail("grid.points", "grid needs both points and half_width");
                None
            }
        };
        let needs_grid = oracle == Oracle::Spectral || method == Some(Method::Spectral);
        if command == Command::Solve && needs_grid && grid.is_none() {
            t.fail("grid.points", "spectral solves need a [grid] section");
        }
        let grid_output = t.raw("solve.grid_output").map(PathBuf::from);

        let radii = t.list::<f64>("reduction.radii").unwrap_or_else(|| vec![0.5, 1.0, 2.0]);
        if radii.iter().any(|&r| !(r > 0.0)) {
            t.fail("reduction.radii", "radii must be positive");
        }
        let profiles = match t.raw("reduction.profiles").map(str::to_string) {
            None => Profile::ALL.to_vec(),
            Some(raw) => raw
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .filter_map(|s| {
                    Profile::parse(s).or_else(|| {
                        t.fail("reduction.profiles", format!("unknown profile `{}`", s.trim()));
                        None
                    })
                })
                .collect(),
        };

        let draws = t.parsed::<usize>("identities.draws").unwrap_or(200);
        let max_phase = t.positive("identities.max_phase", 20.0);
        let radius_range = (t.positive("identities.min_radius", 0.1), t.positive("identities.max_radius", 3.0));
        if radius_range.0 > radius_range.1 {
            t.fail("identities.min_radius", "min_radius exceeds max_radius");
        }

        let converge = (command == Command::Converge).then(|| {
            let target = match t.raw("converge.target").map(str::to_string) {
                Some(s) => ConvergeTarget::parse(&s).unwrap_or_else(|| {
                    t.fail("converge.target", format!("unknown target `{s}`"));
                    ConvergeTarget::WaveResidual
                }),
                None => {
                    t.fail("converge.target", "missing");
                    ConvergeTarget::WaveResidual
                }
            };
            let levels = t.list::<f64>("converge.levels").unwrap_or_default();
            if levels.iter().any(|&h| !(h > 0.0)) {
                t.fail("converge.levels", "levels must be positive");
            }
            ConvergeSpec {
                target,
                levels,
                expected_order: t.parsed("converge.expected_order"),
                order_tol: t.positive("converge.order_tol", 0.2),
                radius: t.positive("converge.radius", 1.0),
                xi: t.parsed::<f64>("converge.xi").unwrap_or(2.0),
            }
        });

        if !explicit_dims {
            if let Some(c) = &converge {
                dims = vec![c.target.default_dim()];
            }
        }
        if let Some(c) = &converge {
            let n = dims[0];
            let ok = match c.target {
                ConvergeTarget::OddIdentity => n % 2 == 1 && n >= 3,
                ConvergeTarget::EvenIdentity => n % 2 == 0,
                ConvergeTarget::MeansResidual | ConvergeTarget::Constant => n >= 2,
                ConvergeTarget::WaveResidual => true,
            };
            if !ok {
                t.fail("run.dim", format!("target {} does not apply in dimension {n}", c.target.name()));
            }
        }

        RunConfig {
            command,
            dims,
            phi,
            psi,
            probes: ProbeSpec {
                points,
                random,
                radius: probe_radius,
            },
            times,
            tolerance,
            descent_tolerance,
            sigma_limit,
            quadrature,
            seed: t.parsed("run.seed").unwrap_or(0),
            output: t.raw("run.output").map(PathBuf::from),
            method,
            oracle,
            grid,
            grid_output,
            radii,
            profiles,
            draws,
            max_phase,
            radius_range,
            converge,
            source_hash: super::report::sha256_hex(text.as_bytes()),
        }
    }

    pub fn with_overrides(mut self, o: &Overrides) -> Result<Self> {
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        if let Some(k) = o.quad_nodes {
            if k == 0 {
                return Err(WaveError::config("--quad-nodes", "must be positive"));
            }
            self.quadrature.nodes = Some(k);
        }
        if let Some(tol) = o.tol {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(WaveError::config("--tol", format!("must be positive, got {tol}")));
            }
            self.tolerance = Some(tol);
        }
        if let Some(out) = &o.out {
            self.output = Some(out.clone());
        }
        Ok(self)
    }

    /// The single dimension of commands that take one.
    pub fn dim(&self) -> Result<Dimension> {
        Dimension::new(self.dims[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_solve_config() {
        let c = RunConfig::parse(
            "[run]\ncommand = solve\ndim = 3\nseed = 9\n\n[data]\nphi = zero\npsi = constant(1)\n\
             [probes]\npoints = 0 0 0, 1 0.5 0\nrandom = 4\n[times]\nt = 0.5, 2\n[solve]\noracle = harmonic\n",
        )
        .unwrap();
        assert_eq!(c.command, Command::Solve);
        assert_eq!(c.dims, vec![3]);
        assert_eq!(c.psi, DataSpec::Constant(1.0));
        assert_eq!(c.probes.points.len(), 2);
        assert_eq!(c.times, vec![0.5, 2.0]);
        assert_eq!(c.seed, 9);
        assert_eq!(c.oracle, Oracle::Harmonic);
        assert_eq!(c.source_hash.len(), 64);
    }

    #[test]
    fn data_specs_round_trip() {
        for s in ["zero", "constant(2.5)", "gaussian(0.5)", "gaussian(0.5, 1, 0)", "bump(0.25)", "harmonic(saddle)"] {
            let d = DataSpec::parse(s).unwrap();
            assert_eq!(DataSpec::parse(&d.to_string()).unwrap(), d);
        }
        assert!(DataSpec::parse("sinc(1)").is_err());
        assert!(DataSpec::parse("constant()").is_err());
        assert!(DataSpec::parse("harmonic(quartic)").is_err());
    }

    #[test]
    fn validation_lists_every_bad_key() {
        let err = RunConfig::parse("[run]\ncommand = solve\ndim = 3\n[times]\nt = -1\n[quadrature]\nnodes = x\nbogus = 1\n")
            .unwrap_err();
        match err {
            WaveError::Config { keys, .. } => {
                for k in ["times.t", "quadrature.nodes", "quadrature.bogus"] {
                    assert!(keys.iter().any(|x| x == k), "{keys:?}");
                }
            }
            e => panic!("{e}"),
        }
        assert!(matches!(RunConfig::parse("[run]\ncommand = fly\n"), Err(WaveError::Config { .. })));
        assert!(matches!(RunConfig::parse("[run]\ndim = 2\n"), Err(WaveError::Config { .. })));
        assert!(RunConfig::parse_for("[run]\nseed = 2\n", Command::Constants).is_ok());
        assert!(RunConfig::parse_for("[run]\ncommand = solve\ndim = 2\n", Command::Constants).is_err());
    }

    #[test]
    fn overrides_take_precedence() {
        let c = RunConfig::parse("[run]\ncommand = constants\nseed = 1\n").unwrap();
        let o = Overrides {
            seed: Some(5),
            quad_nodes: Some(32),
            tol: Some(1e-6),
            out: Some("x.csv".into()),
        };
        let c = c.with_overrides(&o).unwrap();
        assert_eq!((c.seed, c.quadrature.nodes, c.tolerance), (5, Some(32), Some(1e-6)));
        assert_eq!(c.dims, (2..=7).collect::<Vec<_>>());
    }
}
