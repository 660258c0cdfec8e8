use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use wavecauchy::harness::{run, Command as RunCommand, Overrides, RunConfig};

const COLUMNS: &str = "\
Every report starts with `#` provenance lines (version, command, config_sha256,
seed, summary) followed by a CSV table. The leading columns depend on the
command; every table ends with
  check, measured, relation, bound, status, violated
where status is `pass` iff `measured relation bound` holds and `violated`
names the failed check.

Leading columns:
  constants           n, name, product, from_areas, normalized, reciprocal
  verify-reduction    n, radius, profile, measure, reference, quadrature,
                      reference_value, std_error
  verify-identities   n, draw, radius, xi_norm, phase, kind, lhs, rhs_re,
                      rhs_im, h, ill_conditioned
  solve               x1..xn, t, u, method, error_estimate, oracle,
                      oracle_value
  converge            target, n, level, h, residual, ratio, local_order

Exit status is 0 iff every row passes, 1 if any row fails, 2 on a
configuration or runtime error.";

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Solve,
    VerifyIdentities,
    VerifyReduction,
    Constants,
    Converge,
}

impl From<Cmd> for RunCommand {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Solve => RunCommand::Solve,
            Cmd::VerifyIdentities => RunCommand::VerifyIdentities,
            Cmd::VerifyReduction => RunCommand::VerifyReduction,
            Cmd::Constants => RunCommand::Constants,
            Cmd::Converge => RunCommand::Converge,
        }
    }
}

/// Solve the n-dimensional wave equation Cauchy problem and verify the
/// kernel identities behind the solution formulas.
#[derive(Debug, Parser)]
#[command(name = "wavecauchy", version, after_long_help = COLUMNS)]
struct Cli {
    #[arg(value_enum)]
    command: Cmd,

    /// Run configuration (`[section]` headers, `key = value` lines).
    #[arg(long)]
    config: PathBuf,

    /// Report path; overrides `[run] output`.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Random seed for probes, draws and Monte Carlo; overrides `[run] seed`.
    #[arg(long)]
    seed: Option<u64>,

    /// Base quadrature node count.
    #[arg(long = "quad-nodes")]
    quad_nodes: Option<usize>,

    /// Tolerance applied to every case.
    #[arg(long)]
    tol: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let overrides = Overrides {
        seed: cli.seed,
        quad_nodes: cli.quad_nodes,
        tol: cli.tol,
        out: cli.out.clone(),
    };
    let result = RunConfig::load_for(&cli.config, cli.command.into())
        .and_then(|c| c.with_overrides(&overrides))
        .and_then(|c| run(&c).map(|r| (c, r)));
    match result {
        Ok((cfg, report)) => {
            if cfg.output.is_none() {
                print!("{}", report.to_csv_string());
            }
            let summary = report.summary();
            eprintln!("{}: {summary}", cfg.command);
            for row in report.rows.iter().filter(|r| !r.check.passed()) {
                eprintln!("  FAIL {} [{}]", row.values.join(" "), row.check.name);
            }
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("wavecauchy: {e}");
            ExitCode::from(2)
        }
    }
}
