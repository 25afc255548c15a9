//! `catalan-asym`: derive, compute and verify the asymptotic and modular
//! behavior of partial sums of central binomial coefficients and Catalan
//! numbers.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical check
//! fails, 2 on usage or configuration errors.

mod commands;
mod report;

use std::process::ExitCode;

use catalan_asym::arith::ComplexRational;
use catalan_asym::darboux::SumKind;
use catalan_asym::sums::{DEFAULT_PRECISION, MIN_PRECISION};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use commands::{Kind, WeightKind};
use report::{Format, Report};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Math(String),
}

#[derive(Parser, Debug)]
#[command(
    name = "catalan-asym",
    version,
    about = "Asymptotics and congruences for sums of central binomials and Catalan numbers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Worker threads for parallel rows and sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Args, Debug)]
struct NArgs {
    /// A single n.
    #[arg(long)]
    n: Option<u64>,

    /// Comma-separated list of n.
    #[arg(long = "n-list", value_delimiter = ',')]
    n_list: Vec<u64>,
}

impl NArgs {
    fn resolve(&self) -> Result<Vec<u64>, CliError> {
        let mut ns = self.n_list.clone();
        if let Some(n) = self.n {
            ns.insert(0, n);
        }
        if ns.is_empty() {
            return Err(CliError::Usage("no n given: use --n or --n-list".into()));
        }
        Ok(ns)
    }
}

#[derive(Args, Debug)]
struct PrecisionArg {
    /// Working precision in bits.
    #[arg(long, env = "CATALAN_ASYM_PRECISION", default_value_t = DEFAULT_PRECISION)]
    precision: u32,
}

impl PrecisionArg {
    fn resolve(&self) -> Result<u32, CliError> {
        if self.precision < MIN_PRECISION {
            return Err(CliError::Usage(format!(
                "precision {} is below the minimum of {MIN_PRECISION} bits",
                self.precision
            )));
        }
        Ok(self.precision)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print an asymptotic expansion with exact rational coefficients.
    Asym {
        #[arg(value_enum)]
        kind: Kind,
        /// Highest power of 1/n kept.
        #[arg(long, default_value_t = 3)]
        order: usize,
    },
    /// Compare an expansion with exact partial sums.
    VerifyAsym {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[command(flatten)]
        ns: NArgs,
        #[command(flatten)]
        precision: PrecisionArg,
    },
    /// Exact partial sums, optionally weighted by alpha^k.
    Sum {
        #[arg(value_enum)]
        kind: Kind,
        #[command(flatten)]
        ns: NArgs,
        /// Weight: rational "a/b" or complex "re,im".
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[command(flatten)]
        precision: PrecisionArg,
    },
    /// Classify alpha and compare weighted sums with the first-order formula.
    Weighted {
        /// Weight: rational "a/b" or complex "re,im".
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, value_enum, default_value_t = WeightKind::Central)]
        kind: WeightKind,
        #[command(flatten)]
        ns: NArgs,
        #[command(flatten)]
        precision: PrecisionArg,
    },
    /// Check the congruences modulo a prime power, or sweep all q below a bound.
    Modp {
        /// A single prime power.
        #[arg(long, conflicts_with = "sweep")]
        q: Option<u64>,
        /// Check every prime power below this bound.
        #[arg(long)]
        sweep: Option<u64>,
        /// Also evaluate both sums at this element of F_p (with --q).
        #[arg(long, requires = "q", allow_hyphen_values = true)]
        alpha: Option<String>,
    },
}

const DEFAULT_SWEEP: u64 = 2000;

fn parse_alpha(text: &str) -> Result<ComplexRational, CliError> {
    ComplexRational::parse(text).map_err(|e| CliError::Usage(format!("invalid alpha {text:?}: {e}")))
}

fn base_config(cli: &Cli, command: &'static str) -> Vec<(&'static str, Value)> {
    vec![
        ("command", json!(command)),
        ("format", json!(cli.format.name())),
        ("jobs", cli.jobs.map_or(json!("default"), |j| json!(j))),
    ]
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Asym { kind, order } => {
            let mut config = base_config(cli, "asym");
            config.extend([("kind", json!(kind.name())), ("order", json!(order))]);
            Ok(commands::cmd_asym(*kind, *order, config))
        }
        Command::VerifyAsym {
            kind,
            order,
            ns,
            precision,
        } => {
            let ns = ns.resolve()?;
            if ns.contains(&0) {
                return Err(CliError::Usage("n must be positive".into()));
            }
            let precision = precision.resolve()?;
            let mut config = base_config(cli, "verify-asym");
            config.extend([
                ("kind", json!(kind.name())),
                ("order", json!(order)),
                ("n_list", json!(ns)),
                ("precision", json!(precision)),
            ]);
            commands::cmd_verify_asym(*kind, *order, &ns, precision, config)
        }
        Command::Sum {
            kind,
            ns,
            alpha,
            precision,
        } => {
            let ns = ns.resolve()?;
            let precision = precision.resolve()?;
            let alpha = alpha.as_deref().map(parse_alpha).transpose()?;
            let mut config = base_config(cli, "sum");
            config.extend([
                ("kind", json!(kind.name())),
                ("n_list", json!(ns)),
                ("alpha", alpha.as_ref().map_or(Value::Null, |a| json!(a.to_string()))),
                ("precision", json!(precision)),
            ]);
            commands::cmd_sum(*kind, &ns, alpha.as_ref(), precision, config)
        }
        Command::Weighted {
            alpha,
            kind,
            ns,
            precision,
        } => {
            let ns = ns.resolve()?;
            if ns.contains(&0) {
                return Err(CliError::Usage("n must be positive".into()));
            }
            let precision = precision.resolve()?;
            let alpha = parse_alpha(alpha)?;
            let mut config = base_config(cli, "weighted");
            config.extend([
                ("kind", json!(SumKind::from(*kind).to_string())),
                ("alpha", json!(alpha.to_string())),
                ("n_list", json!(ns)),
                ("precision", json!(precision)),
            ]);
            commands::cmd_weighted(*kind, &alpha, &ns, precision, config)
        }
        Command::Modp { q, sweep, alpha } => {
            let mut config = base_config(cli, "modp");
            match q {
                Some(q) => {
                    let alpha = alpha.as_deref().map(parse_alpha).transpose()?;
                    config.extend([
                        ("q", json!(q)),
                        ("alpha", alpha.as_ref().map_or(Value::Null, |a| json!(a.to_string()))),
                    ]);
                    commands::cmd_modp_single(*q, alpha.as_ref(), config)
                }
                None => {
                    let bound = sweep.unwrap_or(DEFAULT_SWEEP);
                    config.push(("sweep", json!(bound)));
                    Ok(commands::cmd_modp_sweep(bound, config))
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: could not configure worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            if report.passed == Some(false) {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Math(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
    }
}
