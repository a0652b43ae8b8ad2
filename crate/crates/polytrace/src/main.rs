use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polytrace::commands::{self, CommandOutput, RunConfig, DEFAULT_GAMMAS, DEFAULT_NGONS};
use polytrace::output::Format;
use polytrace::{CliError, ExitStatus};

/// Three-term trace asymptotics of truncated Wiener-Hopf operators on
/// polygons, with brute-force verification.
#[derive(Parser)]
#[command(name = "polytrace", version)]
struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true, env = "POLYTRACE_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Builtin (square, rect:a,b, ngon:n[,r], lshape, triangle:equilateral)
    /// or a JSON file {"loops": [[[x, y], ...], ...]}.
    #[arg(long, default_value = "square")]
    polygon: String,
    /// gaussian[:width=w], fermi:mu=m,T=t or zero; optional scale=c.
    /// Default gaussian:width=1 (pnf: fermi:mu=1,T=1).
    #[arg(long)]
    symbol: Option<String>,
    /// Coefficients a1,a2[,a3...] of h(z) = a1 z + a2 z^2 + ...; or
    /// poly:c0,c1,... including the (zero) constant term.
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    h: String,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficients c2, c1, c0 with per-edge and per-corner terms (JSON).
    Coeffs {
        #[command(flatten)]
        common: Common,
    },
    /// Direct traces against the expansion over a list of scales (CSV).
    Verify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated scales, each >= 1.
        #[arg(long = "L", default_value = "2,4,6,8,10")]
        scales: String,
        /// Residual threshold at the largest L.
        #[arg(long)]
        tol: Option<f64>,
        /// Use the grid estimator with n x n cells instead of the exact oracle.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// c0 of regular n-gons and the smooth-boundary baseline (CSV).
    Anomaly {
        #[command(flatten)]
        common: Common,
        /// Comma-separated vertex counts.
        #[arg(long, default_value = DEFAULT_NGONS)]
        n: String,
    },
    /// Corner constants: closed form against brute force (CSV).
    Sector {
        #[command(flatten)]
        common: Common,
        /// Comma-separated angles: numbers or forms like pi/6, 3pi/2.
        #[arg(long, default_value = DEFAULT_GAMMAS)]
        gamma: String,
        /// Largest accepted |closed - direct|.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Particle number fluctuation h(x) = x(1 - x) with a Fermi symbol (JSON).
    Pnf {
        #[command(flatten)]
        common: Common,
    },
}

fn config(common: &Common) -> RunConfig {
    RunConfig {
        polygon: common.polygon.clone(),
        symbol: common
            .symbol
            .clone()
            .unwrap_or_else(|| "gaussian:width=1".into()),
        h: common.h.clone(),
        format: common.format,
        ..RunConfig::default()
    }
}

fn run(cli: Cli) -> Result<CommandOutput, CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::config(format!("thread pool: {e}")))?;
    }
    let (common, output) = match &cli.command {
        Command::Coeffs { common } => (common, commands::cmd_coeffs(&config(common))),
        Command::Verify {
            common,
            scales,
            tol,
            grid,
        } => {
            let cfg = RunConfig {
                scales: scales.clone(),
                tol: *tol,
                grid: *grid,
                ..config(common)
            };
            (common, commands::cmd_verify(&cfg))
        }
        Command::Anomaly { common, n } => {
            let cfg = RunConfig {
                ngons: n.clone(),
                ..config(common)
            };
            (common, commands::cmd_anomaly(&cfg))
        }
        Command::Sector { common, gamma, tol } => {
            let cfg = RunConfig {
                gammas: gamma.clone(),
                tol: *tol,
                ..config(common)
            };
            (common, commands::cmd_sector(&cfg))
        }
        Command::Pnf { common } => {
            let cfg = RunConfig {
                symbol: common
                    .symbol
                    .clone()
                    .unwrap_or_else(|| "fermi:mu=1,T=1".into()),
                ..config(common)
            };
            (common, commands::cmd_pnf(&cfg))
        }
    };
    let output = output?;
    match &common.out {
        Some(path) => std::fs::write(path, &output.body)?,
        None => print!("{}", output.body),
    }
    Ok(output)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            if out.status == ExitStatus::VerificationFailed {
                eprintln!("verification failed");
            }
            ExitCode::from(out.status.code() as u8)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.status().code() as u8)
        }
    }
}
