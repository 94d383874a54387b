//! Command-line surface over the fdhydro library: exact eigenvalues and
//! coefficients, the verification battery, truncated-matrix spectra,
//! isospectral constructions, Laguerre coefficient tables and continuum
//! limits, emitted as JSON, CSV or plain text.
//!
//! Exit codes: 0 when every embedded verification passes, 1 when one
//! fails, 2 on usage or domain errors.

mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use fdhydro::exactfield::Rational;

#[derive(Parser)]
#[command(
    name = "fdhydro",
    version,
    about = "Exact solutions and spectra of the discretised hydrogen finite-difference equation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
pub struct OutputOpts {
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to a file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Internal precision for float embeddings of exact values.
    #[arg(long, default_value_t = 128)]
    precision_bits: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Exact eigenvalue -sqrt(1 + delta^2/n^2) and its float embedding.
    Eigenvalue {
        #[arg(short, long)]
        n: u32,
        /// Grid spacing as a positive rational "p/q" (or integer "p").
        #[arg(long)]
        delta: String,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Exact monic coefficients c_1..c_n and the alpha normalisation factors.
    Coeffs {
        #[arg(short, long)]
        n: u32,
        #[arg(long)]
        delta: String,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Run all four verification reports for one (n, delta).
    Verify {
        #[arg(short, long)]
        n: u32,
        #[arg(long)]
        delta: String,
        /// Grid extent for the exact matrix residual.
        #[arg(long, default_value_t = 40)]
        grid: u32,
        /// Truncation order of the infinite-order residual.
        #[arg(long, default_value_t = 25)]
        order: u32,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Eigenvalues (and optionally eigenvectors) of the V-truncation versus
    /// the closed forms.
    Spectrum {
        /// Truncation size N.
        #[arg(long)]
        size: usize,
        #[arg(long)]
        delta: String,
        /// Number of lowest states to certify.
        #[arg(long, default_value_t = 3)]
        states: usize,
        /// Bisection bracket width.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Also compare inverse-iteration eigenvectors with exact samples.
        #[arg(long)]
        eigenvectors: bool,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Isospectral constructions: powers of W = (V^2 - I)/delta^2, or a
    /// matrix with prescribed eigenvalues.
    Isospectral {
        #[arg(long)]
        size: usize,
        #[arg(long)]
        delta: String,
        /// Power k of W; eigenvalue targets become 1/n^(2k).
        #[arg(long, conflicts_with = "targets")]
        power: Option<u32>,
        /// Comma-separated desired eigenvalues (2 to 8 values).
        #[arg(long, value_delimiter = ',')]
        targets: Option<Vec<f64>>,
        /// Number of mapped bound states to match in the power construction.
        #[arg(long, default_value_t = 3)]
        states: usize,
        /// Matching tolerance; defaults to 1e-8 for powers, 1e-6 for targets.
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Continuum or discretised (associated) Laguerre coefficients.
    Laguerre {
        #[arg(short, long)]
        n: u32,
        /// With a spacing: the discretised polynomial; without: the
        /// continuum tables.
        #[arg(long)]
        delta: Option<String>,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Richardson convergence report towards the continuum problem.
    Limit {
        #[arg(short, long)]
        n: u32,
        /// Comma-separated strictly decreasing spacings, e.g. 1/10,1/20,1/40.
        #[arg(long, value_delimiter = ',')]
        deltas: Vec<String>,
        /// Sample points for the supplementary solution-value comparison.
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 1.0, 2.0, 5.0])]
        samples: Vec<f64>,
        #[command(flatten)]
        out: OutputOpts,
    },
}

/// Parses a positive rational "p/q" or integer "p".
fn parse_positive_rational(s: &str) -> Result<Rational, String> {
    let parse_int = |t: &str| -> Result<BigInt, String> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| format!("'{t}' is not an integer"))
    };
    let r = match s.split_once('/') {
        Some((num, den)) => {
            let num = parse_int(num)?;
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err(format!("'{s}' has a zero denominator"));
            }
            Rational::new(num, den)
        }
        None => Rational::from_integer(parse_int(s)?),
    };
    if !r.is_positive() {
        return Err(format!("'{s}' must be positive"));
    }
    Ok(r)
}

/// What a subcommand produced: rendered text plus whether every embedded
/// verification passed.
pub struct Rendered {
    pub body: String,
    pub all_passed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((rendered, out)) => {
            if let Err(e) = emit(&rendered.body, &out.output) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if rendered.all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(message) => {
            eprintln!("error: {message}");
            eprintln!("usage: fdhydro <subcommand> --help for details");
            ExitCode::from(2)
        }
    }
}

fn emit(body: &str, path: &Option<PathBuf>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, body),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())
        }
    }
}

fn run(command: Command) -> Result<(Rendered, OutputOpts), String> {
    match command {
        Command::Eigenvalue { n, delta, out } => {
            let delta = parse_positive_rational(&delta)?;
            let rendered = output::eigenvalue(n, &delta, &out).map_err(|e| e.to_string())?;
            Ok((rendered, out))
        }
        Command::Coeffs { n, delta, out } => {
            let delta = parse_positive_rational(&delta)?;
            let rendered = output::coeffs(n, &delta, &out).map_err(|e| e.to_string())?;
            Ok((rendered, out))
        }
        Command::Verify {
            n,
            delta,
            grid,
            order,
            out,
        } => {
            let delta = parse_positive_rational(&delta)?;
            let rendered =
                output::verify(n, &delta, grid, order, &out).map_err(|e| e.to_string())?;
            Ok((rendered, out))
        }
        Command::Spectrum {
            size,
            delta,
            states,
            tol,
            eigenvectors,
            out,
        } => {
            let delta = parse_positive_rational(&delta)?;
            if tol.is_nan() || tol <= 0.0 {
                return Err("tolerance must be positive".into());
            }
            let rendered = output::spectrum(size, &delta, states, tol, eigenvectors, &out)
                .map_err(|e| e.to_string())?;
            Ok((rendered, out))
        }
        Command::Isospectral {
            size,
            delta,
            power,
            targets,
            states,
            tol,
            out,
        } => {
            let delta = parse_positive_rational(&delta)?;
            let rendered = match (power, targets) {
                (Some(k), None) => {
                    let tol = tol.unwrap_or(1e-8);
                    output::isospectral_power(size, &delta, k, states, tol, &out)
                        .map_err(|e| e.to_string())?
                }
                (None, Some(t)) => {
                    let tol = tol.unwrap_or(1e-6);
                    output::isospectral_targets(size, &delta, &t, tol, &out)
                        .map_err(|e| e.to_string())?
                }
                (None, None) => return Err("pass either --power or --targets".into()),
                (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
            };
            Ok((rendered, out))
        }
        Command::Laguerre { n, delta, out } => {
            let delta = delta.map(|d| parse_positive_rational(&d)).transpose()?;
            let rendered = output::laguerre(n, delta.as_ref(), &out).map_err(|e| e.to_string())?;
            Ok((rendered, out))
        }
        Command::Limit {
            n,
            deltas,
            samples,
            out,
        } => {
            let deltas: Vec<Rational> = deltas
                .iter()
                .map(|d| parse_positive_rational(d))
                .collect::<Result<_, _>>()?;
            let rendered = output::limit(n, &deltas, &samples, &out).map_err(|e| e.to_string())?;
            Ok((rendered, out))
        }
    }
}
