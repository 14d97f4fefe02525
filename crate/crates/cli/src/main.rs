//! `atto`: build truncated Toeplitz operators between model spaces and test
//! operators for membership.
//!
//! Exit codes: 0 pass/member, 1 fail/non-member, 2 usage or I/O error.

mod input;
mod suite;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use atto_core::blaschke::DEFAULT_ZERO_CAP;
use atto_core::characterize::{
    equivalence_suite, membership, recover_symbol, series_errors, Variant,
};
use atto_core::error::Error;
use atto_core::model_space::{tm_basis, ModelSpace, MIN_NODE_COUNT};
use atto_core::operators::{compressed_shift, modified_shift, OperatorMatrix};
use atto_core::{Complex64, DEFAULT_TOLERANCE};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] Error),
}

#[derive(Parser)]
#[command(
    name = "atto",
    version,
    about = "Truncated Toeplitz operators between model spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Matrix of the operator with the given symbol, K_alpha -> K_beta.
    Build {
        #[command(flatten)]
        spaces: Spaces,
        /// Laurent polynomial (`1 + 2z^-1 - (1+i)z^3`), `{"chi","psi"}` pair, or a file with either.
        #[arg(long)]
        symbol: String,
        #[command(flatten)]
        common: Common,
    },
    /// Compressed shift S_alpha, or S_alpha + a (k_0 ⊗ k~_0) with --a.
    Shift {
        /// Blaschke product JSON or file.
        #[arg(long)]
        alpha: String,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        a: Option<Complex64>,
        #[command(flatten)]
        common: Common,
    },
    /// Decide membership with one variant, or all of them.
    Membership {
        #[command(flatten)]
        source: OperatorSource,
        #[arg(long, value_enum, default_value_t = VariantArg::T1)]
        variant: VariantArg,
        /// Modified-shift parameter for the domain (c3a/c3b).
        #[arg(long, value_parser = parse_complex, default_value = "0", allow_hyphen_values = true)]
        a: Complex64,
        /// Modified-shift parameter for the codomain (c3a/c3b).
        #[arg(long, value_parser = parse_complex, default_value = "0", allow_hyphen_values = true)]
        b: Complex64,
        /// Seed for the (a, b) draws of `--variant all`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Recover the normalized symbol pair (chi, psi) of a member.
    Recover {
        #[command(flatten)]
        source: OperatorSource,
        #[command(flatten)]
        common: Common,
    },
    /// Compare partial sums of the shift series against the operator.
    SeriesCheck {
        #[command(flatten)]
        source: OperatorSource,
        /// Number of series terms; by default enough for --tol.
        #[arg(long)]
        terms: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Seeded end-to-end checks; JSON report on stdout, table on stderr.
    Suite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// Largest degree of alpha.
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..=32))]
        deg_alpha: u64,
        /// Largest degree of beta.
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..=32))]
        deg_beta: u64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Membership tolerance on the relative residual.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE, value_parser = parse_tol)]
    tol: f64,
    /// Boundary quadrature nodes (power of two, at least 512).
    #[arg(long, value_parser = parse_nodes)]
    quad_nodes: Option<usize>,
    /// Largest accepted zero modulus. Values above the default degrade accuracy.
    #[arg(long, default_value_t = DEFAULT_ZERO_CAP, value_parser = parse_cap)]
    zero_cap: f64,
}

#[derive(Args)]
struct Spaces {
    /// Domain Blaschke product: `{"zeros": [[re, im], ...], "const": [re, im]}` or a file.
    #[arg(long)]
    alpha: String,
    /// Codomain Blaschke product; defaults to alpha.
    #[arg(long)]
    beta: Option<String>,
}

#[derive(Args)]
struct OperatorSource {
    /// Operator JSON `{"alpha", "beta", "matrix"}`, a file, or `-` for stdin.
    operator: Option<String>,
    /// Build the operator from a symbol instead (with --symbol).
    #[arg(long, conflicts_with = "operator", requires = "symbol")]
    alpha: Option<String>,
    #[arg(long, requires = "alpha")]
    beta: Option<String>,
    #[arg(long, requires = "alpha")]
    symbol: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    T1,
    C2,
    C3a,
    C3b,
    Si,
    All,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    input::complex(s)
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
        _ => Err(format!("'{s}' is not a positive finite tolerance")),
    }
}

fn parse_nodes(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= MIN_NODE_COUNT && n.is_power_of_two() => Ok(n),
        _ => Err(format!("'{s}' is not a power of two >= {MIN_NODE_COUNT}")),
    }
}

fn parse_cap(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(c) if c > 0.0 && c < 1.0 => Ok(c),
        _ => Err(format!("'{s}' is not in (0, 1)")),
    }
}

impl Common {
    fn warn(&self) {
        if self.zero_cap > DEFAULT_ZERO_CAP {
            eprintln!(
                "warning: zero cap {} exceeds {DEFAULT_ZERO_CAP}; quadrature and basis accuracy are no longer guaranteed",
                self.zero_cap
            );
        }
    }
}

fn spaces(
    alpha: &str,
    beta: Option<&str>,
    common: &Common,
) -> Result<(ModelSpace, ModelSpace), CliError> {
    let alpha = input::blaschke(alpha, common.zero_cap)?;
    let beta = beta
        .map(|b| input::blaschke(b, common.zero_cap))
        .transpose()?
        .unwrap_or_else(|| alpha.clone());
    let nodes = input::node_count(&alpha, &beta, common.quad_nodes);
    let domain = tm_basis(&alpha, nodes)?;
    let codomain = if beta == alpha {
        domain.clone()
    } else {
        tm_basis(&beta, nodes)?
    };
    Ok((domain, codomain))
}

impl OperatorSource {
    fn load(&self, common: &Common) -> Result<OperatorMatrix, CliError> {
        match (&self.operator, &self.alpha, &self.symbol) {
            (Some(op), _, _) => input::operator(op, common.zero_cap, common.quad_nodes),
            (None, Some(alpha), Some(symbol)) => {
                let (dom, cod) = spaces(alpha, self.beta.as_deref(), common)?;
                input::symbol_operator(symbol, &dom, &cod)
            }
            _ => Err(CliError::Usage(
                "expected an operator argument or --alpha with --symbol".into(),
            )),
        }
    }
}

fn emit<T: Serialize>(value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string(value).map_err(|e| CliError::Io(e.to_string()))?;
    let mut out = std::io::stdout().lock();
    writeln!(out, "{text}").map_err(|e| CliError::Io(format!("stdout: {e}")))
}

fn status(pass: bool) -> ExitCode {
    ExitCode::from(if pass { 0 } else { 1 })
}

#[derive(Serialize)]
struct SeriesReport {
    terms: usize,
    /// `||A - partial sum of n terms||_F / max(1, ||A||_F)` for n = 0..=terms.
    errors: Vec<f64>,
    residual: f64,
    tolerance: f64,
    monotone: bool,
    pass: bool,
}

/// Terms needed for the geometric tail `r^n` to drop below `tol`.
fn default_terms(op: &OperatorMatrix, tol: f64) -> usize {
    let (a, b) = (op.domain().alpha(), op.codomain().alpha());
    let r = a.max_zero_modulus().max(b.max_zero_modulus());
    if r == 0.0 {
        return a.degree().max(b.degree());
    }
    ((tol.ln() / (r + 1e-3).ln()).ceil() as usize).max(1)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Build {
            spaces: s,
            symbol,
            common,
        } => {
            common.warn();
            let (dom, cod) = spaces(&s.alpha, s.beta.as_deref(), &common)?;
            emit(&input::symbol_operator(&symbol, &dom, &cod)?.to_json())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Shift { alpha, a, common } => {
            common.warn();
            let (space, _) = spaces(&alpha, None, &common)?;
            let op = match a {
                Some(a) => modified_shift(&space, a)?,
                None => compressed_shift(&space),
            };
            emit(&op.to_json())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Membership {
            source,
            variant,
            a,
            b,
            seed,
            common,
        } => {
            common.warn();
            let op = source.load(&common)?;
            let single = match variant {
                VariantArg::T1 => Variant::T1,
                VariantArg::C2 => Variant::C2,
                VariantArg::C3a => Variant::C3a,
                VariantArg::C3b => Variant::C3b,
                VariantArg::Si => Variant::SI,
                VariantArg::All => {
                    let report = equivalence_suite(&op, common.tol, seed)?;
                    if !report.agree {
                        eprintln!("warning: variants disagree");
                    }
                    emit(&report)?;
                    return Ok(status(report.agree && report.verdict));
                }
            };
            let result = membership(&op, single, common.tol, a, b)?;
            emit(&result)?;
            Ok(status(result.verdict))
        }
        Command::Recover { source, common } => {
            common.warn();
            let op = source.load(&common)?;
            match recover_symbol(&op, common.tol) {
                Ok(pair) => {
                    emit(&pair.to_json())?;
                    Ok(ExitCode::SUCCESS)
                }
                Err(e @ Error::NotAMember { .. }) => {
                    eprintln!("atto: {e}");
                    Ok(status(false))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::SeriesCheck {
            source,
            terms,
            common,
        } => {
            common.warn();
            let op = source.load(&common)?;
            let pair = match recover_symbol(&op, common.tol) {
                Ok(pair) => pair,
                Err(e @ Error::NotAMember { .. }) => {
                    eprintln!("atto: {e}");
                    return Ok(status(false));
                }
                Err(e) => return Err(e.into()),
            };
            let terms = terms.unwrap_or_else(|| default_terms(&op, common.tol));
            let scale = op.frobenius_norm().max(1.0);
            let errors: Vec<f64> = series_errors(&pair, terms)?
                .into_iter()
                .map(|e| e / scale)
                .collect();
            let residual = errors[terms];
            let monotone = errors.windows(2).all(|w| w[1] <= w[0] + 1e-12);
            let pass = monotone && residual <= common.tol;
            emit(&SeriesReport {
                terms,
                errors,
                residual,
                tolerance: common.tol,
                monotone,
                pass,
            })?;
            Ok(status(pass))
        }
        Command::Suite {
            seed,
            trials,
            deg_alpha,
            deg_beta,
            common,
        } => {
            common.warn();
            if common.tol < suite::FEASIBLE_TOL_FLOOR {
                eprintln!(
                    "warning: tolerance {:e} is below {:e}; failures will be flagged as tolerance-infeasible",
                    common.tol,
                    suite::FEASIBLE_TOL_FLOOR
                );
            }
            let cfg = suite::SuiteConfig {
                seed,
                trials: trials as usize,
                deg_alpha: deg_alpha as usize,
                deg_beta: deg_beta as usize,
                tol: common.tol,
                quad_nodes: common.quad_nodes,
            };
            let start = Instant::now();
            let report = suite::run_suite(&cfg);
            eprint!("{}", suite::render_table(&report));
            eprintln!("total {:.2}s", start.elapsed().as_secs_f64());
            emit(&report)?;
            Ok(status(report.pass))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("atto: {e}");
            ExitCode::from(2)
        }
    }
}
