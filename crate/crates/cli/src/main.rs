//! `cesaro`: command-line front end for norms, spectra, scans and the
//! self-test.
//!
//! Exit status: 0 success, 2 invalid arguments, 3 numerical
//! non-convergence (or `Undetermined` under `--strict`), 4 internal
//! cross-check disagreement or self-test failure.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "cesaro",
    version,
    about = "Cesaro operator on weighted Bergman spaces"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Thread cap for parallel scan batches.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monomial, Parseval, quadrature and seminorm-family norms.
    Norm(NormArgs),
    /// Spectral sets, membership queries and the step-union cross-check.
    Spectrum(SpectrumArgs),
    /// Numerical scans.
    Scan(ScanArgs),
    /// Runs the invariant suite.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Banach,
    Frechet,
    Lb,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    /// Closed-form norm of z^j.
    #[arg(long, group = "mode")]
    pub monomial: bool,
    /// Parseval norm (p = 2) of a coefficient file, with a quadrature cross-run.
    #[arg(long, group = "mode")]
    pub parseval: bool,
    /// Quadrature norm of a coefficient file.
    #[arg(long, group = "mode")]
    pub quadrature: bool,
    /// Step seminorms of a coefficient file in a Fréchet or (LB) space.
    #[arg(long, group = "mode")]
    pub family: bool,
    #[arg(short = 'j', default_value_t = 0)]
    pub j: usize,
    #[arg(short = 'p', default_value_t = 2.0)]
    pub p: f64,
    #[arg(long)]
    pub alpha: f64,
    /// Compares ‖z^j‖^p j^(α+1) with its limit 2Γ(α+1)p^-(α+1).
    #[arg(long)]
    pub check_asymptotic: bool,
    /// JSON array of [re, im] coefficient pairs.
    #[arg(long)]
    pub coeffs_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "frechet")]
    pub kind: KindArg,
    /// Largest step index of a seminorm family.
    #[arg(long, default_value_t = 5)]
    pub steps: u32,
    #[arg(long)]
    pub rel_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    #[arg(short = 'p', default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    /// Point to classify, as `re` or `re,im`; may be repeated.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Vec<String>,
    /// Report the Waelbroeck spectrum (the closure) instead.
    #[arg(long)]
    pub waelbroeck: bool,
    /// Step-union cross-check on a grid over [-1, 2] x [-1, 1].
    #[arg(long)]
    pub crosscheck: bool,
    #[arg(long, default_value = "100x100")]
    pub grid: String,
    #[arg(long, default_value_t = 100)]
    pub nmax: u32,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(subcommand)]
    pub scan: ScanCommand,
    /// Exit with status 3 when a classification is Undetermined.
    #[arg(long, global = true)]
    pub strict: bool,
    #[arg(long, global = true, default_value_t = 1 << 14)]
    pub nmax: usize,
    /// Quadrature tolerance for p != 2.
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Relative increment below which a scan counts as converged.
    #[arg(long, global = true)]
    pub tol_conv: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    Frechet,
    Lb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunctionArg {
    /// 1/(1 - z)
    F1,
    /// The Fréchet counterexample (1 + z)^-((α+1-ε)/p).
    Feps,
    /// The eigenfunction z^(m-1) (1 - z)^-m.
    Eigen,
}

#[derive(Debug, Subcommand)]
pub enum ScanCommand {
    /// Truncation norms of the eigenfunction f_m.
    Eigen {
        #[arg(short = 'm')]
        m: u32,
        #[arg(short = 'p')]
        p: f64,
        #[arg(long)]
        alpha: f64,
        /// Steps reported for boundary cases m = (2 + α)/p.
        #[arg(long, default_value_t = 5)]
        boundary_steps: u32,
    },
    /// Eigen membership scans over a (p, α, m) grid.
    Grid {
        #[arg(long, value_delimiter = ',', default_values_t = [1.5, 2.0, 3.0])]
        ps: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0, 3.5])]
        alphas: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 3, 4, 5])]
        ms: Vec<u32>,
    },
    /// Norm blow-up of the inverse image of the counterexample function.
    Counterexample {
        #[arg(short = 'p')]
        p: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, value_enum, default_value = "frechet")]
        case: CaseArg,
        #[arg(long, default_value_t = 6)]
        last_step: u32,
    },
    /// Partial sums of the Grothendieck–Pietsch ratios.
    Gp {
        #[arg(short = 'p')]
        p: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(short = 'm')]
        m: u32,
        #[arg(long, default_value_t = 100_000)]
        jmax: usize,
    },
    /// Partial-sum tails in the step seminorms.
    Schauder {
        #[arg(long, value_enum)]
        function: FunctionArg,
        #[arg(short = 'p', default_value_t = 2.0)]
        p: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long, value_enum, default_value = "frechet")]
        kind: KindArg,
        #[arg(long, default_value_t = 5)]
        steps: u32,
        #[arg(long, default_value_t = 0.4)]
        epsilon: f64,
        #[arg(short = 'm', default_value_t = 1)]
        m: u32,
        /// Degree of the reference truncation (default 16 n_max at p = 2,
        /// 2 n_max otherwise).
        #[arg(long)]
        reference: Option<usize>,
    },
    /// Diagonal of the inclusion A^p_mu -> A^p_gamma.
    Inclusion {
        #[arg(short = 'p')]
        p: f64,
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 10_000)]
        jmax: usize,
    },
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Limits scans to N_max = 2^10.
    #[arg(long)]
    pub quick: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cesaro: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
