//! `mollow`: phase-dependent fluorescence and probe-absorption spectra of a
//! two-level atom driven by a coherent field plus a weak stochastic field.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage error, 3 I/O or
//! runtime error.

mod commands;
mod config;
mod output;
mod validate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};

use commands::SweepKind;
use config::{RawOptions, RunConfig};

#[derive(Parser)]
#[command(
    name = "mollow",
    version,
    about = "Phase-dependent spectra of a coherently driven two-level atom with an amplitude-fluctuating stochastic field",
    long_about = None
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Resonance-fluorescence spectrum F(omega) as CSV
    Spectrum(CommonArgs),
    /// Weak-probe absorption spectrum A(omega) as CSV (negative = gain)
    Absorb(CommonArgs),
    /// Phase sweep over [0, pi/2]: matrix CSV with one row per phase
    Sweep(SweepArgs),
    /// Stochastic-trajectory validation of the effective model
    Validate(CommonArgs),
    /// Print the closed-form quadrature and dressed rates
    Rates(CommonArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Model: stochastic | csf | isv
    #[arg(long)]
    model: Option<String>,

    /// Rabi frequency of the coherent field [units of gamma]
    #[arg(long)]
    omega: Option<f64>,

    /// Stochastic-field bandwidth kappa [units of gamma]
    #[arg(long)]
    kappa: Option<f64>,

    /// Stochastic correlation strength D [units of gamma]
    #[arg(long = "D")]
    d_strength: Option<f64>,

    /// Relative phase phi (radians or pi fractions such as pi/6)
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,

    /// Squeezed-reservoir photon number N
    #[arg(long = "N")]
    n_photon: Option<f64>,

    /// Squeezed-reservoir correlation M (signed for csf, magnitude for isv;
    /// isv defaults to the ideal sqrt(N(N+1)))
    #[arg(long = "M", allow_hyphen_values = true)]
    m_corr: Option<f64>,

    /// Squeezing phase Phi for the isv model (radians or pi fractions)
    #[arg(long = "Phi", allow_hyphen_values = true)]
    big_phi: Option<String>,

    /// Axis rescale factor: the emitted frequency column is multiplied by
    /// this (physics is always computed in units of gamma)
    #[arg(long)]
    gamma: Option<f64>,

    /// Frequency grid minimum [units of gamma]
    #[arg(long, allow_hyphen_values = true)]
    grid_min: Option<f64>,

    /// Frequency grid maximum [units of gamma]
    #[arg(long, allow_hyphen_values = true)]
    grid_max: Option<f64>,

    /// Number of grid points (default 4001)
    #[arg(long)]
    grid_count: Option<usize>,

    /// Densify the grid around line centre (default true)
    #[arg(long, action = ArgAction::Set)]
    refine_center: Option<bool>,

    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Base RNG seed for stochastic runs
    #[arg(long)]
    seed: Option<u64>,

    /// Ensemble size for stochastic runs
    #[arg(long)]
    ntraj: Option<usize>,

    /// Integrator step [units of 1/gamma]; must satisfy
    /// dt <= 0.1/max(kappa, omega, gamma)
    #[arg(long)]
    dt: Option<f64>,

    /// Bound the worker-thread count (default: all cores)
    #[arg(long)]
    threads: Option<usize>,

    /// Evaluate the closed-form three-Lorentzian spectrum instead of the
    /// resolvent (spectrum subcommand, stochastic model only)
    #[arg(long, action = ArgAction::SetTrue)]
    analytic: bool,

    /// Force the bare Rabi frequency (drop the dynamical frequency shift)
    #[arg(long, action = ArgAction::SetTrue)]
    bare_rabi: bool,

    /// Config file (key = value with [model]/[grid]/[run] sections); flags
    /// take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Number of phase samples on [0, pi/2]
    #[arg(long)]
    phi_count: Option<usize>,

    /// Which spectrum to sweep: fluor | absorb
    #[arg(long, default_value = "fluor")]
    kind: String,
}

impl CommonArgs {
    fn into_raw(self) -> RawOptions {
        RawOptions {
            model: self.model,
            omega: self.omega,
            kappa: self.kappa,
            d_strength: self.d_strength,
            phi: self.phi,
            n_photon: self.n_photon,
            m_corr: self.m_corr,
            big_phi: self.big_phi,
            gamma: self.gamma,
            grid_min: self.grid_min,
            grid_max: self.grid_max,
            grid_count: self.grid_count,
            refine_center: self.refine_center,
            out: self.out,
            seed: self.seed,
            n_traj: self.ntraj,
            dt: self.dt,
            threads: self.threads,
            analytic: if self.analytic { Some(true) } else { None },
            bare_rabi: if self.bare_rabi { Some(true) } else { None },
            phi_count: None,
        }
    }
}

/// Defaults for `validate` without an explicit model: the scaled-down
/// regime (Omega = 40, kappa = 20, D = 2) that runs in seconds.
fn validate_defaults() -> RawOptions {
    RawOptions {
        model: Some("stochastic".into()),
        omega: Some(40.0),
        kappa: Some(20.0),
        d_strength: Some(2.0),
        ..Default::default()
    }
}

fn resolve_config(
    args: CommonArgs,
    phi_count: Option<usize>,
    extra_defaults: Option<RawOptions>,
) -> anyhow::Result<RunConfig> {
    let config_path = args.config.clone();
    let mut merged = args.into_raw();
    merged.phi_count = phi_count;
    if let Some(path) = config_path {
        merged = merged.or(config::parse_config_file(&path)?);
    }
    if let Some(defaults) = extra_defaults {
        merged = merged.or(defaults);
    }
    config::resolve(merged)
}

fn setup_threads(cfg: &RunConfig) {
    if let Some(n) = cfg.threads {
        // ignore failure: the global pool can only be set once (tests)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

/// Usage errors exit with 2, I/O and runtime failures with 3.
fn exit_code_for(err: &anyhow::Error) -> u8 {
    let msg = err.to_string();
    let usage = msg.contains("missing required")
        || msg.contains("conflicts with")
        || msg.contains("unknown model")
        || msg.contains("bad angle")
        || msg.contains("grid")
        || msg.contains("must be")
        || msg.contains("config")
        || msg.contains("invalid parameter");
    if usage {
        2
    } else {
        3
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let outcome: anyhow::Result<bool> = (|| {
        match cli.command {
            Command::Spectrum(args) => {
                let cfg = resolve_config(args, None, None)?;
                setup_threads(&cfg);
                commands::run_spectrum(&cfg)?;
                Ok(true)
            }
            Command::Absorb(args) => {
                let cfg = resolve_config(args, None, None)?;
                setup_threads(&cfg);
                commands::run_absorb(&cfg)?;
                Ok(true)
            }
            Command::Sweep(args) => {
                let kind = match args.kind.as_str() {
                    "fluor" | "fluorescence" => SweepKind::Fluorescence,
                    "absorb" | "absorption" => SweepKind::Absorption,
                    other => anyhow::bail!("unknown sweep kind `{other}` (must be fluor or absorb)"),
                };
                let cfg = resolve_config(args.common, args.phi_count, None)?;
                setup_threads(&cfg);
                commands::run_sweep(&cfg, kind)?;
                Ok(true)
            }
            Command::Validate(args) => {
                let cfg = resolve_config(args, None, Some(validate_defaults()))?;
                setup_threads(&cfg);
                validate::run_validate(&cfg)
            }
            Command::Rates(args) => {
                let cfg = resolve_config(args, None, None)?;
                commands::run_rates(&cfg)?;
                Ok(true)
            }
        }
    })();

    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
