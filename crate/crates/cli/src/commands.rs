//! The five subcommands.

use anyhow::{anyhow, bail, Result};
use mollow_core::{
    absorption_spectrum, build_csf_generator, build_isv_generator, build_stochastic_generator_with,
    dressed_rates, fluorescence_analytic_with, fluorescence_numeric, quadrature_rates,
    FrequencyGrid, Generator64, ModelParams, RabiConvention, SpectrumSeries64,
};

use crate::config::{ModelSpec, RunConfig};
use crate::output;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    Fluorescence,
    Absorption,
}

fn rabi_convention(cfg: &RunConfig) -> RabiConvention {
    if cfg.bare_rabi {
        RabiConvention::Bare
    } else {
        RabiConvention::Shifted
    }
}

fn build_generator(cfg: &RunConfig) -> Result<Generator64> {
    Ok(match &cfg.model {
        ModelSpec::Stochastic(p) => build_stochastic_generator_with(p, rabi_convention(cfg)),
        ModelSpec::Csf { omega, n, m } => {
            build_csf_generator(1.0, *omega, *n, *m).map_err(|e| anyhow!("{e}"))?
        }
        ModelSpec::Isv { omega, params } => {
            build_isv_generator(1.0, *omega, params).map_err(|e| anyhow!("{e}"))?
        }
    })
}

/// Central linewidth scale used to size the default grid refinement.
fn central_width_scale(cfg: &RunConfig, g: &Generator64) -> f64 {
    match &cfg.model {
        ModelSpec::Stochastic(p) => dressed_rates(p).gamma_par,
        // x-quadrature decay rate plays the role of the central width
        _ => -g.drift[0][0],
    }
}

fn line_position(cfg: &RunConfig) -> f64 {
    match &cfg.model {
        ModelSpec::Stochastic(p) => match rabi_convention(cfg) {
            RabiConvention::Shifted => dressed_rates(p).omega_prime,
            RabiConvention::Bare => p.omega,
        },
        ModelSpec::Csf { omega, .. } | ModelSpec::Isv { omega, .. } => *omega,
    }
}

fn make_grid(cfg: &RunConfig, g: &Generator64) -> Result<FrequencyGrid<f64>> {
    let width = central_width_scale(cfg, g);
    match (cfg.grid.min, cfg.grid.max) {
        (Some(min), Some(max)) => {
            if cfg.grid.refine_center && min < 0.0 && max > 0.0 && min == -max {
                FrequencyGrid::symmetric_refined(
                    max,
                    cfg.grid.count,
                    (8.0 * width).min(max),
                    801,
                )
            } else {
                FrequencyGrid::linspace(min, max, cfg.grid.count)
            }
        }
        _ => {
            let span = (1.6 * line_position(cfg)).max(20.0 * width);
            if cfg.grid.refine_center {
                FrequencyGrid::symmetric_refined(span, cfg.grid.count, 8.0 * width, 801)
            } else {
                FrequencyGrid::symmetric_span(span, cfg.grid.count)
            }
        }
    }
    .map_err(|e| anyhow!("{e}"))
}

fn compute_spectrum(cfg: &RunConfig, kind: SweepKind) -> Result<SpectrumSeries64> {
    let g = build_generator(cfg)?;
    let grid = make_grid(cfg, &g)?;
    match kind {
        SweepKind::Fluorescence if cfg.analytic => {
            let ModelSpec::Stochastic(p) = &cfg.model else {
                bail!("--analytic needs the stochastic model (closed form uses its dressed rates)");
            };
            fluorescence_analytic_with(p, &grid, rabi_convention(cfg)).map_err(|e| anyhow!("{e}"))
        }
        SweepKind::Fluorescence => fluorescence_numeric(&g, &grid).map_err(|e| anyhow!("{e}")),
        SweepKind::Absorption => absorption_spectrum(&g, &grid).map_err(|e| anyhow!("{e}")),
    }
}

pub fn run_spectrum(cfg: &RunConfig) -> Result<()> {
    let series = compute_spectrum(cfg, SweepKind::Fluorescence)?;
    let mut sink = output::open_sink(cfg.out.as_deref())?;
    output::write_spectrum(&mut sink, &series, cfg.gamma_scale)
}

pub fn run_absorb(cfg: &RunConfig) -> Result<()> {
    let series = compute_spectrum(cfg, SweepKind::Absorption)?;
    let mut sink = output::open_sink(cfg.out.as_deref())?;
    output::write_spectrum(&mut sink, &series, cfg.gamma_scale)
}

/// Phase sweep over [0, pi/2]: one spectrum row per phase on a shared grid.
pub fn run_sweep(cfg: &RunConfig, kind: SweepKind) -> Result<()> {
    let ModelSpec::Stochastic(base) = &cfg.model else {
        bail!("sweep varies the relative phase, which only the stochastic model has");
    };
    let phis: Vec<f64> = (0..cfg.phi_count)
        .map(|k| 0.5 * k as f64 / (cfg.phi_count - 1) as f64)
        .collect();

    // shared grid sized at phi = pi/2 where the shifted Rabi frequency and
    // the central width are largest
    let widest = ModelParams::unit_gamma(
        base.omega,
        base.kappa,
        base.d_strength,
        std::f64::consts::FRAC_PI_2,
    )
    .map_err(|e| anyhow!("{e}"))?;
    let widest_cfg = RunConfig {
        model: ModelSpec::Stochastic(widest),
        ..cfg.clone()
    };
    let grid = make_grid(&widest_cfg, &build_generator(&widest_cfg)?)?;

    use rayon::prelude::*;
    let rows: Result<Vec<SpectrumSeries64>> = phis
        .par_iter()
        .map(|phi_over_pi| {
            let p = ModelParams::unit_gamma(
                base.omega,
                base.kappa,
                base.d_strength,
                phi_over_pi * std::f64::consts::PI,
            )
            .map_err(|e| anyhow!("{e}"))?;
            let sub = RunConfig {
                model: ModelSpec::Stochastic(p),
                ..cfg.clone()
            };
            let g = build_generator(&sub)?;
            match kind {
                SweepKind::Fluorescence => {
                    fluorescence_numeric(&g, &grid).map_err(|e| anyhow!("{e}"))
                }
                SweepKind::Absorption => absorption_spectrum(&g, &grid).map_err(|e| anyhow!("{e}")),
            }
        })
        .collect();
    let rows = rows?;

    let mut sink = output::open_sink(cfg.out.as_deref())?;
    output::write_sweep(&mut sink, &phis, &rows, cfg.gamma_scale)
}

pub fn run_rates(cfg: &RunConfig) -> Result<()> {
    let ModelSpec::Stochastic(p) = &cfg.model else {
        bail!("rates are defined for the stochastic model");
    };
    let q = quadrature_rates(p);
    let d = dressed_rates(p);
    let rows = [
        ("gamma_x", q.gamma_x),
        ("gamma_y", q.gamma_y),
        ("gamma_z", q.gamma_z),
        ("Gamma_par", d.gamma_par),
        ("Gamma_perp", d.gamma_perp),
        ("Omega_prime", d.omega_prime),
    ];
    match &cfg.out {
        Some(_) => {
            let mut sink = output::open_sink(cfg.out.as_deref())?;
            output::write_rates(&mut sink, &rows)
        }
        None => {
            println!("{:<12} {:>18}", "quantity", "value_over_gamma");
            for (name, value) in rows {
                println!("{name:<12} {value:>18.12}");
            }
            if !p.regime_ok() {
                eprintln!(
                    "warning: parameters outside the validity regime (need omega >= 5 sqrt(D kappa) and kappa >= 5 gamma); the dressed-rate formulas may be unreliable"
                );
            }
            Ok(())
        }
    }
}
