//! The `validate` subcommand: noise statistics, ensemble steady state and
//! fitted quadrature decay rates against the closed-form predictions, with
//! PASS/FAIL verdicts and a machine-readable summary.

use anyhow::{anyhow, bail, Result};
use mollow_core::ou::{
    autocov_standard_error, autocovariance, moment_normality_check, sample_variance,
};
use mollow_core::{
    batched_decay_rate, build_stochastic_generator, ensemble_average, generate_ou,
    quadrature_rates, steady_state, BlochState, ModelParams, OUConfig, Quadrature,
    ELIMINATION_SZ_TOL,
};
use serde::Serialize;

use crate::config::{ModelSpec, RunConfig};

#[derive(Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub measured: f64,
    pub predicted: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckResult {
    fn new(name: &str, measured: f64, predicted: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            measured,
            predicted,
            tolerance,
            pass: (measured - predicted).abs() <= tolerance,
            note: None,
        }
    }

    fn with_note(mut self, note: String) -> Self {
        self.note = Some(note);
        self
    }

    fn failed(name: &str, note: String) -> Self {
        Self {
            name: name.to_string(),
            measured: f64::NAN,
            predicted: f64::NAN,
            tolerance: 0.0,
            pass: false,
            note: Some(note),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub all_pass: bool,
    pub regime_ok: bool,
    pub checks: Vec<CheckResult>,
}

const MIN_TRAJECTORIES: usize = 10;
const N_BATCHES: usize = 10;

pub fn run_validate(cfg: &RunConfig) -> Result<bool> {
    let ModelSpec::Stochastic(p) = &cfg.model else {
        bail!("validation drives the stochastic model");
    };
    let p = *p;
    let dt = cfg
        .dt
        .unwrap_or(0.1 / p.kappa.max(p.omega).max(p.gamma));
    let mut checks = Vec::new();

    // ---- noise-path statistics -------------------------------------------
    let ou_cfg = OUConfig::new(dt, 1_000_000, cfg.seed, 1).map_err(|e| anyhow!("{e}"))?;
    let path = generate_ou(&ou_cfg, p.d_strength, p.kappa).map_err(|e| anyhow!("{e}"))?;
    let n = path.samples.len();
    let target = p.d_strength * p.kappa;

    let v = sample_variance(&path.samples);
    let se = autocov_standard_error(p.d_strength, p.kappa, dt, n, 0);
    checks.push(CheckResult::new("ou stationary variance", v, target, 3.0 * se));

    for lag_time in [1.0 / p.kappa, 3.0 / p.kappa] {
        let lag = ((lag_time / dt).round() as usize).max(1);
        let tau = lag as f64 * dt;
        let expect = target * (-p.kappa * tau).exp();
        let c = autocovariance(&path.samples, lag);
        let se = autocov_standard_error(p.d_strength, p.kappa, dt, n, lag);
        checks.push(CheckResult::new(
            &format!("ou autocovariance at tau = {tau:.4}"),
            c,
            expect,
            3.0 * se,
        ));
    }

    let stride = (5.0 / (p.kappa * dt)).ceil() as usize;
    let m = moment_normality_check(&path.samples, stride);
    checks.push(CheckResult::new(
        "ou skewness (thinned)",
        m.skewness,
        0.0,
        3.0 * m.se_skewness,
    ));
    checks.push(CheckResult::new(
        "ou excess kurtosis (thinned)",
        m.excess_kurtosis,
        0.0,
        3.0 * m.se_kurtosis,
    ));

    // ---- ensemble checks --------------------------------------------------
    if cfg.n_traj < MIN_TRAJECTORIES {
        for name in [
            "ensemble steady sz",
            "fitted gamma_x at phi = 0",
            "fitted gamma_x at phi = pi/2",
        ] {
            checks.push(CheckResult::failed(
                name,
                format!(
                    "under-sampled: n_traj = {} but error bars need at least {MIN_TRAJECTORIES} trajectories",
                    cfg.n_traj
                ),
            ));
        }
    } else {
        let n_steps = (20.0 / dt).round() as usize;
        let ens_cfg =
            OUConfig::new(dt, n_steps, cfg.seed, cfg.n_traj).map_err(|e| anyhow!("{e}"))?;
        let e = ensemble_average(&p, &ens_cfg, &BlochState::ground()).map_err(|e| anyhow!("{e}"))?;
        let (mean, se) = e.final_state();
        let eff = steady_state(&build_stochastic_generator(&p)).map_err(|e| anyhow!("{e}"))?;
        checks.push(
            CheckResult::new(
                "ensemble steady sz",
                mean[2],
                eff.sz,
                3.0 * se[2] + ELIMINATION_SZ_TOL,
            )
            .with_note(format!(
                "tolerance = 3 SE ({:.1e}) + calibrated elimination accuracy ({ELIMINATION_SZ_TOL:.1e})",
                3.0 * se[2]
            )),
        );

        // x-quadrature decay fits at the two symmetry phases
        let fit_steps = (2.5 / dt).round() as usize;
        let fit_cfg =
            OUConfig::new(dt, fit_steps, cfg.seed.wrapping_add(2), cfg.n_traj)
                .map_err(|e| anyhow!("{e}"))?;
        let b0 = BlochState::new(1.0, 0.0, 0.0).map_err(|e| anyhow!("{e}"))?;
        let window = (3.0 / p.kappa, 2.5);

        for (phi, label) in [(0.0, "phi = 0"), (std::f64::consts::FRAC_PI_2, "phi = pi/2")] {
            let pp = ModelParams::new(p.omega, p.gamma, p.kappa, p.d_strength, phi)
                .map_err(|e| anyhow!("{e}"))?;
            let expect = quadrature_rates(&pp).gamma_x;
            match batched_decay_rate(&pp, &fit_cfg, &b0, Quadrature::X, window, N_BATCHES) {
                Ok(f) => {
                    let tol = 3.0 * f.std_err + 1e-4 * expect;
                    checks.push(
                        CheckResult::new(
                            &format!("fitted gamma_x at {label}"),
                            f.rate,
                            expect,
                            tol,
                        )
                        .with_note(format!("batched over {N_BATCHES} sub-ensembles")),
                    );
                }
                Err(err) => checks.push(CheckResult::failed(
                    &format!("fitted gamma_x at {label}"),
                    err.to_string(),
                )),
            }
        }
    }

    let report = Report {
        all_pass: checks.iter().all(|c| c.pass),
        regime_ok: p.regime_ok(),
        checks,
    };

    // ---- human-readable table ---------------------------------------------
    println!(
        "{:<34} {:>14} {:>14} {:>12}  verdict",
        "check", "measured", "predicted", "tolerance"
    );
    for c in &report.checks {
        println!(
            "{:<34} {:>14.6e} {:>14.6e} {:>12.2e}  {}",
            c.name,
            c.measured,
            c.predicted,
            c.tolerance,
            if c.pass { "PASS" } else { "FAIL" }
        );
        if let Some(note) = &c.note {
            println!("    note: {note}");
        }
    }
    if !report.regime_ok {
        let (a, b) = p.regime_margins();
        println!(
            "warning: validity regime violated (omega/sqrt(D kappa) = {a:.2}, kappa/gamma = {b:.2}, both should be >= 5); the effective description may be unreliable"
        );
    }
    println!(
        "validation {}",
        if report.all_pass { "PASSED" } else { "FAILED" }
    );

    if let Some(out) = &cfg.out {
        let json = serde_json::to_string_pretty(&report)?;
        std::fs::write(out, json + "\n")
            .map_err(|e| anyhow!("cannot write report {}: {e}", out.display()))?;
    }
    Ok(report.all_pass)
}
