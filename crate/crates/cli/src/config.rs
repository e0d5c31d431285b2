//! Run configuration: flag/config-file merging, angle parsing, and the
//! resolved per-command settings.
//!
//! Precedence is flags over config-file values over built-in defaults. The
//! config file is plain `key = value` lines under `[model]`, `[grid]` and
//! `[run]` sections; keys mirror the long flags.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use mollow_core::{ModelParams, SqueezedParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Stochastic,
    Csf,
    Isv,
}

impl ModelKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "stochastic" => Ok(Self::Stochastic),
            "csf" => Ok(Self::Csf),
            "isv" => Ok(Self::Isv),
            other => bail!("unknown model `{other}` (expected stochastic, csf or isv)"),
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Stochastic => "stochastic",
            Self::Csf => "csf",
            Self::Isv => "isv",
        })
    }
}

/// Fully resolved model selection.
#[derive(Debug, Clone)]
pub enum ModelSpec {
    Stochastic(ModelParams<f64>),
    Csf { omega: f64, n: f64, m: f64 },
    Isv { omega: f64, params: SqueezedParams<f64> },
}

#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub count: usize,
    pub refine_center: bool,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: ModelSpec,
    pub grid: GridSpec,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub n_traj: usize,
    pub dt: Option<f64>,
    pub threads: Option<usize>,
    pub analytic: bool,
    pub bare_rabi: bool,
    pub phi_count: usize,
    pub gamma_scale: f64,
}

/// Raw option bag prior to merging (every field optional).
#[derive(Debug, Default, Clone)]
pub struct RawOptions {
    pub model: Option<String>,
    pub omega: Option<f64>,
    pub kappa: Option<f64>,
    pub d_strength: Option<f64>,
    pub phi: Option<String>,
    pub n_photon: Option<f64>,
    pub m_corr: Option<f64>,
    pub big_phi: Option<String>,
    pub gamma: Option<f64>,
    pub grid_min: Option<f64>,
    pub grid_max: Option<f64>,
    pub grid_count: Option<usize>,
    pub refine_center: Option<bool>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub n_traj: Option<usize>,
    pub dt: Option<f64>,
    pub threads: Option<usize>,
    pub analytic: Option<bool>,
    pub bare_rabi: Option<bool>,
    pub phi_count: Option<usize>,
}

impl RawOptions {
    /// Fill unset fields from `other` (lower-precedence source).
    pub fn or(mut self, other: RawOptions) -> RawOptions {
        macro_rules! take {
            ($($f:ident),*) => { $( if self.$f.is_none() { self.$f = other.$f; } )* };
        }
        take!(
            model, omega, kappa, d_strength, phi, n_photon, m_corr, big_phi, gamma, grid_min,
            grid_max, grid_count, refine_center, out, seed, n_traj, dt, threads, analytic,
            bare_rabi, phi_count
        );
        self
    }
}

/// Angles come as plain radians or as fractions of pi: `pi`, `-pi/4`,
/// `2pi/3`, `0.5pi`.
pub fn parse_angle(s: &str) -> Result<f64> {
    let t = s.trim();
    if let Some(idx) = t.find("pi") {
        let (coef_str, rest) = (&t[..idx], &t[idx + 2..]);
        let coef = match coef_str.trim() {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c
                .parse::<f64>()
                .map_err(|_| anyhow!("bad angle `{s}`: malformed pi coefficient"))?,
        };
        let denom = match rest.trim() {
            "" => 1.0,
            d => {
                let d = d
                    .strip_prefix('/')
                    .ok_or_else(|| anyhow!("bad angle `{s}`: expected `/denominator` after pi"))?;
                let v: f64 = d
                    .trim()
                    .parse()
                    .map_err(|_| anyhow!("bad angle `{s}`: malformed denominator"))?;
                if v == 0.0 {
                    bail!("bad angle `{s}`: zero denominator");
                }
                v
            }
        };
        Ok(coef * std::f64::consts::PI / denom)
    } else {
        t.parse::<f64>()
            .map_err(|_| anyhow!("bad angle `{s}`: not a number or pi fraction"))
    }
}

/// Parse a `key = value` config file with `[section]` headers.
pub fn parse_config_file(path: &Path) -> Result<RawOptions> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    let mut section = String::new();
    let mut map: HashMap<(String, String), String> = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            section = name.trim().to_string();
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("config line {} is not `key = value`", lineno + 1))?;
        map.insert(
            (section.clone(), key.trim().to_string()),
            value.trim().to_string(),
        );
    }

    let mut opts = RawOptions::default();
    for ((section, key), value) in map {
        let fail = |what: &str| anyhow!("config [{section}] {key} = {value}: bad {what}");
        match (section.as_str(), key.as_str()) {
            ("model", "model") => opts.model = Some(value),
            ("model", "omega") => opts.omega = Some(value.parse().map_err(|_| fail("number"))?),
            ("model", "kappa") => opts.kappa = Some(value.parse().map_err(|_| fail("number"))?),
            ("model", "D") => opts.d_strength = Some(value.parse().map_err(|_| fail("number"))?),
            ("model", "phi") => opts.phi = Some(value),
            ("model", "N") => opts.n_photon = Some(value.parse().map_err(|_| fail("number"))?),
            ("model", "M") => opts.m_corr = Some(value.parse().map_err(|_| fail("number"))?),
            ("model", "Phi") => opts.big_phi = Some(value),
            ("model", "gamma") => opts.gamma = Some(value.parse().map_err(|_| fail("number"))?),
            ("grid", "min") => opts.grid_min = Some(value.parse().map_err(|_| fail("number"))?),
            ("grid", "max") => opts.grid_max = Some(value.parse().map_err(|_| fail("number"))?),
            ("grid", "count") => opts.grid_count = Some(value.parse().map_err(|_| fail("count"))?),
            ("grid", "refine_center") => {
                opts.refine_center = Some(value.parse().map_err(|_| fail("bool"))?)
            }
            ("run", "out") => opts.out = Some(PathBuf::from(value)),
            ("run", "seed") => opts.seed = Some(value.parse().map_err(|_| fail("seed"))?),
            ("run", "ntraj") => opts.n_traj = Some(value.parse().map_err(|_| fail("count"))?),
            ("run", "dt") => opts.dt = Some(value.parse().map_err(|_| fail("number"))?),
            ("run", "threads") => opts.threads = Some(value.parse().map_err(|_| fail("count"))?),
            ("run", "analytic") => opts.analytic = Some(value.parse().map_err(|_| fail("bool"))?),
            ("run", "bare_rabi") => {
                opts.bare_rabi = Some(value.parse().map_err(|_| fail("bool"))?)
            }
            ("run", "phi_count") => {
                opts.phi_count = Some(value.parse().map_err(|_| fail("count"))?)
            }
            (s, k) => bail!("unknown config key [{s}] {k}"),
        }
    }
    Ok(opts)
}

/// Resolve the merged option bag into a validated `RunConfig`.
pub fn resolve(opts: RawOptions) -> Result<RunConfig> {
    let kind = ModelKind::parse(opts.model.as_deref().unwrap_or("stochastic"))?;

    // exactly one model parameter block may be present
    match kind {
        ModelKind::Stochastic => {
            if opts.n_photon.is_some() || opts.m_corr.is_some() || opts.big_phi.is_some() {
                bail!("model `stochastic` conflicts with --N/--M/--Phi (squeezed-field block)");
            }
        }
        ModelKind::Csf => {
            if opts.kappa.is_some() || opts.d_strength.is_some() || opts.phi.is_some() {
                bail!("model `csf` conflicts with --kappa/--D/--phi (stochastic-field block)");
            }
            if opts.big_phi.is_some() {
                bail!("model `csf` takes a signed --M, not --Phi");
            }
        }
        ModelKind::Isv => {
            if opts.kappa.is_some() || opts.d_strength.is_some() || opts.phi.is_some() {
                bail!("model `isv` conflicts with --kappa/--D/--phi (stochastic-field block)");
            }
        }
    }

    let omega = opts.omega.ok_or_else(|| anyhow!("missing required --omega"))?;
    let model = match kind {
        ModelKind::Stochastic => {
            let kappa = opts.kappa.ok_or_else(|| anyhow!("missing required --kappa"))?;
            let d = opts
                .d_strength
                .ok_or_else(|| anyhow!("missing required --D"))?;
            let phi = match &opts.phi {
                Some(s) => parse_angle(s)?,
                None => 0.0,
            };
            ModelSpec::Stochastic(
                ModelParams::unit_gamma(omega, kappa, d, phi).map_err(|e| anyhow!("{e}"))?,
            )
        }
        ModelKind::Csf => {
            let n = opts.n_photon.ok_or_else(|| anyhow!("missing required --N"))?;
            let m = opts.m_corr.ok_or_else(|| anyhow!("missing required --M"))?;
            ModelSpec::Csf { omega, n, m }
        }
        ModelKind::Isv => {
            let n = opts.n_photon.ok_or_else(|| anyhow!("missing required --N"))?;
            let big_phi = match &opts.big_phi {
                Some(s) => parse_angle(s)?,
                None => 0.0,
            };
            let params = match opts.m_corr {
                Some(m) => SqueezedParams::new(n, m, big_phi),
                None => SqueezedParams::ideal(n, big_phi),
            }
            .map_err(|e| anyhow!("{e}"))?;
            ModelSpec::Isv { omega, params }
        }
    };

    let count = opts.grid_count.unwrap_or(4001);
    if count < 2 {
        bail!("grid count must be at least 2");
    }
    match (opts.grid_min, opts.grid_max) {
        (Some(a), Some(b)) if a >= b => bail!("grid min must be below grid max"),
        (Some(_), None) | (None, Some(_)) => {
            bail!("--grid-min and --grid-max must be given together")
        }
        _ => {}
    }

    let gamma_scale = opts.gamma.unwrap_or(1.0);
    if !(gamma_scale > 0.0) {
        bail!("--gamma must be positive");
    }
    let phi_count = opts.phi_count.unwrap_or(33);
    if phi_count < 2 {
        bail!("--phi-count must be at least 2");
    }

    Ok(RunConfig {
        model,
        grid: GridSpec {
            min: opts.grid_min,
            max: opts.grid_max,
            count,
            refine_center: opts.refine_center.unwrap_or(true),
        },
        out: opts.out,
        seed: opts.seed.unwrap_or(1),
        n_traj: opts.n_traj.unwrap_or(2000),
        dt: opts.dt,
        threads: opts.threads,
        analytic: opts.analytic.unwrap_or(false),
        bare_rabi: opts.bare_rabi.unwrap_or(false),
        phi_count,
        gamma_scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0").unwrap(), 0.0);
        assert!((parse_angle("0.5235987756").unwrap() - PI / 6.0).abs() < 1e-9);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("pi/6").unwrap(), PI / 6.0);
        assert_eq!(parse_angle("-pi/4").unwrap(), -PI / 4.0);
        assert_eq!(parse_angle("2pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_angle("0.5pi").unwrap(), 0.5 * PI);
        assert!(parse_angle("pi/0").is_err());
        assert!(parse_angle("twopi").is_err());
    }

    #[test]
    fn conflicting_blocks_rejected() {
        let opts = RawOptions {
            model: Some("stochastic".into()),
            omega: Some(200.0),
            kappa: Some(100.0),
            d_strength: Some(10.0),
            n_photon: Some(0.25),
            ..Default::default()
        };
        assert!(resolve(opts).is_err());
    }

    #[test]
    fn missing_omega_rejected() {
        let opts = RawOptions {
            model: Some("stochastic".into()),
            kappa: Some(100.0),
            d_strength: Some(10.0),
            ..Default::default()
        };
        let err = resolve(opts).unwrap_err().to_string();
        assert!(err.contains("--omega"), "{err}");
    }

    #[test]
    fn isv_defaults_to_ideal_correlation() {
        let opts = RawOptions {
            model: Some("isv".into()),
            omega: Some(20.0),
            n_photon: Some(0.25),
            big_phi: Some("pi".into()),
            ..Default::default()
        };
        match resolve(opts).unwrap().model {
            ModelSpec::Isv { params, .. } => {
                assert!((params.m_mag() - (0.25f64 * 1.25).sqrt()).abs() < 1e-12);
            }
            other => panic!("wrong model {other:?}"),
        }
    }

    #[test]
    fn flag_over_config_precedence() {
        let flags = RawOptions {
            omega: Some(1.0),
            ..Default::default()
        };
        let config = RawOptions {
            omega: Some(2.0),
            kappa: Some(3.0),
            ..Default::default()
        };
        let merged = flags.or(config);
        assert_eq!(merged.omega, Some(1.0));
        assert_eq!(merged.kappa, Some(3.0));
    }
}
