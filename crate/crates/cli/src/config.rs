//! Run configuration: defaults, config file, environment override.

use anyhow::{bail, Context, Result};
use flatlatt_core::numeric::Precision;
use flatlatt_core::sweep::{CapMode, PruneMode};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

/// On-disk configuration schema (all fields optional; flags override).
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub precision_cap: Option<u32>,
    pub safe_constants: Option<bool>,
    pub prune: Option<String>,
    pub scan_length: Option<String>,
    pub slack: Option<String>,
    pub workers: Option<usize>,
    pub out: Option<String>,
}

/// Resolved configuration for a run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub precision: Precision,
    pub safe_constants: bool,
    pub prune: PruneMode,
    pub scan_length: flatlatt_core::Scalar,
    pub slack: BigRational,
    pub cap_mode: CapMode,
    pub allow_large_l: bool,
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision: Precision::default(),
            safe_constants: false,
            prune: PruneMode::Off,
            scan_length: flatlatt_core::Scalar::from_integer(3),
            slack: BigRational::from_integer(1.into()),
            cap_mode: CapMode::Standard,
            allow_large_l: false,
            workers: 1,
        }
    }
}

impl RunConfig {
    /// Apply a config file, then the environment variable, then explicit
    /// flag values (handled by the caller after this).
    pub fn load(config_path: Option<&str>) -> Result<Self> {
        let mut cfg = RunConfig::default();
        if let Some(path) = config_path {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config file {path}"))?;
            let file: ConfigFile = serde_json::from_str(&text)
                .map_err(|e| anyhow::anyhow!("config file {path}: {e}"))?;
            if let Some(cap) = file.precision_cap {
                cfg.set_precision_cap(cap)?;
            }
            if let Some(s) = file.safe_constants {
                cfg.safe_constants = s;
            }
            if let Some(p) = &file.prune {
                cfg.prune = parse_prune(p)?;
            }
            if let Some(l) = &file.scan_length {
                cfg.scan_length = flatlatt_core::numeric::parse_scalar(l)
                    .map_err(|e| anyhow::anyhow!("config scan_length: {e}"))?;
            }
            if let Some(s) = &file.slack {
                cfg.slack = flatlatt_core::numeric::parse_rational(s)
                    .map_err(|e| anyhow::anyhow!("config slack: {e}"))?;
            }
            if let Some(w) = file.workers {
                if w == 0 {
                    bail!("worker count must be >= 1");
                }
                cfg.workers = w;
            }
        }
        if let Ok(v) = std::env::var("FLATLATT_PRECISION_CAP") {
            let cap: u32 = v
                .parse()
                .with_context(|| format!("FLATLATT_PRECISION_CAP={v}"))?;
            cfg.set_precision_cap(cap)?;
        }
        Ok(cfg)
    }

    pub fn set_precision_cap(&mut self, cap: u32) -> Result<()> {
        if cap < 64 {
            bail!("precision cap must be at least 64 bits");
        }
        self.precision.cap_bits = cap;
        self.precision.start_bits = self.precision.start_bits.min(cap);
        Ok(())
    }
}

pub fn parse_prune(s: &str) -> Result<PruneMode> {
    match s {
        "strict" => Ok(PruneMode::Strict),
        "off" => Ok(PruneMode::Off),
        other => {
            if let Some(k) = other.strip_prefix("relaxed:") {
                let k: u32 = k.parse().with_context(|| format!("prune factor {k}"))?;
                if k == 0 {
                    bail!("relaxation factor must be >= 1");
                }
                Ok(PruneMode::Relaxed(k))
            } else {
                bail!("prune mode must be strict, relaxed:K or off (got {other})")
            }
        }
    }
}

pub fn prune_name(p: PruneMode) -> String {
    match p {
        PruneMode::Strict => "strict".into(),
        PruneMode::Off => "off".into(),
        PruneMode::Relaxed(k) => format!("relaxed:{k}"),
    }
}

pub fn cap_mode_name(c: CapMode) -> &'static str {
    match c {
        CapMode::Standard => "standard",
        CapMode::Coarea => "coarea",
    }
}

pub fn parse_cap_mode(s: &str) -> Result<CapMode> {
    match s {
        "standard" => Ok(CapMode::Standard),
        "coarea" => Ok(CapMode::Coarea),
        other => bail!("cap mode must be standard or coarea (got {other})"),
    }
}

/// Parse `--tau`: either `<rational>pi` (e.g. `6pi`) or a plain scalar.
pub fn parse_tau(s: &str) -> Result<flatlatt_core::Scalar> {
    let t = s.trim();
    if let Some(coef) = t.strip_suffix("pi") {
        let coef = if coef.is_empty() { "1" } else { coef };
        let q = flatlatt_core::numeric::parse_rational(coef)
            .map_err(|e| anyhow::anyhow!("tau coefficient: {e}"))?;
        return Ok(flatlatt_core::Scalar::from_rational(q).mul(&flatlatt_core::Scalar::pi()));
    }
    flatlatt_core::numeric::parse_scalar(t).map_err(|e| anyhow::anyhow!("tau: {e}"))
}
