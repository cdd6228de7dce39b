//! Parallel sweep driver and catalog persistence with resume support.
//!
//! Work units are independent and pure; results merge by unit index, so the
//! catalog bytes are identical for any worker count. Resume keeps the
//! serialized entries of completed units verbatim and only runs the rest.

use anyhow::{anyhow, bail, Context, Result};
use flatlatt_core::numeric::rational_string;
use flatlatt_core::sweep::{compare_count, run_unit, sweep_units, SweepConfig};
use rayon::prelude::*;

use crate::config::{cap_mode_name, prune_name, RunConfig};
use crate::formats::{
    compare_json, diagnostic_json, entry_json, CatalogConfigJson, CatalogEntryJson, CatalogJson,
    DiagnosticJson,
};

/// The sweep parameters that must match for a resume to be meaningful.
pub fn catalog_config_json(sweep: &SweepConfig, run: &RunConfig) -> CatalogConfigJson {
    CatalogConfigJson {
        beta: rational_string(&sweep.beta),
        scan_length: sweep.scan_length.to_display_string(&sweep.precision),
        prune: prune_name(sweep.prune),
        slack: rational_string(&sweep.slack),
        cap_mode: cap_mode_name(sweep.cap_mode).to_string(),
        precision_cap: run.precision.cap_bits,
    }
}

/// Run the sweep on `workers` threads and assemble the serialized catalog,
/// optionally skipping units already present in a previous partial catalog.
pub fn run_sweep_json(
    sweep: &SweepConfig,
    config: CatalogConfigJson,
    workers: usize,
    resume_from: Option<&CatalogJson>,
) -> Result<CatalogJson> {
    let units = sweep_units(sweep).map_err(|e| anyhow!("{e}"))?;
    let done: std::collections::BTreeSet<(u64, u64)> = resume_from
        .map(|c| c.completed_units.iter().map(|&[a, b]| (a, b)).collect())
        .unwrap_or_default();
    let todo: Vec<_> = units
        .iter()
        .filter(|(l, idx, _)| !done.contains(&(*l, *idx)))
        .collect();
    let results: Vec<flatlatt_core::sweep::UnitResult> = if workers <= 1 {
        todo.iter()
            .map(|(l, idx, d)| run_unit(*l, *idx, d, sweep))
            .collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .context("building worker pool")?;
        pool.install(|| {
            todo.par_iter()
                .map(|(l, idx, d)| run_unit(*l, *idx, d, sweep))
                .collect()
        })
    };
    let mut entries: Vec<CatalogEntryJson> = Vec::new();
    let mut diagnostics: Vec<DiagnosticJson> = Vec::new();
    if let Some(prev) = resume_from {
        for e in &prev.entries {
            if done.contains(&(e.unit[0], e.unit[1])) {
                entries.push(e.clone());
            }
        }
        for d in &prev.diagnostics {
            if done.contains(&(d.unit[0], d.unit[1])) {
                diagnostics.push(d.clone());
            }
        }
    }
    for r in results {
        entries.extend(r.entries.iter().map(|e| entry_json(e, &sweep.precision)));
        diagnostics.extend(r.diagnostics.iter().map(diagnostic_json));
    }
    entries.sort_by_key(|e| (e.unit, e.twist_index));
    diagnostics.sort_by_key(|d| (d.unit, d.twist_index));
    let compare = compare_count(entries.len() as u64, &sweep.beta, &sweep.precision)
        .map_err(|e| anyhow!("{e}"))?;
    Ok(CatalogJson {
        version: 1,
        config,
        completed_units: units.iter().map(|(l, idx, _)| [*l, *idx]).collect(),
        entries,
        diagnostics,
        compare: Some(compare_json(&compare)),
    })
}

/// Load a partial catalog for `--resume`, verifying the configuration
/// matches the requested sweep.
pub fn load_resume(path: &str, expected: &CatalogConfigJson) -> Result<Option<CatalogJson>> {
    if !std::path::Path::new(path).exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    let json: CatalogJson = serde_json::from_str(&text).map_err(|e| {
        anyhow!(
            "catalog {path} at line {}, column {}: {e}",
            e.line(),
            e.column()
        )
    })?;
    if json.version != 1 {
        bail!("catalog {path} has unsupported version {}", json.version);
    }
    let c = &json.config;
    if c.beta != expected.beta
        || c.scan_length != expected.scan_length
        || c.prune != expected.prune
        || c.slack != expected.slack
        || c.cap_mode != expected.cap_mode
    {
        bail!("catalog {path} was produced with a different configuration; refusing to resume");
    }
    Ok(Some(json))
}

/// Serialize a catalog deterministically.
pub fn catalog_to_string(json: &CatalogJson) -> String {
    serde_json::to_string_pretty(json).expect("catalog serializes") + "\n"
}
