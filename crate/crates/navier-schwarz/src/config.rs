//! Line-oriented experiment configuration: `key = value` pairs, `#` comments.
//!
//! Every key is optional and falls back to the published experiment's
//! parameters, so an empty file reproduces the reference setup of its kind.
//! Unknown or duplicate keys, malformed numbers, non-positive physical
//! parameters, and media violating `cp^2 > 2 cs^2` are all rejected before
//! any computation starts.
//!
//! Common keys: `kind` (must match the subcommand when present), `omega`,
//! and the medium as either speeds (`rho`, `cp`, `cs`) or Lame parameters
//! (`rho`, `lambda`, `mu`). Per kind:
//!
//! - `symbol-scan`: `variants` (comma list of `classical`, `taylor0`,
//!   `taylor2`, `optimal`), `deltas` (comma list), `k_min`, `k_max`,
//!   `k_count`.
//! - `delta-star`: no extra keys.
//! - `two-subdomain`: `nx`, `ny`, `overlaps` (layer list; the overlap width
//!   is `2 l h`), `max_iters`, `tol`, `snapshot_iter`, `expect`.
//! - `grid-4x4`: `n`, `overlaps`, `max_iters`, `gmres_max_iters`, `tol`,
//!   `expect`.
//! - `transmission`: `n`, `overlaps`, `max_iters`, `gmres_max_iters`, `tol`,
//!   `expect`, and the two media as `inner_rho`/`inner_lambda`/`inner_mu`
//!   and `outer_*` (defaults are the published steel-like pair).
//!
//! `expect = converge | diverge` states the expected outcome of the
//! optimized stationary run; a violated expectation is a solver error.

use std::collections::BTreeMap;

use crate::{ElasticMedium, Error, Result};

/// The five reproducible experiment kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    SymbolScan,
    DeltaStar,
    TwoSubdomain,
    Grid4x4,
    Transmission,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::SymbolScan => "symbol-scan",
            ExperimentKind::DeltaStar => "delta-star",
            ExperimentKind::TwoSubdomain => "two-subdomain",
            ExperimentKind::Grid4x4 => "grid-4x4",
            ExperimentKind::Transmission => "transmission",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "symbol-scan" => Ok(ExperimentKind::SymbolScan),
            "delta-star" => Ok(ExperimentKind::DeltaStar),
            "two-subdomain" => Ok(ExperimentKind::TwoSubdomain),
            "grid-4x4" => Ok(ExperimentKind::Grid4x4),
            "transmission" => Ok(ExperimentKind::Transmission),
            other => Err(Error::Config(format!("unknown experiment kind '{other}'"))),
        }
    }
}

/// Convergence-factor variant selectable in a symbol scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanVariant {
    Classical,
    Taylor0,
    Taylor2,
    Optimal,
}

impl ScanVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            ScanVariant::Classical => "classical",
            ScanVariant::Taylor0 => "taylor0",
            ScanVariant::Taylor2 => "taylor2",
            ScanVariant::Optimal => "optimal",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(ScanVariant::Classical),
            "taylor0" => Ok(ScanVariant::Taylor0),
            "taylor2" => Ok(ScanVariant::Taylor2),
            "optimal" => Ok(ScanVariant::Optimal),
            other => Err(Error::Config(format!("unknown scan variant '{other}'"))),
        }
    }
}

/// Declared expectation for the optimized stationary run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expectation {
    Converge,
    Diverge,
}

/// Fully validated experiment parameters; fields outside a kind's key set
/// hold that kind's defaults.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub omega: f64,
    pub medium: ElasticMedium,
    pub inner: ElasticMedium,
    pub outer: ElasticMedium,
    pub variants: Vec<ScanVariant>,
    pub deltas: Vec<f64>,
    pub k_min: f64,
    pub k_max: f64,
    pub k_count: usize,
    pub nx: usize,
    pub ny: usize,
    pub overlaps: Vec<usize>,
    pub max_iters: usize,
    pub gmres_max_iters: usize,
    pub tol: f64,
    pub snapshot_iter: usize,
    pub expect: Option<Expectation>,
    /// Original config text, echoed into the run manifest.
    pub echo: String,
}

struct KeyTable {
    entries: BTreeMap<String, String>,
}

impl KeyTable {
    fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "line {}: expected 'key = value', got '{line}'",
                    lineno + 1
                )));
            };
            let (key, value) = (key.trim().to_string(), value.trim().to_string());
            if key.is_empty() || value.is_empty() {
                return Err(Error::Config(format!("line {}: empty key or value", lineno + 1)));
            }
            if entries.insert(key.clone(), value).is_some() {
                return Err(Error::Config(format!("duplicate key '{key}'")));
            }
        }
        Ok(Self { entries })
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key)
    }

    fn take_f64(&mut self, key: &str) -> Result<Option<f64>> {
        self.take(key)
            .map(|v| {
                v.parse::<f64>().map_err(|_| {
                    Error::Config(format!("key '{key}': '{v}' is not a number"))
                })
            })
            .transpose()
    }

    fn take_usize(&mut self, key: &str) -> Result<Option<usize>> {
        self.take(key)
            .map(|v| {
                v.parse::<usize>().map_err(|_| {
                    Error::Config(format!("key '{key}': '{v}' is not a nonnegative integer"))
                })
            })
            .transpose()
    }

    fn finish(self) -> Result<()> {
        if let Some(key) = self.entries.keys().next() {
            return Err(Error::Config(format!("unknown key '{key}'")));
        }
        Ok(())
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Config(format!("'{name}' must be positive and finite, got {v}")))
    }
}

/// Reads one medium from `<prefix>rho` plus either speeds or Lame constants;
/// `fallback` supplies any missing triple.
fn take_medium(
    table: &mut KeyTable,
    prefix: &str,
    fallback: &ElasticMedium,
) -> Result<ElasticMedium> {
    let k = |name: &str| format!("{prefix}{name}");
    let rho = table.take_f64(&k("rho"))?;
    let cp = table.take_f64(&k("cp"))?;
    let cs = table.take_f64(&k("cs"))?;
    let lambda = table.take_f64(&k("lambda"))?;
    let mu = table.take_f64(&k("mu"))?;
    if (cp.is_some() || cs.is_some()) && (lambda.is_some() || mu.is_some()) {
        return Err(Error::Config(format!(
            "medium '{prefix}': give either speeds (cp, cs) or Lame parameters (lambda, mu), not both"
        )));
    }
    let rho = positive(&k("rho"), rho.unwrap_or(fallback.rho))?;
    let medium = if lambda.is_some() || mu.is_some() {
        ElasticMedium::from_lame(
            rho,
            positive(&k("lambda"), lambda.unwrap_or(fallback.lambda))?,
            positive(&k("mu"), mu.unwrap_or(fallback.mu))?,
        )
    } else {
        ElasticMedium::from_speeds(
            rho,
            positive(&k("cp"), cp.unwrap_or(fallback.cp))?,
            positive(&k("cs"), cs.unwrap_or(fallback.cs))?,
        )
    };
    medium.map_err(|e| Error::Config(format!("medium '{prefix}': {e}")))
}

fn take_list_f64(table: &mut KeyTable, key: &str) -> Result<Option<Vec<f64>>> {
    let Some(raw) = table.take(key) else { return Ok(None) };
    let mut out = Vec::new();
    for item in raw.split(',') {
        let item = item.trim();
        out.push(item.parse::<f64>().map_err(|_| {
            Error::Config(format!("key '{key}': '{item}' is not a number"))
        })?);
    }
    Ok(Some(out))
}

fn take_list_usize(table: &mut KeyTable, key: &str) -> Result<Option<Vec<usize>>> {
    let Some(raw) = table.take(key) else { return Ok(None) };
    let mut out = Vec::new();
    for item in raw.split(',') {
        let item = item.trim();
        out.push(item.parse::<usize>().map_err(|_| {
            Error::Config(format!("key '{key}': '{item}' is not a nonnegative integer"))
        })?);
    }
    Ok(Some(out))
}

/// Parses and validates a config for the given experiment kind.
pub fn parse_config(text: &str, kind: ExperimentKind) -> Result<ExperimentConfig> {
    let mut table = KeyTable::parse(text)?;
    if let Some(declared) = table.take("kind") {
        if ExperimentKind::parse(&declared)? != kind {
            return Err(Error::Config(format!(
                "config declares kind '{declared}' but the subcommand expects '{}'",
                kind.as_str()
            )));
        }
    }
    let reference = ElasticMedium::from_speeds(1.0, 1.0, 0.5).expect("reference medium");
    // Published steel-like transmission pair: an inclusion inside a softer
    // surrounding material, both at density 7800.
    let inner_default = ElasticMedium::from_lame(7800.0, 1.2e11, 7.7e10).expect("inner medium");
    let outer_default = ElasticMedium::from_lame(7800.0, 1.1e12, 6.8e10).expect("outer medium");

    let default_omega = match kind {
        ExperimentKind::SymbolScan | ExperimentKind::DeltaStar => 1.0,
        ExperimentKind::TwoSubdomain | ExperimentKind::Grid4x4 => 5.0,
        ExperimentKind::Transmission => 2.0e4 * std::f64::consts::PI,
    };
    let omega = positive("omega", table.take_f64("omega")?.unwrap_or(default_omega))?;

    let mut config = ExperimentConfig {
        kind,
        omega,
        medium: reference,
        inner: inner_default,
        outer: outer_default,
        variants: vec![ScanVariant::Classical],
        deltas: vec![0.1],
        k_min: 0.01,
        k_max: 40.0,
        k_count: 400,
        nx: 160,
        ny: 80,
        overlaps: vec![1, 3],
        max_iters: 200,
        gmres_max_iters: 200,
        tol: 1e-6,
        snapshot_iter: 60,
        expect: None,
        echo: text.to_string(),
    };

    match kind {
        ExperimentKind::SymbolScan => {
            config.medium = take_medium(&mut table, "", &reference)?;
            if let Some(raw) = table.take("variants") {
                let mut variants = Vec::new();
                for item in raw.split(',') {
                    variants.push(ScanVariant::parse(item.trim())?);
                }
                config.variants = variants;
            }
            if let Some(deltas) = take_list_f64(&mut table, "deltas")? {
                if deltas.iter().any(|&d| !(d >= 0.0) || !d.is_finite()) {
                    return Err(Error::Config("'deltas' must all be >= 0".into()));
                }
                config.deltas = deltas;
            }
            if let Some(v) = table.take_f64("k_min")? {
                config.k_min = positive("k_min", v)?;
            }
            if let Some(v) = table.take_f64("k_max")? {
                config.k_max = positive("k_max", v)?;
            }
            if let Some(v) = table.take_usize("k_count")? {
                config.k_count = v;
            }
            if config.k_min >= config.k_max {
                return Err(Error::Config(format!(
                    "'k_min' ({}) must be below 'k_max' ({})",
                    config.k_min, config.k_max
                )));
            }
            if config.k_count < 2 {
                return Err(Error::Config("'k_count' must be at least 2".into()));
            }
        }
        ExperimentKind::DeltaStar => {
            config.medium = take_medium(&mut table, "", &reference)?;
        }
        ExperimentKind::TwoSubdomain => {
            config.medium = take_medium(&mut table, "", &reference)?;
            if let Some(v) = table.take_usize("nx")? {
                config.nx = v;
            }
            if let Some(v) = table.take_usize("ny")? {
                config.ny = v;
            }
            config.read_solver_keys(&mut table, true)?;
        }
        ExperimentKind::Grid4x4 => {
            config.medium = take_medium(&mut table, "", &reference)?;
            let n = table.take_usize("n")?.unwrap_or(160);
            config.nx = n;
            config.ny = n;
            config.read_solver_keys(&mut table, false)?;
        }
        ExperimentKind::Transmission => {
            config.inner = take_medium(&mut table, "inner_", &inner_default)?;
            config.outer = take_medium(&mut table, "outer_", &outer_default)?;
            let n = table.take_usize("n")?.unwrap_or(80);
            config.nx = n;
            config.ny = n;
            config.overlaps = vec![1];
            config.max_iters = 300;
            config.gmres_max_iters = 300;
            config.read_solver_keys(&mut table, false)?;
        }
    }
    if config.nx == 0 || config.ny == 0 {
        return Err(Error::Config("mesh sizes must be at least 1".into()));
    }
    table.finish()?;
    Ok(config)
}

impl ExperimentConfig {
    fn read_solver_keys(&mut self, table: &mut KeyTable, with_snapshot: bool) -> Result<()> {
        if let Some(overlaps) = take_list_usize(table, "overlaps")? {
            if overlaps.is_empty() {
                return Err(Error::Config("'overlaps' must list at least one value".into()));
            }
            self.overlaps = overlaps;
        }
        if let Some(v) = table.take_usize("max_iters")? {
            if v == 0 {
                return Err(Error::Config("'max_iters' must be at least 1".into()));
            }
            self.max_iters = v;
        }
        if let Some(v) = table.take_usize("gmres_max_iters")? {
            if v == 0 {
                return Err(Error::Config("'gmres_max_iters' must be at least 1".into()));
            }
            self.gmres_max_iters = v;
        }
        if let Some(v) = table.take_f64("tol")? {
            self.tol = positive("tol", v)?;
        }
        if with_snapshot {
            if let Some(v) = table.take_usize("snapshot_iter")? {
                self.snapshot_iter = v;
            }
        }
        if let Some(raw) = table.take("expect") {
            self.expect = Some(match raw.as_str() {
                "converge" => Expectation::Converge,
                "diverge" => Expectation::Diverge,
                other => {
                    return Err(Error::Config(format!(
                        "'expect' must be 'converge' or 'diverge', got '{other}'"
                    )))
                }
            });
        }
        Ok(())
    }
}
