//! Run configuration: the JSON document accepted by `--config`, and the
//! equivalent command-line flags.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use cohphase::dsl::{compile_spec, ExprKind, ParamEnv};
use cohphase::phase::PhaseWindow;
use cohphase::systems::{describe, make, CatalogEntry};
use cohphase::{StateSpec, SystemId, TruncationPolicy};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_THETA_GRID: usize = 2001;
pub const DEFAULT_COUNT: usize = 101;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_sweep: Option<ZSweep>,
    #[serde(default = "default_theta_grid")]
    pub theta_grid: usize,
    #[serde(default = "default_theta0")]
    pub window_theta0: f64,
    #[serde(default = "default_tail_tol")]
    pub tail_tol: f64,
    #[serde(default = "default_n_cap")]
    pub n_cap: usize,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_theta_grid() -> usize {
    DEFAULT_THETA_GRID
}

fn default_theta0() -> f64 {
    -PI
}

fn default_tail_tol() -> f64 {
    TruncationPolicy::default().tail_tol
}

fn default_n_cap() -> usize {
    TruncationPolicy::default().n_cap
}

/// A catalog id (bare or with parameters) or an expression definition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SystemConfig {
    Id(String),
    Catalog(CatalogSystem),
    Dsl(DslSystem),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogSystem {
    pub id: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DslSystem {
    /// `f` or `e`.
    pub kind: String,
    pub expr: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ZSweep {
    Range { lo: f64, hi: f64, count: usize },
    Single {
        z: f64,
        #[serde(default)]
        phase: f64,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

impl RunConfig {
    pub fn new(system: SystemConfig) -> Self {
        RunConfig {
            system,
            z_sweep: None,
            theta_grid: DEFAULT_THETA_GRID,
            window_theta0: -PI,
            tail_tol: default_tail_tol(),
            n_cap: default_n_cap(),
            output: OutputConfig::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn policy(&self) -> Result<TruncationPolicy, CliError> {
        Ok(TruncationPolicy::new(self.tail_tol, self.n_cap)?)
    }

    pub fn window(&self) -> Result<PhaseWindow, CliError> {
        if !self.window_theta0.is_finite() {
            return Err(CliError::Usage(format!("window_theta0 = {} is not finite", self.window_theta0)));
        }
        Ok(PhaseWindow::new(self.window_theta0))
    }

    /// Sampled `z` values, checked against the family's radius.
    pub fn z_values(&self, spec: &StateSpec) -> Result<Vec<Complex64>, CliError> {
        let sweep = self.z_sweep.ok_or_else(|| CliError::Usage("no z given (use --z or --lo/--hi/--count)".into()))?;
        let zs = match sweep {
            ZSweep::Single { z, phase } => {
                if !(z >= 0.0 && z.is_finite() && phase.is_finite()) {
                    return Err(CliError::Usage(format!("z = {z} (phase {phase}) must be finite and >= 0")));
                }
                vec![Complex64::from_polar(z, phase)]
            }
            ZSweep::Range { lo, hi, count } => {
                if count == 0 || !(lo >= 0.0 && lo.is_finite() && hi.is_finite() && hi >= lo) {
                    return Err(CliError::Usage(format!(
                        "sweep needs count >= 1 and 0 <= lo <= hi (got lo = {lo}, hi = {hi}, count = {count})"
                    )));
                }
                sweep_points(lo, hi, count).into_iter().map(|z| Complex64::new(z, 0.0)).collect()
            }
        };
        for z in &zs {
            spec.check_domain(z.norm())?;
        }
        Ok(zs)
    }
}

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn sweep_points(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    (0..count)
        .map(|i| if i + 1 == count { hi } else { lo + (hi - lo) * (i as f64 / (count - 1) as f64) })
        .collect()
}

/// A resolved state family plus what the output header needs to know.
pub struct System {
    pub spec: StateSpec,
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub kind: Option<ExprKind>,
    pub expr: Option<String>,
    pub warnings: Vec<String>,
}

impl SystemConfig {
    pub fn catalog(id: SystemId) -> Self {
        SystemConfig::Id(id.as_str().to_string())
    }

    pub fn build(&self) -> Result<System, CliError> {
        match self {
            SystemConfig::Id(id) => build_catalog(id, &BTreeMap::new()),
            SystemConfig::Catalog(c) => build_catalog(&c.id, &c.params),
            SystemConfig::Dsl(d) => {
                let kind: ExprKind = d.kind.parse().map_err(|e: cohphase::dsl::DslError| CliError::Usage(e.to_string()))?;
                let mut env = ParamEnv::new();
                for (name, value) in &d.params {
                    env.insert(name, *value).map_err(cohphase::Error::from)?;
                }
                let radius = d.radius.unwrap_or(f64::INFINITY);
                if !(radius > 0.0) {
                    return Err(CliError::Usage(format!("radius = {radius} must be positive")));
                }
                let spec = compile_spec(kind, &d.expr, env, radius)?;
                Ok(System {
                    spec,
                    name: "dsl".into(),
                    params: d.params.clone(),
                    kind: Some(kind),
                    expr: Some(d.expr.clone()),
                    warnings: Vec::new(),
                })
            }
        }
    }
}

fn build_catalog(id: &str, params: &BTreeMap<String, f64>) -> Result<System, CliError> {
    let id: SystemId = id.parse().map_err(|_| {
        let known: Vec<&str> = SystemId::ALL.iter().map(|s| s.as_str()).collect();
        CliError::Usage(format!("unknown system `{id}` (expected dsl or one of {})", known.join(", ")))
    })?;
    let mut entry = CatalogEntry::new(id);
    for (name, value) in params {
        entry.set_param(name, *value)?;
    }
    let spec = make(&entry)?;
    Ok(System {
        spec,
        name: id.as_str().to_string(),
        params: entry.params.clone(),
        kind: None,
        expr: None,
        warnings: entry.warnings(),
    })
}

/// Figure presets: odd numbers are phase distributions, even numbers
/// squeezing sweeps, two per catalog family in catalog order.
pub fn preset(name: &str) -> Result<RunConfig, CliError> {
    const FAMILIES: [SystemId; 6] = [
        SystemId::PensonSolomon,
        SystemId::BarutGirardello,
        SystemId::GilmorePerelomov,
        SystemId::HydrogenLike,
        SystemId::PoschlTeller,
        SystemId::Isotonic,
    ];
    let fig: usize = name
        .strip_prefix("fig")
        .and_then(|n| n.parse().ok())
        .filter(|n| (1..=12).contains(n))
        .ok_or_else(|| CliError::Usage(format!("unknown preset `{name}` (expected fig1 .. fig12)")))?;
    let id = FAMILIES[(fig - 1) / 2];
    let desc = describe(id);
    let mut cfg = RunConfig::new(SystemConfig::Catalog(CatalogSystem {
        id: id.as_str().to_string(),
        params: CatalogEntry::new(id).params,
    }));
    cfg.z_sweep = Some(if fig % 2 == 1 {
        ZSweep::Range {
            lo: desc.dist_z[0],
            hi: desc.dist_z[3],
            count: desc.dist_z.len(),
        }
    } else {
        let (lo, hi) = desc.sweep;
        let step = if desc.radius.is_finite() { 0.01 } else { 0.05 };
        ZSweep::Range {
            lo,
            hi,
            count: ((hi - lo) / step).round() as usize + 1,
        }
    });
    Ok(cfg)
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// JSON run configuration; flags given alongside override its fields.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Figure preset, fig1 .. fig12.
    #[arg(long, value_name = "NAME", conflicts_with = "config")]
    pub preset: Option<String>,
    /// Catalog id, or `dsl` together with --kind and --expr.
    #[arg(long, value_name = "ID")]
    pub system: Option<String>,
    /// Meaning of --expr: `f` (nonlinearity) or `e` (spectrum).
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub expr: Option<String>,
    /// Parameter binding, repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
    /// Radius of convergence of a DSL family (default: unbounded).
    #[arg(long)]
    pub radius: Option<f64>,
    /// |z| of a single state.
    #[arg(long, conflicts_with_all = ["lo", "hi", "count"])]
    pub z: Option<f64>,
    /// arg z of a single state.
    #[arg(long, requires = "z")]
    pub z_phase: Option<f64>,
    #[arg(long, requires = "hi")]
    pub lo: Option<f64>,
    #[arg(long, requires = "lo")]
    pub hi: Option<f64>,
    #[arg(long, requires = "lo")]
    pub count: Option<usize>,
    #[arg(long)]
    pub theta_grid: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta0: Option<f64>,
    #[arg(long)]
    pub tail_tol: Option<f64>,
    #[arg(long)]
    pub n_cap: Option<usize>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl RunArgs {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let base = if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            Some(RunConfig::from_json(&text)?)
        } else if let Some(name) = &self.preset {
            Some(preset(name)?)
        } else {
            None
        };

        let system = self.system_config(base.as_ref().map(|c| &c.system))?;
        let mut cfg = match base {
            Some(mut c) => {
                c.system = system;
                c
            }
            None => RunConfig::new(system),
        };
        if let Some(z) = self.z {
            cfg.z_sweep = Some(ZSweep::Single {
                z,
                phase: self.z_phase.unwrap_or(0.0),
            });
        }
        if let (Some(lo), Some(hi)) = (self.lo, self.hi) {
            cfg.z_sweep = Some(ZSweep::Range {
                lo,
                hi,
                count: self.count.unwrap_or(DEFAULT_COUNT),
            });
        }
        if let Some(v) = self.theta_grid {
            cfg.theta_grid = v;
        }
        if let Some(v) = self.theta0 {
            cfg.window_theta0 = v;
        }
        if let Some(v) = self.tail_tol {
            cfg.tail_tol = v;
        }
        if let Some(v) = self.n_cap {
            cfg.n_cap = v;
        }
        if let Some(p) = &self.output {
            cfg.output.path = Some(p.clone());
        }
        if let Some(f) = self.format {
            cfg.output.format = f;
        }
        Ok(cfg)
    }

    fn system_config(&self, base: Option<&SystemConfig>) -> Result<SystemConfig, CliError> {
        let params = self.parsed_params()?;
        let Some(id) = &self.system else {
            let base = base.ok_or_else(|| CliError::Usage("no system given (use --system)".into()))?;
            if self.kind.is_some() || self.expr.is_some() {
                return Err(CliError::Usage("--kind/--expr need --system dsl".into()));
            }
            return Ok(with_params(base.clone(), params));
        };
        if id == "dsl" {
            let (Some(kind), Some(expr)) = (&self.kind, &self.expr) else {
                return Err(CliError::Usage("--system dsl needs --kind and --expr".into()));
            };
            return Ok(SystemConfig::Dsl(DslSystem {
                kind: kind.clone(),
                expr: expr.clone(),
                params,
                radius: self.radius,
            }));
        }
        if self.kind.is_some() || self.expr.is_some() || self.radius.is_some() {
            return Err(CliError::Usage("--kind, --expr and --radius apply to --system dsl only".into()));
        }
        Ok(SystemConfig::Catalog(CatalogSystem { id: id.clone(), params }))
    }

    fn parsed_params(&self) -> Result<BTreeMap<String, f64>, CliError> {
        let mut out = BTreeMap::new();
        for binding in &self.params {
            let (name, value) = binding
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--param `{binding}` is not NAME=VALUE")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("--param `{binding}`: `{value}` is not a number")))?;
            out.insert(name.trim().to_string(), value);
        }
        Ok(out)
    }
}

/// Merges flag parameters over those already in a config.
fn with_params(system: SystemConfig, params: BTreeMap<String, f64>) -> SystemConfig {
    if params.is_empty() {
        return system;
    }
    match system {
        SystemConfig::Id(id) => SystemConfig::Catalog(CatalogSystem { id, params }),
        SystemConfig::Catalog(mut c) => {
            c.params.extend(params);
            SystemConfig::Catalog(c)
        }
        SystemConfig::Dsl(mut d) => {
            d.params.extend(params);
            SystemConfig::Dsl(d)
        }
    }
}
